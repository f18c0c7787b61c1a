#pragma once

#include "hyperlev/model.hpp"
#include "hyperlev/series.hpp"

namespace hyperlev {

/// Black-Scholes at-the-money call with S0 = K = 1 and r = 0 as a series in s = sigma sqrt(T):
/// coefficients of s^1 .. s^order. Generated from the jump-free model's price expansion,
/// so even coefficients come out as rounding noise around zero.
Series bs_atm_series(double sigma, int order);

/// Closed-form value of the same price, erf(s / (2 sqrt 2)).
double bs_atm_call(double s);

/// Reversion of bs_atm_series: s as a series in w, coefficients of w^1 .. w^order.
Series invert_bs_series(int order);

/// Model at-the-money call C_X(T) (S0 = K = 1, r = 0) as a series in T^{1/2} holding
/// `terms` coefficients: T^{1/2} .. T^{terms/2} when sigma > 0, T^1 .. T^terms otherwise.
Series model_atm_series(const HyperExpParams& p, int terms);

enum class VolRegime { gaussian, no_gaussian };

/// Short-time expansion of the at-the-money implied volatility.
///
/// With a Gaussian part the terms are sigma, T^{1/2}, T, T^{3/2}, ...; without one they are
/// T^{1/2}, T^{3/2}, T^{5/2}, ... . `series` stores either case on the T^{1/2} grid.
struct ImpliedVolExpansion {
  VolRegime regime = VolRegime::gaussian;
  int order = 0;
  Series series;

  /// Coefficient of the i-th term (0-based) in the natural step of the regime.
  double coefficient(int i) const;
  /// Exponent of T carried by the i-th term.
  double exponent(int i) const;
  /// Sum of the first `terms` terms at T (all of them when terms < 0).
  double evaluate(double T, int terms = -1) const;
};

/// Highest order accepted by implied_vol_expansion unless a larger cap is passed.
inline constexpr int kImpliedVolMaxOrder = 40;

/// Expansion of sigmahat(T) with `order` terms. Requires psi(1) = 0 (the r = 0 convention);
/// throws NotRiskNeutral otherwise.
ImpliedVolExpansion implied_vol_expansion(const HyperExpParams& p, int order, int max_order = kImpliedVolMaxOrder);

}  // namespace hyperlev
