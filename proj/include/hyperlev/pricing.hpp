#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "hyperlev/model.hpp"
#include "hyperlev/roots.hpp"
#include "hyperlev/series.hpp"

namespace hyperlev {

enum class OptionKind { call, put };

/// Market inputs of a European option. Moneyness k = K / S0.
struct OptionSpec {
  double S0 = 1;
  double K = 1;
  double r = 0;
  double T = 0;
  OptionKind kind = OptionKind::call;

  double k() const { return K / S0; }
  void validate() const;
};

/// Tolerance on |k - 1| below which the at-the-money formula is used.
inline constexpr double kAtmTolerance = 1e-12;

/// Truncation points of the per-root product series, one entry (>= 2) per root on the
/// expanded side: near roots first in pole order, the far root (if any) last. An entry M
/// keeps M + 1 leading Laplace coefficients of a near-root series (time powers T^1 .. T^{M+1})
/// and M leading coefficients of the far-root series.
struct TruncationVector {
  std::vector<int> orders;

  TruncationVector() = default;
  TruncationVector(std::initializer_list<int> o) : orders(o) {}
  explicit TruncationVector(std::vector<int> o) : orders(std::move(o)) {}

  /// Parse "15,15,15,15,15,30,30,60".
  static TruncationVector parse(const std::string& text);
  /// 15 for near roots, escalating to 30, 30, 60 on the last three.
  static TruncationVector default_for(int roots);
  std::string str() const;
};

/// Which Laplace-domain function is expanded.
///   price: F(q) (pos side) or W(q) (neg side), the transform of f(t) = E[(e^{X_t} - k)^+]
///          or of w(t) = E[(k - e^{X_t})^+].
///   f_k:   transform of d f / d k.
///   f_kk:  transform of d^2 f / d k^2.
enum class Transform { price, f_k, f_kk };

/// One root's contribution: a polynomial in x = 1/q (after truncation), optionally
/// multiplied by a prefactor exp(-shift q^{1/2}) or exp(-shift q).
struct Constituent {
  Side side = Side::pos;
  int index = 0;
  bool far = false;
  Series laplace;
  Prefactor prefactor = Prefactor::none;
  double shift = 0;
  int kept = 0;
};

/// Time-domain expansion of f, w, f_k or f_kk.
///
/// Laplace terms a q^{-p} invert to a t^{p-1} / Gamma(p); terms a e^{-c sqrt q} q^{-j/2}
/// invert to a phi_{j-2}(t; c); terms a e^{-c q} q^{-m} invert to a (t - c)^{m-1} / (m-1)!
/// on t >= c.
struct PriceExpansion {
  Transform transform = Transform::price;
  Side side = Side::pos;
  Regime regime = Regime::gaussian;
  double k = 1;
  bool atm = false;
  std::vector<Constituent> parts;
  Series extra;  // exact terms outside the root sums (the -1/q of f_k for k <= 1)

  /// Sum of the smooth parts (no prefactor) as one Laplace-domain series.
  Series smooth() const;
  /// Far-root kernel part (zero when absent) and its shift constant.
  Series kernel() const;
  double shift() const;
  Prefactor kernel_prefactor() const;

  /// Coefficients against the time basis: smooth_coeffs()[i] multiplies
  /// t^{e_i} / Gamma(e_i + 1) with e_i = (smooth().base() + i) / den - 1; kernel_coeffs()[i]
  /// multiplies phi_{j-2}(t; c) or (t - c)^{m-1} / (m-1)! with j, m = kernel().base() + i.
  std::vector<double> smooth_coeffs() const;
  std::vector<double> kernel_coeffs() const;

  /// d^order/dt^order of the expanded function at t (order 0 or 1). At the kink of a
  /// shifted-power kernel, right selects the one-sided limit.
  double value(double t, int order = 0, bool right = true) const;

  /// |last kept term| of each constituent at t.
  std::vector<double> tail_magnitudes(double t) const;
  /// Ratio |last term| / |previous term| of each constituent at t.
  std::vector<double> tail_ratios(double t) const;

  /// Truncated Laplace transform at complex q.
  std::complex<double> laplace(std::complex<double> q) const;
};

/// Exact Laplace transform F(q) (k >= 1) or W(q) (k < 1) from numerically located roots,
/// using zeta' = 1/psi'(zeta). Real q uses bracketing, complex q root continuation.
std::complex<double> laplace_price(const HyperExpParams& p, double k, std::complex<double> q);

/// Build the expansion of the requested transform on the given side. side pos needs
/// k >= 1, side neg needs k <= 1.
PriceExpansion build_price_expansion(const HyperExpParams& p, double k, Side side, const TruncationVector& trunc,
                                     Transform transform = Transform::price);

/// Result of a series evaluation with tail diagnostics.
struct PriceResult {
  double value = 0;
  std::vector<double> tail;    // last-term magnitude per constituent, in price units
  bool convergence_warning = false;
  std::string warning;
};

/// European option price from the series. ITM options go through put-call parity.
/// The parameters must satisfy psi(1) = spec.r.
PriceResult price(const OptionSpec& spec, const HyperExpParams& p, const TruncationVector& trunc);
double price_value(const OptionSpec& spec, const HyperExpParams& p, const TruncationVector& trunc);

/// dPrice/dT. Throws AtKinkPoint at the shifted-power kink, with both one-sided values in
/// the message; theta_one_sided returns them.
double theta(const OptionSpec& spec, const HyperExpParams& p, const TruncationVector& trunc);
std::pair<double, double> theta_one_sided(const OptionSpec& spec, const HyperExpParams& p, const TruncationVector& trunc);

/// Location c of the theta kink (infinity when the regime has none).
double kink_location(const HyperExpParams& p, double k);
/// Closed-form jump a K (K/S0)^{(eta_0 - r)/a} of theta at the kink.
double theta_jump_closed_form(const HyperExpParams& p, const OptionSpec& spec);

struct Greeks {
  double delta = 0;
  double gamma = 0;
};

/// Delta and gamma in S0. Needs sigma > 0.
Greeks delta_gamma(const OptionSpec& spec, const HyperExpParams& p, const TruncationVector& trunc);

/// Check psi(1) = r within tol; throws NotRiskNeutral otherwise.
void require_risk_neutral(const HyperExpParams& p, double r, double tol = 1e-9);

}  // namespace hyperlev
