#include "hyperlev/implied_vol.hpp"

#include <cmath>
#include <numbers>

#include "hyperlev/pricing.hpp"

namespace hyperlev {

namespace {

// Time-domain series of an at-the-money expansion on the T^{1/2} grid, keeping exponent
// numerators below `stop`.
Series time_series(const PriceExpansion& e, int stop) {
  const Series lap = e.smooth();
  const int den = lap.den();
  Eigen::VectorXd c(lap.size());
  for (int i = 0; i < lap.size(); ++i) {
    // a q^{-p} becomes a T^{p-1} / Gamma(p).
    const double p = static_cast<double>(lap.base() + i) / den;
    c[i] = lap.coeffs()[i] / std::tgamma(p);
  }
  Series t = Series::polynomial(std::move(c), lap.base() - den, den);
  return truncate(regrid(t, 2), stop);
}

}  // namespace

Series model_atm_series(const HyperExpParams& p, int terms) {
  if (terms < 1) throw Error(ErrorCode::UnsupportedOrder, "at least one term is required");
  const bool gaussian = p.sigma() > 0.0;
  const auto [M, Mh] = root_counts(p);
  (void)Mh;
  // Every constituent keeps two spare orders beyond what the requested terms need.
  const TruncationVector trunc(std::vector<int>(M, terms + 2));
  const PriceExpansion e = build_price_expansion(p, 1.0, Side::pos, trunc, Transform::price);
  const int stop = gaussian ? terms + 1 : 2 * terms + 1;
  return time_series(e, stop);
}

Series bs_atm_series(double sigma, int order) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::DomainError, "sigma must be positive");
  if (order < 1) throw Error(ErrorCode::UnsupportedOrder, "order must be at least 1");
  const HyperExpParams bs(sigma, -0.5 * sigma * sigma, {}, {});
  const Series w = model_atm_series(bs, order);
  // Coefficient of T^{n/2} is c_n sigma^n in the variable s = sigma T^{1/2}.
  Eigen::VectorXd c = Eigen::VectorXd::Zero(order);
  for (int n = 1; n <= order; ++n) c[n - 1] = w.coeff(n) / std::pow(sigma, n);
  return Series::with_order(std::move(c), 1, 1, order + 1);
}

double bs_atm_call(double s) { return std::erf(s / (2.0 * std::numbers::sqrt2)); }

Series invert_bs_series(int order) {
  if (order < 1) throw Error(ErrorCode::UnsupportedOrder, "order must be at least 1");
  return lagrange_invert(bs_atm_series(1.0, order), Branch::principal, order);
}

double ImpliedVolExpansion::exponent(int i) const {
  return regime == VolRegime::gaussian ? 0.5 * i : 0.5 + i;
}

double ImpliedVolExpansion::coefficient(int i) const {
  if (i < 0 || i >= order) throw Error(ErrorCode::IndexError, "term index out of range");
  return series.coeff(static_cast<int>(std::lround(2.0 * exponent(i))));
}

double ImpliedVolExpansion::evaluate(double T, int terms) const {
  if (!(T >= 0.0)) throw Error(ErrorCode::DomainError, "maturity must be nonnegative");
  const int n = terms < 0 ? order : std::min(terms, order);
  double acc = 0.0;
  for (int i = n - 1; i >= 0; --i) acc += coefficient(i) * std::pow(T, exponent(i));
  return acc;
}

ImpliedVolExpansion implied_vol_expansion(const HyperExpParams& p, int order, int max_order) {
  if (order < 1 || order > max_order)
    throw Error(ErrorCode::UnsupportedOrder, "order must lie in [1, " + std::to_string(max_order) + "]");
  require_risk_neutral(p, 0.0, 1e-6);
  ImpliedVolExpansion out;
  out.regime = p.sigma() > 0.0 ? VolRegime::gaussian : VolRegime::no_gaussian;
  out.order = order;
  // sigmahat T^{1/2} reaches T^{order/2} (Gaussian) or T^{order} (no Gaussian part).
  const int top = out.regime == VolRegime::gaussian ? order : 2 * order;
  const Series w = model_atm_series(p, order);
  const Series s = compose(invert_bs_series(order), w);
  out.series = truncate(shift(s, -1), top);
  return out;
}

}  // namespace hyperlev
