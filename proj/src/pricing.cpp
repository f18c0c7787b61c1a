#include "hyperlev/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hyperlev/special.hpp"

namespace hyperlev {

namespace {

using cplx = std::complex<double>;

// Extra Laplace coefficients computed beyond the requested truncation so that every
// factor of a product is known to the kept order.
constexpr int kGuard = 3;

int root_order_for(const RootExpansion& probe, int kept) {
  // expand_* take the order as the last power of 1/q; half-power series carry two slots per
  // unit, so kept slots need about kept / 2 units there.
  if (probe.series.den() == 2) return kept / 2 + kGuard;
  return kept + kGuard;
}

RootExpansion expand_one(const HyperExpParams& p, Side side, int index, bool far, int order) {
  return far ? expand_far_root(p, side, order) : expand_near_root(p, side, index, order);
}

// Laplace product series of one root for the requested transform, before truncation.
// Returns the series, prefactor and shift.
Constituent constituent_series(const HyperExpParams& p, const RootExpansion& root, double k, Transform transform,
                               bool atm) {
  Constituent c;
  c.side = root.side;
  c.index = root.index;
  c.far = root.far;

  const Series inv = derive_series(root, DerivedKind::inv).series;
  const Series deriv = derive_series(root, DerivedKind::deriv).series;
  std::vector<Series> factors;
  switch (transform) {
    case Transform::price:
      factors = {inv, derive_series(root, DerivedKind::inv_shift).series, deriv};
      break;
    case Transform::f_k:
      factors = {inv, deriv};
      break;
    case Transform::f_kk:
      factors = {deriv};
      break;
  }
  if (!atm) {
    const DerivedRootSeries beta = derive_series(root, DerivedKind::power, k);
    factors.push_back(beta.series);
    c.prefactor = beta.prefactor;
    c.shift = beta.shift();
  }
  (void)p;
  c.laplace = mul_all(factors);
  return c;
}

double gamma_fn(double x) { return std::tgamma(x); }

// Value of a (t - c)^{m-1}/(m-1)! kernel term, m >= 1, for t >= c.
double shifted_power(int m, double dt) {
  double v = 1.0;
  for (int i = 1; i < m; ++i) v *= dt / i;
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------------------
// OptionSpec and TruncationVector

void OptionSpec::validate() const {
  if (!(S0 > 0.0) || !std::isfinite(S0)) throw Error(ErrorCode::InvalidParameters, "S0 must be positive");
  if (!(K > 0.0) || !std::isfinite(K)) throw Error(ErrorCode::InvalidParameters, "K must be positive");
  if (!(r >= 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidParameters, "r must be nonnegative");
  if (!(T >= 0.0) || !std::isfinite(T)) throw Error(ErrorCode::InvalidParameters, "T must be nonnegative");
}

TruncationVector TruncationVector::parse(const std::string& text) {
  TruncationVector out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char ch) { return std::isspace(ch) || ch == '(' || ch == ')'; }),
               item.end());
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.orders.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, "bad truncation entry '" + item + "'");
    }
  }
  if (out.orders.empty()) throw Error(ErrorCode::ConfigError, "empty truncation vector");
  return out;
}

TruncationVector TruncationVector::default_for(int roots) {
  // The last entries take 60, 30, 30 counting backwards; everything before them 15.
  TruncationVector t;
  t.orders.assign(std::max(roots, 0), 15);
  const int tail[3] = {60, 30, 30};
  for (int i = 0; i < 3 && i < roots; ++i) t.orders[roots - 1 - i] = tail[i];
  return t;
}

std::string TruncationVector::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < orders.size(); ++i) s += (i ? "," : "") + std::to_string(orders[i]);
  return s + ")";
}

// ---------------------------------------------------------------------------------------
// PriceExpansion

Series PriceExpansion::smooth() const {
  Series s = extra;
  for (const auto& c : parts)
    if (c.prefactor == Prefactor::none) s = add(s, c.laplace);
  return s;
}

Series PriceExpansion::kernel() const {
  for (const auto& c : parts)
    if (c.prefactor != Prefactor::none) return c.laplace;
  return Series();
}

double PriceExpansion::shift() const {
  for (const auto& c : parts)
    if (c.prefactor != Prefactor::none) return c.shift;
  return 0.0;
}

Prefactor PriceExpansion::kernel_prefactor() const {
  for (const auto& c : parts)
    if (c.prefactor != Prefactor::none) return c.prefactor;
  return Prefactor::none;
}

std::vector<double> PriceExpansion::smooth_coeffs() const {
  const Series s = smooth();
  std::vector<double> out(s.size());
  for (int i = 0; i < s.size(); ++i) out[i] = s.coeffs()[i];
  return out;
}

std::vector<double> PriceExpansion::kernel_coeffs() const {
  const Series s = kernel();
  std::vector<double> out(s.size());
  for (int i = 0; i < s.size(); ++i) out[i] = s.coeffs()[i];
  return out;
}

namespace {

// Inverse Laplace transform of one polynomial in 1/q (times its prefactor), differentiated
// `order` times, evaluated at t. Returns the per-term values through `terms` when given.
double invert_terms(const Series& laplace, Prefactor prefactor, double shift, double t, int order, bool right,
                    std::vector<double>* terms = nullptr) {
  if (terms != nullptr) terms->clear();
  if (laplace.is_zero()) return 0.0;
  const int den = laplace.den();
  const int base = laplace.base() - order * den;  // multiplying by q lowers every exponent
  const auto& a = laplace.coeffs();
  const int n = laplace.size();
  double total = 0.0;
  auto push = [&](double v) {
    total += v;
    if (terms != nullptr) terms->push_back(v);
  };

  switch (prefactor) {
    case Prefactor::none: {
      for (int i = 0; i < n; ++i) {
        const int e = base + i;  // Laplace term q^{-e/den}
        if (a[i] == 0.0) {
          push(0.0);
          continue;
        }
        if (e <= 0) {
          // Delta-like terms vanish for t > 0.
          push(0.0);
          continue;
        }
        const double p = static_cast<double>(e) / den;
        if (t <= 0.0) {
          push(0.0);
          continue;
        }
        push(a[i] * std::pow(t, p - 1.0) / gamma_fn(p));
      }
      break;
    }
    case Prefactor::exp_sqrt: {
      // Term e^{-c sqrt q} q^{-j/2} -> phi_{j-2}(t; c).
      const int jmax = base + n - 1;
      std::vector<double> phis;
      if (t > 0.0 && jmax - 2 >= -2) phis = phi_table(std::max(jmax - 2, 0), t, shift);
      for (int i = 0; i < n; ++i) {
        const int j = base + i;
        if (a[i] == 0.0 || t <= 0.0 || j - 2 < -2) {
          push(0.0);
          continue;
        }
        push(a[i] * phis[j]);  // phi_{j-2} sits at index j
      }
      break;
    }
    case Prefactor::exp_linear: {
      const bool on = right ? (t >= shift) : (t > shift);
      for (int i = 0; i < n; ++i) {
        const int m = base + i;
        if (a[i] == 0.0 || !on || m <= 0) {
          push(0.0);
          continue;
        }
        push(a[i] * shifted_power(m, t - shift));
      }
      break;
    }
  }
  return total;
}

}  // namespace

double PriceExpansion::value(double t, int order, bool right) const {
  if (order < 0 || order > 1) throw Error(ErrorCode::UnsupportedOrder, "only the value and first time derivative are supported");
  double v = invert_terms(extra, Prefactor::none, 0.0, t, order, right);
  for (const auto& c : parts) v += invert_terms(c.laplace, c.prefactor, c.shift, t, order, right);
  return v;
}

std::vector<double> PriceExpansion::tail_magnitudes(double t) const {
  std::vector<double> out;
  std::vector<double> terms;
  for (const auto& c : parts) {
    invert_terms(c.laplace, c.prefactor, c.shift, t, 0, true, &terms);
    out.push_back(terms.empty() ? 0.0 : std::abs(terms.back()));
  }
  return out;
}

std::vector<double> PriceExpansion::tail_ratios(double t) const {
  std::vector<double> out;
  std::vector<double> terms;
  for (const auto& c : parts) {
    invert_terms(c.laplace, c.prefactor, c.shift, t, 0, true, &terms);
    if (terms.size() < 2 || terms[terms.size() - 2] == 0.0) {
      out.push_back(0.0);
      continue;
    }
    out.push_back(std::abs(terms.back() / terms[terms.size() - 2]));
  }
  return out;
}

cplx PriceExpansion::laplace(cplx q) const {
  cplx v = evaluate(extra, cplx(1.0) / q);
  for (const auto& c : parts) {
    cplx term = evaluate(c.laplace, cplx(1.0) / q);
    if (c.prefactor == Prefactor::exp_sqrt) term *= std::exp(-c.shift * std::sqrt(q));
    if (c.prefactor == Prefactor::exp_linear) term *= std::exp(-c.shift * q);
    v += term;
  }
  return v;
}

// ---------------------------------------------------------------------------------------
// Exact transform from numeric roots

std::complex<double> laplace_price(const HyperExpParams& p, double k, std::complex<double> q) {
  if (!(k > 0.0)) throw Error(ErrorCode::DomainError, "moneyness must be positive");
  if (!(q.real() > 0.0)) throw Error(ErrorCode::DomainError, "laplace_price needs Re q > 0");
  std::vector<cplx> pos, neg;
  if (q.imag() == 0.0) {
    const RootSet rs = numeric_roots_real(p, q.real());
    for (double z : rs.pos) pos.emplace_back(z, 0.0);
    for (double z : rs.neg) neg.emplace_back(-z, 0.0);
  } else {
    int n_pos = 0;
    const auto all = numeric_roots_complex(p, q, &n_pos);
    pos.assign(all.begin(), all.begin() + n_pos);
    neg.assign(all.begin() + n_pos, all.end());
  }
  const double logk = std::log(k);
  cplx sum(0.0);
  if (k >= 1.0) {
    // F(q) = k sum k^{-zeta} / (psi'(zeta) zeta (zeta - 1))
    for (const cplx& z : pos) sum += std::exp(-z * logk) / (psi_prime(p, z) * z * (z - 1.0));
  } else {
    // W(q) = k sum zetahat' k^{zetahat} / (zetahat (zetahat + 1)), zetahat' = -1/psi'(-zetahat)
    for (const cplx& zr : neg) {
      const cplx zh = -zr;
      sum += -std::exp(zh * logk) / (psi_prime(p, zr) * zh * (zh + 1.0));
    }
  }
  return k * sum;
}

// ---------------------------------------------------------------------------------------
// Expansion assembly

PriceExpansion build_price_expansion(const HyperExpParams& p, double k, Side side, const TruncationVector& trunc,
                                     Transform transform) {
  if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorCode::DomainError, "moneyness must be positive");
  if (!p.pos().empty() && !(p.pos().front().rate > 1.0))
    throw Error(ErrorCode::RhoOneTooSmall, "the smallest positive jump rate must exceed 1");
  const bool atm = std::abs(k - 1.0) < kAtmTolerance;
  if (side == Side::pos && k < 1.0 && !atm) throw Error(ErrorCode::RegimeMismatch, "the positive-side expansion needs k >= 1");
  if (side == Side::neg && k > 1.0 && !atm) throw Error(ErrorCode::RegimeMismatch, "the negative-side expansion needs k <= 1");
  if (transform == Transform::price && atm && side == Side::neg)
    throw Error(ErrorCode::RegimeMismatch, "the at-the-money price uses the positive side");

  const auto [M, Mh] = root_counts(p);
  const int count = side == Side::pos ? M : Mh;
  const int near = side == Side::pos ? p.n_pos() : p.n_neg();
  if (static_cast<int>(trunc.orders.size()) != count)
    throw Error(ErrorCode::ConfigError, "truncation vector " + trunc.str() + " needs " + std::to_string(count) + " entries");
  for (int o : trunc.orders)
    if (o < 2) throw Error(ErrorCode::ConfigError, "truncation entries must be at least 2");

  PriceExpansion out;
  out.transform = transform;
  out.side = side;
  out.regime = regime_of(p);
  out.k = k;
  out.atm = atm;

  for (int i = 0; i < count; ++i) {
    const bool far = i >= near;
    // Entry M keeps T^1 .. T^{M+1} of a near-root series and M leading terms of the far one.
    const int kept = trunc.orders[i] + (far ? 0 : 1);
    // Probe the grid once with a short expansion, then expand to the needed order.
    const RootExpansion probe = expand_one(p, side, i + 1, far, 2);
    const RootExpansion root = expand_one(p, side, i + 1, far, root_order_for(probe, kept));
    Constituent c = constituent_series(p, root, atm ? 1.0 : k, transform, atm);
    // Keep `kept` coefficients from the leading term and freeze the result as a polynomial.
    const Series& s = c.laplace;
    const int n = std::min(kept, s.size());
    if (n < kept && !s.exact())
      throw Error(ErrorCode::UnsupportedOrder, "root expansion too short for the requested truncation");
    c.laplace = Series::polynomial(Eigen::VectorXd(s.coeffs().head(n)), s.base(), s.den());
    c.kept = kept;
    out.parts.push_back(std::move(c));
  }

  // Overall factors of the transforms.
  double factor = 1.0;
  switch (transform) {
    case Transform::price:
      factor = atm ? 1.0 : k;
      break;
    case Transform::f_k:
      factor = side == Side::pos ? -1.0 : 1.0;
      break;
    case Transform::f_kk:
      factor = 1.0 / k;
      break;
  }
  for (auto& c : out.parts) c.laplace = scale(c.laplace, factor);
  if (transform == Transform::f_k && side == Side::neg) out.extra = Series::monomial(-1.0, 1);
  return out;
}

// ---------------------------------------------------------------------------------------
// Prices and Greeks

void require_risk_neutral(const HyperExpParams& p, double r, double tol) {
  if (!p.pos().empty() && !(p.pos().front().rate > 1.0))
    throw Error(ErrorCode::RhoOneTooSmall, "the smallest positive jump rate must exceed 1");
  const double v = psi(p, 1.0);
  if (!(std::abs(v - r) <= tol))
    throw Error(ErrorCode::NotRiskNeutral, "psi(1) = " + std::to_string(v) + " differs from r = " + std::to_string(r));
}

namespace {

struct Setup {
  Side side;      // which expansion computes the option
  bool via_parity;
};

// Calls with k >= 1 and puts with k <= 1 are priced directly, the rest through parity.
Setup setup_for(const OptionSpec& spec) {
  const double k = spec.k();
  const bool atm = std::abs(k - 1.0) < kAtmTolerance;
  if (atm) return {Side::pos, spec.kind == OptionKind::put};
  if (k > 1.0) return {Side::pos, spec.kind == OptionKind::put};
  return {Side::neg, spec.kind == OptionKind::call};
}

PriceExpansion expansion_for(const OptionSpec& spec, const HyperExpParams& p, const TruncationVector& trunc) {
  const Setup s = setup_for(spec);
  return build_price_expansion(p, spec.k(), s.side, trunc, Transform::price);
}

}  // namespace

PriceResult price(const OptionSpec& spec, const HyperExpParams& p, const TruncationVector& trunc) {
  spec.validate();
  require_risk_neutral(p, spec.r, 1e-6);
  const Setup s = setup_for(spec);
  const PriceExpansion e = expansion_for(spec, p, trunc);
  const double T = spec.T;
  const double disc = std::exp(-spec.r * T);
  const double direct = disc * spec.S0 * e.value(T);
  PriceResult out;
  // direct is the call for the positive side and the put for the negative side.
  if (!s.via_parity) {
    out.value = direct;
  } else if (s.side == Side::pos) {
    out.value = direct - spec.S0 + spec.K * disc;  // put from call
  } else {
    out.value = direct + spec.S0 - spec.K * disc;  // call from put
  }
  for (double m : e.tail_magnitudes(T)) out.tail.push_back(disc * spec.S0 * m);
  const std::vector<double> ratios = e.tail_ratios(T);
  const double scale_ref = std::max(std::abs(out.value), 1e-300);
  double worst_ratio = 0.0;
  double worst_tail = 0.0;
  bool slow = false;
  for (std::size_t i = 0; i < out.tail.size(); ++i) {
    worst_tail = std::max(worst_tail, out.tail[i]);
    worst_ratio = std::max(worst_ratio, ratios[i]);
    // A slowly shrinking tail only matters once its last term is visible in the price.
    if (ratios[i] > 0.5 && out.tail[i] > 1e-10 * scale_ref) slow = true;
  }
  if (slow || worst_tail > 1e-7 * scale_ref) {
    out.convergence_warning = true;
    std::ostringstream msg;
    msg << "ConvergenceWarning: series tail not negligible at T = " << T << " (largest last term " << worst_tail
        << ", largest tail ratio " << worst_ratio << ")";
    out.warning = msg.str();
  }
  return out;
}

double price_value(const OptionSpec& spec, const HyperExpParams& p, const TruncationVector& trunc) {
  return price(spec, p, trunc).value;
}

std::pair<double, double> theta_one_sided(const OptionSpec& spec, const HyperExpParams& p, const TruncationVector& trunc) {
  spec.validate();
  require_risk_neutral(p, spec.r, 1e-6);
  const Setup s = setup_for(spec);
  const PriceExpansion e = expansion_for(spec, p, trunc);
  const double T = spec.T;
  const double disc = std::exp(-spec.r * T);
  auto one = [&](bool right) {
    // d/dT [e^{-rT} S0 f(T)]
    double th = disc * spec.S0 * (e.value(T, 1, right) - spec.r * e.value(T, 0, right));
    if (s.via_parity) {
      // call = put + S0 - K e^{-rT}, put = call - S0 + K e^{-rT}
      const double parity = spec.r * spec.K * disc;
      th += s.side == Side::neg ? parity : -parity;
    }
    return th;
  };
  return {one(false), one(true)};
}

double theta(const OptionSpec& spec, const HyperExpParams& p, const TruncationVector& trunc) {
  const double c = kink_location(p, spec.k());
  const auto [left, right] = theta_one_sided(spec, p, trunc);
  if (std::isfinite(c) && std::abs(spec.T - c) < 1e-10) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "theta is discontinuous at T = " << c << "; left limit " << left << ", right limit " << right;
    throw Error(ErrorCode::AtKinkPoint, msg.str());
  }
  return right;
}

double kink_location(const HyperExpParams& p, double k) {
  if (p.sigma() > 0.0 || std::abs(k - 1.0) < kAtmTolerance) return std::numeric_limits<double>::infinity();
  if (k > 1.0 && p.a() > 0.0) return std::log(k) / p.a();
  if (k < 1.0 && p.a() < 0.0) return std::log(k) / p.a();
  return std::numeric_limits<double>::infinity();
}

double theta_jump_closed_form(const HyperExpParams& p, const OptionSpec& spec) {
  const double eta0 = -p.jump_intensity();
  return p.a() * spec.K * std::pow(spec.K / spec.S0, (eta0 - spec.r) / p.a());
}

Greeks delta_gamma(const OptionSpec& spec, const HyperExpParams& p, const TruncationVector& trunc) {
  spec.validate();
  if (!(p.sigma() > 0.0)) throw Error(ErrorCode::GaussianRequired, "delta and gamma need sigma > 0");
  require_risk_neutral(p, spec.r, 1e-6);
  const double k = spec.k();
  const bool atm = std::abs(k - 1.0) < kAtmTolerance;
  const Side side = (k > 1.0 && !atm) ? Side::pos : Side::neg;
  const double T = spec.T;
  const double disc = std::exp(-spec.r * T);

  // Call payoff function f(T, k) = E[(e^{X_T} - k)^+].
  double f;
  if (k >= 1.0) {
    f = build_price_expansion(p, k, Side::pos, trunc, Transform::price).value(T);
  } else {
    const double w = build_price_expansion(p, k, Side::neg, trunc, Transform::price).value(T);
    f = w + std::exp(spec.r * T) - k;
  }
  const double fk = build_price_expansion(p, k, side, trunc, Transform::f_k).value(T);
  const double fkk = build_price_expansion(p, k, side, trunc, Transform::f_kk).value(T);

  Greeks g;
  g.delta = disc * (f - k * fk);
  g.gamma = disc / spec.S0 * k * k * fkk;
  if (spec.kind == OptionKind::put) g.delta -= 1.0;
  return g;
}

}  // namespace hyperlev
