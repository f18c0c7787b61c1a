#include "hyperlev/roots.hpp"

#include <algorithm>
#include <cmath>

namespace hyperlev {

Regime regime_of(const HyperExpParams& p) {
  if (p.sigma() > 0.0) return Regime::gaussian;
  if (p.a() > 0.0) return Regime::drift_pos;
  if (p.a() < 0.0) return Regime::drift_neg;
  return Regime::driftless;
}

namespace {

double smallest_pos_rate(const HyperExpParams& p) {
  return p.pos().empty() ? std::numeric_limits<double>::infinity() : p.pos().front().rate;
}

}  // namespace

RootExpansion expand_far_root(const HyperExpParams& p, Side side, int order) {
  if (order < 0) throw Error(ErrorCode::UnsupportedOrder, "expansion order must be nonnegative");
  const Regime regime = regime_of(p);
  const bool admitted = regime == Regime::gaussian || (side == Side::pos && regime == Regime::drift_pos) ||
                        (side == Side::neg && regime == Regime::drift_neg);
  if (!admitted) throw Error(ErrorCode::RegimeMismatch, "no far root on this side for the given sigma and drift");

  RootExpansion r;
  r.side = side;
  r.far = true;
  r.regime = regime;
  r.rho1 = smallest_pos_rate(p);
  r.index = (side == Side::pos ? p.n_pos() : p.n_neg()) + 1;

  Series z;
  if (regime == Regime::gaussian) {
    // Coefficients of q^{-n/2} for n = -1 .. 2*order.
    const int len = 2 * order + 2;
    const auto cache = laurent_coeffs(p, std::max(0, len - 3));
    const Series d = reciprocal(h_series(p, cache));
    r.branch = side == Side::pos ? Branch::principal : Branch::negated;
    const Series v = lagrange_invert(d, r.branch);
    z = truncate(reciprocal(v), 2 * order + 1);
  } else {
    const int len = order + 2;
    const auto cache = laurent_coeffs(p, std::max(0, len - 2));
    const Series d = reciprocal(h_series(p, cache));
    const Series v = lagrange_invert(d, Branch::principal);
    z = truncate(reciprocal(v), order + 1);
  }
  r.series = side == Side::pos ? z : negate(z);
  return r;
}

RootExpansion expand_near_root(const HyperExpParams& p, Side side, int l, int order) {
  if (order < 0) throw Error(ErrorCode::UnsupportedOrder, "expansion order must be nonnegative");
  const int count = side == Side::pos ? p.n_pos() : p.n_neg();
  if (l < 1 || l > count) throw Error(ErrorCode::IndexOutOfRange, "root index " + std::to_string(l) + " out of range");
  RootExpansion r;
  r.side = side;
  r.index = l;
  r.far = false;
  r.regime = regime_of(p);
  r.rho1 = smallest_pos_rate(p);
  const auto cache = laurent_coeffs(p, std::max(0, order - 2));
  const Series g = side == Side::pos ? g_series(p, cache, l) : ghat_series(p, cache, l);
  const Series z = truncate(lagrange_invert(reciprocal(g), Branch::principal), order + 1);
  if (side == Side::pos) {
    r.pole = p.pos()[l - 1].rate;
    r.series = add_scalar(z, r.pole);
  } else {
    r.pole = p.neg()[l - 1].rate;
    r.series = add_scalar(negate(z), r.pole);
  }
  r.series = truncate(r.series, order + 1);
  return r;
}

std::vector<RootExpansion> expand_roots(const HyperExpParams& p, Side side, int order) {
  std::vector<RootExpansion> out;
  const int count = side == Side::pos ? p.n_pos() : p.n_neg();
  for (int l = 1; l <= count; ++l) out.push_back(expand_near_root(p, side, l, order));
  const auto [M, Mh] = root_counts(p);
  if ((side == Side::pos ? M : Mh) > count) out.push_back(expand_far_root(p, side, order));
  return out;
}

double DerivedRootSeries::shift() const { return D * std::log(k); }

DerivedRootSeries derive_series(const RootExpansion& root, DerivedKind kind, double k) {
  DerivedRootSeries out;
  out.kind = kind;
  out.k = k;
  const Series& s = root.series;
  switch (kind) {
    case DerivedKind::inv:
      out.series = reciprocal(s);
      break;
    case DerivedKind::inv_shift:
      if (!(root.rho1 > 1.0)) throw Error(ErrorCode::RhoOneTooSmall, "1/(zeta - 1) needs rho_1 > 1");
      out.series = reciprocal(add_scalar(s, root.side == Side::pos ? -1.0 : 1.0));
      break;
    case DerivedKind::power: {
      if (!(k > 0.0)) throw Error(ErrorCode::DomainError, "moneyness must be positive");
      const double principal = s.coeff(-1);
      const Series rest = principal == 0.0 ? s : add(s, Series::monomial(-principal, -1, s.den()));
      if (root.side == Side::pos) {
        out.series = exp_base_power(k, negate(rest));
        out.D = principal;
      } else {
        out.series = exp_base_power(k, rest);
        out.D = -principal;
      }
      if (principal != 0.0) out.prefactor = s.den() == 2 ? Prefactor::exp_sqrt : Prefactor::exp_linear;
      break;
    }
    case DerivedKind::deriv:
      out.series = differentiate_param(s);
      break;
  }
  return out;
}

cplx eval_expansion(const RootExpansion& root, cplx q, bool* below) {
  if (below != nullptr) *below = std::abs(q) < root.q_min;
  return evaluate(root.series, cplx(1.0) / q);
}

cplx eval_expansion(const DerivedRootSeries& s, cplx q) {
  cplx v = evaluate(s.series, cplx(1.0) / q);
  if (s.prefactor == Prefactor::exp_sqrt) v *= std::exp(-s.D * std::log(s.k) * std::sqrt(q));
  if (s.prefactor == Prefactor::exp_linear) v *= std::exp(-s.D * std::log(s.k) * q);
  return v;
}

cplx root_location(const RootExpansion& root, cplx q, bool* below) {
  const cplx v = eval_expansion(root, q, below);
  return root.side == Side::pos ? v : -v;
}

// ---------------------------------------------------------------------------------------
// Real roots

namespace {

/// Root of f on (lo, hi) with f(lo+) < 0 < f(hi-) by safeguarded Newton.
template <class F, class DF>
double bracket_solve(F f, DF df, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (!(flo < 0.0 && fhi > 0.0)) throw Error(ErrorCode::BracketFailure, "no sign change in root bracket");
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) lo = x; else hi = x;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) return x;
    const double d = df(x);
    double next = x - fx / d;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

std::vector<double> side_roots(const HyperExpParams& p, double q, Side side, int count) {
  const auto& jumps = side == Side::pos ? p.pos() : p.neg();
  const double sgn = side == Side::pos ? 1.0 : -1.0;
  auto f = [&](double y) { return psi(p, sgn * y) - q; };
  auto df = [&](double y) { return sgn * psi_prime(p, sgn * y); };
  std::vector<double> out;
  double left = 0.0;
  for (int l = 0; l < count; ++l) {
    if (l < static_cast<int>(jumps.size())) {
      const double right = jumps[l].rate;
      const double eps = 1e-9 * (right - left);
      const double lo = l == 0 ? 0.0 : left + eps;
      out.push_back(bracket_solve(f, df, lo, right - eps));
      left = right;
    } else {
      double lo = left + (left > 0.0 ? 1e-9 * left : 0.0);
      if (left == 0.0) lo = 0.0;
      double hi = std::max(2.0 * left, 1.0);
      int guard = 0;
      while (f(hi) <= 0.0) {
        hi *= 2.0;
        if (++guard > 2000) throw Error(ErrorCode::BracketFailure, "outer root bracket not found");
      }
      // Walk the lower end away from the pole until psi - q is negative.
      double step = 1e-9 * std::max(left, 1.0);
      while (left > 0.0 && f(lo) >= 0.0) {
        lo = left + step;
        step *= 10.0;
        if (lo >= hi) throw Error(ErrorCode::BracketFailure, "outer root bracket not found");
      }
      out.push_back(bracket_solve(f, df, lo, hi));
    }
  }
  return out;
}

}  // namespace

RootSet numeric_roots_real(const HyperExpParams& p, double q) {
  if (!(q > 0.0)) throw Error(ErrorCode::DomainError, "real root finder needs q > 0");
  const auto [M, Mh] = root_counts(p);
  RootSet rs;
  rs.pos = side_roots(p, q, Side::pos, M);
  rs.neg = side_roots(p, q, Side::neg, Mh);
  return rs;
}

// ---------------------------------------------------------------------------------------
// Contour tracking

ContourTracker::ContourTracker(const HyperExpParams& p, double c, bool include_neg)
    : c_(c), sigma2_half_(0.5 * p.sigma() * p.sigma()), a_(p.a()) {
  if (!(c > 0.0)) throw Error(ErrorCode::DomainError, "contour abscissa must be positive");
  for (const auto& j : p.pos()) {
    w_pos_.push_back(j.weight);
    r_pos_.push_back(j.rate);
  }
  for (const auto& j : p.neg()) {
    w_neg_.push_back(j.weight);
    r_neg_.push_back(j.rate);
  }
  const RootSet rs = numeric_roots_real(p, c);
  for (double z : rs.pos) z_.emplace_back(z, 0.0);
  n_pos_ = static_cast<int>(rs.pos.size());
  if (include_neg)
    for (double z : rs.neg) z_.emplace_back(-z, 0.0);
}

void ContourTracker::psi_and_prime(cplx z, cplx& f, cplx& fp) const {
  cplx s(0.0), sp(0.0);
  for (std::size_t i = 0; i < w_pos_.size(); ++i) {
    const cplx inv = 1.0 / (r_pos_[i] - z);
    s += w_pos_[i] * inv;
    sp += w_pos_[i] * r_pos_[i] * inv * inv;
  }
  for (std::size_t i = 0; i < w_neg_.size(); ++i) {
    const cplx inv = 1.0 / (r_neg_[i] + z);
    s -= w_neg_[i] * inv;
    sp -= w_neg_[i] * r_neg_[i] * inv * inv;
  }
  f = z * (sigma2_half_ * z + a_ + s);
  fp = 2.0 * sigma2_half_ * z + a_ + sp;
}

bool ContourTracker::polish(cplx& z, cplx q) {
  cplx f, fp;
  for (int it = 0; it < 10; ++it) {
    psi_and_prime(z, f, fp);
    const cplx dz = (f - q) / fp;
    z -= dz;
    ++newton_total_;
    if (it >= 1 && (std::abs(dz) <= 1e-14 * std::max(1.0, std::abs(z)) || std::abs(f - q) <= 1e-10)) return true;
  }
  psi_and_prime(z, f, fp);
  return std::abs(f - q) <= 1e-10 * std::max(1.0, std::abs(q)) ||
         std::abs((f - q) / fp) <= 1e-12 * std::max(1.0, std::abs(z));
}

double ContourTracker::separation(std::size_t i) const {
  const cplx z = z_[i];
  double d = std::numeric_limits<double>::infinity();
  for (double r : r_pos_) d = std::min(d, std::abs(z - r));
  for (double r : r_neg_) d = std::min(d, std::abs(z + r));
  for (std::size_t j = 0; j < z_.size(); ++j)
    if (j != i) d = std::min(d, std::abs(z - z_[j]));
  return d;
}

bool ContourTracker::step(double h) {
  const cplx q(c_, u_ + h);
  const cplx I(0.0, 1.0);
  std::vector<cplx> next = z_;
  cplx f, fp;
  for (auto& z : next) {
    psi_and_prime(z, f, fp);
    const cplx zm = z + 0.5 * h * I / fp;
    psi_and_prime(zm, f, fp);
    z += h * I / fp;
    if (!polish(z, q)) return false;
  }
  // Reject the step when two roots merged or one moved further than its neighbourhood allows.
  for (std::size_t i = 0; i < next.size(); ++i) {
    const double room = separation(i);
    if (std::abs(next[i] - z_[i]) > 0.25 * room) return false;
  }
  z_ = std::move(next);
  u_ += h;
  return true;
}

const std::vector<cplx>& ContourTracker::advance(double u) {
  double remaining = u - u_;
  double h = remaining;
  int halvings = 0;
  while (remaining != 0.0) {
    if (std::abs(h) > std::abs(remaining)) h = remaining;
    if (step(h)) {
      remaining = u - u_;
      if (std::abs(remaining) < 1e-15 * std::max(1.0, std::abs(u))) {
        u_ = u;
        break;
      }
      h *= 2.0;
      halvings = 0;
    } else {
      h *= 0.5;
      if (++halvings > 40)
        throw Error(ErrorCode::TrackingDivergence, "root tracking failed to converge at u = " + std::to_string(u_));
    }
  }
  return z_;
}

TrackedRoots track_roots_contour(const HyperExpParams& p, double c, const std::vector<double>& u_grid) {
  if (u_grid.empty() || u_grid.front() != 0.0) throw Error(ErrorCode::DomainError, "tracking grid must start at u = 0");
  ContourTracker tr(p, c);
  TrackedRoots out;
  out.n_pos = tr.n_pos();
  for (double u : u_grid) {
    out.u.push_back(u);
    out.roots.push_back(tr.advance(u));
  }
  return out;
}

std::vector<cplx> numeric_roots_complex(const HyperExpParams& p, cplx q, int* n_pos) {
  if (!(q.real() > 0.0)) throw Error(ErrorCode::DomainError, "complex root finder needs Re q > 0");
  ContourTracker tr(p, q.real());
  const double target = q.imag();
  const int steps = std::max(20, static_cast<int>(std::ceil(std::abs(target) / 0.25)));
  for (int i = 1; i <= steps; ++i) tr.advance(target * i / steps);
  if (n_pos != nullptr) *n_pos = tr.n_pos();
  return tr.roots();
}

double calibrate_q_min(const HyperExpParams& p, RootExpansion& root, double c, double tol) {
  auto ok = [&](cplx q) {
    const cplx z = root_location(root, q);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    cplx f, fp;
    try {
      f = psi(p, z);
      fp = psi_prime(p, z);
    } catch (const Error&) {
      return false;
    }
    return std::abs((f - q) / fp) <= tol * std::max(1.0, std::abs(z));
  };
  double failed = 0.0;
  for (double m = 1e5; m >= 1e-2; m *= 0.95) {
    if (!ok(cplx(m, 0.0)) || !ok(cplx(c, m))) {
      failed = m;
      break;
    }
  }
  root.q_min = 1.25 * failed;
  return root.q_min;
}

}  // namespace hyperlev
