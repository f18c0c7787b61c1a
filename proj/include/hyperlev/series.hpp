#pragma once

// Truncated Laurent and Puiseux series on an integer or half-integer exponent grid.
//
// A series stores coefficients c_0, c_1, ... of x^{(base + n) / den} with den in {1, 2}
// together with its truncation order: every exponent numerator at or above `order` is
// unknown. Polynomials and constants may be marked exact, in which case the order is
// infinite and all unlisted coefficients are zero.

#include <Eigen/Dense>

#include <algorithm>
#include <climits>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <type_traits>
#include <vector>

#include "hyperlev/error.hpp"

namespace hyperlev {

namespace detail {

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class T>
struct real_of {
  using type = T;
};
template <class T>
struct real_of<std::complex<T>> {
  using type = T;
};

}  // namespace detail

template <class Scalar>
using RealOf = typename detail::real_of<Scalar>::type;

enum class Branch { principal, negated };

template <class Scalar>
class TruncatedSeries {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Real = RealOf<Scalar>;

  /// Order value used by exact (untruncated) series.
  static constexpr int kExact = INT_MAX / 4;

  /// The exact zero series.
  TruncatedSeries() : base_(kExact), den_(1), order_(kExact) {}

  /// Truncated series whose order is base + coeffs.size().
  TruncatedSeries(Vector coeffs, int base, int den = 1)
      : base_(base), den_(den), order_(base + static_cast<int>(coeffs.size())), c_(std::move(coeffs)) {
    check_den();
    normalize();
  }

  TruncatedSeries(std::initializer_list<Scalar> coeffs, int base, int den = 1)
      : TruncatedSeries(to_vector(coeffs), base, den) {}

  /// Series with an explicit order. Coefficients past the order are dropped, missing
  /// ones below it are zero.
  static TruncatedSeries with_order(Vector coeffs, int base, int den, int order) {
    TruncatedSeries s;
    s.den_ = den;
    s.check_den();
    s.base_ = base;
    s.order_ = order;
    const int len = std::max(0, order - base);
    Vector c = Vector::Zero(len);
    const int copy = std::min<int>(len, static_cast<int>(coeffs.size()));
    for (int i = 0; i < copy; ++i) c[i] = coeffs[i];
    s.c_ = std::move(c);
    s.normalize();
    return s;
  }

  /// Exact polynomial (finite Laurent sum) on the given grid.
  static TruncatedSeries polynomial(Vector coeffs, int base, int den = 1) {
    TruncatedSeries s;
    s.den_ = den;
    s.check_den();
    s.base_ = base;
    s.order_ = kExact;
    s.c_ = std::move(coeffs);
    s.normalize();
    return s;
  }

  static TruncatedSeries polynomial(std::initializer_list<Scalar> coeffs, int base, int den = 1) {
    return polynomial(to_vector(coeffs), base, den);
  }

  static TruncatedSeries constant(Scalar value, int den = 1) {
    Vector c(1);
    c[0] = value;
    return polynomial(std::move(c), 0, den);
  }

  /// Exact monomial value * x^{numerator / den}.
  static TruncatedSeries monomial(Scalar value, int numerator, int den = 1) {
    Vector c(1);
    c[0] = value;
    return polynomial(std::move(c), numerator, den);
  }

  /// A zero whose truncation order is `order`, i.e. O(x^{order/den}).
  static TruncatedSeries big_o(int order, int den = 1) {
    TruncatedSeries s;
    s.den_ = den;
    s.check_den();
    s.base_ = order;
    s.order_ = order;
    return s;
  }

  int base() const { return base_; }
  int den() const { return den_; }
  int order() const { return order_; }
  bool exact() const { return order_ >= kExact; }
  bool is_zero() const { return c_.size() == 0; }
  int size() const { return static_cast<int>(c_.size()); }
  const Vector& coeffs() const { return c_; }

  /// Leading coefficient; the series must be nonzero.
  const Scalar& leading() const { return c_[0]; }

  /// Coefficient of x^{numerator/den}, zero outside the stored range.
  Scalar coeff(int numerator) const {
    const int i = numerator - base_;
    if (i < 0 || i >= size()) return Scalar(0);
    return c_[i];
  }

  /// Coefficient at a rational exponent p/q with q dividing into the grid.
  Scalar coeff_at(int p, int q) const {
    if ((p * den_) % q != 0) return Scalar(0);
    return coeff(p * den_ / q);
  }

  /// Number of coefficients known relative to the leading term.
  int relative_length() const { return exact() ? kExact : order_ - base_; }

 private:
  static Vector to_vector(std::initializer_list<Scalar> coeffs) {
    Vector v(static_cast<Eigen::Index>(coeffs.size()));
    Eigen::Index i = 0;
    for (const auto& x : coeffs) v[i++] = x;
    return v;
  }

  void check_den() const {
    if (den_ != 1 && den_ != 2) throw Error(ErrorCode::UnsupportedGrid, "exponent denominator must be 1 or 2");
  }

  // Strip leading exact zeros; exact series also lose trailing exact zeros.
  void normalize() {
    Eigen::Index lead = 0;
    while (lead < c_.size() && c_[lead] == Scalar(0)) ++lead;
    if (lead == c_.size()) {
      c_.resize(0);
      base_ = exact() ? kExact : order_;
      return;
    }
    Eigen::Index end = c_.size();
    if (exact()) {
      while (end > lead && c_[end - 1] == Scalar(0)) --end;
    }
    if (lead > 0 || end < c_.size()) {
      Vector tmp = c_.segment(lead, end - lead);
      c_ = std::move(tmp);
      base_ += static_cast<int>(lead);
    }
  }

  int base_;
  int den_;
  int order_;
  Vector c_;

  template <class S>
  friend class TruncatedSeries;
};

using Series = TruncatedSeries<double>;
using ComplexSeries = TruncatedSeries<std::complex<double>>;

// ---------------------------------------------------------------------------------------
// Grid handling

/// Re-express a series on the half-integer grid (den 2). Odd slots become zero.
template <class Scalar>
TruncatedSeries<Scalar> regrid(const TruncatedSeries<Scalar>& f, int den) {
  using S = TruncatedSeries<Scalar>;
  if (den == f.den()) return f;
  if (f.den() == 2 || den != 2) throw Error(ErrorCode::UnsupportedGrid, "only promotion from den 1 to den 2 is supported");
  if (f.is_zero()) return f.exact() ? S::polynomial(typename S::Vector(), 0, 2) : S::big_o(2 * f.order(), 2);
  typename S::Vector c = S::Vector::Zero(2 * f.size() - 1);
  for (int i = 0; i < f.size(); ++i) c[2 * i] = f.coeffs()[i];
  if (f.exact()) return S::polynomial(std::move(c), 2 * f.base(), 2);
  return S::with_order(std::move(c), 2 * f.base(), 2, 2 * f.order());
}

/// Drop every term whose exponent numerator is at or above `order`.
template <class Scalar>
TruncatedSeries<Scalar> truncate(const TruncatedSeries<Scalar>& f, int order) {
  using S = TruncatedSeries<Scalar>;
  if (order >= f.order()) return f;
  if (f.is_zero()) return S::big_o(order, f.den());
  return S::with_order(f.coeffs(), f.base(), f.den(), order);
}

/// Multiply every exponent by x^{shift/den}.
template <class Scalar>
TruncatedSeries<Scalar> shift(const TruncatedSeries<Scalar>& f, int shift_numerator) {
  using S = TruncatedSeries<Scalar>;
  if (f.is_zero()) return f.exact() ? S() : S::big_o(f.order() + shift_numerator, f.den());
  if (f.exact()) return S::polynomial(f.coeffs(), f.base() + shift_numerator, f.den());
  return S::with_order(f.coeffs(), f.base() + shift_numerator, f.den(), f.order() + shift_numerator);
}

namespace detail {

template <class Scalar>
void common_grid(TruncatedSeries<Scalar>& a, TruncatedSeries<Scalar>& b) {
  if (a.den() == b.den()) return;
  if (a.den() == 1) a = regrid(a, 2);
  if (b.den() == 1) b = regrid(b, 2);
}

inline int sat_add(int x, int y) {
  constexpr int cap = TruncatedSeries<double>::kExact;
  if (x >= cap || y >= cap) return cap;
  return std::min(cap, x + y);
}

}  // namespace detail

// ---------------------------------------------------------------------------------------
// Arithmetic

template <class Scalar>
TruncatedSeries<Scalar> scale(const TruncatedSeries<Scalar>& f, Scalar factor) {
  using S = TruncatedSeries<Scalar>;
  if (f.is_zero()) return f;
  if (f.exact()) return S::polynomial(f.coeffs() * factor, f.base(), f.den());
  return S::with_order(f.coeffs() * factor, f.base(), f.den(), f.order());
}

template <class Scalar>
TruncatedSeries<Scalar> negate(const TruncatedSeries<Scalar>& f) {
  return scale(f, Scalar(-1));
}

/// Coefficientwise sum, truncated at the smaller order.
template <class Scalar>
TruncatedSeries<Scalar> add(TruncatedSeries<Scalar> a, TruncatedSeries<Scalar> b) {
  using S = TruncatedSeries<Scalar>;
  detail::common_grid(a, b);
  const int order = std::min(a.order(), b.order());
  if (a.is_zero() && b.is_zero()) return order >= S::kExact ? S() : S::big_o(order, a.den());
  int lo = std::min(a.is_zero() ? S::kExact : a.base(), b.is_zero() ? S::kExact : b.base());
  int hi;
  if (order >= S::kExact) {
    hi = std::max(a.is_zero() ? lo : a.base() + a.size(), b.is_zero() ? lo : b.base() + b.size());
  } else {
    hi = order;
  }
  if (hi <= lo) return S::big_o(order, a.den());
  typename S::Vector c(hi - lo);
  for (int e = lo; e < hi; ++e) c[e - lo] = a.coeff(e) + b.coeff(e);
  if (order >= S::kExact) return S::polynomial(std::move(c), lo, a.den());
  return S::with_order(std::move(c), lo, a.den(), order);
}

template <class Scalar>
TruncatedSeries<Scalar> subtract(const TruncatedSeries<Scalar>& a, const TruncatedSeries<Scalar>& b) {
  return add(a, negate(b));
}

/// Add an exact constant.
template <class Scalar>
TruncatedSeries<Scalar> add_scalar(const TruncatedSeries<Scalar>& f, Scalar value) {
  return add(f, TruncatedSeries<Scalar>::constant(value, f.den()));
}

/// Cauchy product. The result is known up to min(order_a + base_b, order_b + base_a).
template <class Scalar>
TruncatedSeries<Scalar> mul(TruncatedSeries<Scalar> a, TruncatedSeries<Scalar> b) {
  using S = TruncatedSeries<Scalar>;
  detail::common_grid(a, b);
  const int den = a.den();
  if (a.is_zero() || b.is_zero()) {
    if (a.is_zero() && a.exact()) return S();
    if (b.is_zero() && b.exact()) return S();
    // O(x^oa) times something with leading exponent bb.
    int oa = a.is_zero() ? detail::sat_add(a.order(), b.base()) : S::kExact;
    int ob = b.is_zero() ? detail::sat_add(b.order(), a.base()) : S::kExact;
    return S::big_o(std::min(oa, ob), den);
  }
  const int base = a.base() + b.base();
  const int order = std::min(detail::sat_add(a.order(), b.base()), detail::sat_add(b.order(), a.base()));
  int len;
  if (order >= S::kExact) {
    len = a.size() + b.size() - 1;
  } else {
    len = order - base;
  }
  typename S::Vector c = S::Vector::Zero(std::max(len, 0));
  const int na = a.size();
  const int nb = b.size();
  for (int n = 0; n < len; ++n) {
    Scalar acc(0);
    const int jmin = std::max(0, n - (nb - 1));
    const int jmax = std::min(n, na - 1);
    for (int j = jmin; j <= jmax; ++j) acc += a.coeffs()[j] * b.coeffs()[n - j];
    c[n] = acc;
  }
  if (order >= S::kExact) return S::polynomial(std::move(c), base, den);
  return S::with_order(std::move(c), base, den, order);
}

/// Product of several series, folded left to right.
template <class Scalar>
TruncatedSeries<Scalar> mul_all(const std::vector<TruncatedSeries<Scalar>>& factors) {
  if (factors.empty()) return TruncatedSeries<Scalar>::constant(Scalar(1));
  TruncatedSeries<Scalar> acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = mul(acc, factors[i]);
  return acc;
}

/// Default floor below which a leading coefficient counts as zero.
inline constexpr double kReciprocalFloor = 1e-300;

/// Multiplicative inverse. `terms` overrides the number of coefficients produced, which is
/// required when the input is exact.
template <class Scalar>
TruncatedSeries<Scalar> reciprocal(const TruncatedSeries<Scalar>& f, int terms = -1, double floor = kReciprocalFloor) {
  using S = TruncatedSeries<Scalar>;
  if (f.is_zero() || std::abs(f.leading()) < floor)
    throw Error(ErrorCode::ZeroLeadingCoefficient, "reciprocal of a series with vanishing leading coefficient");
  int len = terms;
  if (len < 0) {
    if (f.exact()) {
      if (f.size() == 1) return S::monomial(Scalar(1) / f.leading(), -f.base(), f.den());
      throw Error(ErrorCode::UnsupportedOrder, "reciprocal of an exact series needs an explicit term count");
    }
    len = f.relative_length();
  } else if (!f.exact()) {
    len = std::min(len, f.relative_length());
  }
  typename S::Vector r(len);
  const Scalar inv0 = Scalar(1) / f.leading();
  const int nf = f.size();
  for (int n = 0; n < len; ++n) {
    Scalar acc = n == 0 ? Scalar(1) : Scalar(0);
    const int jmax = std::min(n, nf - 1);
    for (int j = 1; j <= jmax; ++j) acc -= f.coeffs()[j] * r[n - j];
    r[n] = acc * inv0;
  }
  return S::with_order(std::move(r), -f.base(), f.den(), -f.base() + len);
}

/// Quotient a / b.
template <class Scalar>
TruncatedSeries<Scalar> divide(const TruncatedSeries<Scalar>& a, const TruncatedSeries<Scalar>& b) {
  return mul(a, reciprocal(b));
}

/// Exponential partial Bell polynomial B_{n,m}(x_1, ..., x_{n-m+1}); x[0] holds x_1.
template <class Scalar>
Scalar bell_partial(int n, int m, const std::vector<Scalar>& x) {
  if (n < 0 || m < 0) throw Error(ErrorCode::IndexError, "Bell polynomial indices must be nonnegative");
  if (n == 0 && m == 0) return Scalar(1);
  if (n == 0 || m == 0 || m > n) return Scalar(0);
  if (static_cast<int>(x.size()) < n - m + 1)
    throw Error(ErrorCode::IndexError, "Bell polynomial B_{" + std::to_string(n) + "," + std::to_string(m) + "} needs " +
                                           std::to_string(n - m + 1) + " arguments");
  // table[i][j] = B_{i,j}, built by the convolution recurrence over the first block.
  std::vector<std::vector<Scalar>> table(n + 1, std::vector<Scalar>(m + 1, Scalar(0)));
  table[0][0] = Scalar(1);
  std::vector<std::vector<double>> binom(n + 1, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i <= n; ++i) {
    binom[i][0] = 1.0;
    for (int j = 1; j <= i; ++j) binom[i][j] = binom[i - 1][j - 1] + (j <= i - 1 ? binom[i - 1][j] : 0.0);
  }
  for (int j = 1; j <= m; ++j) {
    for (int i = j; i <= n; ++i) {
      Scalar acc(0);
      for (int s = 1; s <= i - j + 1; ++s) {
        if (s - 1 >= static_cast<int>(x.size())) break;
        acc += Scalar(binom[i - 1][s - 1]) * x[s - 1] * table[i - s][j - 1];
      }
      table[i][j] = acc;
    }
  }
  return table[n][m];
}

/// Coefficients of c^{f(x)} for c > 0 and a series without principal part.
/// Uses n p_n = log(c) sum_j j f_j p_{n-j}, which is equivalent to the Bell-polynomial form.
template <class Scalar>
TruncatedSeries<Scalar> exp_base_power(RealOf<Scalar> c, const TruncatedSeries<Scalar>& f, int terms = -1) {
  using S = TruncatedSeries<Scalar>;
  using std::exp;
  using std::log;
  if (!(c > 0)) throw Error(ErrorCode::DomainError, "base of the power must be positive");
  if (!f.is_zero() && f.base() < 0)
    throw Error(ErrorCode::PrincipalPartPresent, "c^f requires a series without negative exponents");
  int len = terms;
  if (len < 0) {
    if (f.exact()) {
      if (f.is_zero() || (f.size() == 1 && f.base() == 0)) return S::constant(exp(log(c) * f.coeff(0)), f.den());
      throw Error(ErrorCode::UnsupportedOrder, "power of an exact series needs an explicit term count");
    }
    len = f.order();
  } else if (!f.exact()) {
    len = std::min(len, f.order());
  }
  const RealOf<Scalar> lc = log(c);
  typename S::Vector p = S::Vector::Zero(std::max(len, 0));
  if (len > 0) p[0] = exp(lc * f.coeff(0));
  for (int n = 1; n < len; ++n) {
    Scalar acc(0);
    for (int j = 1; j <= n; ++j) {
      const Scalar fj = f.coeff(j);
      if (fj != Scalar(0)) acc += Scalar(j) * fj * p[n - j];
    }
    p[n] = acc * lc / RealOf<Scalar>(n);
  }
  return S::with_order(std::move(p), 0, f.den(), len);
}

/// Series reversion of w = f(z) with f = f_k z^k + ..., k in {1, 2}.
/// The result is a series in w^{1/k} (den = k) whose first coefficient is the selected
/// k-th root of 1/f_k.
template <class Scalar>
TruncatedSeries<Scalar> lagrange_invert(const TruncatedSeries<Scalar>& f, Branch branch = Branch::principal, int terms = -1) {
  using S = TruncatedSeries<Scalar>;
  using std::sqrt;
  if (f.den() != 1) throw Error(ErrorCode::UnsupportedGrid, "Lagrange inversion expects an integer-grid series");
  if (f.is_zero()) throw Error(ErrorCode::ZeroLeadingCoefficient, "cannot invert the zero series");
  const int k = f.base();
  if (k != 1 && k != 2) throw Error(ErrorCode::UnsupportedOrder, "Lagrange inversion supports leading order 1 or 2, got " + std::to_string(k));
  int len = terms;
  if (len < 0) {
    if (f.exact()) throw Error(ErrorCode::UnsupportedOrder, "inversion of an exact series needs an explicit term count");
    len = f.relative_length();
  } else if (!f.exact()) {
    len = std::min(len, f.relative_length());
  }
  Scalar root;
  if (k == 1) {
    root = f.leading();
  } else {
    if constexpr (detail::is_complex<Scalar>::value) {
      root = sqrt(f.leading());
    } else {
      if (f.leading() < 0) throw Error(ErrorCode::DomainError, "real square root of a negative leading coefficient");
      root = sqrt(f.leading());
    }
  }
  if (branch == Branch::negated) root = -root;
  // f = f_k z^k (1 + u(z)); l_n = root^{-n}/n [z^{n-1}] (1 + u)^{-n/k}.
  std::vector<Scalar> u(len, Scalar(0));
  for (int j = 1; j < len; ++j) u[j] = f.coeff(k + j) / f.leading();
  typename S::Vector l(len);
  const Scalar inv_root = Scalar(1) / root;
  Scalar inv_root_pow = Scalar(1);
  std::vector<Scalar> P(len, Scalar(0));
  for (int n = 1; n <= len; ++n) {
    inv_root_pow *= inv_root;
    const RealOf<Scalar> alpha = -RealOf<Scalar>(n) / RealOf<Scalar>(k);
    // Power recurrence for (1 + u)^alpha up to index n - 1.
    P[0] = Scalar(1);
    for (int m = 1; m <= n - 1; ++m) {
      Scalar acc(0);
      for (int j = 1; j <= m; ++j) {
        if (u[j] == Scalar(0)) continue;
        acc += ((alpha + 1) * RealOf<Scalar>(j) - RealOf<Scalar>(m)) * u[j] * P[m - j];
      }
      P[m] = acc / RealOf<Scalar>(m);
    }
    l[n - 1] = inv_root_pow * P[n - 1] / RealOf<Scalar>(n);
  }
  return S::with_order(std::move(l), 1, k, 1 + len);
}

/// outer(inner(x)). The outer series must be on the integer grid with no principal part,
/// the inner series must vanish at zero. The result lives on the inner grid.
template <class Scalar>
TruncatedSeries<Scalar> compose(const TruncatedSeries<Scalar>& outer, const TruncatedSeries<Scalar>& inner) {
  using S = TruncatedSeries<Scalar>;
  if (outer.den() != 1) throw Error(ErrorCode::UnsupportedGrid, "outer series of a composition must be on the integer grid");
  if (!outer.is_zero() && outer.base() < 0)
    throw Error(ErrorCode::PrincipalPartPresent, "outer series of a composition must not have negative exponents");
  if (!inner.is_zero() && inner.base() < 1)
    throw Error(ErrorCode::NonvanishingInner, "inner series of a composition must vanish at zero");
  const int den = inner.den();
  if (inner.is_zero()) {
    int ord = inner.exact() ? S::kExact : inner.order();
    if (outer.order() <= 0) ord = 0;
    const S c0 = outer.coeff(0) == Scalar(0) ? S() : S::constant(outer.coeff(0), den);
    return truncate(c0, ord);
  }
  const int bi = inner.base();
  const int top = outer.exact() ? outer.base() + outer.size() : outer.order();
  S result = outer.exact() ? S() : S::big_o(outer.order() * bi, den);
  if (outer.is_zero()) return result;
  S power = S::constant(Scalar(1), den);
  for (int j = 0; j < top; ++j) {
    if (j > 0) power = mul(power, inner);
    const Scalar oj = outer.coeff(j);
    if (oj != Scalar(0)) result = add(result, scale(power, oj));
    if (!power.is_zero() && power.base() >= result.order()) break;
  }
  return result;
}

/// Termwise derivative with respect to q of a series in x = 1/q.
/// A coefficient a at x^{e/den} becomes -(e/den) a at x^{(e+den)/den}.
template <class Scalar>
TruncatedSeries<Scalar> differentiate_param(const TruncatedSeries<Scalar>& f) {
  using S = TruncatedSeries<Scalar>;
  const int den = f.den();
  if (f.is_zero()) return f.exact() ? S() : S::big_o(f.order() + den, den);
  typename S::Vector c(f.size());
  for (int i = 0; i < f.size(); ++i) {
    const int e = f.base() + i;
    c[i] = f.coeffs()[i] * (-static_cast<RealOf<Scalar>>(e) / static_cast<RealOf<Scalar>>(den));
  }
  if (f.exact()) return S::polynomial(std::move(c), f.base() + den, den);
  return S::with_order(std::move(c), f.base() + den, den, f.order() + den);
}

/// Evaluate sum c_n x^{(base+n)/den} using the principal branch for half powers.
template <class Scalar, class X>
auto evaluate(const TruncatedSeries<Scalar>& f, X x) {
  using R = decltype(Scalar(0) * x);
  using std::pow;
  using std::sqrt;
  if (f.is_zero()) return R(0);
  X step = x;
  if (f.den() == 2) {
    if constexpr (!detail::is_complex<X>::value) {
      if (x < 0) throw Error(ErrorCode::DomainError, "half-integer power of a negative real argument");
    }
    step = sqrt(x);
  }
  R acc(0);
  for (int i = f.size() - 1; i >= 0; --i) acc = acc * step + f.coeffs()[i];
  const int b = f.base();
  if (b == 0) return acc;
  X scale_factor = X(1);
  X p = b > 0 ? step : X(1) / step;
  for (int i = 0; i < std::abs(b); ++i) scale_factor *= p;
  return acc * scale_factor;
}

/// Magnitude of the last stored term at x, used as a tail diagnostic.
template <class Scalar, class X>
RealOf<decltype(Scalar(0) * X(0))> last_term_magnitude(const TruncatedSeries<Scalar>& f, X x) {
  using std::abs;
  using std::pow;
  if (f.is_zero()) return 0;
  const int e = f.base() + f.size() - 1;
  return abs(f.coeffs()[f.size() - 1]) * pow(abs(x), static_cast<double>(e) / f.den());
}

/// Cast coefficients to a different scalar type.
template <class To, class From>
TruncatedSeries<To> cast(const TruncatedSeries<From>& f) {
  using S = TruncatedSeries<To>;
  if (f.is_zero()) return f.exact() ? S() : S::big_o(f.order(), f.den());
  typename S::Vector c(f.size());
  for (int i = 0; i < f.size(); ++i) c[i] = static_cast<To>(f.coeffs()[i]);
  if (f.exact()) return S::polynomial(std::move(c), f.base(), f.den());
  return S::with_order(std::move(c), f.base(), f.den(), f.order());
}

}  // namespace hyperlev
