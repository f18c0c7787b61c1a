#include "hyperlev/special.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "hyperlev/error.hpp"

namespace hyperlev {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kSqrtHalfPi = 1.2533141373155002512;

void check_order(int n) {
  if (n < -2) throw Error(ErrorCode::DomainError, "Hh_n and phi_n need n >= -2");
}

// Forward recurrence is stable for x <= 0 and loses about exp(2 x sqrt(2n)) in relative
// accuracy for x > 0, where Hh_n is the minimal solution. Beyond a loss factor of e^4 we
// run Miller's backward recurrence and normalise by Hh_0.
bool forward_is_safe(int nmax, double x) { return x <= 0.0 || x * std::sqrt(2.0 * nmax) <= 4.0; }

std::vector<double> hh_forward(int nmax, double x) {
  std::vector<double> h(nmax + 3);
  const double e = std::exp(-0.5 * x * x);
  h[0] = x * e;
  h[1] = e;
  if (nmax >= 0) h[2] = kSqrtHalfPi * boost::math::erfc(x / std::sqrt(2.0));
  for (int n = 1; n <= nmax; ++n) h[n + 2] = (h[n] - x * h[n + 1]) / n;
  return h;
}

std::vector<double> hh_miller(int nmax, double x) {
  // The minimal/dominant ratio behaves like exp(-2x(sqrt(2N) - sqrt(2n))); pick N so that
  // it drops below 1e-17 at n = nmax.
  const double root = std::sqrt(2.0 * nmax) + 20.0 / x;
  const int start = std::max(nmax + 20, static_cast<int>(std::ceil(0.5 * root * root)));
  std::vector<double> h(nmax + 3, 0.0);
  double above = 0.0;  // Hh_{n+1}
  double cur = 1e-300;  // Hh_n
  for (int n = start; n >= 1; --n) {
    const double below = (n + 1) * above + x * cur;  // (n+1) Hh_{n+1} = Hh_{n-1} - x Hh_n
    above = cur;
    cur = below;
    if (n - 1 <= nmax) h[n + 1] = cur;
    if (n <= nmax) h[n + 2] = above;
    if (std::abs(cur) > 1e250) {
      above *= 1e-250;
      cur *= 1e-250;
      for (double& v : h) v *= 1e-250;
    }
  }
  const double h0 = kSqrtHalfPi * boost::math::erfc(x / std::sqrt(2.0));
  const double scale = h0 / h[2];
  for (int i = 2; i < nmax + 3; ++i) h[i] *= scale;
  const double e = std::exp(-0.5 * x * x);
  h[0] = x * e;
  h[1] = e;
  return h;
}

std::complex<double> hh_quadrature(int n, std::complex<double> z) {
  // Shift the path to w = z + s: Hh_n(z) = exp(-z^2/2) int_0^inf s^n/n! exp(-z s - s^2/2) ds.
  const double lognf = std::lgamma(n + 1.0);
  auto part = [&](bool imag) {
    auto f = [&](double s) {
      if (s == 0.0) return n == 0 ? (imag ? 0.0 : 1.0) : 0.0;
      const std::complex<double> v = std::exp(n * std::log(s) - lognf - z * s - 0.5 * s * s);
      return imag ? v.imag() : v.real();
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-14);
  };
  return std::exp(-0.5 * z * z) * std::complex<double>(part(false), part(true));
}

}  // namespace

std::vector<double> hh_table(int nmax, double x) {
  check_order(nmax);
  if (!std::isfinite(x)) throw Error(ErrorCode::DomainError, "Hh argument must be finite");
  // For x > 0 every Hh_n(x) is below exp(-x^2/2), which has underflowed here.
  if (x > 0.0 && std::exp(-0.5 * x * x) == 0.0) return std::vector<double>(nmax + 3, 0.0);
  return forward_is_safe(nmax, x) ? hh_forward(nmax, x) : hh_miller(nmax, x);
}

double hh(int n, double x) {
  check_order(n);
  return hh_table(std::max(n, 0), x)[n + 2];
}

std::complex<double> hh(int n, std::complex<double> z) {
  check_order(n);
  if (z.imag() == 0.0) return hh(n, z.real());
  if (n == -2) return z * std::exp(-0.5 * z * z);
  if (n == -1) return std::exp(-0.5 * z * z);
  return hh_quadrature(n, z);
}

std::vector<double> phi_table(int nmax, double t, double c) {
  check_order(nmax);
  if (!(t > 0.0)) throw Error(ErrorCode::DomainError, "phi needs t > 0");
  if (!(c >= 0.0)) throw Error(ErrorCode::DomainError, "phi needs c >= 0");
  const auto h = hh_table(std::max(nmax, 0), c / std::sqrt(2.0 * t));
  std::vector<double> out(nmax + 3);
  const double s = std::sqrt(2.0 * t);
  double pref = std::sqrt(2.0) / (kSqrtPi * s * s);  // sqrt(2) s^n / sqrt(pi) at n = -2
  for (int n = -2; n <= nmax; ++n) {
    out[n + 2] = pref * h[n + 2];
    pref *= s;
  }
  return out;
}

double phi(int n, double t, double c) {
  check_order(n);
  return phi_table(std::max(n, 0), t, c)[n + 2];
}

std::complex<double> phi(int n, std::complex<double> t, double c) {
  check_order(n);
  if (!(t.real() > 0.0)) throw Error(ErrorCode::DomainError, "phi needs Re t > 0");
  if (!(c >= 0.0)) throw Error(ErrorCode::DomainError, "phi needs c >= 0");
  if (t.imag() == 0.0) return phi(n, t.real(), c);
  const std::complex<double> s = std::sqrt(2.0 * t);
  return std::sqrt(2.0) * std::pow(s, n) * hh(n, c / s) / kSqrtPi;
}

}  // namespace hyperlev
