#pragma once

#include <complex>
#include <functional>

#include "hyperlev/model.hpp"
#include "hyperlev/roots.hpp"

namespace hyperlev {

/// Integration settings for int_lower^upper e^{itu} g(u) du on a uniform grid of `steps`
/// subintervals (steps must be even; each Filon panel spans two subintervals).
struct QuadratureSpec {
  double c = 0.5;        // contour abscissa (Bromwich) or strip abscissa (Fourier pricer)
  double upper = 1e3;
  long steps = 100000;
  double t = 0;          // oscillation frequency
  double lower = 0;
};

/// Parabolic Filon weights (alpha, beta, gamma) for theta = t h, with Taylor forms for
/// theta < 1e-2.
void filon_weights(double theta, double& alpha, double& beta, double& gamma);

/// Filon rule fed one grid value at a time, u_i = lower + i h for i = 0 .. steps.
class FilonAccumulator {
 public:
  FilonAccumulator(double t, double lower, double h, long steps);
  void push(std::complex<double> value);
  long count() const { return i_; }
  std::complex<double> result() const;

 private:
  double t_, a_, h_;
  long steps_;
  long i_ = 0;
  std::complex<double> even_{0.0}, odd_{0.0}, first_{0.0}, last_{0.0};
};

std::complex<double> filon_integrate(const std::function<std::complex<double>(double)>& g, double t,
                                     const QuadratureSpec& spec);

enum class RootMode { numeric, hybrid };

struct DigitalResult {
  double price = 0;
  double root_seconds = 0;
  double total_seconds = 0;
};

/// Up-and-out digital D(t) = e^{-rt} P(sup_{s<=t} X_s < log k) by Bromwich inversion of
/// (1 - sum beta_l k^{-zeta_l}) / q along c + iu. In hybrid mode roots for u > u_switch come
/// from order-`series_order` expansions instead of root tracking.
DigitalResult digital_barrier(const HyperExpParams& p, double t, double k, double r, const QuadratureSpec& spec,
                              RootMode mode, double u_switch = 80.0, int series_order = 10);
double digital_barrier_price(const HyperExpParams& p, double t, double k, double r, const QuadratureSpec& spec,
                             RootMode mode, double u_switch = 80.0, int series_order = 10);

/// Call price by Fourier inversion in log-strike along c + iu with 1 - rho_1 < c < 0.
/// The range [0, spec.upper] is split into decades that share spec.steps evenly
/// so that the region near u = 0 is finely resolved.
double fourier_call_price(const HyperExpParams& p, double S0, double K, double r, double T, const QuadratureSpec& spec);

/// Defaults used by the Fourier pricer: c = -0.5 (clipped into the strip), upper 1e6, 4e5 steps.
QuadratureSpec fourier_default_spec(const HyperExpParams& p);

}  // namespace hyperlev
