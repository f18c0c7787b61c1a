#include "hyperlev/inversion.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

namespace hyperlev {

using cplx = std::complex<double>;

void filon_weights(double theta, double& alpha, double& beta, double& gamma) {
  if (std::abs(theta) < 1e-2) {
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    alpha = 2.0 * t3 / 45.0 - 2.0 * t3 * t2 / 315.0 + 2.0 * t3 * t2 * t2 / 4725.0;
    beta = 2.0 / 3.0 + 2.0 * t2 / 15.0 - 4.0 * t2 * t2 / 105.0 + 2.0 * t2 * t2 * t2 / 567.0;
    gamma = 4.0 / 3.0 - 2.0 * t2 / 15.0 + t2 * t2 / 210.0 - t2 * t2 * t2 / 11340.0;
    return;
  }
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double t3 = theta * theta * theta;
  alpha = (theta * theta + theta * s * c - 2.0 * s * s) / t3;
  beta = 2.0 * (theta * (1.0 + c * c) - 2.0 * s * c) / t3;
  gamma = 4.0 * (s - theta * c) / t3;
}

FilonAccumulator::FilonAccumulator(double t, double lower, double h, long steps) : t_(t), a_(lower), h_(h), steps_(steps) {
  if (steps < 2 || steps % 2 != 0) throw Error(ErrorCode::UnsupportedGrid, "Filon needs an even number of subintervals");
  if (!(h > 0.0)) throw Error(ErrorCode::UnsupportedGrid, "Filon step must be positive");
}

void FilonAccumulator::push(cplx value) {
  if (i_ > steps_) throw Error(ErrorCode::IndexError, "too many Filon samples");
  const double u = a_ + static_cast<double>(i_) * h_;
  const cplx v = value * cplx(std::cos(t_ * u), std::sin(t_ * u));
  if (i_ == 0) first_ = value;
  if (i_ == steps_) last_ = value;
  if (i_ % 2 == 0) {
    even_ += (i_ == 0 || i_ == steps_) ? 0.5 * v : v;
  } else {
    odd_ += v;
  }
  ++i_;
}

cplx FilonAccumulator::result() const {
  if (i_ != steps_ + 1) throw Error(ErrorCode::IndexError, "Filon accumulator is incomplete");
  double alpha, beta, gamma;
  filon_weights(t_ * h_, alpha, beta, gamma);
  const double b = a_ + static_cast<double>(steps_) * h_;
  const cplx I(0.0, 1.0);
  const cplx ends = last_ * std::exp(I * (t_ * b)) - first_ * std::exp(I * (t_ * a_));
  return h_ * (-I * alpha * ends + beta * even_ + gamma * odd_);
}

cplx filon_integrate(const std::function<cplx(double)>& g, double t, const QuadratureSpec& spec) {
  if (!(spec.upper > spec.lower)) throw Error(ErrorCode::UnsupportedGrid, "upper limit must exceed the lower limit");
  const double h = (spec.upper - spec.lower) / static_cast<double>(spec.steps);
  FilonAccumulator acc(t, spec.lower, h, spec.steps);
  for (long i = 0; i <= spec.steps; ++i) acc.push(g(spec.lower + static_cast<double>(i) * h));
  return acc.result();
}

// ---------------------------------------------------------------------------------------
// Digital barrier

namespace {

// (1 - sum_l beta_l k^{-zeta_l}) / q from the positive roots at q.
cplx digital_transform(const HyperExpParams& p, const cplx* z, int m, double logk, cplx q) {
  cplx sum(0.0);
  for (int l = 0; l < m; ++l) {
    cplx num(1.0);
    for (const auto& j : p.pos()) num *= 1.0 - z[l] / j.rate;
    cplx den(1.0);
    for (int i = 0; i < m; ++i)
      if (i != l) den *= 1.0 - z[l] / z[i];
    sum += num / den * std::exp(-z[l] * logk);
  }
  return (1.0 - sum) / q;
}

}  // namespace

DigitalResult digital_barrier(const HyperExpParams& p, double t, double k, double r, const QuadratureSpec& spec,
                              RootMode mode, double u_switch, int series_order) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  if (!(p.sigma() > 0.0)) throw Error(ErrorCode::GaussianRequired, "the digital barrier pricer needs sigma > 0");
  if (!(k > 1.0)) throw Error(ErrorCode::DomainError, "the barrier level needs k > 1");
  if (!(t > 0.0)) throw Error(ErrorCode::DomainError, "maturity must be positive");
  if (!(spec.c > 0.0)) throw Error(ErrorCode::DomainError, "Bromwich abscissa must be positive");
  if (spec.lower != 0.0) throw Error(ErrorCode::UnsupportedGrid, "Bromwich integral starts at u = 0");

  const double logk = std::log(k);
  const double h = spec.upper / static_cast<double>(spec.steps);
  FilonAccumulator acc(t, 0.0, h, spec.steps);
  ContourTracker tracker(p, spec.c, false);
  const int m = tracker.n_pos();

  std::vector<RootExpansion> series;
  if (mode == RootMode::hybrid) series = expand_roots(p, Side::pos, series_order);
  if (mode == RootMode::hybrid && static_cast<int>(series.size()) != m)
    throw Error(ErrorCode::InconsistentRoots, "series and tracked root counts differ");

  std::vector<cplx> z(m);
  double root_seconds = 0.0;
  for (long i = 0; i <= spec.steps; ++i) {
    const double u = static_cast<double>(i) * h;
    const cplx q(spec.c, u);
    const auto r0 = clock::now();
    if (mode == RootMode::hybrid && u > u_switch) {
      for (int l = 0; l < m; ++l) z[l] = root_location(series[l], q);
    } else {
      const auto& tr = tracker.advance(u);
      std::copy(tr.begin(), tr.end(), z.begin());
    }
    root_seconds += std::chrono::duration<double>(clock::now() - r0).count();
    acc.push(digital_transform(p, z.data(), m, logk, q));
  }
  DigitalResult out;
  out.price = std::exp(-r * t) * std::exp(spec.c * t) / std::numbers::pi * acc.result().real();
  out.root_seconds = root_seconds;
  out.total_seconds = std::chrono::duration<double>(clock::now() - start).count();
  return out;
}

double digital_barrier_price(const HyperExpParams& p, double t, double k, double r, const QuadratureSpec& spec,
                             RootMode mode, double u_switch, int series_order) {
  return digital_barrier(p, t, k, r, spec, mode, u_switch, series_order).price;
}

// ---------------------------------------------------------------------------------------
// Fourier pricer

QuadratureSpec fourier_default_spec(const HyperExpParams& p) {
  QuadratureSpec s;
  const double rho1 = p.pos().empty() ? std::numeric_limits<double>::infinity() : p.pos().front().rate;
  s.c = std::max(-0.5, 0.5 * (1.0 - rho1));
  s.upper = 1e6;
  s.steps = 400000;
  return s;
}

double fourier_call_price(const HyperExpParams& p, double S0, double K, double r, double T, const QuadratureSpec& spec) {
  const double rho1 = p.pos().empty() ? std::numeric_limits<double>::infinity() : p.pos().front().rate;
  if (!(spec.c < 0.0 && spec.c > 1.0 - rho1)) throw Error(ErrorCode::ContourOutOfStrip, "need 1 - rho_1 < c < 0");
  if (!(S0 > 0.0 && K > 0.0)) throw Error(ErrorCode::InvalidParameters, "S0 and K must be positive");
  if (!(T > 0.0)) throw Error(ErrorCode::DomainError, "maturity must be positive");
  const double c = spec.c;
  const double logk = std::log(K / S0);
  // e^{cs} e^{isu} S0^{1-z} = S0 k^{c} e^{iu log k} with z = c + iu, s = log K. The drift
  // contributes e^{-iTau} to e^{T psi(1 - z)}; it moves into the Filon frequency so the
  // remaining integrand is slowly varying even when sigma = 0.
  const double freq = logk - T * p.a();
  auto g = [&](double u) {
    const cplx z(c, u);
    return std::exp(T * psi(p, 1.0 - z) + cplx(0.0, T * p.a() * u)) / (z * (z - 1.0));
  };
  // Decade segments starting at u = 1 share the step budget.
  std::vector<double> edges{0.0};
  for (double e = 1.0; e < spec.upper; e *= 10.0) edges.push_back(e);
  edges.push_back(spec.upper);
  const int segments = static_cast<int>(edges.size()) - 1;
  long per = spec.steps / segments;
  per += per % 2;
  per = std::max<long>(per, 2);
  cplx total(0.0);
  for (int sidx = 0; sidx < segments; ++sidx) {
    QuadratureSpec part = spec;
    part.lower = edges[sidx];
    part.upper = edges[sidx + 1];
    part.steps = per;
    total += filon_integrate(g, freq, part);
  }
  return std::exp(-r * T) * S0 * std::pow(K / S0, c) / std::numbers::pi * total.real();
}

}  // namespace hyperlev
