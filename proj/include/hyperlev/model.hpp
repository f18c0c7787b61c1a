#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hyperlev/error.hpp"
#include "hyperlev/series.hpp"

namespace hyperlev {

/// One exponential component of the Lévy density: weight a_l and rate rho_l.
struct Jump {
  double weight;
  double rate;
};

/// A hyperexponential Lévy process with Laplace exponent
///   psi(z) = sigma^2 z^2 / 2 + a z + z sum a_l / (rho_l - z) - z sum ahat_l / (rhohat_l + z).
class HyperExpParams {
 public:
  HyperExpParams() = default;
  HyperExpParams(double sigma, double a, std::vector<Jump> pos, std::vector<Jump> neg);

  double sigma() const { return sigma_; }
  double a() const { return a_; }
  const std::vector<Jump>& pos() const { return pos_; }
  const std::vector<Jump>& neg() const { return neg_; }
  int n_pos() const { return static_cast<int>(pos_.size()); }
  int n_neg() const { return static_cast<int>(neg_.size()); }

  /// Sum of all jump weights, the total jump intensity.
  double jump_intensity() const;

  /// Copy with a different drift or volatility.
  HyperExpParams with_drift(double a) const;
  HyperExpParams with_sigma(double sigma) const;

 private:
  double sigma_ = 0.0;
  double a_ = 0.0;
  std::vector<Jump> pos_;
  std::vector<Jump> neg_;
};

/// Distance below which psi refuses to evaluate next to a pole.
inline constexpr double kPoleFloor = 1e-12;

namespace detail {
template <class T>
void check_poles(const HyperExpParams& p, const T& z) {
  using std::abs;
  for (const auto& j : p.pos())
    if (abs(z - j.rate) < kPoleFloor) throw Error(ErrorCode::PoleEvaluation, "psi evaluated at a pole");
  for (const auto& j : p.neg())
    if (abs(z + j.rate) < kPoleFloor) throw Error(ErrorCode::PoleEvaluation, "psi evaluated at a pole");
}
}  // namespace detail

/// Laplace exponent psi(z), real or complex argument.
template <class T>
T psi(const HyperExpParams& p, const T& z) {
  detail::check_poles(p, z);
  const double s2 = p.sigma() * p.sigma();
  T jumps(0);
  for (const auto& j : p.pos()) jumps += j.weight / (j.rate - z);
  for (const auto& j : p.neg()) jumps -= j.weight / (j.rate + z);
  return z * (0.5 * s2 * z + p.a() + jumps);
}

/// Derivative psi'(z).
template <class T>
T psi_prime(const HyperExpParams& p, const T& z) {
  detail::check_poles(p, z);
  T acc = p.sigma() * p.sigma() * z + p.a();
  for (const auto& j : p.pos()) {
    const T d = j.rate - z;
    acc += j.weight * j.rate / (d * d);
  }
  for (const auto& j : p.neg()) {
    const T d = j.rate + z;
    acc -= j.weight * j.rate / (d * d);
  }
  return acc;
}

/// Second derivative psi''(z).
template <class T>
T psi_second(const HyperExpParams& p, const T& z) {
  detail::check_poles(p, z);
  T acc = T(p.sigma() * p.sigma());
  for (const auto& j : p.pos()) {
    const T d = j.rate - z;
    acc += 2.0 * j.weight * j.rate / (d * d * d);
  }
  for (const auto& j : p.neg()) {
    const T d = j.rate + z;
    acc += 2.0 * j.weight * j.rate / (d * d * d);
  }
  return acc;
}

/// Closed-form coefficients of the local Laurent expansions of psi.
struct LaurentCoefficientCache {
  int order = 0;
  Eigen::VectorXd eta;        // eta_0 .. eta_order
  Eigen::MatrixXd omega;      // row l-1 holds omega_{l,0..order}
  Eigen::MatrixXd omega_hat;  // row l-1 holds omegahat_{l,0..order}
  double jump_intensity = 0;  // gamma(q) = 1 / (q + jump_intensity)

  double gamma(double q) const { return 1.0 / (q + jump_intensity); }
};

LaurentCoefficientCache laurent_coeffs(const HyperExpParams& p, int order);

/// h(v) = psi(1/v) around v = 0, coefficients through v^{order}.
Series h_series(const HyperExpParams& p, const LaurentCoefficientCache& cache);

/// g(z; l) = psi(z + rho_l) around z = 0, l is 1-based.
Series g_series(const HyperExpParams& p, const LaurentCoefficientCache& cache, int l);

/// ghat(z; l) = psi(z - rhohat_l) around z = 0, l is 1-based.
Series ghat_series(const HyperExpParams& p, const LaurentCoefficientCache& cache, int l);

/// Number of positive and negative solutions of psi(z) = q for q > 0.
std::pair<int, int> root_counts(const HyperExpParams& p);

/// Drift a making psi(1) = r. Requires rho_1 > 1 and r >= 0.
double risk_neutral_drift(double sigma, const std::vector<Jump>& pos, const std::vector<Jump>& neg, double r);

/// Real solutions of psi(z) = q at a real q > 0. Negative roots are stored by magnitude.
struct RootSet {
  std::vector<double> pos;  // zeta_1 < ... < zeta_M
  std::vector<double> neg;  // zetahat_1 < ... < zetahat_Mhat, the roots sit at -zetahat
};

/// Law of X at an independent exponential time with rate q.
struct ExpTimeDistribution {
  double q = 0;
  double atom = 0;                  // mass q * alpha at the origin
  std::vector<double> pos_rates;    // density pos_weights[l] * exp(-pos_rates[l] x) on x > 0
  std::vector<double> pos_weights;
  std::vector<double> neg_rates;    // density neg_weights[l] * exp(neg_rates[l] x) on x < 0
  std::vector<double> neg_weights;

  double total_mass() const;
};

ExpTimeDistribution exp_time_distribution(const HyperExpParams& p, double q, const RootSet& roots);

/// A parameter set read from a fixture file.
struct Fixture {
  std::string name;
  HyperExpParams params;
  double r = 0;
};

/// Load a fixture; the drift is derived from r when the file omits it.
Fixture load_fixture(const std::string& path);

/// Directory holding the bundled fixtures, honouring HYPERLEV_FIXTURES.
std::string fixture_dir();

/// Load bundled parameter set 1 or 2 with optional overrides of sigma and r.
Fixture parameter_set(int id);
Fixture parameter_set(int id, double sigma, double r);

}  // namespace hyperlev
