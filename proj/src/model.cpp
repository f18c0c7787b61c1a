#include "hyperlev/model.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#ifndef HYPERLEV_DEFAULT_FIXTURE_DIR
#define HYPERLEV_DEFAULT_FIXTURE_DIR "fixtures"
#endif

namespace hyperlev {

namespace {

void validate_side(const std::vector<Jump>& side, const char* name) {
  double prev = 0.0;
  for (const auto& j : side) {
    if (!(j.weight > 0.0) || !std::isfinite(j.weight))
      throw Error(ErrorCode::InvalidParameters, std::string(name) + " jump weights must be positive");
    if (!(j.rate > prev) || !std::isfinite(j.rate))
      throw Error(ErrorCode::InvalidParameters, std::string(name) + " jump rates must be positive and strictly increasing");
    prev = j.rate;
  }
}

}  // namespace

HyperExpParams::HyperExpParams(double sigma, double a, std::vector<Jump> pos, std::vector<Jump> neg)
    : sigma_(sigma), a_(a), pos_(std::move(pos)), neg_(std::move(neg)) {
  if (!(sigma_ >= 0.0) || !std::isfinite(sigma_)) throw Error(ErrorCode::InvalidParameters, "sigma must be nonnegative");
  if (!std::isfinite(a_)) throw Error(ErrorCode::InvalidParameters, "drift must be finite");
  validate_side(pos_, "positive");
  validate_side(neg_, "negative");
}

double HyperExpParams::jump_intensity() const {
  double s = 0.0;
  for (const auto& j : pos_) s += j.weight;
  for (const auto& j : neg_) s += j.weight;
  return s;
}

HyperExpParams HyperExpParams::with_drift(double a) const { return HyperExpParams(sigma_, a, pos_, neg_); }

HyperExpParams HyperExpParams::with_sigma(double sigma) const { return HyperExpParams(sigma, a_, pos_, neg_); }

LaurentCoefficientCache laurent_coeffs(const HyperExpParams& p, int order) {
  if (order < 0) throw Error(ErrorCode::UnsupportedOrder, "Laurent order must be nonnegative");
  LaurentCoefficientCache c;
  c.order = order;
  c.jump_intensity = p.jump_intensity();
  c.eta = Eigen::VectorXd::Zero(order + 1);
  for (int n = 0; n <= order; ++n) {
    double s = 0.0;
    for (const auto& j : p.pos()) s += j.weight * std::pow(j.rate, n);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    for (const auto& j : p.neg()) s += sign * j.weight * std::pow(j.rate, n);
    c.eta[n] = -s;
  }

  const int N = p.n_pos();
  const int Nh = p.n_neg();
  c.omega = Eigen::MatrixXd::Zero(N, order + 1);
  for (int l = 0; l < N; ++l) {
    const double rl = p.pos()[l].rate;
    double w0 = -p.pos()[l].weight;
    for (int i = 0; i < N; ++i)
      if (i != l) w0 += p.pos()[i].weight * rl / (p.pos()[i].rate - rl);
    for (const auto& j : p.neg()) w0 -= j.weight * rl / (j.rate + rl);
    c.omega(l, 0) = w0;
    for (int n = 1; n <= order; ++n) {
      double s = 0.0;
      for (int i = 0; i < N; ++i)
        if (i != l) s += p.pos()[i].weight * p.pos()[i].rate / std::pow(p.pos()[i].rate - rl, n + 1);
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      for (const auto& j : p.neg()) s += sign * j.weight * j.rate / std::pow(j.rate + rl, n + 1);
      c.omega(l, n) = s;
    }
  }

  c.omega_hat = Eigen::MatrixXd::Zero(Nh, order + 1);
  for (int l = 0; l < Nh; ++l) {
    const double rl = p.neg()[l].rate;
    double w0 = -p.neg()[l].weight;
    for (int i = 0; i < Nh; ++i)
      if (i != l) w0 += p.neg()[i].weight * rl / (p.neg()[i].rate - rl);
    for (const auto& j : p.pos()) w0 -= j.weight * rl / (j.rate + rl);
    c.omega_hat(l, 0) = w0;
    for (int n = 1; n <= order; ++n) {
      double s = 0.0;
      for (const auto& j : p.pos()) s += j.weight * j.rate / std::pow(j.rate + rl, n + 1);
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      for (int i = 0; i < Nh; ++i)
        if (i != l) s += sign * p.neg()[i].weight * p.neg()[i].rate / std::pow(p.neg()[i].rate - rl, n + 1);
      c.omega_hat(l, n) = s;
    }
  }
  return c;
}

Series h_series(const HyperExpParams& p, const LaurentCoefficientCache& cache) {
  const int order = cache.order;
  Eigen::VectorXd c(order + 3);
  c[0] = 0.5 * p.sigma() * p.sigma();
  c[1] = p.a();
  c.tail(order + 1) = cache.eta;
  return Series::with_order(std::move(c), -2, 1, order + 1);
}

Series g_series(const HyperExpParams& p, const LaurentCoefficientCache& cache, int l) {
  if (l < 1 || l > p.n_pos()) throw Error(ErrorCode::IndexOutOfRange, "positive pole index out of range");
  const int order = cache.order;
  const double s2 = p.sigma() * p.sigma();
  const double rho = p.pos()[l - 1].rate;
  Eigen::VectorXd c(order + 2);
  c[0] = -p.pos()[l - 1].weight * rho;
  for (int n = 0; n <= order; ++n) c[n + 1] = cache.omega(l - 1, n);
  c[1] += 0.5 * s2 * rho * rho + p.a() * rho;
  if (order >= 1) c[2] += s2 * rho + p.a();
  if (order >= 2) c[3] += 0.5 * s2;
  return Series::with_order(std::move(c), -1, 1, order + 1);
}

Series ghat_series(const HyperExpParams& p, const LaurentCoefficientCache& cache, int l) {
  if (l < 1 || l > p.n_neg()) throw Error(ErrorCode::IndexOutOfRange, "negative pole index out of range");
  const int order = cache.order;
  const double s2 = p.sigma() * p.sigma();
  const double rho = p.neg()[l - 1].rate;
  Eigen::VectorXd c(order + 2);
  c[0] = p.neg()[l - 1].weight * rho;
  for (int n = 0; n <= order; ++n) c[n + 1] = cache.omega_hat(l - 1, n);
  c[1] += 0.5 * s2 * rho * rho - p.a() * rho;
  if (order >= 1) c[2] += p.a() - s2 * rho;
  if (order >= 2) c[3] += 0.5 * s2;
  return Series::with_order(std::move(c), -1, 1, order + 1);
}

std::pair<int, int> root_counts(const HyperExpParams& p) {
  const int N = p.n_pos();
  const int Nh = p.n_neg();
  if (p.sigma() > 0.0) return {N + 1, Nh + 1};
  if (p.a() > 0.0) return {N + 1, Nh};
  if (p.a() < 0.0) return {N, Nh + 1};
  return {N, Nh};
}

double risk_neutral_drift(double sigma, const std::vector<Jump>& pos, const std::vector<Jump>& neg, double r) {
  if (!pos.empty() && !(pos.front().rate > 1.0))
    throw Error(ErrorCode::RhoOneTooSmall, "the smallest positive jump rate must exceed 1");
  if (!(r >= 0.0)) throw Error(ErrorCode::InvalidParameters, "interest rate must be nonnegative");
  double a = r - 0.5 * sigma * sigma;
  for (const auto& j : pos) a -= j.weight / (j.rate - 1.0);
  for (const auto& j : neg) a += j.weight / (j.rate + 1.0);
  return a;
}

double ExpTimeDistribution::total_mass() const {
  double m = atom;
  for (std::size_t i = 0; i < pos_rates.size(); ++i) m += pos_weights[i] / pos_rates[i];
  for (std::size_t i = 0; i < neg_rates.size(); ++i) m += neg_weights[i] / neg_rates[i];
  return m;
}

ExpTimeDistribution exp_time_distribution(const HyperExpParams& p, double q, const RootSet& roots) {
  if (!(q > 0.0)) throw Error(ErrorCode::DomainError, "q must be positive");
  const auto [M, Mh] = root_counts(p);
  if (static_cast<int>(roots.pos.size()) != M || static_cast<int>(roots.neg.size()) != Mh)
    throw Error(ErrorCode::InconsistentRoots, "root count does not match the model");
  ExpTimeDistribution d;
  d.q = q;
  if (p.sigma() == 0.0 && p.a() == 0.0) d.atom = q / (q + p.jump_intensity());
  for (double z : roots.pos) {
    d.pos_rates.push_back(z);
    d.pos_weights.push_back(q / psi_prime(p, z));
  }
  for (double z : roots.neg) {
    d.neg_rates.push_back(z);
    d.neg_weights.push_back(-q / psi_prime(p, -z));
  }
  const double mass = d.total_mass();
  if (!(std::abs(mass - 1.0) <= 1e-8))
    throw Error(ErrorCode::InconsistentRoots, "exponential-time law has total mass " + std::to_string(mass));
  return d;
}

Fixture load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FixtureError, "cannot open fixture " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::FixtureError, "malformed fixture " + path + ": " + e.what());
  }
  auto read_side = [&](const char* key) {
    std::vector<Jump> out;
    if (!j.contains(key)) return out;
    for (const auto& pair : j.at(key)) {
      if (!pair.is_array() || pair.size() != 2) throw Error(ErrorCode::FixtureError, std::string(key) + " entries must be [weight, rate]");
      out.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    return out;
  };
  try {
    Fixture f;
    f.name = j.value("name", path);
    const double sigma = j.at("sigma").get<double>();
    f.r = j.value("r", 0.0);
    auto pos = read_side("pos_jumps");
    auto neg = read_side("neg_jumps");
    const double a = j.contains("a") ? j.at("a").get<double>() : risk_neutral_drift(sigma, pos, neg, f.r);
    f.params = HyperExpParams(sigma, a, std::move(pos), std::move(neg));
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FixtureError, "invalid fixture " + path + ": " + e.what());
  }
}

std::string fixture_dir() {
  if (const char* env = std::getenv("HYPERLEV_FIXTURES"); env != nullptr && *env != '\0') return env;
  return HYPERLEV_DEFAULT_FIXTURE_DIR;
}

Fixture parameter_set(int id) {
  if (id != 1 && id != 2) throw Error(ErrorCode::ConfigError, "parameter set must be 1 or 2");
  return load_fixture(fixture_dir() + "/set" + std::to_string(id) + ".json");
}

Fixture parameter_set(int id, double sigma, double r) {
  Fixture f = parameter_set(id);
  const auto& p = f.params;
  f.r = r;
  f.params = HyperExpParams(sigma, risk_neutral_drift(sigma, p.pos(), p.neg(), r), p.pos(), p.neg());
  return f;
}

}  // namespace hyperlev
