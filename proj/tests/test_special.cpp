#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hyperlev/error.hpp"
#include "hyperlev/special.hpp"
#include "oracles.hpp"

using namespace hyperlev;

namespace {
double rel(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }
}  // namespace

TEST_SUITE("special_functions") {
  TEST_CASE("Hh at the origin") {
    CHECK(hh(0, 0.0) == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-15));
    for (int n = 0; n <= 20; ++n) CHECK(rel(hh(n, 0.0), oracle::hh_quadrature(n, 0.0)) < 1e-10);
  }

  TEST_CASE("Hh against quadrature away from the origin") {
    for (double x : {-3.0, -1.0, 0.4, 1.3, 2.5, 5.0, 9.0}) {
      for (int n : {0, 1, 2, 5, 10, 20, 30}) {
        INFO("n = " << n << ", x = " << x);
        CHECK(rel(hh(n, x), oracle::hh_quadrature(n, x)) < 1e-10);
      }
    }
  }

  TEST_CASE("Hh of order -1 closes the recurrence") {
    for (double z : {-1.0, 0.0, 0.7, 2.0}) {
      CHECK(hh(-1, z) == doctest::Approx(std::exp(-0.5 * z * z)).epsilon(1e-15));
      CHECK(rel(hh(-1, z) - z * hh(0, z), oracle::hh_quadrature(1, z)) < 1e-12);
    }
  }

  TEST_CASE("three-term recurrence") {
    const double z = 1.3;
    for (int n = 1; n <= 15; ++n) {
      const double scale = std::abs(hh(n - 2, z)) + std::abs(z * hh(n - 1, z));
      CHECK(std::abs(n * hh(n, z) - hh(n - 2, z) + z * hh(n - 1, z)) < 1e-10 * scale);
    }
  }

  TEST_CASE("derivative lowers the index") {
    const double h = 1e-5;
    for (double z : {-0.8, 0.3, 1.7}) {
      for (int n = 0; n <= 8; ++n) {
        const double fd = (hh(n, z + h) - hh(n, z - h)) / (2 * h);
        CHECK(std::abs(fd + hh(n - 1, z)) < 1e-6);
      }
    }
  }

  TEST_CASE("complex Hh matches real values on the axis and near it") {
    for (int n : {0, 3, 7}) {
      const double x = 0.9;
      const std::complex<double> v = hh(n, std::complex<double>(x, 1e-7));
      CHECK(std::abs(v.real() - hh(n, x)) < 1e-9 * std::abs(hh(n, x)));
      CHECK(std::abs(v.imag() + 1e-7 * hh(n - 1, x)) < 1e-12);
    }
  }

  TEST_CASE("phi at c = 0 is a scaled power") {
    for (double t : {0.01, 0.3, 1.0, 2.0}) {
      for (int n = 0; n <= 12; ++n) {
        const double want = std::pow(t, 0.5 * n) / std::tgamma(0.5 * n + 1);
        CHECK(rel(phi(n, t, 0.0), want) < 1e-10);
      }
    }
  }

  TEST_CASE("phi against its defining integral") {
    CHECK(rel(phi(1, 0.25, 1.0), oracle::phi_quadrature(1, 0.25, 1.0)) < 1e-9);
    for (double t : {0.05, 0.5, 1.5})
      for (double c : {0.0, 0.3, 1.0, 2.0})
        for (int n = 0; n <= 6; ++n) CHECK(rel(phi(n, t, c), oracle::phi_quadrature(n, t, c)) < 1e-9);
  }

  TEST_CASE("phi is the inverse Laplace transform of q^{-1-n/2} exp(-c sqrt q)") {
    for (double c : {0.0, 0.4, 1.5}) {
      for (int n = -1; n <= 5; ++n) {
        if (n == -1 && c == 0.0) continue;  // integrable singularity at t = 0; covered below
        for (double q : {1.0, 4.0}) {
          const double lt = oracle::integrate([&](double t) { return t > 0 && t < 1e3 ? std::exp(-q * t) * phi(n, t, c) : 0.0; }, 0.0,
                                              INFINITY);
          CHECK(rel(lt, std::pow(q, -1.0 - 0.5 * n) * std::exp(-c * std::sqrt(q))) < 1e-8);
        }
      }
    }
    for (double t : {0.1, 1.0})
      CHECK(phi(-1, t, 0.7) == doctest::Approx(std::exp(-0.49 / (4 * t)) / std::sqrt(std::numbers::pi * t)).epsilon(1e-14));
  }

  TEST_CASE("phi bound on random samples") {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> nd(0, 12);
    std::uniform_real_distribution<double> td(1e-6, 2.0), cd(0.0, 5.0);
    for (int i = 0; i < 500; ++i) {
      const int n = nd(rng);
      const double t = td(rng), c = cd(rng);
      const double bound = std::pow(t, 0.5 * n) / std::tgamma(0.5 * n + 1);
      CHECK(phi(n, t, c) <= bound * (1 + 1e-12));
      CHECK(phi(n, t, c) >= 0.0);
    }
  }

  TEST_CASE("phi vanishes as t decreases") {
    for (int n = 1; n <= 6; ++n) {
      for (double c : {0.0, 0.5}) {
        double prev = INFINITY;
        for (double t : {1e-2, 1e-4, 1e-6}) {
          const double v = phi(n, t, c);
          CHECK(v < prev);
          prev = v;
        }
        CHECK(prev < 1e-2);
      }
    }
    for (double t : {1e-30, 1e-200, 1e-300}) CHECK(phi(3, t, 0.4) == 0.0);
  }

  TEST_CASE("complex phi continues the real one") {
    for (int n : {0, 2, 5}) {
      const double t = 0.3, c = 0.6;
      const std::complex<double> v = phi(n, std::complex<double>(t, 1e-8), c);
      CHECK(std::abs(v.real() - phi(n, t, c)) < 1e-9 * phi(n, t, c));
      // Holomorphy: the derivative along the imaginary direction equals the real one.
      const double d = 1e-6;
      const std::complex<double> along_im = (phi(n, std::complex<double>(t, d), c) - phi(n, std::complex<double>(t, -d), c)) /
                                            std::complex<double>(0, 2 * d);
      const double along_re = (phi(n, t + d, c) - phi(n, t - d, c)) / (2 * d);
      CHECK(std::abs(along_im - along_re) < 1e-6 * std::max(1.0, std::abs(along_re)));
    }
  }

  TEST_CASE("tables agree with single evaluations") {
    const auto h = hh_table(10, 0.8);
    for (int n = -2; n <= 10; ++n) CHECK(h[n + 2] == doctest::Approx(hh(n, 0.8)));
    const auto ph = phi_table(10, 0.4, 0.3);
    for (int n = -2; n <= 10; ++n) CHECK(ph[n + 2] == doctest::Approx(phi(n, 0.4, 0.3)));
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(phi(1, 0.0, 1.0), Error);
    CHECK_THROWS_AS(phi(1, -1.0, 1.0), Error);
    CHECK_THROWS_AS(phi(1, std::complex<double>(-0.1, 1.0), 1.0), Error);
    CHECK_THROWS_AS(hh(-3, 0.5), Error);
  }
}
