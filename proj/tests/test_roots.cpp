#include <doctest.h>

#include <cmath>
#include <random>

#include "hyperlev/roots.hpp"
#include "oracles.hpp"

using namespace hyperlev;

namespace {

HyperExpParams set1() { return parameter_set(1, 0.042, 0.03).params; }
HyperExpParams set2() { return parameter_set(2, 0.0, 0.03).params; }

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (double u = lo; u <= hi + 1e-9; u += step) g.push_back(u);
  return g;
}

// Continuation from the real axis permutes labels (the root near 0 at small q becomes the
// far root), so expansions are matched to the nearest tracked root.
cplx nearest(const std::vector<cplx>& roots, cplx z) {
  cplx best = roots.front();
  for (const auto& r : roots)
    if (std::abs(r - z) < std::abs(best - z)) best = r;
  return best;
}

}  // namespace

TEST_SUITE("root_expansions") {
  TEST_CASE("Gaussian far root leading behaviour") {
    const auto p = set1();
    const RootExpansion z = expand_far_root(p, Side::pos, 10);
    CHECK(z.series.den() == 2);
    CHECK(z.series.base() == -1);
    CHECK(z.series.coeff(-1) == doctest::Approx(std::sqrt(2.0) / p.sigma()).epsilon(1e-13));
    const double q = 1e6;
    const double exact = oracle::bisect_root(p, q, p.pos().back().rate + 1e-9, 1e6);
    const double lead = std::sqrt(2 * q) / p.sigma() + z.series.coeff(0);
    CHECK(std::abs(exact - lead) * std::sqrt(q) < 10.0 * std::abs(z.series.coeff(1)) + 1e-6);
    CHECK(std::abs(eval_expansion(z, q).real() - exact) < 1e-8 * exact);
  }

  TEST_CASE("driftful far root grows like q / a") {
    const auto p = set2();
    const RootExpansion z = expand_far_root(p, Side::pos, 10);
    CHECK(z.series.den() == 1);
    CHECK(z.series.coeff(-1) == doctest::Approx(1.0 / p.a()).epsilon(1e-13));
    const auto beta = derive_series(z, DerivedKind::power, 1.1);
    CHECK(beta.prefactor == Prefactor::exp_linear);
    CHECK(beta.D == doctest::Approx(1.0 / p.a()));
    CHECK(beta.shift() == doctest::Approx(std::log(1.1) / p.a()));
    CHECK_THROWS_AS(expand_far_root(p, Side::neg, 10), Error);
  }

  TEST_CASE("the two Gaussian far roots are the two square-root branches") {
    const auto p = set1();
    const RootExpansion pos = expand_far_root(p, Side::pos, 10);
    const RootExpansion neg = expand_far_root(p, Side::neg, 10);
    for (int n = -1; n <= 10; ++n) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      CHECK(neg.series.coeff(n) == doctest::Approx(-sign * pos.series.coeff(n)).epsilon(1e-12).scale(1e-12));
    }
  }

  TEST_CASE("near roots start at their pole") {
    const auto p = set1();
    for (int l = 1; l <= 7; ++l) {
      const auto z = expand_near_root(p, Side::pos, l, 10);
      CHECK(z.series.coeff(0) == p.pos()[l - 1].rate);
      const auto zh = expand_near_root(p, Side::neg, l, 10);
      CHECK(zh.series.coeff(0) == p.neg()[l - 1].rate);
      // The first correction is -a_l rho_l / q, which exceeds 1e-4 at q = 1e6 only for l = 7.
      const double first = p.pos()[l - 1].weight * p.pos()[l - 1].rate / 1e6;
      if (first < 1e-4) CHECK(std::abs(eval_expansion(z, 1e6) - p.pos()[l - 1].rate) < 1e-4);
      CHECK(std::abs(eval_expansion(z, 1e6).real() - p.pos()[l - 1].rate + first) < 1e-8);
    }
    CHECK_THROWS_AS(expand_near_root(p, Side::pos, 8, 10), Error);
    CHECK_THROWS_AS(expand_near_root(p, Side::pos, 0, 10), Error);
  }

  TEST_CASE("near root on the contour has a small residual") {
    // Measured: the order-10 residual is 2.3e-6 at u = 80 and drops below 1e-6 from u = 88;
    // the root itself is within 2e-8 of the tracked one there.
    const auto p = set1();
    const auto z = expand_near_root(p, Side::pos, 6, 10);
    for (double u = 80; u <= 150; u += 1.0) {
      const cplx q(0.5, u);
      CHECK(std::abs(psi(p, root_location(z, q)) - q) < 1e-6);
    }
  }

  TEST_CASE("near roots approach their pole from below") {
    const auto p = set1();
    for (int l = 2; l <= 7; ++l) {
      const double lo = p.pos()[l - 2].rate, hi = p.pos()[l - 1].rate;
      double prev = lo;
      const auto z = expand_near_root(p, Side::pos, l, 10);
      for (double q : {1e2, 1e3, 1e4}) {
        const double root = oracle::bisect_root(p, q, lo + 1e-9, hi - 1e-9);
        CHECK(root > prev);
        CHECK(root < hi);
        prev = root;
      }
      const double root = oracle::bisect_root(p, 1e4, lo + 1e-9, hi - 1e-9);
      CHECK(std::abs(eval_expansion(z, 1e4).real() - root) < 1e-10);
    }
  }

  TEST_CASE("derived series") {
    const auto p = set1();
    const auto near = expand_near_root(p, Side::pos, 3, 10);
    const auto d = derive_series(near, DerivedKind::deriv);
    CHECK(d.series.base() == 2);
    for (int n = 2; n <= 11; ++n) CHECK(d.series.coeff(n) == doctest::Approx((1.0 - n) * near.series.coeff(n - 1)));

    const auto far = expand_far_root(p, Side::pos, 10);
    const auto inv = derive_series(far, DerivedKind::inv);
    const Series c = reciprocal(far.series);
    CHECK(inv.series.base() == 1);
    for (int n = 1; n < c.order(); ++n) CHECK(inv.series.coeff(n) == c.coeff(n));
    const cplx q(0.5, 1e4);
    CHECK(std::abs(eval_expansion(inv, q) * eval_expansion(far, q) - 1.0) < 1e-12);

    const auto one = derive_series(far, DerivedKind::power, 1.0);
    CHECK(one.shift() == 0.0);
    CHECK(std::abs(eval_expansion(one, q) - 1.0) < 1e-15);
    CHECK(one.series.coeff(0) == 1.0);
    for (int n = 1; n < one.series.order(); ++n) CHECK(one.series.coeff(n) == 0.0);

    const auto beta = derive_series(far, DerivedKind::power, 1.1);
    CHECK(beta.prefactor == Prefactor::exp_sqrt);
    const cplx zeta = eval_expansion(far, q);
    CHECK(std::abs(eval_expansion(beta, q) / std::pow(1.1, -zeta) - 1.0) < 1e-10);

    const auto sh = derive_series(far, DerivedKind::inv_shift);
    CHECK(std::abs(eval_expansion(sh, q) * (zeta - 1.0) - 1.0) < 1e-12);

    const HyperExpParams low(0.1, 0.0, {{0.5, 0.8}}, {{0.5, 2.0}});
    CHECK_THROWS_AS(derive_series(expand_near_root(low, Side::pos, 1, 5), DerivedKind::inv_shift), Error);
  }

  TEST_CASE("derivative series matches 1 / psi' above q_min") {
    for (const auto& p : {set1(), set2()}) {
      for (Side side : {Side::pos, Side::neg}) {
        for (auto r : expand_roots(p, side, 10)) {
          const double qmin = calibrate_q_min(p, r);
          CHECK(qmin > 0);
          const auto d = derive_series(r, DerivedKind::deriv);
          for (double m : {std::max(qmin, 150.0), 2 * std::max(qmin, 150.0)}) {
            const cplx q(0.5, m);
            const cplx z = root_location(r, q);
            cplx zp = eval_expansion(d, q);
            if (side == Side::neg) zp = -zp;
            const cplx want = 1.0 / psi_prime(p, z);
            CHECK(std::abs(zp - want) <= 1e-6 * std::abs(want));
          }
        }
      }
    }
  }

  TEST_CASE("evaluation is conjugation symmetric") {
    for (const auto& p : {set1(), set2()}) {
      for (Side side : {Side::pos, Side::neg}) {
        for (const auto& r : expand_roots(p, side, 10)) {
          for (double u : {80.0, 115.0, 150.0}) {
            const cplx a = eval_expansion(r, cplx(0.5, u)), b = eval_expansion(r, cplx(0.5, -u));
            CHECK(std::abs(a - std::conj(b)) <= 1e-13 * std::abs(a));
          }
        }
      }
    }
  }

  TEST_CASE("Gaussian far root at a large real q") {
    const auto p = set1();
    const auto r = expand_far_root(p, Side::pos, 10);
    const double q = 1e4;
    CHECK(std::abs(psi(p, eval_expansion(r, q)) - q) < 1e-6 * q);
  }

  TEST_CASE("residual shrinks with the order at |q| = 120") {
    for (const auto& p : {set1(), set2()}) {
      for (Side side : {Side::pos, Side::neg}) {
        const auto [M, Mh] = root_counts(p);
        const int count = side == Side::pos ? M : Mh;
        for (int i = 0; i < count; ++i) {
          for (double arg : {0.0, 0.7, 1.5}) {
            const cplx q = std::polar(120.0, arg);
            double prev = INFINITY;
            for (int order : {4, 6, 8, 10}) {
              const auto r = expand_roots(p, side, order)[i];
              const cplx z = root_location(r, q);
              const double res = std::abs(psi(p, z) - q);
              // Once the residual reaches rounding level it can wobble.
              const double floor = 1e-11 * std::abs(q) * std::max(1.0, std::abs(z));
              CHECK(res <= std::max(prev, floor));
              prev = std::max(res, floor);
            }
          }
        }
      }
    }
  }

  TEST_CASE("real roots interlace the poles") {
    const auto p = set2();
    const auto roots = numeric_roots_real(p, 2.7);
    const auto [M, Mh] = root_counts(p);
    CHECK(static_cast<int>(roots.pos.size()) == M);
    CHECK(static_cast<int>(roots.neg.size()) == Mh);
    for (double z : roots.pos) CHECK(std::abs(psi(p, z) - 2.7) < 1e-12 * std::max(1.0, std::abs(psi_prime(p, z)) * z));
    for (double z : roots.neg) CHECK(std::abs(psi(p, -z) - 2.7) < 1e-12 * std::max(1.0, std::abs(psi_prime(p, -z)) * z));
    for (int l = 0; l < p.n_pos(); ++l) {
      CHECK(roots.pos[l] < p.pos()[l].rate);
      if (l > 0) CHECK(roots.pos[l] > p.pos()[l - 1].rate);
    }
    CHECK(roots.pos.back() > p.pos().back().rate);
    CHECK_THROWS_AS(numeric_roots_real(p, -1.0), Error);
  }

  TEST_CASE("interlacing on random models") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = oracle::random_params(rng, trial % 2 == 0);
      const auto [M, Mh] = root_counts(p);
      for (double q : {0.1, 1.0, 10.0}) {
        const auto roots = numeric_roots_real(p, q);
        REQUIRE(static_cast<int>(roots.pos.size()) == M);
        REQUIRE(static_cast<int>(roots.neg.size()) == Mh);
        for (int l = 0; l < M; ++l) {
          const double lo = l == 0 ? 0.0 : p.pos()[l - 1].rate;
          const double hi = l < p.n_pos() ? p.pos()[l].rate : INFINITY;
          CHECK(roots.pos[l] > lo);
          CHECK(roots.pos[l] < hi);
        }
        for (int l = 0; l < Mh; ++l) {
          const double lo = l == 0 ? 0.0 : p.neg()[l - 1].rate;
          const double hi = l < p.n_neg() ? p.neg()[l].rate : INFINITY;
          CHECK(roots.neg[l] > lo);
          CHECK(roots.neg[l] < hi);
        }
      }
    }
  }

  TEST_CASE("contour tracking") {
    const auto p = set1();
    const auto tr = track_roots_contour(p, 0.5, grid(0.0, 150.0, 0.5));
    const auto seed = numeric_roots_real(p, 0.5);
    REQUIRE(tr.n_pos == static_cast<int>(seed.pos.size()));
    for (std::size_t i = 0; i < seed.pos.size(); ++i) CHECK(std::abs(tr.roots[0][i] - seed.pos[i]) < 1e-12 * seed.pos[i]);
    for (std::size_t i = 0; i < seed.neg.size(); ++i)
      CHECK(std::abs(tr.roots[0][tr.n_pos + i] + seed.neg[i]) < 1e-12 * seed.neg[i]);

    std::vector<RootExpansion> all = expand_roots(p, Side::pos, 10);
    for (auto& r : expand_roots(p, Side::neg, 10)) all.push_back(r);
    for (std::size_t row = 0; row < tr.u.size(); ++row) {
      const double u = tr.u[row];
      for (const auto& z : tr.roots[row]) CHECK(std::abs(psi(p, z) - cplx(0.5, u)) < 1e-10 * std::max(1.0, std::abs(psi_prime(p, z))));
      if (u < 80) continue;
      for (const auto& r : all) {
        const cplx z = root_location(r, cplx(0.5, u));
        CHECK(std::abs(z - nearest(tr.roots[row], z)) < 1e-6);
      }
    }

    // d zeta / du = i zeta'(q) = i / psi'(zeta).
    ContourTracker t(p, 0.5);
    const double h = 1e-4;
    for (double u : {10.0, 60.0}) {
      const auto before = std::vector<cplx>(t.advance(u - h));
      const auto mid = std::vector<cplx>(t.advance(u));
      const auto after = std::vector<cplx>(t.advance(u + h));
      for (std::size_t i = 0; i < mid.size(); ++i) {
        const cplx fd = (after[i] - before[i]) / (2 * h);
        const cplx want = cplx(0, 1) / psi_prime(p, mid[i]);
        CHECK(std::abs(fd - want) < 1e-6 * std::max(1.0, std::abs(want)));
      }
    }
  }

  TEST_CASE("tracked roots are conjugate across the real axis") {
    const auto p = set2();
    int n_pos = 0;
    const auto up = numeric_roots_complex(p, cplx(0.5, 90.0), &n_pos);
    const auto down = numeric_roots_complex(p, cplx(0.5, -90.0));
    REQUIRE(up.size() == down.size());
    for (std::size_t i = 0; i < up.size(); ++i) CHECK(std::abs(up[i] - std::conj(down[i])) < 1e-9 * std::abs(up[i]));
  }
}
