#pragma once

#include <complex>
#include <limits>
#include <vector>

#include "hyperlev/model.hpp"
#include "hyperlev/series.hpp"

namespace hyperlev {

using cplx = std::complex<double>;

enum class Side { pos, neg };

/// Which extra roots exist beyond the outermost poles.
enum class Regime { gaussian, drift_pos, drift_neg, driftless };

Regime regime_of(const HyperExpParams& p);

/// Expansion of one root of psi(z) = q in powers of 1/q (den 1) or q^{-1/2} (den 2).
/// Negative-side roots are stored by magnitude: the series describes zetahat and the root
/// itself sits at -zetahat.
struct RootExpansion {
  Side side = Side::pos;
  int index = 0;       // 1-based; the far root carries index M (or Mhat)
  bool far = false;
  Branch branch = Branch::principal;
  Regime regime = Regime::gaussian;
  Series series;       // variable x = 1/q
  double pole = 0;     // rho_l (or rhohat_l) for near roots
  double rho1 = std::numeric_limits<double>::infinity();
  double q_min = 0;    // empirical validity radius, 0 until calibrated
};

RootExpansion expand_far_root(const HyperExpParams& p, Side side, int order);
RootExpansion expand_near_root(const HyperExpParams& p, Side side, int l, int order);

/// Every root on one side, near roots first, the far root last when present.
std::vector<RootExpansion> expand_roots(const HyperExpParams& p, Side side, int order);

enum class DerivedKind { inv, inv_shift, power, deriv };
enum class Prefactor { none, exp_sqrt, exp_linear };

/// A function of a root expressed as prefactor(q) * series(1/q), where the prefactor is
/// k^{-D q^{1/den}} for far roots and 1 otherwise.
struct DerivedRootSeries {
  DerivedKind kind = DerivedKind::inv;
  Series series;
  Prefactor prefactor = Prefactor::none;
  double D = 0;
  double k = 1;

  /// Kernel shift c = D log k.
  double shift() const;
};

/// 1/zeta, 1/(zeta - 1) or 1/(zetahat + 1), k^{-zeta} or k^{zetahat}, and d zeta/dq.
DerivedRootSeries derive_series(const RootExpansion& root, DerivedKind kind, double k = 1.0);

/// Evaluate at q, principal branch for half powers. Sets *below when |q| < q_min.
cplx eval_expansion(const RootExpansion& root, cplx q, bool* below = nullptr);
cplx eval_expansion(const DerivedRootSeries& s, cplx q);

/// Actual location of the root (negated for the negative side).
cplx root_location(const RootExpansion& root, cplx q, bool* below = nullptr);

/// Real roots at real q > 0 by bracketing between the poles.
RootSet numeric_roots_real(const HyperExpParams& p, double q);

/// Roots followed along q = c + iu by a midpoint step on dz/du = i / psi'(z) and a Newton
/// polish at every grid point. State holds actual root locations, positive side first.
class ContourTracker {
 public:
  ContourTracker(const HyperExpParams& p, double c, bool include_neg = true);

  /// Move to abscissa u (any direction) and return the polished roots.
  const std::vector<cplx>& advance(double u);

  const std::vector<cplx>& roots() const { return z_; }
  double u() const { return u_; }
  int n_pos() const { return n_pos_; }
  int n_neg() const { return static_cast<int>(z_.size()) - n_pos_; }
  int newton_iterations() const { return newton_total_; }

 private:
  bool polish(cplx& z, cplx q);
  bool step(double h);
  double separation(std::size_t i) const;
  void psi_and_prime(cplx z, cplx& f, cplx& fp) const;

  double c_;
  double u_ = 0;
  int n_pos_ = 0;
  int newton_total_ = 0;
  double sigma2_half_;
  double a_;
  std::vector<double> w_pos_, r_pos_, w_neg_, r_neg_;
  std::vector<cplx> z_;
};

/// Tracked roots on a grid: row i holds the roots at u_grid[i] (positive side first).
struct TrackedRoots {
  std::vector<double> u;
  std::vector<std::vector<cplx>> roots;
  int n_pos = 0;
};

TrackedRoots track_roots_contour(const HyperExpParams& p, double c, const std::vector<double>& u_grid);

/// Roots at a complex q with Re q > 0, continued from the real axis.
std::vector<cplx> numeric_roots_complex(const HyperExpParams& p, cplx q, int* n_pos = nullptr);

/// Set q_min for an expansion by scanning |q| downward on the real ray and the contour
/// c + iu until the conditioning-scaled residual exceeds tol; stores 1.25 times that modulus.
double calibrate_q_min(const HyperExpParams& p, RootExpansion& root, double c = 0.5, double tol = 1e-8);

}  // namespace hyperlev
