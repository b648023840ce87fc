#pragma once

// Successive approximation for the Goursat problem
//   T(u, v) = T0(u, v) + (mu / 2 hbar^2) int_0^u int_0^v dV(x, y) T(x, y) dy dx
// on a rectangular grid through the axes. Each quadrant is integrated outward
// from the axes with cumulative composite Simpson sums, so data that jumps
// across an axis keeps its one-sided values.

#include <complex>
#include <functional>
#include <vector>

#include "timekernel/mtke.hpp"
#include "timekernel/potential.hpp"
#include "timekernel/tke.hpp"

namespace timekernel {

struct Domain {
  Rational u_lo = -1;
  Rational u_hi = 1;
  Rational v_lo = -1;
  Rational v_hi = 1;

  friend bool operator==(const Domain&, const Domain&) = default;
};

struct GridSpec {
  int nu = 201;
  int nv = 201;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct GridKernel {
  Domain domain;
  int nu = 0;
  int nv = 0;
  std::vector<double> u;
  std::vector<double> v;
  /// Row-major by u: values[iu * nv + iv]. Axis nodes hold the average of the
  /// adjacent one-sided limits.
  std::vector<std::complex<double>> values;
  /// Limits v -> 0+ and v -> 0- along the v = 0 line, per u node.
  std::vector<std::complex<double>> v_zero_upper;
  std::vector<std::complex<double>> v_zero_lower;
  int iterations_used = 0;
  double final_delta = 0;

  const std::complex<double>& at(int iu, int iv) const { return values[iu * nv + iv]; }
};

/// Called after each sweep with the increment T_j - T_{j-1} on the grid layout.
using PicardObserver =
    std::function<void(int iteration, const std::vector<std::complex<double>>& increment)>;

struct PicardExtras {
  /// Starting iterate; T0 when empty.
  std::function<std::complex<double>(double u, double v)> initial_guess;
  PicardObserver observer;
};

/// Checks odd point counts >= 3, lo <= 0 <= hi with lo < hi, and that 0 is a
/// grid node. Throws PreconditionError.
void validate_grid(const Domain& domain, const GridSpec& grid);

GridKernel picard_solve(const PolynomialPotential& potential, const BoundaryConditionSpec& bc,
                        const Domain& domain, const GridSpec& grid, double tol, int max_iter,
                        double mu, double hbar, const PicardExtras& extras = {});

GridKernel picard_solve_mtke(const PolynomialPotential& potential,
                             const DistributionBoundary& dbc, const Domain& domain,
                             const GridSpec& grid, double tol, int max_iter, double mu,
                             double hbar, const PicardExtras& extras = {});

/// sum |c_ab| U^a W^b over the monomials of V((u+v)/2) - V((u-v)/2): a bound on
/// the difference over |u| <= U, |v| <= W.
double potential_difference_bound(const PolynomialPotential& potential, double U, double W,
                                  double mu, double hbar);

/// (mu M / 2 hbar^2)^j |u|^j |v|^j / j! (|u| + sum_k |beta_k| |v|^k / ((k+1)...(k+j))),
/// with beta_0 = c.
double picard_bound_at(const BoundaryConditionSpec& bc, int j, double u, double v, double M,
                       double mu, double hbar);

/// picard_bound_at at the domain corner of largest |u| and |v|, M from
/// potential_difference_bound over the domain.
double picard_bound(const PolynomialPotential& potential, const BoundaryConditionSpec& bc,
                    const Domain& domain, int j, double mu, double hbar);

/// (u/4) sinh(z)/z with z = (mu omega / 2 hbar) u v: the arrival-time kernel
/// of the harmonic oscillator.
double harmonic_toa_kernel(double u, double v, double mu, double hbar, double omega);

}  // namespace timekernel
