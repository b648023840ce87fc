#pragma once

// Time kernel equation in canonical coordinates:
//   -(2 hbar^2 / mu) T_uv + [V((u+v)/2) - V((u-v)/2)] T = 0
// solved by coefficient recurrence from data on the u and v axes.

#include <map>
#include <vector>

#include "timekernel/potential.hpp"
#include "timekernel/series.hpp"

namespace timekernel {

/// Axis data T(u, 0) = slope*u + c, T(0, v) = g(v) + c with g(0) = 0.
struct BoundaryConditionSpec {
  Rational slope = frac(1, 4);
  GradedScalar c;
  std::map<int, GradedScalar> g;

  /// slope 1/4, c = 0, g = 0.
  static BoundaryConditionSpec toa();

  /// Throws InvariantError on a slope other than 1/4 or 0, a key k < 1, or a
  /// stored zero in g.
  void validate() const;
  bool conjugate() const { return slope != 0; }

  friend bool operator==(const BoundaryConditionSpec&, const BoundaryConditionSpec&) = default;
};

/// g(v) = -i^(2N-1) beta mu^(-2(N-1)) v^(2N-1) on top of the arrival-time data.
struct ShiftSpec {
  int N = 1;
  Rational beta;

  BoundaryConditionSpec to_boundary() const;

  friend bool operator==(const ShiftSpec&, const ShiftSpec&) = default;
};

/// alpha_{m,0} (row) and alpha_{0,n} (column). alpha_{0,0} = c lives in the row only.
struct AxisCoefficients {
  std::map<int, GradedScalar> row;
  std::map<int, GradedScalar> column;
};

AxisCoefficients boundary_to_axis_coefficients(const BoundaryConditionSpec& bc);

/// Series complete through total degree K. Antidiagonals are filled in order;
/// the entries of one antidiagonal are computed in parallel.
KernelSeries solve_tke(const PolynomialPotential& potential, const BoundaryConditionSpec& bc,
                       int K);

/// Exact left-hand side of the canonical equation applied to T.
BivariatePolynomial tke_residual(const KernelSeries& T, const PolynomialPotential& potential);

struct ConjugacyReport {
  bool conjugate = false;
  /// sum_m alpha_{m,0} 2^(m+1) m q^(m-1), keyed by power of q.
  std::map<int, GradedSum> lhs;
  /// Values of m whose alpha_{m,0} breaks the condition.
  std::vector<int> offending;
};

ConjugacyReport conjugacy_check(const KernelSeries& T);

struct SymmetryClass {
  bool hermitian = false;
  bool time_reversal = false;

  friend bool operator==(SymmetryClass, SymmetryClass) = default;
};

/// hermitian: conj(alpha_{m,n}) (-1)^n == alpha_{m,n}; time_reversal: every alpha real.
SymmetryClass classify_symmetry(const KernelSeries& T);

}  // namespace timekernel
