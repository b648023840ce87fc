#pragma once

// C_{m,j} tables and the leading coefficients of the shifted H^(-N) solutions.

#include <map>
#include <utility>
#include <vector>

#include "timekernel/phase_space.hpp"
#include "timekernel/potential.hpp"
#include "timekernel/series.hpp"

namespace timekernel {

/// C_{m,0} = delta_{m,0}; C_{m,j} = (1/m) sum_{s=1}^m s a_s C_{m-s,j-1}; C_{0,j>0} = 0.
struct CoefficientTable {
  PolynomialPotential potential;
  int m_max = 0;
  int j_max = 0;
  std::map<std::pair<int, int>, GradedSum> entries;

  GradedSum at(int m, int j) const;
};

CoefficientTable build_c_table(const PolynomialPotential& potential, int m_max, int j_max);

struct IdentityMismatch {
  int k;
  int m;
  GradedSum lhs;
  GradedSum rhs;
};

struct IdentityReport {
  bool holds = true;
  /// Largest |lhs - rhs| over all compared coefficients, evaluated at mu = hbar = 1.
  double max_discrepancy = 0;
  std::vector<IdentityMismatch> mismatches;
};

/// k! sum_m C_{m,k} q^m == V(q)^k for k <= k_max and degrees m <= m_max. The
/// right side comes from repeated polynomial multiplication.
IdentityReport power_identity_check(const PolynomialPotential& potential, int k_max, int m_max);

/// Gamma(N + 1/2) / Gamma(N + 1/2 + j) = 2^j / prod_{r<j} (2N + 1 + 2r).
Rational half_integer_gamma_ratio(int N, int j);

/// alpha0_{m,j} = -i^(2N-1) (beta / mu^(2N-2)) Gamma(N+1/2)/Gamma(N+1/2+j) C_{m,j} / 2^m.
/// The coefficient of u^m v^(2N-1+2j) in the full solution is
/// (mu / 2 hbar^2)^j alpha0_{m,j}, available as scaled().
struct LeadingShiftTable {
  PolynomialPotential potential;
  int N = 1;
  Rational beta;
  int m_max = 0;
  int j_max = 0;
  std::map<std::pair<int, int>, GradedSum> entries;

  GradedSum at(int m, int j) const;
  GradedSum scaled(int m, int j) const;
  /// sum scaled(m, j) u^m v^(2N-1+2j) over the table.
  KernelSeries scaled_series() const;
};

/// Builds the table from the closed form and from the alpha0 recurrence and
/// throws ConsistencyError if any entry differs.
LeadingShiftTable leading_shift_table(const PolynomialPotential& potential, int N,
                                      const Rational& beta, int m_max, int j_max);

/// Weyl image of scaled_series() at hbar grade 2N-1 against
/// beta (2N-1)! / 2^(N-1) mu^(3-3N) hbar^(2N-1) H^(-N), through p^-(2N+2 j_max).
/// Needs m_max >= deg V * j_max.
bool leading_shift_ww_check(const LeadingShiftTable& table, int j_max);

}  // namespace timekernel
