#include "timekernel/coeff_tables.hpp"

#include <cmath>
#include <string>

#include "timekernel/errors.hpp"

namespace timekernel {

namespace {

GradedSum lookup(const std::map<std::pair<int, int>, GradedSum>& entries, int m, int j) {
  auto it = entries.find({m, j});
  return it == entries.end() ? GradedSum{} : it->second;
}

}  // namespace

GradedSum CoefficientTable::at(int m, int j) const { return lookup(entries, m, j); }

CoefficientTable build_c_table(const PolynomialPotential& potential, int m_max, int j_max) {
  if (m_max < 0 || j_max < 0) throw PreconditionError("build_c_table needs m_max, j_max >= 0");
  CoefficientTable table{potential, m_max, j_max, {}};
  table.entries[{0, 0}] = GradedScalar::real(1);
  for (int j = 1; j <= j_max; ++j)
    for (int m = 1; m <= m_max; ++m) {
      GradedSum acc;
      for (const auto& [s, a_s] : potential.coeffs()) {
        if (s > m) break;
        const GradedSum prev = table.at(m - s, j - 1);
        if (!prev.is_zero()) acc += prev * (a_s * Rational(s));
      }
      acc = acc * frac(1, m);
      if (!acc.is_zero()) table.entries[{m, j}] = acc;
    }
  return table;
}

IdentityReport power_identity_check(const PolynomialPotential& potential, int k_max, int m_max) {
  const CoefficientTable table = build_c_table(potential, m_max, k_max);
  const auto powers = potential_powers(potential, k_max);
  IdentityReport report;
  for (int k = 0; k <= k_max; ++k)
    for (int m = 0; m <= m_max; ++m) {
      const GradedSum lhs = table.at(m, k) * factorial(k);
      auto it = powers[k].find(m);
      const GradedSum rhs = it == powers[k].end() ? GradedSum{} : it->second;
      if (lhs == rhs) continue;
      report.holds = false;
      report.max_discrepancy = std::max(report.max_discrepancy, std::abs((lhs - rhs).evaluate(1, 1)));
      report.mismatches.push_back({k, m, lhs, rhs});
    }
  return report;
}

Rational half_integer_gamma_ratio(int N, int j) {
  Rational r = rational_pow(2, j);
  for (int t = 0; t < j; ++t) r /= 2 * N + 1 + 2 * t;
  return r;
}

GradedSum LeadingShiftTable::at(int m, int j) const { return lookup(entries, m, j); }

GradedSum LeadingShiftTable::scaled(int m, int j) const {
  return at(m, j) * GradedScalar::real(rational_pow(frac(1, 2), j), j, -2 * j);
}

KernelSeries LeadingShiftTable::scaled_series() const {
  KernelSeries out;
  for (const auto& [key, value] : entries)
    out.add(Monomial{key.first, 2 * N - 1 + 2 * key.second}, scaled(key.first, key.second));
  return out;
}

LeadingShiftTable leading_shift_table(const PolynomialPotential& potential, int N,
                                      const Rational& beta, int m_max, int j_max) {
  if (N < 1) throw PreconditionError("leading_shift_table needs N >= 1");
  const CoefficientTable c = build_c_table(potential, m_max, j_max);
  const GradedScalar lead(-(Gaussian::i_pow(2 * N - 1) * beta), Grade{-(2 * N - 2), 0});

  LeadingShiftTable closed{potential, N, beta, m_max, j_max, {}};
  for (const auto& [key, value] : c.entries) {
    const auto [m, j] = key;
    const GradedSum entry =
        value * lead * (half_integer_gamma_ratio(N, j) / rational_pow(2, m));
    if (!entry.is_zero()) closed.entries[key] = entry;
  }

  // alpha0_{m,j} = 1/(m (2N-1+2j)) sum_s (s a_s / 2^(s-1)) alpha0_{m-s,j-1}
  std::map<std::pair<int, int>, GradedSum> rec;
  if (!lead.is_zero()) rec[{0, 0}] = lead;
  for (int j = 1; j <= j_max; ++j)
    for (int m = 1; m <= m_max; ++m) {
      GradedSum acc;
      for (const auto& [s, a_s] : potential.coeffs()) {
        if (s > m) break;
        const GradedSum prev = lookup(rec, m - s, j - 1);
        if (!prev.is_zero()) acc += prev * (a_s * (Rational(s) / rational_pow(2, s - 1)));
      }
      acc = acc * frac(1, static_cast<long>(m) * (2 * N - 1 + 2 * j));
      if (!acc.is_zero()) rec[{m, j}] = acc;
    }

  if (rec != closed.entries) {
    for (int j = 0; j <= j_max; ++j)
      for (int m = 0; m <= m_max; ++m)
        if (!(lookup(rec, m, j) == closed.at(m, j)))
          throw ConsistencyError("leading shift coefficient (" + std::to_string(m) + ", " +
                                 std::to_string(j) + "): closed form " +
                                 to_string(closed.at(m, j)) + " vs recurrence " +
                                 to_string(lookup(rec, m, j)));
  }
  return closed;
}

bool leading_shift_ww_check(const LeadingShiftTable& table, int j_max) {
  if (j_max > table.j_max || table.m_max < table.potential.max_degree() * j_max)
    throw PreconditionError("leading_shift_ww_check: table too small for j_max " +
                            std::to_string(j_max));
  const int N = table.N;
  const int j_cut = 2 * N + 2 * j_max;
  const PhaseSpaceSeries lhs =
      weyl_transform_sgn(table.scaled_series()).hbar_part(2 * N - 1).truncated(j_cut);
  const GradedScalar factor = GradedScalar::real(
      table.beta * factorial(2 * N - 1) / rational_pow(2, N - 1), 3 - 3 * N, 2 * N - 1);
  const PhaseSpaceSeries rhs =
      inverse_hamiltonian_series(table.potential, N, j_max) * factor;
  return lhs == rhs;
}

}  // namespace timekernel
