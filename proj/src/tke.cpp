#include "timekernel/tke.hpp"

#include <algorithm>
#include <string>

#include "timekernel/errors.hpp"
#include "timekernel/parallel.hpp"

namespace timekernel {

BoundaryConditionSpec BoundaryConditionSpec::toa() { return {}; }

void BoundaryConditionSpec::validate() const {
  if (slope != frac(1, 4) && slope != 0)
    throw InvariantError("diagonal slope must be 1/4 or 0, got " + format_rational(slope));
  for (const auto& [k, beta] : g) {
    if (k < 1) throw InvariantError("g coefficient key must be >= 1, got " + std::to_string(k));
    if (beta.is_zero()) throw InvariantError("zero g coefficient stored at k = " + std::to_string(k));
  }
}

BoundaryConditionSpec ShiftSpec::to_boundary() const {
  if (N < 1) throw InvariantError("shift N must be >= 1, got " + std::to_string(N));
  BoundaryConditionSpec bc = BoundaryConditionSpec::toa();
  const int k = 2 * N - 1;
  GradedScalar beta_k(-(Gaussian::i_pow(k) * beta), Grade{-2 * (N - 1), 0});
  if (!beta_k.is_zero()) bc.g[k] = beta_k;
  return bc;
}

AxisCoefficients boundary_to_axis_coefficients(const BoundaryConditionSpec& bc) {
  bc.validate();
  AxisCoefficients axis;
  if (!bc.c.is_zero()) axis.row[0] = bc.c;
  if (bc.slope != 0) axis.row[1] = GradedScalar::real(bc.slope);
  for (const auto& [k, beta] : bc.g) axis.column[k] = beta;
  return axis;
}

KernelSeries solve_tke(const PolynomialPotential& potential, const BoundaryConditionSpec& bc,
                       int K) {
  if (K < 1) throw PreconditionError("solve_tke needs K >= 1");
  const AxisCoefficients axis = boundary_to_axis_coefficients(bc);

  // m n alpha_{m,n} = (mu / 2 hbar^2) sum_{a,b} d_{a,b} alpha_{m-1-a, n-1-b}
  struct Step {
    int da;
    int db;
    GradedScalar coeff;
  };
  std::vector<Step> steps;
  const GradedScalar prefactor = GradedScalar::real(frac(1, 2), 1, -2);
  if (!potential.is_zero()) {
    const BivariatePolynomial dv = potential_difference_expand(potential, potential.max_degree());
    for (const FlatTerm& t : dv.flat_terms())
      steps.push_back({t.mono.m + 1, t.mono.n + 1, t.coeff * prefactor});
  }

  // alpha[m][n] for m + n <= K.
  std::vector<std::vector<GradedSum>> alpha(K + 1);
  for (int m = 0; m <= K; ++m) alpha[m].resize(K + 1 - m);
  for (const auto& [m, a] : axis.row)
    if (m <= K) alpha[m][0] = a;
  for (const auto& [n, b] : axis.column)
    if (n <= K) alpha[0][n] = b;

  for (int d = 2; d <= K && !steps.empty(); ++d) {
    // interior points m = 1 .. d-1 on antidiagonal d
    parallel_for(static_cast<std::size_t>(d - 1), [&](std::size_t idx) {
      const int m = static_cast<int>(idx) + 1;
      const int n = d - m;
      GradedSum acc;
      for (const Step& s : steps) {
        const int sm = m - s.da;
        const int sn = n - s.db;
        if (sm < 0 || sn < 0) continue;
        const GradedSum& src = alpha[sm][sn];
        if (!src.is_zero()) acc += src * s.coeff;
      }
      alpha[m][n] = acc * frac(1, static_cast<long>(m) * n);
    });
  }

  KernelSeries out(K);
  for (int m = 0; m <= K; ++m)
    for (int n = 0; m + n <= K; ++n)
      if (!alpha[m][n].is_zero()) out.add(Monomial{m, n}, alpha[m][n]);
  return out;
}

BivariatePolynomial tke_residual(const KernelSeries& T, const PolynomialPotential& potential) {
  BivariatePolynomial out;
  const GradedScalar kinetic = GradedScalar::real(-2, -1, 2);
  for (const auto& [mono, coeff] : T.terms()) {
    if (mono.m == 0 || mono.n == 0) continue;
    out.add(Monomial{mono.m - 1, mono.n - 1},
            coeff * (kinetic * Rational(static_cast<long>(mono.m) * mono.n)));
  }
  if (!potential.is_zero()) {
    BivariatePolynomial exact_t = T;
    exact_t.set_truncation_order(BivariateSeries::kExact);
    out += potential_difference_expand(potential, potential.max_degree()) * exact_t;
  }
  out.set_truncation_order(BivariateSeries::kExact);
  return out;
}

ConjugacyReport conjugacy_check(const KernelSeries& T) {
  ConjugacyReport report;
  for (const auto& [mono, coeff] : T.terms()) {
    if (mono.n != 0 || mono.m == 0) continue;
    report.lhs[mono.m - 1] = coeff * (rational_pow(2, mono.m + 1) * mono.m);
    const bool ok = mono.m == 1 && coeff == GradedSum(GradedScalar::real(frac(1, 4)));
    if (!ok) report.offending.push_back(mono.m);
  }
  report.conjugate = report.offending.empty() && report.lhs.count(0) == 1;
  if (report.lhs.count(0) == 0 && std::find(report.offending.begin(), report.offending.end(), 1) ==
                                       report.offending.end())
    report.offending.insert(report.offending.begin(), 1);
  return report;
}

SymmetryClass classify_symmetry(const KernelSeries& T) {
  SymmetryClass cls{true, true};
  for (const auto& [mono, coeff] : T.terms()) {
    if (!coeff.is_real()) cls.time_reversal = false;
    const GradedSum mirrored = (mono.n % 2 == 0) ? coeff.conj() : -coeff.conj();
    if (!(mirrored == coeff)) cls.hermitian = false;
  }
  return cls;
}

}  // namespace timekernel
