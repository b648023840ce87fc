#include "timekernel/phase_space.hpp"

#include <climits>
#include <cmath>

#include "timekernel/errors.hpp"

namespace timekernel {

namespace {

template <typename Map, typename Key>
void accumulate(Map& map, const Key& key, const GradedSum& coeff) {
  if (coeff.is_zero()) return;
  auto [it, inserted] = map.try_emplace(key, coeff);
  if (inserted) return;
  it->second += coeff;
  if (it->second.is_zero()) map.erase(it);
}

template <typename Map>
Map filter_hbar(const Map& map, int hbar) {
  Map out;
  for (const auto& [key, coeff] : map) {
    GradedSum part;
    for (const auto& [grade, value] : coeff)
      if (grade.hbar == hbar) part.add(GradedScalar(value, grade));
    if (!part.is_zero()) out.emplace(key, part);
  }
  return out;
}

}  // namespace

void PhaseSpaceSeries::add_regular(int m, int j, const GradedSum& coeff) {
  accumulate(regular_, RegularKey{m, j}, coeff);
}

void PhaseSpaceSeries::add_delta(int m, int d, Weight weight, const GradedSum& coeff) {
  accumulate(delta_, DeltaKey{m, d, weight}, coeff);
}

GradedSum PhaseSpaceSeries::regular_coefficient(int m, int j) const {
  auto it = regular_.find(RegularKey{m, j});
  return it == regular_.end() ? GradedSum{} : it->second;
}

GradedSum PhaseSpaceSeries::delta_coefficient(int m, int d, Weight weight) const {
  auto it = delta_.find(DeltaKey{m, d, weight});
  return it == delta_.end() ? GradedSum{} : it->second;
}

PhaseSpaceSeries PhaseSpaceSeries::hbar_part(int hbar) const {
  PhaseSpaceSeries out;
  out.regular_ = filter_hbar(regular_, hbar);
  out.delta_ = filter_hbar(delta_, hbar);
  return out;
}

PhaseSpaceSeries PhaseSpaceSeries::truncated(int j_max) const {
  PhaseSpaceSeries out;
  for (const auto& [key, coeff] : regular_)
    if (key.j <= j_max) out.regular_.emplace(key, coeff);
  out.delta_ = delta_;
  return out;
}

int PhaseSpaceSeries::min_hbar() const {
  int lowest = INT_MAX;
  for (const auto& [key, coeff] : regular_)
    for (const auto& [grade, value] : coeff) lowest = std::min(lowest, grade.hbar);
  for (const auto& [key, coeff] : delta_)
    for (const auto& [grade, value] : coeff) lowest = std::min(lowest, grade.hbar);
  return lowest;
}

bool PhaseSpaceSeries::is_real() const {
  for (const auto& [key, coeff] : regular_)
    if (!coeff.is_real()) return false;
  for (const auto& [key, coeff] : delta_)
    if (!coeff.is_real()) return false;
  return true;
}

std::complex<double> PhaseSpaceSeries::evaluate(double q, double p, double mu, double hbar) const {
  if (p == 0.0) throw PreconditionError("phase-space evaluation at p = 0");
  std::complex<double> total = 0;
  for (const auto& [key, coeff] : regular_)
    total += coeff.evaluate(mu, hbar) * (std::pow(q, key.m) * std::pow(p, -key.j));
  return total;
}

PhaseSpaceSeries& PhaseSpaceSeries::operator+=(const PhaseSpaceSeries& rhs) {
  for (const auto& [key, coeff] : rhs.regular_) accumulate(regular_, key, coeff);
  for (const auto& [key, coeff] : rhs.delta_) accumulate(delta_, key, coeff);
  return *this;
}

PhaseSpaceSeries& PhaseSpaceSeries::operator-=(const PhaseSpaceSeries& rhs) {
  for (const auto& [key, coeff] : rhs.regular_) accumulate(regular_, key, -coeff);
  for (const auto& [key, coeff] : rhs.delta_) accumulate(delta_, key, -coeff);
  return *this;
}

PhaseSpaceSeries operator*(const PhaseSpaceSeries& a, const GradedScalar& s) {
  PhaseSpaceSeries out;
  for (const auto& [key, coeff] : a.regular_) accumulate(out.regular_, key, coeff * s);
  for (const auto& [key, coeff] : a.delta_) accumulate(out.delta_, key, coeff * s);
  return out;
}

PhaseSpaceSeries weyl_transform_sgn(const KernelSeries& T) {
  PhaseSpaceSeries out;
  for (const auto& [mono, coeff] : T.terms()) {
    if (mono.m < 0 || mono.n < 0)
      throw MalformedSeriesError("weyl_transform_sgn: negative exponent in u^" +
                                 std::to_string(mono.m) + " v^" + std::to_string(mono.n));
    const Gaussian factor = Gaussian::i_pow(-(mono.n + 2)) *
                            (rational_pow(2, mono.m + 1) * factorial(mono.n));
    out.add_regular(mono.m, mono.n + 1, coeff * GradedScalar(factor, Grade{1, mono.n}));
  }
  return out;
}

ClassicalTOASeries local_toa_series(const PolynomialPotential& potential, int k_max) {
  if (k_max < 0) throw PreconditionError("local_toa_series needs k_max >= 0");
  ClassicalTOASeries result;
  result.k_max = k_max;
  PhaseSpaceSeries current;
  current.add_regular(1, 1, GradedScalar::real(-1, 1));
  result.series = current;
  for (int k = 1; k <= k_max; ++k) {
    // c q^a p^-j  ->  mu j s a_s c / (a+s) q^(a+s) p^(-j-2)
    PhaseSpaceSeries next;
    for (const auto& [key, coeff] : current.regular())
      for (const auto& [s, a_s] : potential.coeffs()) {
        const Rational scale = frac(static_cast<long>(key.j) * s, key.m + s);
        next.add_regular(key.m + s, key.j + 2,
                         coeff * (a_s * GradedScalar::real(scale, 1)));
      }
    current = std::move(next);
    if (current.empty()) break;
    result.series += (k % 2 == 0) ? current : current * GradedScalar::real(-1);
  }
  return result;
}

std::vector<std::map<int, GradedSum>> potential_powers(const PolynomialPotential& potential,
                                                       int k_max) {
  std::vector<std::map<int, GradedSum>> powers;
  powers.push_back({{0, GradedSum(GradedScalar::real(1))}});
  for (int k = 1; k <= k_max; ++k) {
    std::map<int, GradedSum> next;
    for (const auto& [deg, coeff] : powers.back())
      for (const auto& [s, a_s] : potential.coeffs()) {
        GradedSum& slot = next[deg + s];
        slot += coeff * a_s;
      }
    std::erase_if(next, [](const auto& kv) { return kv.second.is_zero(); });
    powers.push_back(std::move(next));
  }
  return powers;
}

PhaseSpaceSeries inverse_hamiltonian_series(const PolynomialPotential& potential, int N,
                                            int j_max) {
  if (N < 1) throw PreconditionError("inverse_hamiltonian_series needs N >= 1");
  if (j_max < 0) throw PreconditionError("inverse_hamiltonian_series needs j_max >= 0");
  const auto powers = potential_powers(potential, j_max);
  PhaseSpaceSeries out;
  for (int k = 0; k <= j_max; ++k) {
    Rational scale = binomial(N + k - 1, k) * rational_pow(2, N + k);
    if (k % 2 == 1) scale = -scale;
    const GradedScalar prefactor = GradedScalar::real(scale, N + k);
    for (const auto& [deg, coeff] : powers[k])
      out.add_regular(deg, 2 * (N + k), coeff * prefactor);
  }
  return out;
}

ClassicalSplit classical_split(const PhaseSpaceSeries& S) {
  if (!S.empty() && S.min_hbar() < 0)
    throw DivergenceError("series has a negative hbar grade (" + std::to_string(S.min_hbar()) +
                          "); no classical limit");
  ClassicalSplit split;
  split.classical = S.hbar_part(0);
  split.quantum = S - split.classical;
  return split;
}

PhaseSpaceSeries classical_limit(const PhaseSpaceSeries& S) { return classical_split(S).classical; }

}  // namespace timekernel
