#include "timekernel/potential.hpp"

#include <random>

#include "timekernel/errors.hpp"

namespace timekernel {

PolynomialPotential::PolynomialPotential(const std::map<int, GradedScalar>& coeffs) {
  for (const auto& [degree, coeff] : coeffs) set(degree, coeff);
}

PolynomialPotential PolynomialPotential::harmonic(const Rational& omega) {
  PolynomialPotential v;
  v.set(2, GradedScalar::real(omega * omega / 2, 1, 0));
  return v;
}

void PolynomialPotential::set(int degree, const GradedScalar& coeff) {
  if (degree < 1)
    throw InvariantError("potential degree must be >= 1, got " + std::to_string(degree));
  if (coeff.is_zero())
    coeffs_.erase(degree);
  else
    coeffs_[degree] = coeff;
}

GradedScalar PolynomialPotential::coefficient(int degree) const {
  auto it = coeffs_.find(degree);
  return it == coeffs_.end() ? GradedScalar{} : it->second;
}

bool PolynomialPotential::is_real() const {
  for (const auto& [degree, coeff] : coeffs_)
    if (!coeff.value().is_real()) return false;
  return true;
}

std::optional<Rational> PolynomialPotential::harmonic_omega() const {
  if (coeffs_.size() != 1 || coeffs_.begin()->first != 2) return std::nullopt;
  const GradedScalar& a2 = coeffs_.begin()->second;
  if (a2.grade() != Grade{1, 0} || !a2.value().is_real() || sgn(a2.value().re) <= 0)
    return std::nullopt;
  const Rational omega_sq = a2.value().re * 2;
  mpz_class num_root, den_root;
  if (!mpz_perfect_square_p(omega_sq.get_num_mpz_t()) ||
      !mpz_perfect_square_p(omega_sq.get_den_mpz_t()))
    return std::nullopt;
  mpz_sqrt(num_root.get_mpz_t(), omega_sq.get_num_mpz_t());
  mpz_sqrt(den_root.get_mpz_t(), omega_sq.get_den_mpz_t());
  Rational omega(num_root, den_root);
  omega.canonicalize();
  return omega;
}

BivariatePolynomial potential_difference_expand(const PolynomialPotential& potential,
                                                int max_total_degree) {
  if (max_total_degree < potential.max_degree())
    throw PreconditionError("potential_difference_expand: max_total_degree below deg V");
  BivariatePolynomial out;
  // a_s / 2^s [(u+v)^s - (u-v)^s] = a_s / 2^(s-1) sum_k C(s, 2k+1) u^(s-2k-1) v^(2k+1)
  for (const auto& [s, a] : potential.coeffs()) {
    const Rational scale = Rational(1) / rational_pow(2, s - 1);
    for (int k = 0; 2 * k + 1 <= s; ++k)
      out.add(s - 2 * k - 1, 2 * k + 1, a * (binomial(s, 2 * k + 1) * scale));
  }
  return out;
}

PolynomialPotential random_rational_potential(std::uint64_t seed, int degree) {
  std::mt19937_64 engine(seed);
  auto draw = [&](int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine() % span);
  };
  PolynomialPotential v;
  for (int s = 1; s <= degree; ++s) {
    int num = draw(-9, 9);
    const int den = draw(1, 9);
    if (s == degree)
      while (num == 0) num = draw(-9, 9);
    v.set(s, GradedScalar::real(frac(num, den)));
  }
  return v;
}

}  // namespace timekernel
