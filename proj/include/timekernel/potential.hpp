#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "timekernel/rational.hpp"
#include "timekernel/series.hpp"

namespace timekernel {

/// V(q) = sum_s a_s q^s for s >= 1, with graded coefficients.
class PolynomialPotential {
 public:
  PolynomialPotential() = default;
  /// Zero coefficients are dropped; degrees below 1 are rejected.
  explicit PolynomialPotential(const std::map<int, GradedScalar>& coeffs);

  /// mu * omega^2 q^2 / 2, stored as a_2 = (omega^2/2) with mu_exp = 1.
  static PolynomialPotential harmonic(const Rational& omega);

  void set(int degree, const GradedScalar& coeff);

  const std::map<int, GradedScalar>& coeffs() const { return coeffs_; }
  GradedScalar coefficient(int degree) const;
  int max_degree() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_real() const;
  /// Degree at most two: the equations of motion are linear.
  bool is_linear_system() const { return max_degree() <= 2; }

  /// omega when the potential is exactly mu omega^2 q^2 / 2 with rational omega > 0.
  std::optional<Rational> harmonic_omega() const;

  friend bool operator==(const PolynomialPotential& a, const PolynomialPotential& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  std::map<int, GradedScalar> coeffs_;
};

/// Exact expansion of V((u+v)/2) - V((u-v)/2). Only odd powers of v survive.
BivariatePolynomial potential_difference_expand(const PolynomialPotential& potential,
                                                int max_total_degree);

/// Potential with random grade-0 rational coefficients of degrees 1..degree,
/// numerators in [-9, 9] and denominators in [1, 9], leading one nonzero.
/// Only raw engine output is used, so the result is platform independent.
PolynomialPotential random_rational_potential(std::uint64_t seed, int degree);

}  // namespace timekernel
