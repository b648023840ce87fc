#pragma once

#include <random>

#include "timekernel/rational.hpp"

namespace th {

using namespace timekernel;

inline GradedScalar re(long num, long den = 1, int mu = 0, int hbar = 0) {
  return GradedScalar::real(frac(num, den), mu, hbar);
}

inline GradedScalar im(long num, long den = 1, int mu = 0, int hbar = 0) {
  return GradedScalar::imag(frac(num, den), mu, hbar);
}

inline GradedSum sum(const GradedScalar& s) { return GradedSum(s); }

inline Rational random_rational(std::mt19937_64& rng) {
  const long num = static_cast<long>(rng() % 41) - 20;
  const long den = static_cast<long>(rng() % 13) + 1;
  return frac(num, den);
}

inline Gaussian random_gaussian(std::mt19937_64& rng) {
  return Gaussian(random_rational(rng), random_rational(rng));
}

}  // namespace th
