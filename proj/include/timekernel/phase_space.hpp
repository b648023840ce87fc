#pragma once

// Phase-space series: regular terms c q^m p^(-j) and delta terms
// c w(q) q^m delta^(d)(p). Regular terms are formal in 1/p and valid off p = 0.

#include <compare>
#include <complex>
#include <map>
#include <vector>

#include "timekernel/potential.hpp"
#include "timekernel/series.hpp"
#include "timekernel/weight.hpp"

namespace timekernel {

struct RegularKey {
  int m = 0;
  int j = 0;

  friend bool operator==(RegularKey, RegularKey) = default;
  friend std::strong_ordering operator<=>(RegularKey a, RegularKey b) {
    if (auto c = a.j <=> b.j; c != 0) return c;
    return a.m <=> b.m;
  }
};

struct DeltaKey {
  int m = 0;
  int d = 0;
  Weight weight = Weight::one;

  friend bool operator==(DeltaKey, DeltaKey) = default;
  friend std::strong_ordering operator<=>(DeltaKey a, DeltaKey b) {
    if (auto c = a.d <=> b.d; c != 0) return c;
    if (auto c = a.m <=> b.m; c != 0) return c;
    return static_cast<int>(a.weight) <=> static_cast<int>(b.weight);
  }
};

class PhaseSpaceSeries {
 public:
  using RegularMap = std::map<RegularKey, GradedSum>;
  using DeltaMap = std::map<DeltaKey, GradedSum>;

  void add_regular(int m, int j, const GradedSum& coeff);
  void add_delta(int m, int d, Weight weight, const GradedSum& coeff);

  const RegularMap& regular() const { return regular_; }
  const DeltaMap& delta() const { return delta_; }
  bool empty() const { return regular_.empty() && delta_.empty(); }
  bool has_delta() const { return !delta_.empty(); }

  GradedSum regular_coefficient(int m, int j) const;
  GradedSum delta_coefficient(int m, int d, Weight weight = Weight::one) const;

  /// Components whose hbar exponent equals `hbar`, any mu exponent.
  PhaseSpaceSeries hbar_part(int hbar) const;
  /// Regular terms with j <= j_max; delta terms untouched.
  PhaseSpaceSeries truncated(int j_max) const;
  int min_hbar() const;
  bool is_real() const;

  /// Sum of the regular terms at (q, p); requires p != 0.
  std::complex<double> evaluate(double q, double p, double mu, double hbar) const;

  PhaseSpaceSeries& operator+=(const PhaseSpaceSeries& rhs);
  PhaseSpaceSeries& operator-=(const PhaseSpaceSeries& rhs);
  friend PhaseSpaceSeries operator+(PhaseSpaceSeries a, const PhaseSpaceSeries& b) { return a += b; }
  friend PhaseSpaceSeries operator-(PhaseSpaceSeries a, const PhaseSpaceSeries& b) { return a -= b; }
  friend PhaseSpaceSeries operator*(const PhaseSpaceSeries& a, const GradedScalar& s);
  friend bool operator==(const PhaseSpaceSeries&, const PhaseSpaceSeries&) = default;

 private:
  RegularMap regular_;
  DeltaMap delta_;
};

/// Local arrival-time series with the number of recurrence steps used.
struct ClassicalTOASeries {
  PhaseSpaceSeries series;
  int k_max = 0;
};

/// Image of the kernel (mu / i hbar) T(u, v) sgn(v):
///   alpha u^m v^n  ->  mu alpha 2^(m+1) n! hbar^n q^m / (i^(n+2) p^(n+1)).
/// Throws MalformedSeriesError on a negative exponent.
PhaseSpaceSeries weyl_transform_sgn(const KernelSeries& T);

/// sum_{k <= k_max} (-1)^k T_k with T_0 = -mu q / p and
/// T_k = (mu / p) int_q^0 V'(q') d/dp T_{k-1}(q', p) dq'.
ClassicalTOASeries local_toa_series(const PolynomialPotential& potential, int k_max);

/// H^(-N) = (2mu/p^2)^N sum_{k <= j_max} (-1)^k C(N+k-1, k) (2mu/p^2)^k V^k.
PhaseSpaceSeries inverse_hamiltonian_series(const PolynomialPotential& potential, int N,
                                            int j_max);

struct ClassicalSplit {
  PhaseSpaceSeries classical;
  /// Everything at positive hbar grade.
  PhaseSpaceSeries quantum;
};

/// Throws DivergenceError if any component has a negative hbar exponent.
ClassicalSplit classical_split(const PhaseSpaceSeries& S);
PhaseSpaceSeries classical_limit(const PhaseSpaceSeries& S);

/// Exact q-polynomial powers V(q)^k for k = 0..k_max, keyed by degree.
std::vector<std::map<int, GradedSum>> potential_powers(const PolynomialPotential& potential,
                                                       int k_max);

}  // namespace timekernel
