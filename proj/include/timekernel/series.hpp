#pragma once

// Sparse bivariate series in the canonical coordinates u = q + q', v = q - q'.

#include <compare>
#include <complex>
#include <limits>
#include <map>
#include <vector>

#include "timekernel/rational.hpp"

namespace timekernel {

/// Exponent pair of u^m v^n, ordered by total degree then m.
struct Monomial {
  int m = 0;
  int n = 0;

  int total_degree() const { return m + n; }

  friend bool operator==(Monomial a, Monomial b) = default;
  friend std::strong_ordering operator<=>(Monomial a, Monomial b) {
    if (auto c = a.total_degree() <=> b.total_degree(); c != 0) return c;
    return a.m <=> b.m;
  }
};

struct FlatTerm {
  Monomial mono;
  GradedScalar coeff;
};

/// Sum of coeff * u^m * v^n with graded coefficients. Zero coefficients are
/// never stored. A finite truncation order K asserts completeness of every
/// coefficient with m + n <= K; kExact marks an exact polynomial.
class BivariateSeries {
 public:
  static constexpr int kExact = std::numeric_limits<int>::max();
  using Map = std::map<Monomial, GradedSum>;

  BivariateSeries() = default;
  explicit BivariateSeries(int truncation_order) : order_(truncation_order) {}

  void add(Monomial mono, const GradedSum& coeff);
  void add(int m, int n, const GradedScalar& coeff) { add(Monomial{m, n}, GradedSum(coeff)); }

  /// Coefficient of u^m v^n (zero when absent).
  GradedSum coefficient(int m, int n) const;
  const GradedSum* find(Monomial mono) const;

  const Map& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  int truncation_order() const { return order_; }
  bool is_exact() const { return order_ == kExact; }
  void set_truncation_order(int order) { order_ = order; }

  /// Terms in canonical order: total degree, m, hbar, mu.
  std::vector<FlatTerm> flat_terms() const;

  /// Copy keeping only m + n <= order, with that truncation order.
  BivariateSeries truncated(int order) const;
  /// Lowest total degree carrying a term, or kExact when empty.
  int lowest_total_degree() const;
  /// True when every exponent pair is non-negative.
  bool has_natural_exponents() const;

  BivariateSeries conj() const;

  BivariateSeries& operator+=(const BivariateSeries& rhs);
  BivariateSeries& operator-=(const BivariateSeries& rhs);
  friend BivariateSeries operator+(BivariateSeries a, const BivariateSeries& b) { return a += b; }
  friend BivariateSeries operator-(BivariateSeries a, const BivariateSeries& b) { return a -= b; }
  friend BivariateSeries operator*(const BivariateSeries& a, const GradedScalar& s);
  /// Polynomial product; truncation order is the smaller of the two.
  friend BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b);
  /// Structural equality of stored terms (truncation order ignored).
  friend bool operator==(const BivariateSeries& a, const BivariateSeries& b) {
    return a.terms_ == b.terms_;
  }

 private:
  Map terms_;
  int order_ = kExact;
};

using KernelSeries = BivariateSeries;
using BivariatePolynomial = BivariateSeries;

/// Sum of coeff * (q+q')^m (q-q')^n with mu and hbar substituted. Summation
/// runs in canonical order.
std::complex<double> series_evaluate(const KernelSeries& series, const Rational& q,
                                     const Rational& qprime, const Rational& mu_value,
                                     const Rational& hbar_value);

/// Same sum in canonical coordinates (u, v), in double precision. For grid work.
std::complex<double> series_evaluate_uv(const KernelSeries& series, double u, double v, double mu,
                                        double hbar);

/// Exact comparison of every coefficient with m + n <= up_to_order. Throws
/// PreconditionError if the order exceeds either truncation order.
bool series_equal(const KernelSeries& a, const KernelSeries& b, int up_to_order);

}  // namespace timekernel
