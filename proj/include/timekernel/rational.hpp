#pragma once

// Exact scalars: rationals, Gaussian rationals, and Gaussian rationals
// tagged with integer powers of the mass mu and of hbar.

#include <gmpxx.h>

#include <compare>
#include <complex>
#include <map>
#include <string>
#include <string_view>

namespace timekernel {

using Rational = mpq_class;

/// Canonical num/den (mpq_class(num, den) alone is not reduced).
inline Rational frac(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p/q", "p" or "-p/q". The result is canonical (lowest terms,
/// positive denominator). Throws std::invalid_argument on bad input.
Rational parse_rational(std::string_view text);

/// Always "p/q", including integers ("3/1") and zero ("0/1").
std::string format_rational(const Rational& value);

Rational rational_pow(const Rational& base, int exponent);

/// n! as an exact rational.
Rational factorial(int n);

Rational binomial(int n, int k);

struct Gaussian {
  Rational re;
  Rational im;

  Gaussian() = default;
  Gaussian(Rational real, Rational imag = 0) : re(std::move(real)), im(std::move(imag)) {}

  static Gaussian i() { return {0, 1}; }
  /// i^k for any integer k.
  static Gaussian i_pow(int k);

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  bool is_imaginary() const { return sgn(re) == 0; }
  Gaussian conj() const { return {re, -im}; }

  Gaussian& operator+=(const Gaussian& rhs) {
    re += rhs.re;
    im += rhs.im;
    return *this;
  }
  Gaussian& operator-=(const Gaussian& rhs) {
    re -= rhs.re;
    im -= rhs.im;
    return *this;
  }
  Gaussian& operator*=(const Rational& rhs) {
    re *= rhs;
    im *= rhs;
    return *this;
  }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  friend Gaussian operator+(Gaussian a, const Gaussian& b) { return a += b; }
  friend Gaussian operator-(Gaussian a, const Gaussian& b) { return a -= b; }
  friend Gaussian operator-(const Gaussian& a) { return {-a.re, -a.im}; }
  friend Gaussian operator*(const Gaussian& a, const Gaussian& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Gaussian operator*(Gaussian a, const Rational& b) { return a *= b; }
  friend bool operator==(const Gaussian& a, const Gaussian& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// Powers of mu and hbar carried by a term. Ordered by hbar first, then mu,
/// which is the canonical serialization order.
struct Grade {
  int mu = 0;
  int hbar = 0;

  friend Grade operator+(Grade a, Grade b) { return {a.mu + b.mu, a.hbar + b.hbar}; }
  friend bool operator==(Grade a, Grade b) = default;
  friend std::strong_ordering operator<=>(Grade a, Grade b) {
    if (auto c = a.hbar <=> b.hbar; c != 0) return c;
    return a.mu <=> b.mu;
  }
};

/// Gaussian rational times mu^mu_exp * hbar^hbar_exp. Zero is canonical
/// (grade reset to (0, 0)). Sums are only defined within one grade; zero
/// acts as identity for every grade.
class GradedScalar {
 public:
  GradedScalar() = default;
  GradedScalar(Gaussian value, Grade grade);

  static GradedScalar real(const Rational& value, int mu = 0, int hbar = 0) {
    return GradedScalar(Gaussian(value), Grade{mu, hbar});
  }
  static GradedScalar imag(const Rational& value, int mu = 0, int hbar = 0) {
    return GradedScalar(Gaussian(0, value), Grade{mu, hbar});
  }

  const Gaussian& value() const { return value_; }
  Grade grade() const { return grade_; }
  int mu_exp() const { return grade_.mu; }
  int hbar_exp() const { return grade_.hbar; }
  bool is_zero() const { return value_.is_zero(); }

  GradedScalar conj() const { return GradedScalar(value_.conj(), grade_); }

  std::complex<double> evaluate(double mu, double hbar) const;

  friend GradedScalar operator*(const GradedScalar& a, const GradedScalar& b) {
    return GradedScalar(a.value_ * b.value_, a.grade_ + b.grade_);
  }
  friend GradedScalar operator*(const GradedScalar& a, const Rational& b) {
    return GradedScalar(a.value_ * b, a.grade_);
  }
  friend GradedScalar operator-(const GradedScalar& a) { return GradedScalar(-a.value_, a.grade_); }
  friend GradedScalar operator+(const GradedScalar& a, const GradedScalar& b);
  friend GradedScalar operator-(const GradedScalar& a, const GradedScalar& b) { return a + (-b); }
  friend bool operator==(const GradedScalar& a, const GradedScalar& b) {
    return a.grade_ == b.grade_ && a.value_ == b.value_;
  }

 private:
  Gaussian value_;
  Grade grade_;
};

/// A finite sum of graded scalars of distinct grades: the coefficient of one
/// monomial when the grades do not collapse to a single one.
class GradedSum {
 public:
  using Map = std::map<Grade, Gaussian>;

  GradedSum() = default;
  GradedSum(const GradedScalar& s) { add(s); }  // NOLINT(google-explicit-constructor)

  void add(const GradedScalar& s);
  void add(const GradedSum& s);

  bool is_zero() const { return parts_.empty(); }
  std::size_t size() const { return parts_.size(); }
  const Map& parts() const { return parts_; }
  Map::const_iterator begin() const { return parts_.begin(); }
  Map::const_iterator end() const { return parts_.end(); }

  /// Component at `grade` (zero when absent).
  Gaussian at(Grade grade) const;
  /// The single graded term, when there is at most one.
  GradedScalar as_scalar() const;
  GradedSum only_grade(Grade grade) const;

  GradedSum conj() const;
  bool is_real() const;
  bool is_imaginary() const;
  std::complex<double> evaluate(double mu, double hbar) const;

  GradedSum& operator+=(const GradedSum& rhs) {
    add(rhs);
    return *this;
  }
  GradedSum& operator-=(const GradedSum& rhs);

  friend GradedSum operator+(GradedSum a, const GradedSum& b) { return a += b; }
  friend GradedSum operator-(GradedSum a, const GradedSum& b) { return a -= b; }
  friend GradedSum operator-(const GradedSum& a);
  friend GradedSum operator*(const GradedSum& a, const GradedScalar& b);
  friend GradedSum operator*(const GradedSum& a, const Rational& b);
  friend GradedSum operator*(const GradedSum& a, const GradedSum& b);
  friend bool operator==(const GradedSum& a, const GradedSum& b) { return a.parts_ == b.parts_; }

 private:
  Map parts_;
};

std::string to_string(const GradedScalar& s);
std::string to_string(const GradedSum& s);

}  // namespace timekernel
