#include "timekernel/rational.hpp"

#include <cmath>
#include <stdexcept>

#include "timekernel/errors.hpp"

namespace timekernel {

namespace {

bool valid_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) return false;
  for (std::size_t i = start; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

mpz_class parse_integer(std::string_view s) {
  if (!valid_integer(s)) throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return mpz_class(digits, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  mpz_class num = parse_integer(text.substr(0, slash));
  std::string_view den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+'))
    throw std::invalid_argument("signed denominator in '" + std::string(text) + "'");
  mpz_class den = parse_integer(den_text);
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational rational_pow(const Rational& base, int exponent) {
  if (exponent < 0) {
    if (sgn(base) == 0) throw PreconditionError("zero raised to a negative power");
    return rational_pow(Rational(1) / base, -exponent);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational factorial(int n) {
  if (n < 0) throw PreconditionError("factorial of a negative integer");
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(f);
}

Rational binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(b);
}

Gaussian Gaussian::i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

GradedScalar::GradedScalar(Gaussian value, Grade grade) : value_(std::move(value)), grade_(grade) {
  if (value_.is_zero()) grade_ = Grade{};
}

std::complex<double> GradedScalar::evaluate(double mu, double hbar) const {
  const double scale = std::pow(mu, grade_.mu) * std::pow(hbar, grade_.hbar);
  return value_.to_complex() * scale;
}

GradedScalar operator+(const GradedScalar& a, const GradedScalar& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.grade_ != b.grade_)
    throw InvariantError("sum of scalars with different (mu, hbar) grades: " + to_string(a) +
                         " + " + to_string(b));
  return GradedScalar(a.value_ + b.value_, a.grade_);
}

void GradedSum::add(const GradedScalar& s) {
  if (s.is_zero()) return;
  auto [it, inserted] = parts_.try_emplace(s.grade(), s.value());
  if (inserted) return;
  it->second += s.value();
  if (it->second.is_zero()) parts_.erase(it);
}

void GradedSum::add(const GradedSum& s) {
  for (const auto& [grade, value] : s.parts_) add(GradedScalar(value, grade));
}

GradedSum& GradedSum::operator-=(const GradedSum& rhs) {
  for (const auto& [grade, value] : rhs.parts_) add(GradedScalar(-value, grade));
  return *this;
}

Gaussian GradedSum::at(Grade grade) const {
  auto it = parts_.find(grade);
  return it == parts_.end() ? Gaussian{} : it->second;
}

GradedScalar GradedSum::as_scalar() const {
  if (parts_.empty()) return {};
  if (parts_.size() > 1)
    throw InvariantError("graded sum with " + std::to_string(parts_.size()) +
                         " grades has no single-scalar form: " + to_string(*this));
  return GradedScalar(parts_.begin()->second, parts_.begin()->first);
}

GradedSum GradedSum::only_grade(Grade grade) const {
  GradedSum out;
  if (auto it = parts_.find(grade); it != parts_.end()) out.parts_.emplace(*it);
  return out;
}

GradedSum GradedSum::conj() const {
  GradedSum out;
  for (const auto& [grade, value] : parts_) out.parts_.emplace(grade, value.conj());
  return out;
}

bool GradedSum::is_real() const {
  for (const auto& [grade, value] : parts_)
    if (!value.is_real()) return false;
  return true;
}

bool GradedSum::is_imaginary() const {
  for (const auto& [grade, value] : parts_)
    if (!value.is_imaginary()) return false;
  return true;
}

std::complex<double> GradedSum::evaluate(double mu, double hbar) const {
  std::complex<double> total = 0;
  for (const auto& [grade, value] : parts_) total += GradedScalar(value, grade).evaluate(mu, hbar);
  return total;
}

GradedSum operator-(const GradedSum& a) {
  GradedSum out;
  for (const auto& [grade, value] : a.parts_) out.parts_.emplace(grade, -value);
  return out;
}

GradedSum operator*(const GradedSum& a, const GradedScalar& b) {
  GradedSum out;
  if (b.is_zero()) return out;
  for (const auto& [grade, value] : a.parts_) out.add(GradedScalar(value, grade) * b);
  return out;
}

GradedSum operator*(const GradedSum& a, const Rational& b) {
  GradedSum out;
  if (sgn(b) == 0) return out;
  for (const auto& [grade, value] : a.parts_) out.parts_.emplace(grade, value * b);
  return out;
}

GradedSum operator*(const GradedSum& a, const GradedSum& b) {
  GradedSum out;
  for (const auto& [grade, value] : b.parts_) out.add(a * GradedScalar(value, grade));
  return out;
}

std::string to_string(const GradedScalar& s) {
  std::string out = "(" + s.value().re.get_str() + (sgn(s.value().im) < 0 ? "" : "+") +
                    s.value().im.get_str() + "i)";
  if (s.mu_exp() != 0) out += " mu^" + std::to_string(s.mu_exp());
  if (s.hbar_exp() != 0) out += " hbar^" + std::to_string(s.hbar_exp());
  return out;
}

std::string to_string(const GradedSum& s) {
  if (s.is_zero()) return "0";
  std::string out;
  for (const auto& [grade, value] : s) {
    if (!out.empty()) out += " + ";
    out += to_string(GradedScalar(value, grade));
  }
  return out;
}

}  // namespace timekernel
