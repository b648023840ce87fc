#include "timekernel/series.hpp"

#include <algorithm>
#include <cmath>

#include "timekernel/errors.hpp"

namespace timekernel {

void BivariateSeries::add(Monomial mono, const GradedSum& coeff) {
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(mono, coeff);
  if (inserted) return;
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

GradedSum BivariateSeries::coefficient(int m, int n) const {
  const GradedSum* c = find(Monomial{m, n});
  return c ? *c : GradedSum{};
}

const GradedSum* BivariateSeries::find(Monomial mono) const {
  auto it = terms_.find(mono);
  return it == terms_.end() ? nullptr : &it->second;
}

std::vector<FlatTerm> BivariateSeries::flat_terms() const {
  std::vector<FlatTerm> out;
  for (const auto& [mono, sum] : terms_)
    for (const auto& [grade, value] : sum) out.push_back({mono, GradedScalar(value, grade)});
  return out;
}

BivariateSeries BivariateSeries::truncated(int order) const {
  BivariateSeries out(order);
  for (const auto& [mono, sum] : terms_)
    if (mono.total_degree() <= order) out.terms_.emplace(mono, sum);
  return out;
}

int BivariateSeries::lowest_total_degree() const {
  return terms_.empty() ? kExact : terms_.begin()->first.total_degree();
}

bool BivariateSeries::has_natural_exponents() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const auto& t) { return t.first.m >= 0 && t.first.n >= 0; });
}

BivariateSeries BivariateSeries::conj() const {
  BivariateSeries out(order_);
  for (const auto& [mono, sum] : terms_) out.terms_.emplace(mono, sum.conj());
  return out;
}

BivariateSeries& BivariateSeries::operator+=(const BivariateSeries& rhs) {
  for (const auto& [mono, sum] : rhs.terms_) add(mono, sum);
  order_ = std::min(order_, rhs.order_);
  return *this;
}

BivariateSeries& BivariateSeries::operator-=(const BivariateSeries& rhs) {
  for (const auto& [mono, sum] : rhs.terms_) add(mono, -sum);
  order_ = std::min(order_, rhs.order_);
  return *this;
}

BivariateSeries operator*(const BivariateSeries& a, const GradedScalar& s) {
  BivariateSeries out(a.order_);
  if (s.is_zero()) return out;
  for (const auto& [mono, sum] : a.terms_) out.terms_.emplace(mono, sum * s);
  return out;
}

BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b) {
  BivariateSeries out(std::min(a.order_, b.order_));
  for (const auto& [ma, sa] : a.terms_)
    for (const auto& [mb, sb] : b.terms_) out.add(Monomial{ma.m + mb.m, ma.n + mb.n}, sa * sb);
  return out;
}

std::complex<double> series_evaluate(const KernelSeries& series, const Rational& q,
                                     const Rational& qprime, const Rational& mu_value,
                                     const Rational& hbar_value) {
  if (sgn(mu_value) <= 0 || sgn(hbar_value) <= 0)
    throw PreconditionError("series_evaluate needs mu > 0 and hbar > 0");
  const Rational u = q + qprime;
  const Rational v = q - qprime;
  return series_evaluate_uv(series, u.get_d(), v.get_d(), mu_value.get_d(), hbar_value.get_d());
}

std::complex<double> series_evaluate_uv(const KernelSeries& series, double u, double v, double mu,
                                        double hbar) {
  std::complex<double> total = 0;
  for (const auto& [mono, sum] : series.terms()) {
    const double basis = std::pow(u, mono.m) * std::pow(v, mono.n);
    if (basis == 0.0) continue;
    total += sum.evaluate(mu, hbar) * basis;
  }
  return total;
}

bool series_equal(const KernelSeries& a, const KernelSeries& b, int up_to_order) {
  if (up_to_order > a.truncation_order() || up_to_order > b.truncation_order())
    throw PreconditionError("series_equal: order " + std::to_string(up_to_order) +
                            " exceeds a truncation order");
  return a.truncated(up_to_order) == b.truncated(up_to_order);
}

}  // namespace timekernel
