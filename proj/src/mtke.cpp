#include "timekernel/mtke.hpp"

#include <cmath>
#include <set>
#include <string>

#include "timekernel/errors.hpp"

namespace timekernel {

namespace {

/// mu / (2 i hbar) = (-i/2) mu hbar^-1
GradedScalar jump_scale() { return GradedScalar(Gaussian(0, frac(-1, 2)), Grade{1, -1}); }

/// (mu omega / 2 hbar)^(2j)
GradedScalar frequency_power(const Rational& omega, int j) {
  return GradedScalar::real(rational_pow(omega / 2, 2 * j), 2 * j, -2 * j);
}

bool sided_is_zero_at_origin(const SidedPolynomial& s) {
  return s.plus.count(0) == 0 && s.minus.count(0) == 0;
}

void add_sided(std::map<int, GradedSum>& poly, int k, const GradedSum& c) {
  if (c.is_zero()) return;
  GradedSum& slot = poly[k];
  slot += c;
  if (slot.is_zero()) poly.erase(k);
}

}  // namespace

SidedPolynomial to_sided(const std::vector<PiecewiseTerm>& terms) {
  SidedPolynomial out;
  for (const PiecewiseTerm& t : terms) {
    add_sided(out.plus, t.k, GradedSum(t.coeff * Rational(weight_on_side(t.weight, 1))));
    add_sided(out.minus, t.k, GradedSum(t.coeff * Rational(weight_on_side(t.weight, -1))));
  }
  return out;
}

std::complex<double> piecewise_evaluate(const std::vector<PiecewiseTerm>& terms, double x,
                                        double mu, double hbar, int side) {
  const int s = x > 0 ? 1 : (x < 0 ? -1 : side);
  std::complex<double> total = 0;
  for (const PiecewiseTerm& t : terms) {
    const int w = weight_on_side(t.weight, s);
    if (w == 0) continue;
    total += t.coeff.evaluate(mu, hbar) * (static_cast<double>(w) * std::pow(x, t.k));
  }
  return total;
}

std::vector<PiecewiseTerm> moment_integral(const std::vector<PiecewiseTerm>& terms) {
  std::vector<PiecewiseTerm> out;
  out.reserve(terms.size());
  for (const PiecewiseTerm& t : terms) {
    if (t.k < 0) throw PreconditionError("moment_integral: negative power");
    out.push_back({t.k + 2, t.weight, t.coeff * frac(1, t.k + 2)});
  }
  return out;
}

std::vector<std::vector<PiecewiseTerm>> moment_family(const std::vector<PiecewiseTerm>& terms,
                                                      int J) {
  std::vector<std::vector<PiecewiseTerm>> family{terms};
  for (int s = 1; s <= J; ++s) family.push_back(moment_integral(family.back()));
  return family;
}

void DistributionBoundary::validate() const {
  GradedSum total(alpha);
  total += GradedSum(beta);
  if (!(total == GradedSum(GradedScalar::real(1))))
    throw InvariantError("alpha + beta must equal 1, got " + to_string(total));
  for (const auto* list : {&f, &g})
    for (const PiecewiseTerm& t : *list)
      if (t.k < 0) throw InvariantError("piecewise term with negative power " + std::to_string(t.k));
  if (stationary_particle && !sided_is_zero_at_origin(to_sided(f)))
    throw InvariantError("stationary_particle requires f(0) = 0");
}

void dist_add(DistSeries& series, const DistKey& key, const GradedSum& coeff) {
  if (coeff.is_zero()) return;
  auto [it, inserted] = series.try_emplace(key, coeff);
  if (inserted) return;
  it->second += coeff;
  if (it->second.is_zero()) series.erase(it);
}

DistSeries DistributionKernel::combined() const {
  DistSeries out = heaviside;
  for (const auto* part : {&f_part, &g_part})
    for (const auto& [key, coeff] : *part) dist_add(out, key, coeff);
  return out;
}

std::complex<double> DistributionKernel::evaluate(double u, double v, double mu, double hbar,
                                                  int u_side, int v_side) const {
  const int su = u > 0 ? 1 : (u < 0 ? -1 : u_side);
  const int sv = v > 0 ? 1 : (v < 0 ? -1 : v_side);
  std::complex<double> total = 0;
  for (const auto* part : {&heaviside, &f_part, &g_part})
    for (const auto& [key, coeff] : *part) {
      const int w = weight_on_side(key.wu, su) * weight_on_side(key.wv, sv);
      if (w == 0) continue;
      total += coeff.evaluate(mu, hbar) * (w * std::pow(u, key.m) * std::pow(v, key.n));
    }
  return total;
}

DistributionKernel mtke_free_solution(const DistributionBoundary& dbc) {
  return mtke_ho_solution(dbc, 0, 0);
}

DistributionKernel mtke_ho_solution(const DistributionBoundary& dbc, const Rational& omega, int J) {
  if (J < 0) throw PreconditionError("mtke_ho_solution needs J >= 0");
  dbc.validate();
  DistributionKernel K;
  K.alpha = dbc.alpha;
  K.beta = dbc.beta;
  const bool free = sgn(omega) == 0;
  K.J = free ? -1 : J;
  const int top = free ? 0 : J;

  for (int j = 0; j <= top; ++j) {
    const GradedScalar c = jump_scale() * frequency_power(omega, j) * (Rational(1) / factorial(2 * j + 1));
    dist_add(K.heaviside, {2 * j + 1, 2 * j, Weight::one, Weight::hplus}, GradedSum(c * dbc.alpha));
    dist_add(K.heaviside, {2 * j + 1, 2 * j, Weight::one, Weight::hminus},
             GradedSum(-(c * dbc.beta)));
  }

  const auto F = moment_family(dbc.f, top);
  const auto G = moment_family(dbc.g, top);
  for (int j = 0; j <= top; ++j) {
    const GradedScalar c = frequency_power(omega, j) * (Rational(1) / (rational_pow(2, j) * factorial(j)));
    for (const PiecewiseTerm& t : F[j])
      dist_add(K.f_part, {t.k, 2 * j, t.weight, Weight::one}, GradedSum(t.coeff * c));
    for (const PiecewiseTerm& t : G[j])
      dist_add(K.g_part, {2 * j, t.k, Weight::one, t.weight}, GradedSum(t.coeff * c));
  }
  return K;
}

DistSeries collapse_heaviside(const DistSeries& series) {
  DistSeries out;
  const Rational half = frac(1, 2);
  for (const auto& [key, coeff] : series) {
    if (key.wv != Weight::hplus && key.wv != Weight::hminus) {
      dist_add(out, key, coeff);
      continue;
    }
    const Rational sgn_sign = key.wv == Weight::hplus ? half : -half;
    dist_add(out, {key.m, key.n, key.wu, Weight::one}, coeff * half);
    dist_add(out, {key.m, key.n, key.wu, Weight::sgn}, coeff * sgn_sign);
  }
  return out;
}

MtkeClass mtke_classify(const DistributionBoundary& dbc) {
  MtkeClass cls;
  const SidedPolynomial f = to_sided(dbc.f);
  const SidedPolynomial g = to_sided(dbc.g);
  auto all_of = [](const std::map<int, GradedSum>& poly, auto pred) {
    for (const auto& [k, c] : poly)
      if (!pred(k, c)) return false;
    return true;
  };
  const auto real = [](int, const GradedSum& c) { return c.is_real(); };
  const auto imaginary = [](int, const GradedSum& c) { return c.is_imaginary(); };

  // g(v) = conj(g(-v)) reads P+_k = (-1)^k conj(P-_k); the v < 0 side is its conjugate.
  bool g_mirror = true;
  std::set<int> keys;
  for (const auto* poly : {&g.plus, &g.minus})
    for (const auto& [k, c] : *poly) keys.insert(k);
  for (int k : keys) {
    auto plus = g.plus.find(k);
    auto minus = g.minus.find(k);
    const GradedSum p = plus == g.plus.end() ? GradedSum{} : plus->second;
    const GradedSum m = minus == g.minus.end() ? GradedSum{} : minus->second.conj();
    if (!(p == (k % 2 == 0 ? m : -m))) g_mirror = false;
  }

  cls.hermitian = dbc.alpha == dbc.beta.conj() && all_of(f.plus, real) && all_of(f.minus, real) &&
                  g_mirror;
  cls.time_reversal = dbc.alpha.value().is_real() && dbc.beta.value().is_real() &&
                      all_of(f.plus, imaginary) && all_of(f.minus, imaginary) &&
                      all_of(g.plus, imaginary) && all_of(g.minus, imaginary);
  cls.both = cls.hermitian && cls.time_reversal;
  return cls;
}

std::map<int, GradedSum> delta_jump_exact(const DistributionKernel& K) {
  std::map<int, GradedSum> jump;
  for (const auto& [key, coeff] : K.combined()) {
    if (key.n != 0 || !weight_jumps(key.wv) || key.m == 0) continue;
    if (key.wu != Weight::one)
      throw PreconditionError("delta_jump_exact: weight in u on a term that jumps across v = 0");
    const int w = weight_on_side(key.wv, 1) - weight_on_side(key.wv, -1);
    add_sided(jump, key.m - 1, coeff * Rational(static_cast<long>(key.m) * w));
  }
  return jump;
}

std::complex<double> delta_jump_check(const DistributionKernel& K, double mu, double hbar) {
  const auto jump = delta_jump_exact(K);
  auto it = jump.find(0);
  return it == jump.end() ? std::complex<double>{} : it->second.evaluate(mu, hbar);
}

PhaseSpaceSeries weyl_transform_distribution(const DistributionKernel& K) {
  PhaseSpaceSeries out;
  for (const auto& [key, coeff] : K.combined()) {
    const int n = key.n;
    const GradedSum base = coeff * rational_pow(2, key.m);
    // delta^(n)(p / hbar) = hbar^(n+1) delta^(n)(p); 1/(i omega)^(n+1) = hbar^(n+1) / (i p)^(n+1)
    const GradedScalar delta_unit(Gaussian::i_pow(n), Grade{0, n + 1});
    const GradedScalar regular_unit(Gaussian::i_pow(-(n + 1)) * factorial(n), Grade{0, n + 1});
    if (key.wv != Weight::one && key.wu != Weight::one)
      throw MalformedSeriesError("weyl_transform_distribution: weights in both u and v");
    switch (key.wv) {
      case Weight::one:
        out.add_delta(key.m, n, key.wu, base * (delta_unit * Rational(2)));
        break;
      case Weight::hplus:
        out.add_delta(key.m, n, Weight::one, base * delta_unit);
        out.add_regular(key.m, n + 1, base * regular_unit);
        break;
      case Weight::hminus:
        out.add_delta(key.m, n, Weight::one, base * delta_unit);
        out.add_regular(key.m, n + 1, base * -regular_unit);
        break;
      case Weight::sgn:
        out.add_regular(key.m, n + 1, base * (regular_unit * Rational(2)));
        break;
    }
  }
  return out;
}

}  // namespace timekernel
