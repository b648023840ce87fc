#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "timekernel/errors.hpp"
#include "timekernel/mtke.hpp"
#include "timekernel/tke.hpp"

using namespace timekernel;
using th::re;
using th::im;

namespace {

const GradedScalar kHalf = GradedScalar::real(frac(1, 2));

DistributionBoundary toa_data() { return {}; }

DistributionBoundary weights(long a_num, long a_den, long b_num, long b_den) {
  DistributionBoundary d;
  d.alpha = re(a_num, a_den);
  d.beta = re(b_num, b_den);
  return d;
}

/// -(mu/hbar) v sgn(v)
PiecewiseTerm abs_v_term() { return {1, Weight::sgn, re(-1, 1, 1, -1)}; }

/// mu / (2 i hbar) * x
GradedSum jump_unit(const GradedScalar& x) {
  return GradedSum(GradedScalar(Gaussian(0, frac(-1, 2)), Grade{1, -1}) * x);
}

}  // namespace

TEST_CASE("free solution with alpha = beta = 1/2 is (mu / 4i hbar) u sgn(v)") {
  const auto k = mtke_free_solution(toa_data());
  const auto collapsed = collapse_heaviside(k.heaviside);
  CHECK(collapsed.size() == 1);
  CHECK(collapsed.at({1, 0, Weight::one, Weight::sgn}) == th::sum(im(-1, 4, 1, -1)));
  CHECK(k.f_part.empty());
  CHECK(k.g_part.empty());
}

TEST_CASE("free solution with alpha = 1 is (mu / 2i hbar) u H(v)") {
  const auto k = mtke_free_solution(weights(1, 1, 0, 1));
  CHECK(k.heaviside.size() == 1);
  CHECK(k.heaviside.at({1, 0, Weight::one, Weight::hplus}) == th::sum(im(-1, 2, 1, -1)));
}

TEST_CASE("free solution carries g on its own") {
  DistributionBoundary d;
  d.g = {abs_v_term()};
  const auto k = mtke_free_solution(d);
  CHECK(k.g_part.size() == 1);
  CHECK(k.g_part.at({0, 1, Weight::one, Weight::sgn}) == th::sum(re(-1, 1, 1, -1)));
}

TEST_CASE("boundary validation") {
  CHECK_THROWS_AS(mtke_free_solution(weights(1, 2, 1, 3)), InvariantError);
  DistributionBoundary d;
  d.f = {{0, Weight::hplus, re(1)}};
  d.stationary_particle = true;
  CHECK_THROWS_AS(d.validate(), InvariantError);
  d.f = {{0, Weight::one, re(1)}, {0, Weight::one, re(-1)}, {2, Weight::sgn, re(1)}};
  CHECK_NOTHROW(d.validate());
}

TEST_CASE("harmonic Heaviside coefficients") {
  const Rational omega = frac(4, 3);
  const auto k = mtke_ho_solution(toa_data(), omega, 3);
  for (int j = 0; j <= 3; ++j) {
    const mpq_class c = oracle::ipow(omega / 2, 2 * j) / oracle::fact(2 * j + 1) / 2;
    const GradedSum plus(GradedScalar(Gaussian(0, -c), Grade{1 + 2 * j, -1 - 2 * j}) * kHalf);
    CHECK(k.heaviside.at({2 * j + 1, 2 * j, Weight::one, Weight::hplus}) == plus);
    CHECK(k.heaviside.at({2 * j + 1, 2 * j, Weight::one, Weight::hminus}) == -plus);
  }
  CHECK(k.heaviside.size() == 8);
}

TEST_CASE("moment family of u^2 and of v sgn(v)") {
  const auto F = moment_family({{2, Weight::one, re(1)}}, 2);
  CHECK(F[1] == std::vector<PiecewiseTerm>{{4, Weight::one, re(1, 4)}});
  CHECK(F[2] == std::vector<PiecewiseTerm>{{6, Weight::one, re(1, 24)}});
  const auto G = moment_family({{1, Weight::sgn, re(1)}}, 1);
  CHECK(G[1] == std::vector<PiecewiseTerm>{{3, Weight::sgn, re(1, 3)}});
}

TEST_CASE("moment integral stays in the family and matches quadrature for every weight") {
  const std::vector<std::pair<Weight, double (*)(double)>> cases{
      {Weight::one, [](double) { return 1.0; }},
      {Weight::sgn, [](double y) { return y > 0 ? 1.0 : (y < 0 ? -1.0 : 0.0); }},
      {Weight::hplus, [](double y) { return y > 0 ? 1.0 : 0.0; }},
      {Weight::hminus, [](double y) { return y < 0 ? 1.0 : 0.0; }}};
  for (const auto& [w, fn] : cases)
    for (int k = 0; k <= 4; ++k) {
      const auto next = moment_integral({{k, w, re(1)}});
      REQUIRE(next.size() == 1);
      CHECK(next[0].weight == w);
      CHECK(next[0].k == k + 2);
      for (double x : {0.7, -0.7, 1.3, -1.1}) {
        const double got = piecewise_evaluate(next, x, 1, 1).real();
        CHECK(std::abs(got - oracle::moment_numeric(k, fn, x)) < 1e-10);
      }
    }
}

TEST_CASE("harmonic solution satisfies the equation away from v = 0") {
  DistributionBoundary d;
  d.alpha = GradedScalar(Gaussian(frac(1, 2), frac(1, 3)), Grade{});
  d.beta = GradedScalar(Gaussian(frac(1, 2), frac(-1, 3)), Grade{});
  d.f = {{2, Weight::one, re(1)}, {1, Weight::hminus, im(1, 2)}};
  d.g = {{1, Weight::sgn, re(-1, 1, 1, -1)}, {2, Weight::hplus, re(3, 4)}};
  const double mu = 1.2, hbar = 0.9, w = 1.1, h = 1e-3;
  const auto k = mtke_ho_solution(d, Rational(11, 10), 25);
  for (double u : {0.4, -0.6})
    for (double v : {0.3, -0.5}) {
      auto T = [&](double x, double y) { return k.evaluate(x, y, mu, hbar); };
      const auto tuv = (T(u + h, v + h) - T(u + h, v - h) - T(u - h, v + h) + T(u - h, v - h)) / (4 * h * h);
      const double dv = mu * w * w * u * v / 2;
      const auto residual = -(2 * hbar * hbar / mu) * tuv + dv * T(u, v);
      CHECK(std::abs(residual) < 1e-5);
    }
}

TEST_CASE("classification examples") {
  DistributionBoundary both;
  both.g = {{2, Weight::sgn, im(3, 2)}, {1, Weight::one, im(1)}};
  CHECK(mtke_classify(both) == MtkeClass{true, true, true});
  CHECK(mtke_classify(weights(1, 1, 0, 1)) == MtkeClass{false, true, false});
  DistributionBoundary abs_v;
  abs_v.g = {abs_v_term()};
  CHECK(mtke_classify(abs_v) == MtkeClass{true, false, false});
}

TEST_CASE("classification of f and of complex weights") {
  DistributionBoundary d;
  d.alpha = GradedScalar(Gaussian(frac(1, 2), 2), Grade{});
  d.beta = GradedScalar(Gaussian(frac(1, 2), -2), Grade{});
  d.f = {{3, Weight::hplus, re(2)}};
  CHECK(mtke_classify(d) == MtkeClass{true, false, false});
  d.f = {{3, Weight::hplus, im(2)}};
  CHECK(mtke_classify(d) == MtkeClass{false, false, false});
  d.alpha = kHalf;
  d.beta = kHalf;
  CHECK(mtke_classify(d) == MtkeClass{false, true, false});
}

TEST_CASE("derivative jump across v = 0") {
  const double mu = 1.5, hbar = 0.5;
  const std::complex<double> want(0, -mu / (2 * hbar));
  CHECK(std::abs(delta_jump_check(mtke_free_solution(toa_data()), mu, hbar) - want) < 1e-15);
  CHECK(std::abs(delta_jump_check(mtke_free_solution(weights(1, 1, 0, 1)), mu, hbar) - want) < 1e-15);
  CHECK(std::abs(delta_jump_check(mtke_ho_solution(toa_data(), 2, 3), mu, hbar) - want) < 1e-15);
  DistributionBoundary busy = weights(3, 2, -1, 2);
  busy.f = {{0, Weight::sgn, re(1)}, {3, Weight::one, im(2)}};
  busy.g = {{0, Weight::sgn, re(5)}, {1, Weight::hplus, re(1)}};
  const auto k = mtke_ho_solution(busy, frac(1, 2), 4);
  const auto jump = delta_jump_exact(k);
  CHECK(jump.size() == 1);
  CHECK(jump.at(0) == jump_unit(re(1)));
}

TEST_CASE("Weyl image: free, alpha = beta") {
  const auto s = weyl_transform_distribution(mtke_free_solution(toa_data()));
  CHECK(s.regular().size() == 1);
  CHECK(s.regular_coefficient(1, 1) == th::sum(re(-1, 1, 1, 0)));
  CHECK_FALSE(s.has_delta());
}

TEST_CASE("Weyl image: free, alpha != beta adds -i pi mu q (alpha - beta) delta(p)") {
  const auto s = weyl_transform_distribution(mtke_free_solution(weights(1, 1, 0, 1)));
  CHECK(s.regular_coefficient(1, 1) == th::sum(re(-1, 1, 1, 0)));
  CHECK(s.delta().size() == 1);
  CHECK(s.delta_coefficient(1, 0) == th::sum(im(-1, 1, 1, 0)));
  const auto t = weyl_transform_distribution(mtke_free_solution(weights(2, 3, 1, 3)));
  CHECK(t.delta_coefficient(1, 0) == th::sum(im(-1, 3, 1, 0)));
}

TEST_CASE("Weyl image: g = -(mu/hbar) v sgn(v) adds 2 mu hbar / p^2") {
  DistributionBoundary d;
  d.g = {abs_v_term()};
  const auto s = weyl_transform_distribution(mtke_free_solution(d));
  CHECK(s.regular().size() == 2);
  CHECK(s.regular_coefficient(0, 2) == th::sum(re(2, 1, 1, 1)));
  CHECK_FALSE(s.has_delta());
}

TEST_CASE("Weyl image: f adds 2 pi hbar f(2q) delta(p)") {
  DistributionBoundary d;
  d.f = {{2, Weight::one, re(3)}, {1, Weight::sgn, im(1, 5)}};
  d.stationary_particle = true;
  const auto s = weyl_transform_distribution(mtke_free_solution(d));
  CHECK(s.delta_coefficient(2, 0, Weight::one) == th::sum(re(24, 1, 0, 1)));
  CHECK(s.delta_coefficient(1, 0, Weight::sgn) == th::sum(im(4, 5, 0, 1)));
}

TEST_CASE("Hermitian data give a real Weyl image") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Rational y = th::random_rational(rng);
    DistributionBoundary d;
    d.alpha = GradedScalar(Gaussian(frac(1, 2), y), Grade{});
    d.beta = GradedScalar(Gaussian(frac(1, 2), -y), Grade{});
    d.f = {{static_cast<int>(rng() % 4), Weight::sgn, GradedScalar::real(th::random_rational(rng))},
           {static_cast<int>(rng() % 4), Weight::hplus, GradedScalar::real(th::random_rational(rng))}};
    const Gaussian c = th::random_gaussian(rng);
    const int k = static_cast<int>(rng() % 4);
    // g(v) = c v^k H(v) + (-1)^k conj(c) v^k H(-v)
    d.g = {{k, Weight::hplus, GradedScalar(c, Grade{})},
           {k, Weight::hminus, GradedScalar(k % 2 == 0 ? c.conj() : -c.conj(), Grade{})}};
    REQUIRE(mtke_classify(d).hermitian);
    CHECK(weyl_transform_distribution(mtke_free_solution(d)).is_real());
    CHECK(weyl_transform_distribution(mtke_ho_solution(d, frac(2, 3), 4)).is_real());
  }
}

TEST_CASE("both symmetries remove every delta term") {
  DistributionBoundary d;
  d.g = {{2, Weight::sgn, im(5, 3)}, {4, Weight::sgn, im(-1, 2, 1, -2)}};
  REQUIRE(mtke_classify(d).both);
  CHECK_FALSE(weyl_transform_distribution(mtke_free_solution(d)).has_delta());
  CHECK_FALSE(weyl_transform_distribution(mtke_ho_solution(d, 3, 4)).has_delta());
  CHECK_FALSE(weyl_transform_distribution(mtke_ho_solution(toa_data(), 3, 4)).has_delta());
}

TEST_CASE("an odd polynomial g keeps a delta derivative even with both symmetries") {
  DistributionBoundary d;
  d.g = {{1, Weight::one, im(1)}};
  REQUIRE(mtke_classify(d).both);
  const auto s = weyl_transform_distribution(mtke_free_solution(d));
  CHECK(s.delta_coefficient(0, 1) == th::sum(re(-2, 1, 0, 2)));
}

TEST_CASE("harmonic solution with alpha = beta = 1/2 is (mu / i hbar) T sgn(v) termwise") {
  const Rational omega = frac(5, 4);
  const int J = 5;
  const auto k = mtke_ho_solution(toa_data(), omega, J);
  const auto T = solve_tke(PolynomialPotential::harmonic(omega), BoundaryConditionSpec::toa(), 4 * J + 1);
  DistSeries want;
  for (const auto& [mono, c] : T.terms())
    dist_add(want, {mono.m, mono.n, Weight::one, Weight::sgn}, c * im(-1, 1, 1, -1));
  CHECK(collapse_heaviside(k.heaviside) == want);
}
