#pragma once

// Modified time kernel equation: closed-form distributional solutions for
// the free particle and the harmonic oscillator, built from piecewise
// polynomial data x^k w(x) with w in {1, sgn, H+, H-}.

#include <complex>
#include <map>
#include <vector>

#include "timekernel/phase_space.hpp"
#include "timekernel/series.hpp"
#include "timekernel/weight.hpp"

namespace timekernel {

/// coeff * x^k * w(x).
struct PiecewiseTerm {
  int k = 0;
  Weight weight = Weight::one;
  GradedScalar coeff;

  friend bool operator==(const PiecewiseTerm&, const PiecewiseTerm&) = default;
};

/// The same function as a polynomial on x > 0 and one on x < 0.
struct SidedPolynomial {
  std::map<int, GradedSum> plus;
  std::map<int, GradedSum> minus;

  friend bool operator==(const SidedPolynomial&, const SidedPolynomial&) = default;
};

SidedPolynomial to_sided(const std::vector<PiecewiseTerm>& terms);

/// Value of the piecewise function at x; `side` picks the limit at x = 0.
std::complex<double> piecewise_evaluate(const std::vector<PiecewiseTerm>& terms, double x,
                                        double mu, double hbar, int side = 1);

/// x^k w  ->  x^(k+2) / (k+2) w, i.e. the map F -> int_0^x y F(y) dy.
std::vector<PiecewiseTerm> moment_integral(const std::vector<PiecewiseTerm>& terms);
/// F_0 = terms, F_s = moment_integral(F_{s-1}) for s <= J.
std::vector<std::vector<PiecewiseTerm>> moment_family(const std::vector<PiecewiseTerm>& terms,
                                                      int J);

struct DistributionBoundary {
  GradedScalar alpha = GradedScalar::real(frac(1, 2));
  GradedScalar beta = GradedScalar::real(frac(1, 2));
  std::vector<PiecewiseTerm> f;
  std::vector<PiecewiseTerm> g;
  /// Reading the f(2q) delta(p) term as a stationary particle needs f(0) = 0.
  bool stationary_particle = false;

  /// Throws InvariantError unless alpha + beta = 1, exponents are
  /// non-negative, and f(0) = 0 whenever stationary_particle is set.
  void validate() const;

  friend bool operator==(const DistributionBoundary&, const DistributionBoundary&) = default;
};

/// coeff * u^m wu(u) * v^n wv(v).
struct DistKey {
  int m = 0;
  int n = 0;
  Weight wu = Weight::one;
  Weight wv = Weight::one;

  friend bool operator==(DistKey, DistKey) = default;
  friend std::strong_ordering operator<=>(DistKey a, DistKey b) {
    if (auto c = a.m + a.n <=> b.m + b.n; c != 0) return c;
    if (auto c = a.m <=> b.m; c != 0) return c;
    if (auto c = static_cast<int>(a.wu) <=> static_cast<int>(b.wu); c != 0) return c;
    return static_cast<int>(a.wv) <=> static_cast<int>(b.wv);
  }
};

using DistSeries = std::map<DistKey, GradedSum>;

void dist_add(DistSeries& series, const DistKey& key, const GradedSum& coeff);

/// Three sums: the Heaviside part (wv in {H+, H-}), the f part (data in u)
/// and the g part (data in v). J is the highest j kept; -1 means exact.
struct DistributionKernel {
  GradedScalar alpha;
  GradedScalar beta;
  DistSeries heaviside;
  DistSeries f_part;
  DistSeries g_part;
  int J = -1;

  DistSeries combined() const;
  /// Value at (u, v); u_side and v_side pick the one-sided limit on an axis.
  std::complex<double> evaluate(double u, double v, double mu, double hbar, int u_side = 1,
                                int v_side = 1) const;

  friend bool operator==(const DistributionKernel&, const DistributionKernel&) = default;
};

/// (mu / 2i hbar) u [alpha H(v) - beta H(-v)] + f(u) + g(v).
DistributionKernel mtke_free_solution(const DistributionBoundary& dbc);

/// Harmonic oscillator with V = mu omega^2 q^2 / 2, sums through j <= J:
///   (mu/2i hbar) sum (mu omega/2 hbar)^(2j) / (2j+1)! u^(2j+1) v^(2j) [alpha H(v) - beta H(-v)]
/// + sum (mu omega/2 hbar)^(2j) v^(2j) / (2^j j!) F_j(u)
/// + sum (mu omega/2 hbar)^(2j) u^(2j) / (2^j j!) G_j(v).
DistributionKernel mtke_ho_solution(const DistributionBoundary& dbc, const Rational& omega, int J);

/// Rewrites a H(v) + b H(-v) as (a+b)/2 + (a-b)/2 sgn(v), termwise.
DistSeries collapse_heaviside(const DistSeries& series);

struct MtkeClass {
  bool hermitian = false;
  bool time_reversal = false;
  bool both = false;

  friend bool operator==(MtkeClass, MtkeClass) = default;
};

/// hermitian: alpha = conj(beta), f real, g(v) = conj(g(-v));
/// time_reversal: alpha, beta real, f and g purely imaginary.
MtkeClass mtke_classify(const DistributionBoundary& dbc);

/// [d/du K](u, 0+) - [d/du K](u, 0-) as an exact polynomial in u.
std::map<int, GradedSum> delta_jump_exact(const DistributionKernel& K);
/// The jump at u = 0; mu / (2i hbar) (alpha + beta) for any solution.
std::complex<double> delta_jump_check(const DistributionKernel& K, double mu, double hbar);

/// Term-by-term Fourier rewriting with t = v and omega = p / hbar. Delta
/// terms carry an implicit factor pi: a stored coefficient c at (m, d, w)
/// stands for pi c w(q) q^m delta^(d)(p).
PhaseSpaceSeries weyl_transform_distribution(const DistributionKernel& K);

}  // namespace timekernel
