#include "timekernel/picard.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "timekernel/errors.hpp"
#include "timekernel/parallel.hpp"

namespace timekernel {

namespace {

using Complex = std::complex<double>;
using Seed = std::function<Complex(double u, double v, int su, int sv)>;

struct MonomialValue {
  int a;
  int b;
  Complex c;
};

std::vector<MonomialValue> difference_monomials(const PolynomialPotential& potential, double mu,
                                                double hbar) {
  std::vector<MonomialValue> out;
  if (potential.is_zero()) return out;
  const auto dv = potential_difference_expand(potential, potential.max_degree());
  for (const FlatTerm& t : dv.flat_terms())
    out.push_back({t.mono.m, t.mono.n, t.coeff.evaluate(mu, hbar)});
  return out;
}

/// Cumulative integral from index 0 over f[0], f[stride], ... with signed step h.
void cumulative_simpson(const Complex* f, std::size_t stride, int n, double h, Complex* out) {
  out[0] = 0;
  if (n == 1) return;
  auto F = [&](int i) -> Complex& { return out[i * stride]; };
  auto y = [&](int i) { return f[i * stride]; };
  if (n == 2) {
    F(1) = h / 2 * (y(0) + y(1));
    return;
  }
  F(1) = h / 12 * (5.0 * y(0) + 8.0 * y(1) - y(2));
  for (int i = 2; i < n; ++i) {
    if (i % 2 == 0)
      F(i) = F(i - 2) + h / 3 * (y(i - 2) + 4.0 * y(i - 1) + y(i));
    else
      F(i) = F(i - 1) + h / 12 * (-y(i - 2) + 8.0 * y(i - 1) + 5.0 * y(i));
  }
}

/// One quadrant: local index (a, b) is the node a steps from u = 0 in
/// direction su and b steps from v = 0 in direction sv.
struct Quadrant {
  int su;
  int sv;
  int lu;
  int lv;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<Complex> dv;  // potential difference at the nodes
  std::vector<Complex> t;   // current iterate
  std::vector<Complex> d;   // latest increment

  Complex& at(std::vector<Complex>& x, int a, int b) { return x[a * lv + b]; }
};

struct Solver {
  const Domain& domain;
  int nu;
  int nv;
  int iu0;
  int iv0;
  double hu;
  double hv;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<Quadrant> quads;

  Solver(const Domain& dom, const GridSpec& grid) : domain(dom), nu(grid.nu), nv(grid.nv) {
    validate_grid(dom, grid);
    const Rational hu_exact = (dom.u_hi - dom.u_lo) / (nu - 1);
    const Rational hv_exact = (dom.v_hi - dom.v_lo) / (nv - 1);
    hu = hu_exact.get_d();
    hv = hv_exact.get_d();
    iu0 = static_cast<int>(Rational(-dom.u_lo / hu_exact).get_d());
    iv0 = static_cast<int>(Rational(-dom.v_lo / hv_exact).get_d());
    for (int i = 0; i < nu; ++i) u.push_back(Rational(dom.u_lo + hu_exact * i).get_d());
    for (int i = 0; i < nv; ++i) v.push_back(Rational(dom.v_lo + hv_exact * i).get_d());
    for (int su : {1, -1})
      for (int sv : {1, -1}) {
        const int lu = su > 0 ? nu - iu0 : iu0 + 1;
        const int lv = sv > 0 ? nv - iv0 : iv0 + 1;
        if (lu < 2 || lv < 2) continue;
        Quadrant q{su, sv, lu, lv, {}, {}, {}, {}, {}};
        for (int a = 0; a < lu; ++a) q.u.push_back(u[iu0 + su * a]);
        for (int b = 0; b < lv; ++b) q.v.push_back(v[iv0 + sv * b]);
        quads.push_back(std::move(q));
      }
  }

  /// c * int_0^u int_0^v (dV * x) on one quadrant.
  std::vector<Complex> integrate(Quadrant& q, const std::vector<Complex>& x, Complex c) const {
    std::vector<Complex> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = q.dv[i] * x[i];
    std::vector<Complex> along_u(x.size());
    parallel_for(q.lv, [&](std::size_t b) {
      cumulative_simpson(g.data() + b, q.lv, q.lu, q.su * hu, along_u.data() + b);
    });
    std::vector<Complex> out(x.size());
    parallel_for(q.lu, [&](std::size_t a) {
      cumulative_simpson(along_u.data() + a * q.lv, 1, q.lv, q.sv * hv, out.data() + a * q.lv);
      for (int b = 0; b < q.lv; ++b) out[a * q.lv + b] *= c;
    });
    return out;
  }

  /// Full-grid view: interior nodes from their quadrant, axis nodes averaged.
  std::vector<Complex> assemble(std::vector<Complex> Quadrant::*field, std::vector<Complex>* upper,
                                std::vector<Complex>* lower) {
    std::vector<Complex> out(static_cast<std::size_t>(nu) * nv);
    std::vector<int> count(out.size(), 0);
    std::vector<Complex> up(nu), lo(nu);
    std::vector<int> nup(nu, 0), nlo(nu, 0);
    for (Quadrant& q : quads) {
      const auto& x = q.*field;
      for (int a = 0; a < q.lu; ++a) {
        const int iu = iu0 + q.su * a;
        for (int b = 0; b < q.lv; ++b) {
          const int iv = iv0 + q.sv * b;
          out[iu * nv + iv] += x[a * q.lv + b];
          ++count[iu * nv + iv];
        }
        if (q.sv > 0) {
          up[iu] += x[a * q.lv];
          ++nup[iu];
        } else {
          lo[iu] += x[a * q.lv];
          ++nlo[iu];
        }
      }
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= count[i];
    if (upper && lower) {
      upper->assign(nu, 0);
      lower->assign(nu, 0);
      for (int i = 0; i < nu; ++i) {
        (*upper)[i] = nup[i] ? up[i] / double(nup[i]) : lo[i] / double(nlo[i]);
        (*lower)[i] = nlo[i] ? lo[i] / double(nlo[i]) : up[i] / double(nup[i]);
      }
    }
    return out;
  }

  GridKernel run(const PolynomialPotential& potential, const Seed& seed, double tol, int max_iter,
                 double mu, double hbar, const PicardExtras& extras) {
    if (!(tol > 0)) throw PreconditionError("picard: tol must be > 0");
    if (max_iter < 1) throw PreconditionError("picard: max_iter must be >= 1");
    if (!(mu > 0) || !(hbar > 0)) throw PreconditionError("picard: mu and hbar must be > 0");
    const auto mono = difference_monomials(potential, mu, hbar);
    const Complex c = mu / (2 * hbar * hbar);

    for (Quadrant& q : quads) {
      const std::size_t size = static_cast<std::size_t>(q.lu) * q.lv;
      q.dv.assign(size, 0);
      q.t.assign(size, 0);
      std::vector<Complex> t0(size);
      parallel_for(q.lu, [&](std::size_t a) {
        for (int b = 0; b < q.lv; ++b) {
          Complex sum = 0;
          for (const MonomialValue& mv : mono)
            sum += mv.c * (std::pow(q.u[a], mv.a) * std::pow(q.v[b], mv.b));
          q.dv[a * q.lv + b] = sum;
          t0[a * q.lv + b] = seed(q.u[a], q.v[b], q.su, q.sv);
          q.t[a * q.lv + b] = extras.initial_guess ? extras.initial_guess(q.u[a], q.v[b])
                                                   : t0[a * q.lv + b];
        }
      });
      // first increment: T0 + c I[dV guess] - guess
      q.d = integrate(q, q.t, c);
      for (std::size_t i = 0; i < size; ++i) q.d[i] += t0[i] - q.t[i];
    }

    GridKernel out;
    for (int iter = 1;; ++iter) {
      double delta = 0;
      for (Quadrant& q : quads)
        for (std::size_t i = 0; i < q.t.size(); ++i) {
          q.t[i] += q.d[i];
          delta = std::max(delta, std::abs(q.d[i]));
        }
      if (extras.observer) extras.observer(iter, assemble(&Quadrant::d, nullptr, nullptr));
      out.iterations_used = iter;
      out.final_delta = delta;
      if (delta <= tol) break;
      if (iter >= max_iter)
        throw NonConvergenceError("picard iteration did not reach tol " + std::to_string(tol) +
                                      " in " + std::to_string(max_iter) + " sweeps",
                                  delta, iter);
      for (Quadrant& q : quads) q.d = integrate(q, q.d, c);
    }

    out.domain = domain;
    out.nu = nu;
    out.nv = nv;
    out.u = u;
    out.v = v;
    out.values = assemble(&Quadrant::t, &out.v_zero_upper, &out.v_zero_lower);
    return out;
  }
};

}  // namespace

void validate_grid(const Domain& domain, const GridSpec& grid) {
  if (grid.nu < 3 || grid.nv < 3 || grid.nu % 2 == 0 || grid.nv % 2 == 0)
    throw PreconditionError("grid point counts must be odd and >= 3, got " +
                            std::to_string(grid.nu) + "x" + std::to_string(grid.nv));
  auto check = [](const Rational& lo, const Rational& hi, int n, const char* name) {
    if (!(lo < hi) || sgn(lo) > 0 || sgn(hi) < 0)
      throw PreconditionError(std::string("domain ") + name + " must satisfy lo <= 0 <= hi, lo < hi");
    const Rational index = -lo * (n - 1) / (hi - lo);
    if (index.get_den() != 1)
      throw PreconditionError(std::string("domain ") + name + ": 0 is not a grid node");
  };
  check(domain.u_lo, domain.u_hi, grid.nu, "u");
  check(domain.v_lo, domain.v_hi, grid.nv, "v");
}

GridKernel picard_solve(const PolynomialPotential& potential, const BoundaryConditionSpec& bc,
                        const Domain& domain, const GridSpec& grid, double tol, int max_iter,
                        double mu, double hbar, const PicardExtras& extras) {
  bc.validate();
  const double slope = bc.slope.get_d();
  const Complex c0 = bc.c.evaluate(mu, hbar);
  std::vector<std::pair<int, Complex>> g;
  for (const auto& [k, beta] : bc.g) g.emplace_back(k, beta.evaluate(mu, hbar));
  const Seed seed = [=](double u, double v, int, int) {
    Complex value = slope * u + c0;
    for (const auto& [k, b] : g) value += b * std::pow(v, k);
    return value;
  };
  Solver solver(domain, grid);
  return solver.run(potential, seed, tol, max_iter, mu, hbar, extras);
}

GridKernel picard_solve_mtke(const PolynomialPotential& potential,
                             const DistributionBoundary& dbc, const Domain& domain,
                             const GridSpec& grid, double tol, int max_iter, double mu,
                             double hbar, const PicardExtras& extras) {
  dbc.validate();
  const Complex alpha = dbc.alpha.evaluate(mu, hbar);
  const Complex beta = dbc.beta.evaluate(mu, hbar);
  const Complex scale = mu / (2.0 * Complex(0, 1) * hbar);
  const Seed seed = [=](double u, double v, int su, int sv) {
    const int side = v > 0 ? 1 : (v < 0 ? -1 : sv);
    const Complex heaviside = side > 0 ? alpha : -beta;
    return scale * u * heaviside + piecewise_evaluate(dbc.f, u, mu, hbar, su) +
           piecewise_evaluate(dbc.g, v, mu, hbar, sv);
  };
  Solver solver(domain, grid);
  return solver.run(potential, seed, tol, max_iter, mu, hbar, extras);
}

double potential_difference_bound(const PolynomialPotential& potential, double U, double W,
                                  double mu, double hbar) {
  double M = 0;
  for (const MonomialValue& mv : difference_monomials(potential, mu, hbar))
    M += std::abs(mv.c) * std::pow(U, mv.a) * std::pow(W, mv.b);
  return M;
}

double picard_bound_at(const BoundaryConditionSpec& bc, int j, double u, double v, double M,
                       double mu, double hbar) {
  if (j < 1) throw PreconditionError("picard_bound needs j >= 1");
  const double au = std::abs(u);
  const double av = std::abs(v);
  double lead = 1;
  for (int i = 1; i <= j; ++i) lead *= (mu * M / (2 * hbar * hbar)) * au * av / i;
  double envelope = au;
  auto add = [&](int k, double magnitude) {
    double denom = 1;
    for (int i = 1; i <= j; ++i) denom *= k + i;
    envelope += magnitude * std::pow(av, k) / denom;
  };
  if (!bc.c.is_zero()) add(0, std::abs(bc.c.evaluate(mu, hbar)));
  for (const auto& [k, beta] : bc.g) add(k, std::abs(beta.evaluate(mu, hbar)));
  return lead * envelope;
}

double picard_bound(const PolynomialPotential& potential, const BoundaryConditionSpec& bc,
                    const Domain& domain, int j, double mu, double hbar) {
  const double U = std::max(std::abs(domain.u_lo.get_d()), std::abs(domain.u_hi.get_d()));
  const double W = std::max(std::abs(domain.v_lo.get_d()), std::abs(domain.v_hi.get_d()));
  const double M = potential_difference_bound(potential, U, W, mu, hbar);
  return picard_bound_at(bc, j, U, W, M, mu, hbar);
}

double harmonic_toa_kernel(double u, double v, double mu, double hbar, double omega) {
  const double z = mu * omega / (2 * hbar) * u * v;
  if (std::abs(z) < 1e-8) return u / 4 * (1 + z * z / 6);
  return u / 4 * std::sinh(z) / z;
}

}  // namespace timekernel
