#include "timekernel/json_io.hpp"

#include <cstdio>
#include <stdexcept>

#include "timekernel/errors.hpp"

namespace timekernel {

namespace {

std::string at_index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

std::string at_key(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const Json& expect_array(const Json& j, const std::string& path, std::size_t size = 0) {
  if (!j.is_array()) throw ValidationError(path, "expected an array");
  if (size != 0 && j.size() != size)
    throw ValidationError(path, "expected " + std::to_string(size) + " entries, got " +
                                    std::to_string(j.size()));
  return j;
}

const Json& expect_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  return j;
}

int expect_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ValidationError(path, "expected an integer");
  const auto value = j.get<long long>();
  if (value < -1000000 || value > 1000000) throw ValidationError(path, "integer out of range");
  return static_cast<int>(value);
}

std::string expect_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path, "expected a string");
  return j.get<std::string>();
}

void reject_unknown(const Json& j, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError(at_key(path, key), "unknown field");
  }
}

Weight weight_from_json(const Json& j, const std::string& path) {
  const auto w = parse_weight(expect_string(j, path));
  if (!w) throw ValidationError(path, "weight must be one of one, sgn, hplus, hminus");
  return *w;
}

Json dist_series_to_json(const DistSeries& s) {
  Json out = Json::array();
  for (const auto& [key, sum] : s)
    for (const auto& [grade, value] : sum)
      out.push_back({key.m, key.n, weight_tag(key.wu), weight_tag(key.wv),
                     scalar_to_json(GradedScalar(value, grade))});
  return out;
}

DistSeries dist_series_from_json(const Json& j, const std::string& path) {
  DistSeries out;
  expect_array(j, path);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = at_index(path, i);
    const Json& e = expect_array(j[i], p, 5);
    dist_add(out,
             {expect_int(e[0], p + "[0]"), expect_int(e[1], p + "[1]"),
              weight_from_json(e[2], p + "[2]"), weight_from_json(e[3], p + "[3]")},
             GradedSum(scalar_from_json(e[4], p + "[4]")));
  }
  return out;
}

Json table_to_json(const std::map<std::pair<int, int>, GradedSum>& entries) {
  Json out = Json::array();
  for (const auto& [key, sum] : entries)
    for (const auto& [grade, value] : sum)
      out.push_back({key.first, key.second, scalar_to_json(GradedScalar(value, grade))});
  return out;
}

}  // namespace

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ValidationError("", "malformed JSON at line " + std::to_string(line) + ", column " +
                                  std::to_string(column) + ": " + e.what());
  }
}

Json rational_to_json(const Rational& r) { return format_rational(r); }

Rational rational_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw ValidationError(path, "expected a rational string \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(path, e.what());
  }
}

Json scalar_to_json(const GradedScalar& s) {
  return Json{{"re", format_rational(s.value().re)},
              {"im", format_rational(s.value().im)},
              {"mu", s.mu_exp()},
              {"hbar", s.hbar_exp()}};
}

GradedScalar scalar_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) return GradedScalar::real(rational_from_json(j, path));
  reject_unknown(j, path, {"re", "im", "mu", "hbar"});
  Rational re = j.contains("re") ? rational_from_json(j["re"], at_key(path, "re")) : Rational(0);
  Rational im = j.contains("im") ? rational_from_json(j["im"], at_key(path, "im")) : Rational(0);
  const int mu = j.contains("mu") ? expect_int(j["mu"], at_key(path, "mu")) : 0;
  const int hbar = j.contains("hbar") ? expect_int(j["hbar"], at_key(path, "hbar")) : 0;
  return GradedScalar(Gaussian(re, im), Grade{mu, hbar});
}

Json series_to_json(const BivariateSeries& s) {
  Json out = Json::array();
  for (const FlatTerm& t : s.flat_terms())
    out.push_back({t.mono.m, t.mono.n, t.coeff.hbar_exp(), scalar_to_json(t.coeff)});
  return out;
}

BivariateSeries series_from_json(const Json& j, const std::string& path) {
  BivariateSeries out;
  expect_array(j, path);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = at_index(path, i);
    const Json& e = expect_array(j[i], p, 4);
    const int m = expect_int(e[0], p + "[0]");
    const int n = expect_int(e[1], p + "[1]");
    const int hbar = expect_int(e[2], p + "[2]");
    if (m < 0 || n < 0) throw ValidationError(p, "exponents must be >= 0");
    GradedScalar s = scalar_from_json(e[3], p + "[3]");
    if (!e[3].is_object() || !e[3].contains("hbar"))
      s = GradedScalar(s.value(), Grade{s.mu_exp(), hbar});
    else if (!s.is_zero() && s.hbar_exp() != hbar)
      throw ValidationError(p, "hbar exponent disagrees with the scalar's");
    out.add(m, n, s);
  }
  return out;
}

Json potential_to_json(const PolynomialPotential& v) {
  Json out = Json::array();
  for (const auto& [s, a] : v.coeffs()) out.push_back({s, scalar_to_json(a)});
  return out;
}

PolynomialPotential potential_from_json(const Json& j, const std::string& path) {
  PolynomialPotential v;
  expect_array(j, path);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = at_index(path, i);
    const Json& e = expect_array(j[i], p, 2);
    const int s = expect_int(e[0], p + "[0]");
    if (s < 1) throw ValidationError(p + "[0]", "potential degree must be >= 1");
    if (s > 64) throw ValidationError(p + "[0]", "potential degree above 64");
    GradedSum total(v.coefficient(s));
    total += GradedSum(scalar_from_json(e[1], p + "[1]"));
    try {
      v.set(s, total.as_scalar());
    } catch (const InvariantError& err) {
      throw ValidationError(p, err.what());
    }
  }
  return v;
}

Json boundary_to_json(const BoundaryConditionSpec& bc) {
  Json g = Json::array();
  for (const auto& [k, beta] : bc.g) g.push_back({k, scalar_to_json(beta)});
  return Json{{"slope", format_rational(bc.slope)}, {"c", scalar_to_json(bc.c)}, {"g", g}};
}

BoundaryConditionSpec boundary_from_json(const Json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"slope", "c", "g"});
  BoundaryConditionSpec bc;
  if (j.contains("slope")) bc.slope = rational_from_json(j["slope"], at_key(path, "slope"));
  if (j.contains("c")) bc.c = scalar_from_json(j["c"], at_key(path, "c"));
  if (j.contains("g")) {
    const std::string gp = at_key(path, "g");
    expect_array(j["g"], gp);
    for (std::size_t i = 0; i < j["g"].size(); ++i) {
      const std::string p = at_index(gp, i);
      const Json& e = expect_array(j["g"][i], p, 2);
      const int k = expect_int(e[0], p + "[0]");
      if (k < 1) throw ValidationError(p + "[0]", "g power must be >= 1 (g(0) = 0)");
      if (bc.g.count(k)) throw ValidationError(p + "[0]", "duplicate g power");
      const GradedScalar beta = scalar_from_json(e[1], p + "[1]");
      if (!beta.is_zero()) bc.g[k] = beta;
    }
  }
  try {
    bc.validate();
  } catch (const InvariantError& e) {
    throw ValidationError(path, e.what());
  }
  return bc;
}

Json shift_to_json(const ShiftSpec& s) {
  return Json{{"shift", {{"N", s.N}, {"beta", format_rational(s.beta)}}}};
}

ShiftSpec shift_from_json(const Json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"shift"});
  const std::string sp = at_key(path, "shift");
  const Json& s = expect_object(j.at("shift"), sp);
  reject_unknown(s, sp, {"N", "beta"});
  if (!s.contains("N") || !s.contains("beta")) throw ValidationError(sp, "needs N and beta");
  ShiftSpec out{expect_int(s["N"], at_key(sp, "N")), rational_from_json(s["beta"], at_key(sp, "beta"))};
  if (out.N < 1) throw ValidationError(at_key(sp, "N"), "N must be >= 1");
  return out;
}

Json piecewise_to_json(const std::vector<PiecewiseTerm>& terms) {
  Json out = Json::array();
  for (const PiecewiseTerm& t : terms)
    out.push_back({t.k, weight_tag(t.weight), scalar_to_json(t.coeff)});
  return out;
}

std::vector<PiecewiseTerm> piecewise_from_json(const Json& j, const std::string& path) {
  std::vector<PiecewiseTerm> out;
  expect_array(j, path);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = at_index(path, i);
    const Json& e = expect_array(j[i], p, 3);
    const int k = expect_int(e[0], p + "[0]");
    if (k < 0) throw ValidationError(p + "[0]", "power must be >= 0");
    out.push_back({k, weight_from_json(e[1], p + "[1]"), scalar_from_json(e[2], p + "[2]")});
  }
  return out;
}

Json distribution_boundary_to_json(const DistributionBoundary& d) {
  Json out{{"alpha", scalar_to_json(d.alpha)},
           {"beta", scalar_to_json(d.beta)},
           {"f", piecewise_to_json(d.f)},
           {"g", piecewise_to_json(d.g)}};
  if (d.stationary_particle) out["stationary_particle"] = true;
  return out;
}

DistributionBoundary distribution_boundary_from_json(const Json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"alpha", "beta", "f", "g", "stationary_particle"});
  DistributionBoundary d;
  if (j.contains("alpha")) d.alpha = scalar_from_json(j["alpha"], at_key(path, "alpha"));
  if (j.contains("beta")) d.beta = scalar_from_json(j["beta"], at_key(path, "beta"));
  if (j.contains("f")) d.f = piecewise_from_json(j["f"], at_key(path, "f"));
  if (j.contains("g")) d.g = piecewise_from_json(j["g"], at_key(path, "g"));
  if (j.contains("stationary_particle")) {
    if (!j["stationary_particle"].is_boolean())
      throw ValidationError(at_key(path, "stationary_particle"), "expected a boolean");
    d.stationary_particle = j["stationary_particle"].get<bool>();
  }
  try {
    d.validate();
  } catch (const InvariantError& e) {
    throw ValidationError(path, e.what());
  }
  return d;
}

Json phase_space_to_json(const PhaseSpaceSeries& s) {
  Json regular = Json::array();
  for (const auto& [key, sum] : s.regular())
    for (const auto& [grade, value] : sum)
      regular.push_back({key.m, key.j, scalar_to_json(GradedScalar(value, grade))});
  Json delta = Json::array();
  for (const auto& [key, sum] : s.delta())
    for (const auto& [grade, value] : sum)
      delta.push_back(
          {key.m, key.d, weight_tag(key.weight), scalar_to_json(GradedScalar(value, grade))});
  return Json{{"regular", regular}, {"delta", delta}};
}

PhaseSpaceSeries phase_space_from_json(const Json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"regular", "delta"});
  PhaseSpaceSeries out;
  if (j.contains("regular")) {
    const std::string rp = at_key(path, "regular");
    expect_array(j["regular"], rp);
    for (std::size_t i = 0; i < j["regular"].size(); ++i) {
      const std::string p = at_index(rp, i);
      const Json& e = expect_array(j["regular"][i], p, 3);
      out.add_regular(expect_int(e[0], p + "[0]"), expect_int(e[1], p + "[1]"),
                      GradedSum(scalar_from_json(e[2], p + "[2]")));
    }
  }
  if (j.contains("delta")) {
    const std::string dp = at_key(path, "delta");
    expect_array(j["delta"], dp);
    for (std::size_t i = 0; i < j["delta"].size(); ++i) {
      const std::string p = at_index(dp, i);
      const Json& e = expect_array(j["delta"][i], p, 4);
      out.add_delta(expect_int(e[0], p + "[0]"), expect_int(e[1], p + "[1]"),
                    weight_from_json(e[2], p + "[2]"),
                    GradedSum(scalar_from_json(e[3], p + "[3]")));
    }
  }
  return out;
}

Json dist_kernel_to_json(const DistributionKernel& k) {
  return Json{{"alpha", scalar_to_json(k.alpha)},
              {"beta", scalar_to_json(k.beta)},
              {"J", k.J},
              {"heaviside", dist_series_to_json(k.heaviside)},
              {"f_part", dist_series_to_json(k.f_part)},
              {"g_part", dist_series_to_json(k.g_part)}};
}

DistributionKernel dist_kernel_from_json(const Json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"alpha", "beta", "J", "heaviside", "f_part", "g_part"});
  DistributionKernel k;
  k.alpha = scalar_from_json(j.at("alpha"), at_key(path, "alpha"));
  k.beta = scalar_from_json(j.at("beta"), at_key(path, "beta"));
  k.J = expect_int(j.at("J"), at_key(path, "J"));
  k.heaviside = dist_series_from_json(j.at("heaviside"), at_key(path, "heaviside"));
  k.f_part = dist_series_from_json(j.at("f_part"), at_key(path, "f_part"));
  k.g_part = dist_series_from_json(j.at("g_part"), at_key(path, "g_part"));
  return k;
}

Json c_table_to_json(const CoefficientTable& t) { return table_to_json(t.entries); }

Json leading_shift_to_json(const LeadingShiftTable& t) { return table_to_json(t.entries); }

Json domain_to_json(const Domain& d) {
  return Json{{"u", {format_rational(d.u_lo), format_rational(d.u_hi)}},
              {"v", {format_rational(d.v_lo), format_rational(d.v_hi)}}};
}

Domain domain_from_json(const Json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"u", "v"});
  Domain d;
  if (j.contains("u")) {
    const Json& u = expect_array(j["u"], at_key(path, "u"), 2);
    d.u_lo = rational_from_json(u[0], at_key(path, "u") + "[0]");
    d.u_hi = rational_from_json(u[1], at_key(path, "u") + "[1]");
  }
  if (j.contains("v")) {
    const Json& v = expect_array(j["v"], at_key(path, "v"), 2);
    d.v_lo = rational_from_json(v[0], at_key(path, "v") + "[0]");
    d.v_hi = rational_from_json(v[1], at_key(path, "v") + "[1]");
  }
  return d;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_grid_csv(std::ostream& out, const GridKernel& grid) {
  out << "u,v,re,im\n";
  for (int iu = 0; iu < grid.nu; ++iu)
    for (int iv = 0; iv < grid.nv; ++iv) {
      const auto& z = grid.at(iu, iv);
      out << format_double(grid.u[iu]) << ',' << format_double(grid.v[iv]) << ','
          << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
    }
}

void write_phase_space_csv(std::ostream& out, const PhaseSpaceSeries& s) {
  out << "m,j_or_d,kind,hbar,mu,re,im\n";
  for (const auto& [key, sum] : s.regular())
    for (const auto& [grade, value] : sum)
      out << key.m << ',' << key.j << ",regular," << grade.hbar << ',' << grade.mu << ','
          << format_rational(value.re) << ',' << format_rational(value.im) << '\n';
  for (const auto& [key, sum] : s.delta())
    for (const auto& [grade, value] : sum)
      out << key.m << ',' << key.d << ",delta_" << weight_tag(key.weight) << ',' << grade.hbar
          << ',' << grade.mu << ',' << format_rational(value.re) << ','
          << format_rational(value.im) << '\n';
}

void write_series_csv(std::ostream& out, const BivariateSeries& s) {
  out << "m,n,hbar,mu,re,im\n";
  for (const FlatTerm& t : s.flat_terms())
    out << t.mono.m << ',' << t.mono.n << ',' << t.coeff.hbar_exp() << ',' << t.coeff.mu_exp()
        << ',' << format_rational(t.coeff.value().re) << ','
        << format_rational(t.coeff.value().im) << '\n';
}

void write_table_csv(std::ostream& out, const std::map<std::pair<int, int>, GradedSum>& entries) {
  out << "m,j,re,im,mu,hbar\n";
  for (const auto& [key, sum] : entries)
    for (const auto& [grade, value] : sum)
      out << key.first << ',' << key.second << ',' << format_rational(value.re) << ','
          << format_rational(value.im) << ',' << grade.mu << ',' << grade.hbar << '\n';
}

}  // namespace timekernel
