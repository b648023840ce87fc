#include "timekernel/cli_app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include "timekernel/errors.hpp"
#include "timekernel/parallel.hpp"

namespace timekernel::cli {

namespace {

/// A failed mathematical check: the job ran but the answer is "no".
class CheckFailed : public Error {
 public:
  using Error::Error;
};

struct Output {
  Json json;
  std::string csv;
  int code = kExitOk;
};

int get_int(const Json& j, const char* key, int fallback, int lo, int hi) {
  if (!j.contains(key)) return fallback;
  const Json& v = j[key];
  if (!v.is_number_integer()) throw ValidationError(key, "expected an integer");
  const long long x = v.get<long long>();
  if (x < lo || x > hi)
    throw ValidationError(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(x);
}

Rational get_positive_rational(const Json& j, const char* key, const Rational& fallback) {
  if (!j.contains(key)) return fallback;
  Rational r = rational_from_json(j[key], key);
  if (sgn(r) <= 0) throw ValidationError(key, "must be > 0");
  return r;
}

PotentialSpec potential_spec_from_json(const Json& j) {
  PotentialSpec spec;
  if (j.is_array()) {
    spec.coeffs = potential_from_json(j, "potential");
    return spec;
  }
  if (!j.is_object() || j.size() != 1)
    throw ValidationError("potential", "expected [[s, scalar], ...], {\"harmonic\": ...} or {\"random_cubic\": ...}");
  if (j.contains("harmonic")) {
    const Json& h = j["harmonic"];
    if (!h.is_object() || !h.contains("omega") || h.size() != 1)
      throw ValidationError("potential.harmonic", "expected {\"omega\": \"p/q\"}");
    spec.kind = PotentialSpec::Kind::harmonic;
    spec.omega = rational_from_json(h["omega"], "potential.harmonic.omega");
    if (sgn(spec.omega) <= 0) throw ValidationError("potential.harmonic.omega", "must be > 0");
    return spec;
  }
  if (j.contains("random_cubic")) {
    const Json& r = j["random_cubic"];
    if (!r.is_object() || !r.contains("seed") || r.size() != 1 || !r["seed"].is_number_unsigned())
      throw ValidationError("potential.random_cubic", "expected {\"seed\": non-negative integer}");
    spec.kind = PotentialSpec::Kind::random_cubic;
    spec.seed = r["seed"].get<std::uint64_t>();
    return spec;
  }
  throw ValidationError("potential", "unknown potential form");
}

Json potential_spec_to_json(const PotentialSpec& spec) {
  switch (spec.kind) {
    case PotentialSpec::Kind::harmonic:
      return Json{{"harmonic", {{"omega", format_rational(spec.omega)}}}};
    case PotentialSpec::Kind::random_cubic:
      return Json{{"random_cubic", {{"seed", spec.seed}}}};
    default:
      return potential_to_json(spec.coeffs);
  }
}

/// Distribution data is recognized by its own keys or by [k, weight, scalar]
/// entries in g; mtke always reads that form.
Boundary boundary_variant_from_json(const Json& j, const std::string& command) {
  if (!j.is_object()) throw ValidationError("boundary", "expected an object");
  if (j.contains("shift")) return shift_from_json(j, "boundary");
  bool distribution = command == "mtke" || j.contains("alpha") || j.contains("beta") ||
                      j.contains("f") || j.contains("stationary_particle");
  if (j.contains("g") && j["g"].is_array())
    for (const Json& e : j["g"])
      if (e.is_array() && e.size() == 3) distribution = true;
  if (distribution) return distribution_boundary_from_json(j, "boundary");
  return boundary_from_json(j, "boundary");
}

SampleSpec sample_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("sample", "expected an object");
  SampleSpec s;
  for (const auto& [key, value] : j.items()) {
    const std::string path = "sample." + key;
    if (key == "q_min") s.q_min = rational_from_json(value, path);
    else if (key == "q_max") s.q_max = rational_from_json(value, path);
    else if (key == "p_min") s.p_min = rational_from_json(value, path);
    else if (key == "p_max") s.p_max = rational_from_json(value, path);
    else if (key == "p_margin") s.p_margin = rational_from_json(value, path);
    else if (key == "nq" || key == "np") {
      if (!value.is_number_integer() || value.get<long long>() < 1 || value.get<long long>() > 100000)
        throw ValidationError(path, "expected an integer in [1, 100000]");
      (key == "nq" ? s.nq : s.np) = value.get<int>();
    } else {
      throw ValidationError(path, "unknown field");
    }
  }
  if (s.q_max < s.q_min) throw ValidationError("sample", "q_max < q_min");
  if (s.p_max < s.p_min) throw ValidationError("sample", "p_max < p_min");
  if (sgn(s.p_margin) <= 0) throw ValidationError("sample.p_margin", "must be > 0");
  return s;
}

Json sample_to_json(const SampleSpec& s) {
  return Json{{"q_min", format_rational(s.q_min)}, {"q_max", format_rational(s.q_max)},
              {"nq", s.nq},
              {"p_min", format_rational(s.p_min)}, {"p_max", format_rational(s.p_max)},
              {"np", s.np},
              {"p_margin", format_rational(s.p_margin)}};
}

std::pair<int, int> parse_grid_text(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw ValidationError("grid", "expected NxM, got '" + text + "'");
  try {
    std::size_t used1 = 0, used2 = 0;
    const int nu = std::stoi(text.substr(0, x), &used1);
    const int nv = std::stoi(text.substr(x + 1), &used2);
    if (used1 != x || used2 != text.size() - x - 1) throw std::invalid_argument("trailing");
    return {nu, nv};
  } catch (const std::exception&) {
    throw ValidationError("grid", "expected NxM, got '" + text + "'");
  }
}

void check_grid(const JobConfig& c) {
  try {
    validate_grid(c.domain, c.grid);
  } catch (const PreconditionError& e) {
    throw ValidationError("grid", e.what());
  }
}

BoundaryConditionSpec kernel_boundary(const JobConfig& c) {
  if (const auto* bc = std::get_if<BoundaryConditionSpec>(&c.boundary)) return *bc;
  if (const auto* shift = std::get_if<ShiftSpec>(&c.boundary)) return shift->to_boundary();
  if (std::holds_alternative<DistributionBoundary>(c.boundary))
    throw ValidationError("boundary", c.command + " needs a slope or shift boundary");
  return BoundaryConditionSpec::toa();
}

KernelSeries kernel_series(const JobConfig& c) {
  if (c.series) return *c.series;
  return solve_tke(c.potential.resolve(), kernel_boundary(c), c.order);
}

std::string csv_of(const PhaseSpaceSeries& s) {
  std::ostringstream os;
  write_phase_space_csv(os, s);
  return os.str();
}

Output cmd_solve(const JobConfig& c) {
  const KernelSeries T = kernel_series(c);
  std::ostringstream os;
  write_series_csv(os, T);
  return {series_to_json(T), os.str()};
}

Output cmd_check(const JobConfig& c) {
  const KernelSeries T = kernel_series(c);
  const ConjugacyReport conj = conjugacy_check(T);
  const SymmetryClass sym = classify_symmetry(T);
  Json j{{"conjugate", conj.conjugate},
         {"hermitian", sym.hermitian},
         {"time_reversal", sym.time_reversal}};
  if (!conj.offending.empty()) j["conjugacy_violations"] = conj.offending;
  std::ostringstream os;
  os << "check,value\n"
     << "conjugate," << conj.conjugate << "\nhermitian," << sym.hermitian << "\ntime_reversal,"
     << sym.time_reversal << '\n';
  return {j, os.str()};
}

Output cmd_weyl(const JobConfig& c) {
  const PhaseSpaceSeries s = weyl_transform_sgn(kernel_series(c));
  return {phase_space_to_json(s), csv_of(s)};
}

Output cmd_classical_toa(const JobConfig& c) {
  const PhaseSpaceSeries s = local_toa_series(c.potential.resolve(), c.k_max).series;
  return {phase_space_to_json(s), csv_of(s)};
}

Output cmd_inverse_h(const JobConfig& c) {
  const PhaseSpaceSeries s = inverse_hamiltonian_series(c.potential.resolve(), c.N, c.j_max);
  return {phase_space_to_json(s), csv_of(s)};
}

Output cmd_picard(const JobConfig& c) {
  check_grid(c);
  const PolynomialPotential V = c.potential.resolve();
  const double mu = c.mu.get_d();
  const double hbar = c.hbar.get_d();
  GridKernel grid;
  std::function<std::complex<double>(double, double)> reference;
  if (const auto* dbc = std::get_if<DistributionBoundary>(&c.boundary)) {
    if (c.reference != "none")
      throw ValidationError("reference", "only \"none\" is available with a distribution boundary");
    grid = picard_solve_mtke(V, *dbc, c.domain, c.grid, c.tol, c.max_iter, mu, hbar);
  } else {
    const BoundaryConditionSpec bc = kernel_boundary(c);
    if (c.reference == "closed_form") {
      const auto omega = V.harmonic_omega();
      if (!omega || !(bc == BoundaryConditionSpec::toa()))
        throw ValidationError("reference",
                              "closed_form needs a harmonic potential and the arrival-time boundary");
      const double w = omega->get_d();
      reference = [=](double u, double v) {
        return std::complex<double>(harmonic_toa_kernel(u, v, mu, hbar, w), 0);
      };
    } else if (c.reference == "series") {
      auto T = std::make_shared<KernelSeries>(solve_tke(V, bc, c.order));
      reference = [T, mu, hbar](double u, double v) { return series_evaluate_uv(*T, u, v, mu, hbar); };
    }
    grid = picard_solve(V, bc, c.domain, c.grid, c.tol, c.max_iter, mu, hbar);
  }
  Json j{{"iterations_used", grid.iterations_used}, {"final_delta", grid.final_delta},
         {"nu", grid.nu}, {"nv", grid.nv}};
  if (reference) {
    double err = 0;
    for (int iu = 0; iu < grid.nu; ++iu)
      for (int iv = 0; iv < grid.nv; ++iv)
        err = std::max(err, std::abs(grid.at(iu, iv) - reference(grid.u[iu], grid.v[iv])));
    j["max_abs_error"] = err;
  }
  std::ostringstream os;
  write_grid_csv(os, grid);
  return {j, os.str()};
}

Output cmd_mtke(const JobConfig& c) {
  const auto* dbc = std::get_if<DistributionBoundary>(&c.boundary);
  const DistributionBoundary data = dbc ? *dbc : DistributionBoundary{};
  const PolynomialPotential V = c.potential.resolve();
  DistributionKernel K;
  if (V.is_zero()) {
    K = mtke_free_solution(data);
  } else if (const auto omega = V.harmonic_omega()) {
    K = mtke_ho_solution(data, *omega, c.j_max);
  } else {
    throw ValidationError("potential", "mtke closed forms need V = 0 or a harmonic potential");
  }
  const PhaseSpaceSeries ww = weyl_transform_distribution(K);
  const MtkeClass cls = mtke_classify(data);
  const auto jump = delta_jump_exact(K);
  Json jump_json = Json::array();
  for (const auto& [k, sum] : jump)
    for (const auto& [grade, value] : sum)
      jump_json.push_back({k, scalar_to_json(GradedScalar(value, grade))});
  GradedSum expected(GradedScalar(Gaussian(0, frac(-1, 2)), Grade{1, -1}) * data.alpha);
  expected += GradedSum(GradedScalar(Gaussian(0, frac(-1, 2)), Grade{1, -1}) * data.beta);
  const std::map<int, GradedSum> want{{0, expected}};
  Output out;
  out.json = Json{{"kernel", dist_kernel_to_json(K)},
                  {"weyl", phase_space_to_json(ww)},
                  {"classification",
                   {{"hermitian", cls.hermitian}, {"time_reversal", cls.time_reversal}, {"both", cls.both}}},
                  {"delta_jump", jump_json},
                  {"delta_jump_ok", jump == want}};
  out.csv = csv_of(ww);
  if (jump != want) out.code = kExitCheckFailed;
  return out;
}

Output cmd_c_table(const JobConfig& c) {
  const PolynomialPotential V = c.potential.resolve();
  const CoefficientTable table = build_c_table(V, c.m_max, c.j_max);
  Output out;
  out.json = Json{{"c_table", c_table_to_json(table)}};
  std::ostringstream os;
  if (const auto* shift = std::get_if<ShiftSpec>(&c.boundary)) {
    const LeadingShiftTable lead = leading_shift_table(V, shift->N, shift->beta, c.m_max, c.j_max);
    if (c.m_max < V.max_degree() * c.j_max)
      throw ValidationError("m_max", "needs m_max >= deg V * j_max for the phase-space check");
    const bool ok = leading_shift_ww_check(lead, c.j_max);
    out.json["leading_shift"] = leading_shift_to_json(lead);
    out.json["ww_check"] = ok;
    write_table_csv(os, lead.entries);
    if (!ok) out.code = kExitCheckFailed;
  } else {
    write_table_csv(os, table.entries);
  }
  out.csv = os.str();
  return out;
}

Output cmd_identity(const JobConfig& c) {
  const IdentityReport report = power_identity_check(c.potential.resolve(), c.k_max, c.m_max);
  Output out;
  if (report.holds) {
    out.json = Json{{"identity", "holds"}};
    out.csv = "identity\nholds\n";
    return out;
  }
  Json bad = Json::array();
  for (const auto& m : report.mismatches) bad.push_back({m.k, m.m});
  out.json = Json{{"identity", "fails"}, {"max_discrepancy", report.max_discrepancy}, {"mismatches", bad}};
  out.csv = "identity\nfails\n";
  out.code = kExitCheckFailed;
  return out;
}

Output cmd_plot(const JobConfig& c) {
  const SampleSpec& s = c.sample;
  if (!(s.p_min > s.p_margin || s.p_max < -s.p_margin))
    throw ValidationError("sample", "p range must stay at least p_margin away from p = 0");
  const PhaseSpaceSeries series = weyl_transform_sgn(kernel_series(c));
  const double mu = c.mu.get_d();
  const double hbar = c.hbar.get_d();
  Json rows = Json::array();
  std::ostringstream os;
  os << "q,p,re,im\n";
  if (!series.empty()) {
    auto node = [](const Rational& lo, const Rational& hi, int n, int i) {
      return n == 1 ? lo.get_d() : Rational(lo + (hi - lo) * i / (n - 1)).get_d();
    };
    for (int iq = 0; iq < s.nq; ++iq)
      for (int ip = 0; ip < s.np; ++ip) {
        const double q = node(s.q_min, s.q_max, s.nq, iq);
        const double p = node(s.p_min, s.p_max, s.np, ip);
        const auto z = series.evaluate(q, p, mu, hbar);
        rows.push_back({q, p, z.real(), z.imag()});
        os << format_double(q) << ',' << format_double(p) << ',' << format_double(z.real()) << ','
           << format_double(z.imag()) << '\n';
      }
  }
  return {Json{{"rows", rows}}, os.str()};
}

void apply_threads_env() {
  const char* env = std::getenv("TIMEKERNEL_THREADS");
  if (!env || !*env) {
    set_max_threads(0);
    return;
  }
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096)
    throw ValidationError("TIMEKERNEL_THREADS", std::string("expected a positive integer, got '") + env + "'");
  set_max_threads(static_cast<unsigned>(n));
}

}  // namespace

PolynomialPotential PotentialSpec::resolve() const {
  switch (kind) {
    case Kind::harmonic: return PolynomialPotential::harmonic(omega);
    case Kind::random_cubic: return random_rational_potential(seed, 3);
    default: return coeffs;
  }
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"solve-tke", "check",   "weyl",   "classical-toa",
                                              "inverse-h", "picard",  "mtke",   "c-table",
                                              "identity-check", "plot-data"};
  return names;
}

JobConfig config_from_json(const Json& j, const std::string& command) {
  if (!j.is_object()) throw ValidationError("", "config must be a JSON object");
  JobConfig c;
  c.command = command;
  static const std::vector<std::string> known{
      "command", "potential", "boundary", "series", "order", "k_max", "N", "j_max", "m_max",
      "max_iter", "mu", "hbar", "tol", "grid", "domain", "reference", "sample", "format"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ValidationError(key, "unknown field");
  if (j.contains("command")) {
    if (!j["command"].is_string()) throw ValidationError("command", "expected a string");
    const std::string named = j["command"].get<std::string>();
    if (command.empty()) c.command = named;
    else if (named != command)
      throw ValidationError("command", "config names '" + named + "' but '" + command + "' was run");
  }
  if (std::find(subcommands().begin(), subcommands().end(), c.command) == subcommands().end())
    throw ValidationError("command", "unknown subcommand '" + c.command + "'");
  if (j.contains("potential")) c.potential = potential_spec_from_json(j["potential"]);
  if (j.contains("boundary")) c.boundary = boundary_variant_from_json(j["boundary"], c.command);
  if (j.contains("series")) c.series = series_from_json(j["series"], "series");
  c.order = get_int(j, "order", c.order, 1, 400);
  c.k_max = get_int(j, "k_max", c.k_max, 0, 200);
  c.N = get_int(j, "N", c.N, 1, 100);
  c.j_max = get_int(j, "j_max", c.j_max, 0, 200);
  c.m_max = get_int(j, "m_max", c.m_max, 0, 2000);
  c.max_iter = get_int(j, "max_iter", c.max_iter, 1, 100000);
  c.mu = get_positive_rational(j, "mu", c.mu);
  c.hbar = get_positive_rational(j, "hbar", c.hbar);
  if (j.contains("tol")) {
    if (!j["tol"].is_number()) throw ValidationError("tol", "expected a number");
    c.tol = j["tol"].get<double>();
    if (!(c.tol > 0) || !std::isfinite(c.tol)) throw ValidationError("tol", "must be > 0");
  }
  if (j.contains("grid")) {
    const Json& g = j["grid"];
    if (!g.is_array() || g.size() != 2 || !g[0].is_number_integer() || !g[1].is_number_integer())
      throw ValidationError("grid", "expected [nu, nv]");
    c.grid = {g[0].get<int>(), g[1].get<int>()};
  }
  if (j.contains("domain")) c.domain = domain_from_json(j["domain"], "domain");
  if (j.contains("reference")) {
    if (!j["reference"].is_string()) throw ValidationError("reference", "expected a string");
    c.reference = j["reference"].get<std::string>();
    if (c.reference != "none" && c.reference != "closed_form" && c.reference != "series")
      throw ValidationError("reference", "expected none, closed_form or series");
  }
  if (j.contains("sample")) c.sample = sample_from_json(j["sample"]);
  if (j.contains("format")) {
    const Json& f = j["format"];
    if (!f.is_string() || (f != "json" && f != "csv"))
      throw ValidationError("format", "expected \"json\" or \"csv\"");
    c.format = f == "csv" ? Format::csv : Format::json;
  }
  return c;
}

Json config_to_json(const JobConfig& c) {
  Json j;
  j["command"] = c.command;
  j["potential"] = potential_spec_to_json(c.potential);
  if (const auto* bc = std::get_if<BoundaryConditionSpec>(&c.boundary)) j["boundary"] = boundary_to_json(*bc);
  if (const auto* s = std::get_if<ShiftSpec>(&c.boundary)) j["boundary"] = shift_to_json(*s);
  if (const auto* d = std::get_if<DistributionBoundary>(&c.boundary))
    j["boundary"] = distribution_boundary_to_json(*d);
  if (c.series) j["series"] = series_to_json(*c.series);
  j["order"] = c.order;
  j["k_max"] = c.k_max;
  j["N"] = c.N;
  j["j_max"] = c.j_max;
  j["m_max"] = c.m_max;
  j["max_iter"] = c.max_iter;
  j["mu"] = format_rational(c.mu);
  j["hbar"] = format_rational(c.hbar);
  j["tol"] = c.tol;
  j["grid"] = {c.grid.nu, c.grid.nv};
  j["domain"] = domain_to_json(c.domain);
  j["reference"] = c.reference;
  j["sample"] = sample_to_json(c.sample);
  j["format"] = c.format == Format::csv ? "csv" : "json";
  return j;
}

int execute(const JobConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Output result;
    const std::string& cmd = config.command;
    if (cmd == "solve-tke") result = cmd_solve(config);
    else if (cmd == "check") result = cmd_check(config);
    else if (cmd == "weyl") result = cmd_weyl(config);
    else if (cmd == "classical-toa") result = cmd_classical_toa(config);
    else if (cmd == "inverse-h") result = cmd_inverse_h(config);
    else if (cmd == "picard") result = cmd_picard(config);
    else if (cmd == "mtke") result = cmd_mtke(config);
    else if (cmd == "c-table") result = cmd_c_table(config);
    else if (cmd == "identity-check") result = cmd_identity(config);
    else if (cmd == "plot-data") result = cmd_plot(config);
    else throw ValidationError("command", "unknown subcommand '" + cmd + "'");
    if (config.format == Format::csv) out << result.csv;
    else out << result.json.dump() << '\n';
    if (result.code == kExitCheckFailed) err << "error: " << cmd << ": check failed\n";
    return result.code;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << " (final delta " << format_double(e.final_delta()) << ")\n";
    return kExitNonConvergence;
  } catch (const ConsistencyError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time kernel series, phase-space transforms and Goursat grids", "timekernel"};
  std::string command, config_path, format, out_path, grid_text;
  std::optional<int> order;
  std::optional<double> tol;
  app.add_option("subcommand", command, "one of: solve-tke check weyl classical-toa inverse-h picard mtke c-table identity-check plot-data")
      ->required();
  app.add_option("--config", config_path, "job config (JSON)")->required();
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "write the result here instead of stdout");
  app.add_option("--order", order, "series order K");
  app.add_option("--tol", tol, "Picard tolerance");
  app.add_option("--grid", grid_text, "grid size NxM");
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  JobConfig config;
  try {
    apply_threads_env();
    std::ifstream in(config_path);
    if (!in) throw ValidationError("--config", "cannot read '" + config_path + "'");
    std::stringstream text;
    text << in.rdbuf();
    config = config_from_json(parse_json_text(text.str()), command);
    if (order) {
      if (*order < 1 || *order > 400) throw ValidationError("--order", "must lie in [1, 400]");
      config.order = *order;
    }
    if (tol) {
      if (!(*tol > 0)) throw ValidationError("--tol", "must be > 0");
      config.tol = *tol;
    }
    if (!grid_text.empty()) {
      const auto [nu, nv] = parse_grid_text(grid_text);
      config.grid = {nu, nv};
    }
    if (!format.empty()) config.format = format == "csv" ? Format::csv : Format::json;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  if (out_path.empty()) return execute(config, out, err);
  std::ostringstream buffer;
  const int code = execute(config, buffer, err);
  std::ofstream file(out_path, std::ios::binary);
  if (!file) {
    err << "error: cannot write '" << out_path << "'\n";
    return kExitValidation;
  }
  file << buffer.str();
  return code;
}

}  // namespace timekernel::cli
