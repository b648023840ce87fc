#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "timekernel/json_io.hpp"

namespace timekernel::cli {

enum class Format { json, csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitCheckFailed = 4;

/// Potential as written in a config: explicit coefficients, a harmonic
/// oscillator, or a seeded random cubic.
struct PotentialSpec {
  enum class Kind { coefficients, harmonic, random_cubic };
  Kind kind = Kind::coefficients;
  PolynomialPotential coeffs;
  Rational omega = 1;
  std::uint64_t seed = 0;

  PolynomialPotential resolve() const;
};

/// Rectangle of (q, p) sample points for plot-data. The p range must stay
/// p_margin away from p = 0.
struct SampleSpec {
  Rational q_min = -1;
  Rational q_max = 1;
  int nq = 5;
  Rational p_min = 1;
  Rational p_max = 2;
  int np = 5;
  Rational p_margin = frac(1, 10);
};

using Boundary = std::variant<std::monostate, BoundaryConditionSpec, ShiftSpec, DistributionBoundary>;

struct JobConfig {
  std::string command;
  PotentialSpec potential;
  Boundary boundary;
  std::optional<KernelSeries> series;
  int order = 20;
  int k_max = 5;
  int N = 1;
  int j_max = 5;
  int m_max = 15;
  int max_iter = 200;
  Rational mu = 1;
  Rational hbar = 1;
  double tol = 1e-12;
  GridSpec grid;
  Domain domain;
  std::string reference = "none";
  SampleSpec sample;
  Format format = Format::json;
};

const std::vector<std::string>& subcommands();

/// Throws ValidationError with the offending field path.
JobConfig config_from_json(const Json& j, const std::string& command);
Json config_to_json(const JobConfig& config);

/// Runs one job and writes its result to `out`.
int execute(const JobConfig& config, std::ostream& out, std::ostream& err);

/// `timekernel <subcommand> --config file.json [--format json|csv] [--out path]
///  [--order K] [--tol X] [--grid NxM]`; args excludes the program name.
/// TIMEKERNEL_THREADS is read on every call.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace timekernel::cli
