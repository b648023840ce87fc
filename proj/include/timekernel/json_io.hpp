#pragma once

// JSON and CSV forms of every value that crosses the command line. Rationals
// are "p/q" strings; parse errors throw ValidationError with a field path.

#include <ostream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "timekernel/coeff_tables.hpp"
#include "timekernel/mtke.hpp"
#include "timekernel/phase_space.hpp"
#include "timekernel/picard.hpp"
#include "timekernel/potential.hpp"
#include "timekernel/series.hpp"
#include "timekernel/tke.hpp"

namespace timekernel {

using Json = nlohmann::ordered_json;

/// Parses a document; syntax errors become ValidationError naming line and column.
Json parse_json_text(std::string_view text);

Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j, const std::string& path);

Json scalar_to_json(const GradedScalar& s);
/// Accepts the object form, a "p/q" string or an integer.
GradedScalar scalar_from_json(const Json& j, const std::string& path);

/// [[m, n, hbar, scalar], ...] in canonical order.
Json series_to_json(const BivariateSeries& s);
BivariateSeries series_from_json(const Json& j, const std::string& path);

/// [[s, scalar], ...].
Json potential_to_json(const PolynomialPotential& v);
PolynomialPotential potential_from_json(const Json& j, const std::string& path);

Json boundary_to_json(const BoundaryConditionSpec& bc);
BoundaryConditionSpec boundary_from_json(const Json& j, const std::string& path);
Json shift_to_json(const ShiftSpec& s);
ShiftSpec shift_from_json(const Json& j, const std::string& path);

Json piecewise_to_json(const std::vector<PiecewiseTerm>& terms);
std::vector<PiecewiseTerm> piecewise_from_json(const Json& j, const std::string& path);
Json distribution_boundary_to_json(const DistributionBoundary& d);
DistributionBoundary distribution_boundary_from_json(const Json& j, const std::string& path);

/// {"regular": [[m, j, scalar]], "delta": [[m, d, weight, scalar]]}.
Json phase_space_to_json(const PhaseSpaceSeries& s);
PhaseSpaceSeries phase_space_from_json(const Json& j, const std::string& path);

Json dist_kernel_to_json(const DistributionKernel& k);
DistributionKernel dist_kernel_from_json(const Json& j, const std::string& path);

Json c_table_to_json(const CoefficientTable& t);
Json leading_shift_to_json(const LeadingShiftTable& t);

Json domain_to_json(const Domain& d);
Domain domain_from_json(const Json& j, const std::string& path);

/// %.17g.
std::string format_double(double x);

void write_grid_csv(std::ostream& out, const GridKernel& grid);
/// m, j_or_d, kind, hbar, mu, re, im; kind is "regular" or "delta_<weight>".
void write_phase_space_csv(std::ostream& out, const PhaseSpaceSeries& s);
/// m, n, hbar, mu, re, im.
void write_series_csv(std::ostream& out, const BivariateSeries& s);
/// m, j, re, im, mu, hbar.
void write_table_csv(std::ostream& out, const std::map<std::pair<int, int>, GradedSum>& entries);

}  // namespace timekernel
