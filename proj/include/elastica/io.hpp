#pragma once

// JSON forms of every value the command line reads or writes, and the trace
// CSV. Doubles are written in shortest round-trip form, so parse(dump(x)) == x
// for finite values. Non-finite scalars are written as null and read back as
// NaN. Readers throw InvalidInput on schema errors (unknown keys included) and
// MalformedDomain on bad domain trees.

#include <filesystem>
#include <string>

#include "json.hpp"

#include "elastica/analyze.hpp"
#include "elastica/curve.hpp"
#include "elastica/domain.hpp"
#include "elastica/energy.hpp"
#include "elastica/solver.hpp"

namespace elastica::io {

using Json = nlohmann::json;

/// {"points": [[x, y], ...]}
Json curve_to_json(const ClosedCurve& curve);
ClosedCurve curve_from_json(const Json& j);

/// Primitives: {"shape": "disk" | "half_plane" | "convex_polygon" | "capsule" |
/// "arc_tube", ...}; composites: {"op": "union" | "intersection" |
/// "complement", "children": [...]}.
Json domain_to_json(const Domain& domain);
Domain domain_from_json(const Json& j);

/// Every key optional; missing keys keep their defaults.
Json config_to_json(const SolverConfig& config);
SolverConfig config_from_json(const Json& j);

Json trace_row_to_json(const TraceRow& row);
TraceRow trace_row_from_json(const Json& j);

Json solve_report_to_json(const SolveReport& report);
SolveReport solve_report_from_json(const Json& j);

Json energy_report_to_json(const EnergyReport& report);
EnergyReport energy_report_from_json(const Json& j);

Json structure_report_to_json(const StructureReport& report);
StructureReport structure_report_from_json(const Json& j);

/// Header `iter,mu,W,penalty,max_violation,step`, one row per trace entry.
std::string trace_csv(const std::vector<TraceRow>& trace);

/// Throws InvalidInput when the file cannot be read or is not JSON.
Json read_json(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline. Missing parent directories are
/// created. Throws InvalidInput on I/O failure.
void write_json(const std::filesystem::path& path, const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace elastica::io
