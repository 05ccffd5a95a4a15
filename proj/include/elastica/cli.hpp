#pragma once

// Command-line front end: `elastica <command> ...`.
//
//   minimize  --domain d.json (--init c.json | --init-circle cx,cy,r) [--config cfg.json]
//             [--out report.json] [--trace trace.csv] [--svg out.svg]
//   analyze   --curve c.json --domain d.json [--out structure.json] [--svg out.svg]
//   energy    --curve c.json [--out energy.json]
//   domain    (two-drops | stadium | ellipse | disk) [params] [--out d.json] [--svg d.svg]
//   run       --recipe r.json [--out-dir dir]
//
// Exit codes: 0 success (and Converged for solves), 2 for a solve that hit the
// iteration cap or stalled, 1 for bad input of any kind. ELASTICA_LOG in
// {error, info, debug} sets the stderr log level.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "elastica/domain.hpp"
#include "elastica/io.hpp"
#include "elastica/solver.hpp"

namespace elastica::cli {

/// Named generator with numeric parameters, as in the `domain` command:
/// two-drops {eps, arc_radius, arc_span, drop_scale}, stadium {length,
/// radius}, ellipse {a, b}, disk {r, cx, cy}.
struct DomainGenerator {
  std::string name;
  std::map<std::string, double> params;
  friend bool operator==(const DomainGenerator&, const DomainGenerator&) = default;
};

/// Throws InvalidParameters for unknown names or parameters.
Domain make_domain(const DomainGenerator& gen);

struct InitFile {
  std::filesystem::path path;
  friend bool operator==(const InitFile&, const InitFile&) = default;
};
struct InitCircle {
  Vec2 center = Vec2::Zero();
  double radius = 1.0;
  friend bool operator==(const InitCircle&, const InitCircle&) = default;
};
/// Longest component of {sdf = -offset}.
struct InitOffset {
  double offset = 0.0;
  friend bool operator==(const InitOffset&, const InitOffset&) = default;
};

struct RecipeOutputs {
  std::optional<std::filesystem::path> report;
  std::optional<std::filesystem::path> trace;
  std::optional<std::filesystem::path> structure;
  std::optional<std::filesystem::path> energy;
  std::optional<std::filesystem::path> svg;
  friend bool operator==(const RecipeOutputs&, const RecipeOutputs&) = default;
};

struct ExperimentRecipe {
  std::string name;
  std::variant<Domain, DomainGenerator> domain;
  std::variant<InitFile, InitCircle, InitOffset> init;
  SolverConfig config;
  bool analyze_structure = false;
  bool analyze_energy = false;
  /// Relative paths resolve against the output directory.
  RecipeOutputs outputs;
  friend bool operator==(const ExperimentRecipe&, const ExperimentRecipe&) = default;
};

/// Keys: name, domain (tree, {"generator": name, ...params}, or a path
/// string), init ({"file": path} | {"circle": [cx, cy, r]} | {"offset": d}),
/// config, analyses (subset of ["structure", "energy"]), outputs ({report,
/// trace, structure, energy, svg}). Relative file paths in `domain` and
/// `init` resolve against `base`. Throws InvalidInput.
ExperimentRecipe recipe_from_json(const io::Json& j, const std::filesystem::path& base = {});
io::Json recipe_to_json(const ExperimentRecipe& recipe);

/// Reads ELASTICA_LOG and points the default logger at stderr.
void configure_logging();

/// Entry point; never throws.
int run(int argc, const char* const* argv);

}  // namespace elastica::cli
