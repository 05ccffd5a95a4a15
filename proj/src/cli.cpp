#include "elastica/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "elastica/analyze.hpp"
#include "elastica/energy.hpp"
#include "elastica/error.hpp"
#include "elastica/svg.hpp"

namespace elastica::cli {
namespace {

using io::Json;
namespace fs = std::filesystem;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

double param(const DomainGenerator& gen, const char* key, double fallback) {
  const auto it = gen.params.find(key);
  return it == gen.params.end() ? fallback : it->second;
}

void only_params(const DomainGenerator& gen, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : gen.params) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) {
      throw Error(ErrorCode::InvalidParameters,
                  "generator '" + gen.name + "' has no parameter '" + key + "'");
    }
  }
}

fs::path resolve(const fs::path& p, const fs::path& base) {
  return p.is_relative() && !base.empty() ? base / p : p;
}

std::optional<fs::path> output_path(const Json& outputs, const char* key) {
  const auto it = outputs.find(key);
  if (it == outputs.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) bad(std::string("recipe outputs: '") + key + "' must be a path string");
  return fs::path(it->get<std::string>());
}

Vec2 parse_pair(const std::string& text, const char* what) {
  std::istringstream in(text);
  double x = 0.0;
  double y = 0.0;
  char comma = 0;
  if (!(in >> x >> comma >> y) || comma != ',' || !in.eof()) {
    bad(std::string(what) + " expects x,y");
  }
  return {x, y};
}

InitCircle parse_circle(const std::string& text) {
  std::istringstream in(text);
  InitCircle c;
  double cx = 0.0;
  double cy = 0.0;
  char c1 = 0;
  char c2 = 0;
  if (!(in >> cx >> c1 >> cy >> c2 >> c.radius) || c1 != ',' || c2 != ',' || !in.eof()) {
    bad("--init-circle expects cx,cy,r");
  }
  c.center = {cx, cy};
  return c;
}

/// A curve file may hold a bare curve or a solve report.
ClosedCurve read_curve(const fs::path& path) {
  const Json j = io::read_json(path);
  if (j.is_object() && j.contains("final_curve")) return io::solve_report_from_json(j).final_curve;
  return io::curve_from_json(j);
}

Domain read_domain(const fs::path& path) { return io::domain_from_json(io::read_json(path)); }

ClosedCurve initial_curve(const std::variant<InitFile, InitCircle, InitOffset>& init,
                          const Domain& domain, const SolverConfig& config) {
  return std::visit(
      [&](const auto& src) -> ClosedCurve {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, InitFile>) {
          return read_curve(src.path);
        } else if constexpr (std::is_same_v<T, InitCircle>) {
          return circle(src.center, src.radius, config.N);
        } else {
          return seed_from_offset(domain, src.offset, config.N);
        }
      },
      init);
}

int exit_code(Termination t) { return t == Termination::Converged ? 0 : 2; }

ClosedCurve uniform(const ClosedCurve& curve) {
  if (edge_spread(curve) <= kUniformSpread) return curve;
  spdlog::info("resampling a non-uniform curve of {} vertices", curve.size());
  return resample_uniform(curve, curve.size());
}

std::vector<Vec2> contact_markers(const ClosedCurve& curve, const StructureReport& report) {
  std::vector<Vec2> markers;
  for (const auto& a : report.contacts.boundary_arcs) markers.push_back(a.point);
  for (const auto& c : report.contacts.self_couples) {
    markers.push_back(0.5 * (curve[c.i] + curve[c.j]));
  }
  return markers;
}

struct SolveOutputs {
  std::optional<fs::path> report;
  std::optional<fs::path> trace;
  std::optional<fs::path> structure;
  std::optional<fs::path> energy;
  std::optional<fs::path> svg;
};

int solve_and_write(const Domain& domain, const ClosedCurve& start, const SolverConfig& config,
                    const SolveOutputs& out) {
  const SolveReport report = minimize(start, domain, config);
  std::cout << fmt::format("termination={} iters={} W={:.10g} violation={:.3g}\n",
                           to_string(report.termination), report.iters, report.final_W,
                           report.final_violation);
  if (out.report) io::write_json(*out.report, io::solve_report_to_json(report));
  if (out.trace) io::write_text(*out.trace, io::trace_csv(report.energy_trace));
  if (out.energy) {
    io::write_json(*out.energy, io::energy_report_to_json(energy_report(report.final_curve)));
  }
  std::optional<StructureReport> structure;
  if (out.structure) {
    structure = analyze_structure(report.final_curve, domain);
    io::write_json(*out.structure, io::structure_report_to_json(*structure));
  }
  if (out.svg) {
    SvgScene scene{domain, {report.final_curve}, {}};
    if (structure) scene.markers = contact_markers(report.final_curve, *structure);
    io::write_text(*out.svg, render_svg(scene));
  }
  return exit_code(report.termination);
}

void emit(const std::optional<fs::path>& path, const Json& j) {
  if (path) {
    io::write_json(*path, j);
  } else {
    std::cout << j.dump(2) << '\n';
  }
}

}  // namespace

Domain make_domain(const DomainGenerator& gen) {
  if (gen.name == "two-drops") {
    only_params(gen, {"eps", "arc_radius", "arc_span", "drop_scale"});
    TwoDropsParams p;
    p.epsilon = param(gen, "eps", p.epsilon);
    p.arc_radius = param(gen, "arc_radius", p.arc_radius);
    p.arc_span = param(gen, "arc_span", p.arc_span);
    p.drop_scale = param(gen, "drop_scale", p.drop_scale);
    return two_drops(p);
  }
  if (gen.name == "stadium") {
    only_params(gen, {"length", "radius"});
    return stadium(param(gen, "length", 2.0), param(gen, "radius", 1.0));
  }
  if (gen.name == "ellipse") {
    only_params(gen, {"a", "b"});
    return ellipse_domain(param(gen, "a", 2.0), param(gen, "b", 1.0));
  }
  if (gen.name == "disk") {
    only_params(gen, {"r", "cx", "cy"});
    return disk_domain({param(gen, "cx", 0.0), param(gen, "cy", 0.0)}, param(gen, "r", 1.0));
  }
  throw Error(ErrorCode::InvalidParameters, "unknown domain generator '" + gen.name + "'");
}

ExperimentRecipe recipe_from_json(const Json& j, const fs::path& base) {
  if (!j.is_object()) bad("recipe must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "name" && key != "domain" && key != "init" && key != "config" &&
        key != "analyses" && key != "outputs") {
      bad("recipe: unknown key '" + key + "'");
    }
  }
  ExperimentRecipe r;
  if (!j.contains("name") || !j["name"].is_string()) bad("recipe: 'name' must be a string");
  r.name = j["name"].get<std::string>();

  if (!j.contains("domain")) bad("recipe: missing 'domain'");
  const Json& d = j["domain"];
  if (d.is_string()) {
    r.domain = read_domain(resolve(d.get<std::string>(), base));
  } else if (d.is_object() && d.contains("generator")) {
    DomainGenerator gen;
    for (const auto& [key, value] : d.items()) {
      if (key == "generator") {
        if (!value.is_string()) bad("recipe: generator name must be a string");
        gen.name = value.get<std::string>();
      } else if (value.is_number()) {
        gen.params[key] = value.get<double>();
      } else {
        bad("recipe: generator parameter '" + key + "' must be a number");
      }
    }
    r.domain = gen;
  } else {
    r.domain = io::domain_from_json(d);
  }

  if (!j.contains("init") || !j["init"].is_object() || j["init"].size() != 1) {
    bad("recipe: 'init' must be one of {file}, {circle}, {offset}");
  }
  const auto& [kind, value] = *j["init"].items().begin();
  if (kind == "file" && value.is_string()) {
    r.init = InitFile{resolve(value.get<std::string>(), base)};
  } else if (kind == "circle" && value.is_array() && value.size() == 3 &&
             value[0].is_number() && value[1].is_number() && value[2].is_number()) {
    r.init = InitCircle{{value[0].get<double>(), value[1].get<double>()}, value[2].get<double>()};
  } else if (kind == "offset" && value.is_number()) {
    r.init = InitOffset{value.get<double>()};
  } else {
    bad("recipe: bad init '" + kind + "'");
  }

  if (j.contains("config")) r.config = io::config_from_json(j["config"]);
  if (j.contains("analyses")) {
    if (!j["analyses"].is_array()) bad("recipe: 'analyses' must be an array");
    for (const auto& a : j["analyses"]) {
      const std::string name = a.is_string() ? a.get<std::string>() : "";
      if (name == "structure") {
        r.analyze_structure = true;
      } else if (name == "energy") {
        r.analyze_energy = true;
      } else {
        bad("recipe: unknown analysis " + a.dump());
      }
    }
  }
  if (j.contains("outputs")) {
    const Json& o = j["outputs"];
    if (!o.is_object()) bad("recipe: 'outputs' must be an object");
    for (const auto& [key, value] : o.items()) {
      if (key != "report" && key != "trace" && key != "structure" && key != "energy" &&
          key != "svg") {
        bad("recipe outputs: unknown key '" + key + "'");
      }
    }
    r.outputs = {output_path(o, "report"), output_path(o, "trace"), output_path(o, "structure"),
                 output_path(o, "energy"), output_path(o, "svg")};
  }
  return r;
}

Json recipe_to_json(const ExperimentRecipe& r) {
  Json j;
  j["name"] = r.name;
  if (const auto* gen = std::get_if<DomainGenerator>(&r.domain)) {
    Json d = {{"generator", gen->name}};
    for (const auto& [key, value] : gen->params) d[key] = value;
    j["domain"] = std::move(d);
  } else {
    j["domain"] = io::domain_to_json(std::get<Domain>(r.domain));
  }
  std::visit(
      [&](const auto& src) {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, InitFile>) {
          j["init"] = {{"file", src.path.string()}};
        } else if constexpr (std::is_same_v<T, InitCircle>) {
          j["init"] = {{"circle", {src.center.x(), src.center.y(), src.radius}}};
        } else {
          j["init"] = {{"offset", src.offset}};
        }
      },
      r.init);
  j["config"] = io::config_to_json(r.config);
  Json analyses = Json::array();
  if (r.analyze_structure) analyses.push_back("structure");
  if (r.analyze_energy) analyses.push_back("energy");
  j["analyses"] = std::move(analyses);
  Json outputs = Json::object();
  auto put = [&](const char* key, const std::optional<fs::path>& p) {
    if (p) outputs[key] = p->string();
  };
  put("report", r.outputs.report);
  put("trace", r.outputs.trace);
  put("structure", r.outputs.structure);
  put("energy", r.outputs.energy);
  put("svg", r.outputs.svg);
  j["outputs"] = std::move(outputs);
  return j;
}

void configure_logging() {
  auto logger = spdlog::get("elastica");
  if (!logger) logger = spdlog::stderr_logger_mt("elastica");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("ELASTICA_LOG")) {
    const std::string level = env;
    if (level == "error") {
      spdlog::set_level(spdlog::level::err);
    } else if (level == "info") {
      spdlog::set_level(spdlog::level::info);
    } else if (level == "debug") {
      spdlog::set_level(spdlog::level::debug);
    } else {
      spdlog::warn("ELASTICA_LOG='{}' is not one of error, info, debug; using info", level);
    }
  }
}

int run(int argc, const char* const* argv) {
  configure_logging();
  CLI::App app{"Elastic closed curves confined to planar domains"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  // minimize
  auto* minimize_cmd = app.add_subcommand("minimize", "Minimize the bending energy in a domain");
  std::string m_domain;
  std::string m_init;
  std::string m_circle;
  std::string m_config;
  std::string m_out;
  std::string m_trace;
  std::string m_svg;
  minimize_cmd->add_option("--domain", m_domain, "Domain JSON")->required();
  auto* init_opt = minimize_cmd->add_option("--init", m_init, "Initial curve JSON");
  auto* circle_opt =
      minimize_cmd->add_option("--init-circle", m_circle, "Initial circle cx,cy,r");
  init_opt->excludes(circle_opt);
  minimize_cmd->add_option("--config", m_config, "Solver config JSON");
  minimize_cmd->add_option("--out", m_out, "Solve report JSON");
  minimize_cmd->add_option("--trace", m_trace, "Energy trace CSV");
  minimize_cmd->add_option("--svg", m_svg, "Picture of the result");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Contact structure of a curve");
  std::string a_curve;
  std::string a_domain;
  std::string a_out;
  std::string a_svg;
  std::optional<double> a_tol;
  int a_grid = 128;
  analyze_cmd->add_option("--curve", a_curve, "Curve or solve report JSON")->required();
  analyze_cmd->add_option("--domain", a_domain, "Domain JSON")->required();
  analyze_cmd->add_option("--out", a_out, "Structure report JSON");
  analyze_cmd->add_option("--svg", a_svg, "Picture with contact markers");
  analyze_cmd->add_option("--contact-tol", a_tol, "Contact distance");
  analyze_cmd->add_option("--grid", a_grid, "Index grid resolution")->check(CLI::PositiveNumber);

  // energy
  auto* energy_cmd = app.add_subcommand("energy", "Bending energy report of a curve");
  std::string e_curve;
  std::string e_out;
  energy_cmd->add_option("--curve", e_curve, "Curve or solve report JSON")->required();
  energy_cmd->add_option("--out", e_out, "Energy report JSON");

  // domain
  auto* domain_cmd = app.add_subcommand("domain", "Write a generated domain");
  domain_cmd->require_subcommand(1);
  std::string d_out;
  std::string d_svg;
  DomainGenerator gen;
  std::string d_center;
  auto generator = [&](const char* name, const char* help,
                       std::initializer_list<std::pair<const char*, const char*>> params) {
    auto* sub = domain_cmd->add_subcommand(name, help);
    sub->add_option("--out", d_out, "Domain JSON (stdout when absent)");
    sub->add_option("--svg", d_svg, "Picture of the boundary");
    for (const auto& [flag, key] : params) {
      sub->add_option_function<double>(
          flag, [&gen, key = std::string(key)](double v) { gen.params[key] = v; }, key);
    }
    sub->callback([&gen, name] { gen.name = name; });
    return sub;
  };
  generator("two-drops", "Two drops joined by a circular tube",
            {{"--eps", "eps"},
             {"--arc-radius", "arc_radius"},
             {"--arc-span", "arc_span"},
             {"--drop-scale", "drop_scale"}});
  generator("stadium", "Capsule", {{"--length", "length"}, {"--radius", "radius"}});
  generator("ellipse", "Polygonal ellipse", {{"--a", "a"}, {"--b", "b"}});
  generator("disk", "Disk", {{"--r", "r"}})
      ->add_option("--center", d_center, "Center cx,cy");

  // run
  auto* run_cmd = app.add_subcommand("run", "Run an experiment recipe");
  std::string r_recipe;
  std::string r_dir;
  run_cmd->add_option("--recipe", r_recipe, "Recipe JSON")->required();
  run_cmd->add_option("--out-dir", r_dir, "Base directory for relative outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  auto opt_path = [](const std::string& s) -> std::optional<fs::path> {
    return s.empty() ? std::nullopt : std::optional<fs::path>(s);
  };

  try {
    if (minimize_cmd->parsed()) {
      if (m_init.empty() && m_circle.empty()) {
        std::cerr << "minimize: one of --init or --init-circle is required\n"
                  << minimize_cmd->help();
        return 1;
      }
      const Domain domain = read_domain(m_domain);
      const SolverConfig config =
          m_config.empty() ? SolverConfig{} : io::config_from_json(io::read_json(m_config));
      std::variant<InitFile, InitCircle, InitOffset> init;
      if (!m_init.empty()) {
        init = InitFile{m_init};
      } else {
        init = parse_circle(m_circle);
      }
      return solve_and_write(domain, initial_curve(init, domain, config), config,
                             {opt_path(m_out), opt_path(m_trace), std::nullopt, std::nullopt,
                              opt_path(m_svg)});
    }
    if (analyze_cmd->parsed()) {
      const ClosedCurve curve = uniform(read_curve(a_curve));
      const Domain domain = read_domain(a_domain);
      AnalyzeOptions options;
      options.contact_tol = a_tol;
      options.grid_resolution = a_grid;
      const StructureReport report = analyze_structure(curve, domain, options);
      emit(opt_path(a_out), io::structure_report_to_json(report));
      if (!a_svg.empty()) {
        io::write_text(a_svg, render_svg({domain, {curve}, contact_markers(curve, report)}));
      }
      return 0;
    }
    if (energy_cmd->parsed()) {
      emit(opt_path(e_out), io::energy_report_to_json(energy_report(uniform(read_curve(e_curve)))));
      return 0;
    }
    if (domain_cmd->parsed()) {
      if (!d_center.empty()) {
        const Vec2 c = parse_pair(d_center, "--center");
        gen.params["cx"] = c.x();
        gen.params["cy"] = c.y();
      }
      const Domain domain = make_domain(gen);
      emit(opt_path(d_out), io::domain_to_json(domain));
      if (!d_svg.empty()) io::write_text(d_svg, render_svg({domain, {}, {}}));
      return 0;
    }
    if (run_cmd->parsed()) {
      const fs::path recipe_path = r_recipe;
      const ExperimentRecipe recipe =
          recipe_from_json(io::read_json(recipe_path), recipe_path.parent_path());
      const fs::path base = r_dir.empty() ? fs::current_path() : fs::path(r_dir);
      const Domain domain = std::visit(
          [](const auto& d) -> Domain {
            if constexpr (std::is_same_v<std::decay_t<decltype(d)>, Domain>) {
              return d;
            } else {
              return make_domain(d);
            }
          },
          recipe.domain);
      auto at = [&](const std::optional<fs::path>& p) -> std::optional<fs::path> {
        if (!p) return std::nullopt;
        return resolve(*p, base);
      };
      spdlog::info("recipe '{}'", recipe.name);
      SolveOutputs out{at(recipe.outputs.report), at(recipe.outputs.trace), std::nullopt,
                       std::nullopt, at(recipe.outputs.svg)};
      if (recipe.analyze_structure) {
        out.structure = at(recipe.outputs.structure.value_or(recipe.name + ".structure.json"));
      }
      if (recipe.analyze_energy) {
        out.energy = at(recipe.outputs.energy.value_or(recipe.name + ".energy.json"));
      }
      return solve_and_write(domain, initial_curve(recipe.init, domain, recipe.config),
                             recipe.config, out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace elastica::cli
