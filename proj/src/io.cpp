#include "elastica/io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "elastica/error.hpp"

namespace elastica::io {
namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

const Json& member(const Json& j, const char* key, const char* where) {
  if (!j.is_object()) bad(std::string(where) + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string(where) + ": missing key '" + key + "'");
  return *it;
}

void only_keys(const Json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) bad(std::string(where) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) bad(std::string(where) + ": unknown key '" + key + "'");
  }
}

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double get_double(const Json& j, const char* where) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) bad(std::string(where) + ": expected a number");
  return j.get<double>();
}

double get_double(const Json& j, const char* key, const char* where) {
  return get_double(member(j, key, where), where);
}

template <class Int>
Int get_int(const Json& j, const char* key, const char* where) {
  const Json& v = member(j, key, where);
  if (!v.is_number_integer()) bad(std::string(where) + ": '" + key + "' must be an integer");
  if constexpr (std::is_unsigned_v<Int>) {
    if (v.is_number_unsigned()) return v.get<Int>();
    if (v.get<std::int64_t>() < 0) bad(std::string(where) + ": '" + key + "' must be >= 0");
  }
  return v.get<Int>();
}

bool get_bool(const Json& j, const char* key, const char* where) {
  const Json& v = member(j, key, where);
  if (!v.is_boolean()) bad(std::string(where) + ": '" + key + "' must be a boolean");
  return v.get<bool>();
}

std::string get_string(const Json& j, const char* key, const char* where) {
  const Json& v = member(j, key, where);
  if (!v.is_string()) bad(std::string(where) + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

Json vec(const Vec2& v) { return Json::array({number(v.x()), number(v.y())}); }

Vec2 get_vec(const Json& j, const char* where) {
  if (!j.is_array() || j.size() != 2) bad(std::string(where) + ": expected [x, y]");
  return {get_double(j[0], where), get_double(j[1], where)};
}

Vec2 get_vec(const Json& j, const char* key, const char* where) {
  return get_vec(member(j, key, where), where);
}

std::vector<Vec2> get_points(const Json& j, const char* where) {
  if (!j.is_array()) bad(std::string(where) + ": expected an array of [x, y]");
  std::vector<Vec2> pts;
  pts.reserve(j.size());
  for (const auto& p : j) pts.push_back(get_vec(p, where));
  return pts;
}

Json points(std::span<const Vec2> pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back(vec(p));
  return out;
}

template <class T>
void put_optional(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

std::optional<double> optional_double(const Json& j, const char* key, const char* where) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return get_double(*it, where);
}

const char* op_name(CsgOp op) {
  switch (op) {
    case CsgOp::Union: return "union";
    case CsgOp::Intersection: return "intersection";
    case CsgOp::Complement: return "complement";
  }
  return "unknown";
}

Json range_to_json(const IndexRange& r) { return {{"start", r.start}, {"count", r.count}}; }

IndexRange range_from_json(const Json& j) {
  constexpr const char* where = "index range";
  only_keys(j, {"start", "count"}, where);
  return {get_int<std::size_t>(j, "start", where), get_int<std::size_t>(j, "count", where)};
}

}  // namespace

Json curve_to_json(const ClosedCurve& curve) { return {{"points", points(curve.points())}}; }

ClosedCurve curve_from_json(const Json& j) {
  constexpr const char* where = "curve";
  only_keys(j, {"points"}, where);
  return ClosedCurve::from_points(get_points(member(j, "points", where), where));
}

Json domain_to_json(const Domain& domain) {
  return std::visit(
      [](const auto& n) -> Json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return {{"shape", "disk"}, {"center", vec(n.center)}, {"r", number(n.r)}};
        } else if constexpr (std::is_same_v<T, HalfPlane>) {
          return {{"shape", "half_plane"}, {"normal", vec(n.normal)}, {"offset", number(n.offset)}};
        } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
          return {{"shape", "convex_polygon"}, {"vertices", points(n.vertices)}};
        } else if constexpr (std::is_same_v<T, Capsule>) {
          return {{"shape", "capsule"},
                  {"a", vec(n.a)},
                  {"b", vec(n.b)},
                  {"half_width", number(n.half_width)}};
        } else if constexpr (std::is_same_v<T, ArcTube>) {
          return {{"shape", "arc_tube"},
                  {"center", vec(n.center)},
                  {"radius", number(n.radius)},
                  {"angle_start", number(n.angle_start)},
                  {"angle_end", number(n.angle_end)},
                  {"half_width", number(n.half_width)}};
        } else {
          Json children = Json::array();
          for (const auto& c : n.children) children.push_back(domain_to_json(c));
          return {{"op", op_name(n.op)}, {"children", std::move(children)}};
        }
      },
      static_cast<const DomainNode::variant&>(domain.node()));
}

Domain domain_from_json(const Json& j) {
  auto malformed = [](const std::string& what) -> Domain {
    throw Error(ErrorCode::MalformedDomain, what);
  };
  if (!j.is_object()) return malformed("domain node must be an object");
  try {
    if (j.contains("op")) {
      constexpr const char* where = "domain composite";
      only_keys(j, {"op", "children"}, where);
      const std::string op = get_string(j, "op", where);
      const Json& kids = member(j, "children", where);
      if (!kids.is_array()) return malformed("children must be an array");
      std::vector<Domain> children;
      for (const auto& k : kids) children.push_back(domain_from_json(k));
      if (op == "union") return Domain::unite(std::move(children));
      if (op == "intersection") return Domain::intersect(std::move(children));
      if (op == "complement") {
        if (children.size() != 1) return malformed("complement takes exactly one child");
        return Domain::complement(std::move(children.front()));
      }
      return malformed("unknown op '" + op + "'");
    }
    if (!j.contains("shape")) return malformed("domain node needs 'shape' or 'op'");
    const std::string shape = get_string(j, "shape", "domain primitive");
    const char* where = "domain primitive";
    if (shape == "disk") {
      only_keys(j, {"shape", "center", "r"}, where);
      return Domain::disk(get_vec(j, "center", where), get_double(j, "r", where));
    }
    if (shape == "half_plane") {
      only_keys(j, {"shape", "normal", "offset"}, where);
      return Domain::half_plane(get_vec(j, "normal", where), get_double(j, "offset", where));
    }
    if (shape == "convex_polygon") {
      only_keys(j, {"shape", "vertices"}, where);
      return Domain::convex_polygon(get_points(member(j, "vertices", where), where));
    }
    if (shape == "capsule") {
      only_keys(j, {"shape", "a", "b", "half_width"}, where);
      return Domain::capsule(get_vec(j, "a", where), get_vec(j, "b", where),
                             get_double(j, "half_width", where));
    }
    if (shape == "arc_tube") {
      only_keys(j, {"shape", "center", "radius", "angle_start", "angle_end", "half_width"}, where);
      return Domain::arc_tube(get_vec(j, "center", where), get_double(j, "radius", where),
                              get_double(j, "angle_start", where),
                              get_double(j, "angle_end", where),
                              get_double(j, "half_width", where));
    }
    return malformed("unknown shape '" + shape + "'");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidInput) throw Error(ErrorCode::MalformedDomain, e.what());
    throw;
  }
}

Json config_to_json(const SolverConfig& c) {
  Json j = {{"mu0", c.mu0},
            {"mu_growth", c.mu_growth},
            {"outer_loops", c.outer_loops},
            {"max_inner_iters", c.max_inner_iters},
            {"armijo_c", c.armijo_c},
            {"backtrack", c.backtrack},
            {"resample_every", c.resample_every},
            {"N", c.N},
            {"seed", c.seed},
            {"jitter", c.jitter},
            {"crossing_guard", c.crossing_guard}};
  put_optional(j, "initial_step", c.initial_step);
  put_optional(j, "grad_tol", c.grad_tol);
  put_optional(j, "constraint_tol", c.constraint_tol);
  put_optional(j, "guard_distance", c.guard_distance);
  return j;
}

SolverConfig config_from_json(const Json& j) {
  constexpr const char* where = "solver config";
  only_keys(j,
            {"mu0", "mu_growth", "outer_loops", "max_inner_iters", "armijo_c", "backtrack",
             "initial_step", "grad_tol", "constraint_tol", "resample_every", "N", "seed",
             "jitter", "crossing_guard", "guard_distance"},
            where);
  SolverConfig c;
  if (j.contains("mu0")) c.mu0 = get_double(j, "mu0", where);
  if (j.contains("mu_growth")) c.mu_growth = get_double(j, "mu_growth", where);
  if (j.contains("outer_loops")) c.outer_loops = get_int<int>(j, "outer_loops", where);
  if (j.contains("max_inner_iters")) {
    c.max_inner_iters = get_int<int>(j, "max_inner_iters", where);
  }
  if (j.contains("armijo_c")) c.armijo_c = get_double(j, "armijo_c", where);
  if (j.contains("backtrack")) c.backtrack = get_double(j, "backtrack", where);
  c.initial_step = optional_double(j, "initial_step", where);
  c.grad_tol = optional_double(j, "grad_tol", where);
  c.constraint_tol = optional_double(j, "constraint_tol", where);
  if (j.contains("resample_every")) c.resample_every = get_int<int>(j, "resample_every", where);
  if (j.contains("N")) c.N = get_int<std::size_t>(j, "N", where);
  if (j.contains("seed")) c.seed = get_int<std::uint64_t>(j, "seed", where);
  if (j.contains("jitter")) c.jitter = get_double(j, "jitter", where);
  if (j.contains("crossing_guard")) c.crossing_guard = get_bool(j, "crossing_guard", where);
  c.guard_distance = optional_double(j, "guard_distance", where);
  return c;
}

Json trace_row_to_json(const TraceRow& r) {
  return {{"iter", r.iter},
          {"mu", number(r.mu)},
          {"W", number(r.W)},
          {"penalty", number(r.penalty)},
          {"max_violation", number(r.max_violation)},
          {"step", number(r.step)},
          {"grad_norm", number(r.grad_norm)}};
}

TraceRow trace_row_from_json(const Json& j) {
  constexpr const char* where = "trace row";
  only_keys(j, {"iter", "mu", "W", "penalty", "max_violation", "step", "grad_norm"}, where);
  return {get_int<int>(j, "iter", where),          get_double(j, "mu", where),
          get_double(j, "W", where),               get_double(j, "penalty", where),
          get_double(j, "max_violation", where),   get_double(j, "step", where),
          get_double(j, "grad_norm", where)};
}

Json solve_report_to_json(const SolveReport& r) {
  Json trace = Json::array();
  for (const auto& row : r.energy_trace) trace.push_back(trace_row_to_json(row));
  return {{"termination", to_string(r.termination)},
          {"iters", r.iters},
          {"final_W", number(r.final_W)},
          {"final_violation", number(r.final_violation)},
          {"final_grad_norm", number(r.final_grad_norm)},
          {"final_curve", curve_to_json(r.final_curve)},
          {"energy_trace", std::move(trace)}};
}

SolveReport solve_report_from_json(const Json& j) {
  constexpr const char* where = "solve report";
  only_keys(j,
            {"termination", "iters", "final_W", "final_violation", "final_grad_norm",
             "final_curve", "energy_trace"},
            where);
  const Json& rows = member(j, "energy_trace", where);
  if (!rows.is_array()) bad("solve report: energy_trace must be an array");
  std::vector<TraceRow> trace;
  for (const auto& row : rows) trace.push_back(trace_row_from_json(row));
  return {curve_from_json(member(j, "final_curve", where)),
          std::move(trace),
          termination_from_string(get_string(j, "termination", where)),
          get_int<int>(j, "iters", where),
          get_double(j, "final_W", where),
          get_double(j, "final_violation", where),
          get_double(j, "final_grad_norm", where)};
}

Json energy_report_to_json(const EnergyReport& r) {
  Json kappa = Json::array();
  for (double k : r.kappa) kappa.push_back(number(k));
  return {{"W", number(r.W)},
          {"L", number(r.L)},
          {"kappa", std::move(kappa)},
          {"grad_norm", number(r.grad_norm)},
          {"el_residual_max", number(r.el_residual_max)},
          {"below_floor", r.below_floor}};
}

EnergyReport energy_report_from_json(const Json& j) {
  constexpr const char* where = "energy report";
  only_keys(j, {"W", "L", "kappa", "grad_norm", "el_residual_max", "below_floor"}, where);
  EnergyReport r;
  r.W = get_double(j, "W", where);
  r.L = get_double(j, "L", where);
  const Json& kappa = member(j, "kappa", where);
  if (!kappa.is_array()) bad("energy report: kappa must be an array");
  for (const auto& k : kappa) r.kappa.push_back(get_double(k, where));
  r.grad_norm = get_double(j, "grad_norm", where);
  r.el_residual_max = get_double(j, "el_residual_max", where);
  r.below_floor = get_bool(j, "below_floor", where);
  return r;
}

Json structure_report_to_json(const StructureReport& r) {
  Json arcs = Json::array();
  for (const auto& a : r.contacts.boundary_arcs) {
    arcs.push_back({{"start", a.start}, {"end", a.end}, {"point", vec(a.point)}});
  }
  Json couples = Json::array();
  for (const auto& c : r.contacts.self_couples) {
    couples.push_back({{"i", c.i},
                       {"j", c.j},
                       {"gap", number(c.gap)},
                       {"angle_deg", number(c.angle_deg)},
                       {"class", to_string(c.cls)},
                       {"branch_i", range_to_json(c.branch_i)},
                       {"branch_j", range_to_json(c.branch_j)}});
  }
  Json special = nullptr;
  if (r.special_couples) {
    special = Json::array();
    for (const auto& c : *r.special_couples) special.push_back(Json::array({c.t, c.s}));
  }
  Json index = Json::object();
  for (const auto& [value, count] : r.index_values) index[std::to_string(value)] = count;
  Json j = {{"boundary_arcs", std::move(arcs)},
            {"self_couples", std::move(couples)},
            {"multiplicity_ok", r.multiplicity_ok},
            {"non_crossing", r.non_crossing},
            {"nested", r.nested},
            {"special_couples", std::move(special)},
            {"branch_energy_ratio", nullptr},
            {"index_values", std::move(index)},
            {"is_convex", r.is_convex},
            {"bh_ratio", nullptr},
            {"free_arcs",
             {{"arcs", r.free_arcs.arcs},
              {"vertices", r.free_arcs.vertices},
              {"worst_ratio", number(r.free_arcs.worst_ratio)},
              {"max_residual", number(r.free_arcs.max_residual)}}}};
  if (r.branch_energy_ratio) j["branch_energy_ratio"] = number(*r.branch_energy_ratio);
  if (r.bh_ratio) j["bh_ratio"] = number(*r.bh_ratio);
  return j;
}

StructureReport structure_report_from_json(const Json& j) {
  constexpr const char* where = "structure report";
  only_keys(j,
            {"boundary_arcs", "self_couples", "multiplicity_ok", "non_crossing", "nested",
             "special_couples", "branch_energy_ratio", "index_values", "is_convex", "bh_ratio",
             "free_arcs"},
            where);
  StructureReport r;
  const Json& arcs = member(j, "boundary_arcs", where);
  if (!arcs.is_array()) bad("structure report: boundary_arcs must be an array");
  for (const auto& a : arcs) {
    only_keys(a, {"start", "end", "point"}, "boundary arc");
    r.contacts.boundary_arcs.push_back({get_int<std::size_t>(a, "start", "boundary arc"),
                                        get_int<std::size_t>(a, "end", "boundary arc"),
                                        get_vec(a, "point", "boundary arc")});
  }
  const Json& couples = member(j, "self_couples", where);
  if (!couples.is_array()) bad("structure report: self_couples must be an array");
  for (const auto& c : couples) {
    constexpr const char* cw = "self couple";
    only_keys(c, {"i", "j", "gap", "angle_deg", "class", "branch_i", "branch_j"}, cw);
    r.contacts.self_couples.push_back({get_int<std::size_t>(c, "i", cw),
                                       get_int<std::size_t>(c, "j", cw),
                                       get_double(c, "gap", cw),
                                       get_double(c, "angle_deg", cw),
                                       contact_class_from_string(get_string(c, "class", cw)),
                                       range_from_json(member(c, "branch_i", cw)),
                                       range_from_json(member(c, "branch_j", cw))});
  }
  r.multiplicity_ok = get_bool(j, "multiplicity_ok", where);
  r.non_crossing = get_bool(j, "non_crossing", where);
  r.nested = get_bool(j, "nested", where);
  const Json& special = member(j, "special_couples", where);
  if (!special.is_null()) {
    if (!special.is_array() || special.size() != 2) bad("special_couples must be two pairs");
    std::array<CyclicCouple, 2> pair;
    for (std::size_t k = 0; k < 2; ++k) {
      const Json& c = special[k];
      if (!c.is_array() || c.size() != 2 || !c[0].is_number_unsigned() ||
          !c[1].is_number_unsigned()) {
        bad("special couple must be [t, s] with non-negative integers");
      }
      pair[k] = {c[0].get<std::size_t>(), c[1].get<std::size_t>()};
    }
    r.special_couples = pair;
  }
  r.branch_energy_ratio = optional_double(j, "branch_energy_ratio", where);
  const Json& index = member(j, "index_values", where);
  if (!index.is_object()) bad("index_values must be an object");
  for (const auto& [key, count] : index.items()) {
    int value = 0;
    std::istringstream in(key);
    if (!(in >> value) || !in.eof()) bad("index_values key '" + key + "' is not an integer");
    if (!count.is_number_unsigned()) bad("index_values counts must be non-negative integers");
    r.index_values[value] = count.get<std::size_t>();
  }
  r.is_convex = get_bool(j, "is_convex", where);
  r.bh_ratio = optional_double(j, "bh_ratio", where);
  const Json& free = member(j, "free_arcs", where);
  only_keys(free, {"arcs", "vertices", "worst_ratio", "max_residual"}, "free arcs");
  r.free_arcs = {get_int<std::size_t>(free, "arcs", "free arcs"),
                 get_int<std::size_t>(free, "vertices", "free arcs"),
                 get_double(free, "worst_ratio", "free arcs"),
                 get_double(free, "max_residual", "free arcs")};
  return r;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::string out = "iter,mu,W,penalty,max_violation,step\n";
  for (const auto& r : trace) {
    // Json's number formatting is the shortest round-trip form.
    out += std::to_string(r.iter);
    for (double x : {r.mu, r.W, r.penalty, r.max_violation, r.step}) {
      out += ',';
      out += number(x).dump();
    }
    out += '\n';
  }
  return out;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    bad(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) bad("cannot write " + path.string());
}

}  // namespace elastica::io
