#include "elastica/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "elastica/energy.hpp"
#include "elastica/error.hpp"

namespace elastica {

namespace {

std::size_t cyclic_gap(std::size_t a, std::size_t b, std::size_t n) {
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, n - d);
}

// Maximal cyclic runs of `flag`, as (start, count). A fully set mask is one
// run starting at 0.
std::vector<IndexRange> runs(const std::vector<bool>& flag) {
  const std::size_t n = flag.size();
  std::vector<IndexRange> out;
  if (std::all_of(flag.begin(), flag.end(), [](bool b) { return b; })) {
    out.push_back({0, n});
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!flag[i] || flag[(i + n - 1) % n]) continue;
    std::size_t count = 0;
    while (flag[(i + count) % n]) ++count;
    out.push_back({i, count});
  }
  return out;
}

// Smallest cyclic range covering every index in `idx` (non-empty).
IndexRange covering_range(std::vector<std::size_t> idx, std::size_t n) {
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  const std::size_t m = idx.size();
  std::size_t best_gap = idx[0] + n - idx[m - 1];
  std::size_t start = idx[0];
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const std::size_t gap = idx[k + 1] - idx[k];
    if (gap > best_gap) {
      best_gap = gap;
      start = idx[k + 1];
    }
  }
  return {start, n - best_gap + 1};
}

bool ranges_overlap(const IndexRange& a, const IndexRange& b, std::size_t n) {
  return a.contains(b.start, n) || b.contains(a.start, n);
}

// Strictly inside ]a, b[ for a < b.
bool strictly_inside(std::size_t x, std::size_t a, std::size_t b) { return a < x && x < b; }

bool couples_cross(const SelfCouple& a, const SelfCouple& b) {
  auto outside = [&](std::size_t x) { return x < a.i || x > a.j; };
  const bool bi_in = strictly_inside(b.i, a.i, a.j);
  const bool bj_in = strictly_inside(b.j, a.i, a.j);
  return (bi_in && outside(b.j)) || (bj_in && outside(b.i));
}

// Does chord c put x and y on different sides? Assumes no crossings.
bool separates(const SelfCouple& c, const SelfCouple& x, const SelfCouple& y) {
  auto side = [&](const SelfCouple& k) {
    return strictly_inside(k.i, c.i, c.j) || strictly_inside(k.j, c.i, c.j);
  };
  return side(x) != side(y);
}

int out_of_range(const std::map<int, std::size_t>& hist) {
  int bad = 0;
  for (const auto& [value, count] : hist) {
    if (value != 0 && value != 1) bad += static_cast<int>(count);
  }
  return bad;
}

}  // namespace

const char* to_string(ContactClass c) {
  switch (c) {
    case ContactClass::TangentialParallel: return "tangential_parallel";
    case ContactClass::TangentialAntiparallel: return "tangential_antiparallel";
    case ContactClass::Transversal: return "transversal";
  }
  return "unknown";
}

ContactClass contact_class_from_string(const std::string& name) {
  for (auto c : {ContactClass::TangentialParallel, ContactClass::TangentialAntiparallel,
                 ContactClass::Transversal}) {
    if (name == to_string(c)) return c;
  }
  throw Error(ErrorCode::InvalidInput, "unknown contact class '" + name + "'");
}

SelfCouple point_couple(std::size_t i, std::size_t j) {
  SelfCouple c;
  c.i = std::min(i, j);
  c.j = std::max(i, j);
  c.branch_i = {c.i, 1};
  c.branch_j = {c.j, 1};
  return c;
}

std::vector<BoundaryArc> boundary_contacts(const ClosedCurve& curve, const Domain& domain,
                                           std::optional<double> tol) {
  const double t = tol.value_or(1e-3 * scale(domain));
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidParameters, "tol must be positive", std::nullopt, t);
  const std::size_t n = curve.size();
  std::vector<bool> on(n);
  for (std::size_t i = 0; i < n; ++i) on[i] = std::abs(sdf(domain, curve[i]).sdf) <= t;
  if (std::none_of(on.begin(), on.end(), [](bool b) { return b; })) return {};

  std::vector<bool> off(n);
  for (std::size_t i = 0; i < n; ++i) off[i] = !on[i];
  for (const auto& gap : runs(off)) {
    if (gap.count < 3) {
      for (std::size_t k = 0; k < gap.count; ++k) on[(gap.start + k) % n] = true;
    }
  }

  std::vector<BoundaryArc> arcs;
  for (const auto& r : runs(on)) {
    arcs.push_back({r.start, r.last(n), curve[(r.start + r.count / 2) % n]});
  }
  std::sort(arcs.begin(), arcs.end(),
            [](const BoundaryArc& a, const BoundaryArc& b) { return a.start < b.start; });
  return arcs;
}

std::vector<SelfCouple> self_contacts(const ClosedCurve& curve, const SelfContactOptions& options) {
  const std::size_t n = curve.size();
  const double cscale = bounds(curve).half_extent();
  const double tol_d = options.tol_d.value_or(1e-3 * cscale);
  const std::size_t min_sep = options.min_separation.value_or((n + 19) / 20);
  if (!(tol_d > 0.0)) {
    throw Error(ErrorCode::InvalidParameters, "tol_d must be positive", std::nullopt, tol_d);
  }

  // Edge k runs from vertex k to vertex k + 1.
  std::vector<Vec2> lo(n), hi(n);
  for (std::size_t k = 0; k < n; ++k) {
    lo[k] = curve[k].cwiseMin(curve[(k + 1) % n]).array() - tol_d;
    hi[k] = curve[k].cwiseMax(curve[(k + 1) % n]).array() + tol_d;
  }
  auto key = [n](std::size_t a, std::size_t b) {
    return static_cast<std::uint64_t>(std::min(a, b)) * n + std::max(a, b);
  };
  std::unordered_map<std::uint64_t, double> pairs;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (cyclic_gap(a, b, n) < min_sep) continue;
      if (lo[a].x() > hi[b].x() + tol_d || lo[b].x() > hi[a].x() + tol_d ||
          lo[a].y() > hi[b].y() + tol_d || lo[b].y() > hi[a].y() + tol_d) {
        continue;
      }
      const double d =
          segment_distance(curve[a], curve[(a + 1) % n], curve[b], curve[(b + 1) % n]);
      if (d <= tol_d) pairs.emplace(key(a, b), d);
    }
  }
  if (pairs.empty()) return {};

  // Clusters: pairs within two index steps on both strands belong together.
  // The walk keeps track of which strand each index sits on, so clusters may
  // straddle vertex 0.
  std::vector<std::uint64_t> order;
  order.reserve(pairs.size());
  for (const auto& [k, d] : pairs) order.push_back(k);
  std::sort(order.begin(), order.end());
  std::unordered_map<std::uint64_t, bool> seen;
  std::vector<SelfCouple> couples;
  for (std::uint64_t root : order) {
    if (seen.count(root)) continue;
    struct Member {
      std::size_t a, b;
      double d;
    };
    std::vector<Member> members;
    std::deque<std::pair<std::size_t, std::size_t>> queue{
        {static_cast<std::size_t>(root / n), static_cast<std::size_t>(root % n)}};
    seen[root] = true;
    while (!queue.empty()) {
      const auto [a, b] = queue.front();
      queue.pop_front();
      members.push_back({a, b, pairs.at(key(a, b))});
      for (int da = -2; da <= 2; ++da) {
        for (int db = -2; db <= 2; ++db) {
          const std::size_t a2 = (a + n + static_cast<std::size_t>(da + 2) - 2) % n;
          const std::size_t b2 = (b + n + static_cast<std::size_t>(db + 2) - 2) % n;
          if (a2 == b2) continue;
          const std::uint64_t k2 = key(a2, b2);
          if (!pairs.count(k2) || seen.count(k2)) continue;
          seen[k2] = true;
          queue.emplace_back(a2, b2);
        }
      }
    }

    std::vector<std::size_t> side_a, side_b;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : members) {
      side_a.push_back(m.a);
      side_b.push_back(m.b);
      best = std::min(best, m.d);
    }
    const IndexRange edges_a = covering_range(side_a, n);
    const IndexRange edges_b = covering_range(side_b, n);
    // Exact ties are common where discrete strands interleave; take the tied
    // pair nearest the middle of the cluster.
    const std::size_t mid_a = (edges_a.start + edges_a.count / 2) % n;
    const Member* rep = nullptr;
    std::size_t rep_offset = n;
    for (const auto& m : members) {
      if (m.d > best + 1e-12 * cscale) continue;
      const std::size_t off = cyclic_gap(m.a, mid_a, n);
      if (off < rep_offset || (off == rep_offset && key(m.a, m.b) < key(rep->a, rep->b))) {
        rep = &m;
        rep_offset = off;
      }
    }

    const Vec2 a0 = curve[rep->a], a1 = curve[(rep->a + 1) % n];
    const Vec2 b0 = curve[rep->b], b1 = curve[(rep->b + 1) % n];
    const std::size_t va =
        point_segment_distance(a0, b0, b1) <= point_segment_distance(a1, b0, b1) ? rep->a
                                                                                 : (rep->a + 1) % n;
    const std::size_t vb =
        point_segment_distance(b0, a0, a1) <= point_segment_distance(b1, a0, a1) ? rep->b
                                                                                 : (rep->b + 1) % n;
    const Vec2 ea = (a1 - a0).normalized();
    const Vec2 eb = (b1 - b0).normalized();
    const double c = ea.dot(eb);
    const double angle = std::acos(std::min(1.0, std::abs(c))) * 180.0 / std::numbers::pi;

    SelfCouple couple;
    couple.gap = rep->d;
    couple.angle_deg = angle;
    couple.cls = angle > options.tol_angle_deg ? ContactClass::Transversal
                 : c < 0.0                     ? ContactClass::TangentialAntiparallel
                                               : ContactClass::TangentialParallel;
    // Vertex ranges: an edge range plus its closing vertex.
    const IndexRange range_a{edges_a.start, std::min(n, edges_a.count + 1)};
    const IndexRange range_b{edges_b.start, std::min(n, edges_b.count + 1)};
    if (va < vb) {
      couple.i = va, couple.j = vb, couple.branch_i = range_a, couple.branch_j = range_b;
    } else {
      couple.i = vb, couple.j = va, couple.branch_i = range_b, couple.branch_j = range_a;
    }
    couples.push_back(couple);
  }
  std::sort(couples.begin(), couples.end(), [](const SelfCouple& x, const SelfCouple& y) {
    return std::pair(x.i, x.j) < std::pair(y.i, y.j);
  });
  return couples;
}

Decomposition verify_decomposition(const std::vector<SelfCouple>& couples, std::size_t n) {
  const std::size_t m = couples.size();
  for (const auto& c : couples) {
    if (!(c.i < c.j && c.j < n)) {
      throw Error(ErrorCode::InvalidInput, "couple indices must satisfy i < j < N", c.i);
    }
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const auto& x = couples[a];
      const auto& y = couples[b];
      for (const auto* rx : {&x.branch_i, &x.branch_j}) {
        for (const auto* ry : {&y.branch_i, &y.branch_j}) {
          if (ranges_overlap(*rx, *ry, n)) {
            throw Error(ErrorCode::MultiplicityViolation,
                        "three branches meet near vertex " + std::to_string(rx->start),
                        rx->start);
          }
        }
      }
    }
  }

  Decomposition out;
  for (std::size_t a = 0; a < m && out.non_crossing; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (a != b && couples_cross(couples[a], couples[b])) {
        out.non_crossing = false;
        break;
      }
    }
  }
  out.nested = out.non_crossing;
  for (std::size_t a = 0; a < m && out.nested; ++a) {
    for (std::size_t b = a + 1; b < m && out.nested; ++b) {
      for (std::size_t c = b + 1; c < m; ++c) {
        const auto& x = couples[a];
        const auto& y = couples[b];
        const auto& z = couples[c];
        if (!separates(x, y, z) && !separates(y, x, z) && !separates(z, x, y)) {
          out.nested = false;
          break;
        }
      }
    }
  }

  // An extended cluster is a continuum of couples; its two end pairs are
  // distinct couples, so one such cluster can already bound two free arcs.
  const bool extended = m == 1 && (couples[0].branch_i.count > 1 || couples[0].branch_j.count > 1);
  if (m < 2 && !extended) return out;
  std::vector<bool> contact(n, false);
  for (const auto& c : couples) {
    for (const auto* r : {&c.branch_i, &c.branch_j}) {
      for (std::size_t k = 0; k < r->count; ++k) contact[(r->start + k) % n] = true;
    }
  }
  // Each couple bounds two arcs: between its strands going forward from
  // branch_i, and going forward from branch_j.
  auto empty_arc = [&](std::size_t from, std::size_t to) {
    for (std::size_t k = (from + 1) % n; k != to; k = (k + 1) % n) {
      if (contact[k]) return false;
    }
    return true;
  };
  std::vector<CyclicCouple> empty;
  for (const auto& c : couples) {
    if (ranges_overlap(c.branch_i, c.branch_j, n)) continue;
    const CyclicCouple inner{c.branch_i.last(n), c.branch_j.start};
    const CyclicCouple outer{c.branch_j.last(n), c.branch_i.start};
    for (const auto& arc : {inner, outer}) {
      if (empty_arc(arc.t, arc.s)) empty.push_back(arc);
    }
  }
  if (empty.size() == 2) {
    std::sort(empty.begin(), empty.end(),
              [](const CyclicCouple& a, const CyclicCouple& b) { return a.t < b.t; });
    out.special = std::array<CyclicCouple, 2>{empty[0], empty[1]};
  } else {
    spdlog::debug("verify_decomposition: {} contact-free arcs, no special pair", empty.size());
  }
  return out;
}

ClosedCurve reorient_canonical(const ClosedCurve& curve) {
  return signed_area(curve) < 0.0 ? reversed(curve) : curve;
}

ClosedCurve splice(const ClosedCurve& curve, std::size_t i, std::size_t j) {
  const std::size_t n = curve.size();
  if (!(i + 1 < j && j < n)) {
    throw Error(ErrorCode::InvalidInput, "splice needs i + 1 < j < N", j);
  }
  std::vector<Vec2> pts(curve.points().begin(), curve.points().end());
  std::reverse(pts.begin() + static_cast<std::ptrdiff_t>(i + 1),
               pts.begin() + static_cast<std::ptrdiff_t>(j));
  return ClosedCurve::from_points(std::move(pts));
}

std::map<int, std::size_t> index_profile(const ClosedCurve& curve, int grid_resolution) {
  if (grid_resolution < 16) {
    throw Error(ErrorCode::InvalidParameters, "grid_resolution must be at least 16",
                std::nullopt, grid_resolution);
  }
  ClosedCurve current = reorient_canonical(curve);
  const Box box = bounds(current);
  const double exclusion = 2.0 * length(current) / static_cast<double>(current.size());
  const auto res = static_cast<std::size_t>(grid_resolution);
  std::vector<Vec2> samples;
  for (std::size_t gy = 0; gy < res; ++gy) {
    for (std::size_t gx = 0; gx < res; ++gx) {
      const Vec2 z(box.lo.x() + (static_cast<double>(gx) + 0.5) * (box.hi.x() - box.lo.x()) /
                                    static_cast<double>(res),
                   box.lo.y() + (static_cast<double>(gy) + 0.5) * (box.hi.y() - box.lo.y()) /
                                    static_cast<double>(res));
      if (distance_to_curve(current, z) > exclusion) samples.push_back(z);
    }
  }
  auto histogram = [&](const ClosedCurve& c) {
    std::map<int, std::size_t> h;
    for (const auto& z : samples) ++h[winding_number(c, z)];
    return h;
  };

  std::map<int, std::size_t> hist = histogram(current);
  int bad = out_of_range(hist);
  // Splice loops whose orientation disagrees with the rest; each accepted
  // splice strictly lowers the count, so this terminates.
  bool improved = bad > 0;
  while (improved) {
    improved = false;
    for (const auto& c : self_contacts(current)) {
      if (c.cls != ContactClass::TangentialAntiparallel || c.i + 1 >= c.j) continue;
      ClosedCurve candidate = reorient_canonical(splice(current, c.i, c.j));
      auto h = histogram(candidate);
      const int b = out_of_range(h);
      if (b < bad) {
        spdlog::debug("index_profile: spliced couple ({}, {}), {} -> {} off-range samples", c.i,
                      c.j, bad, b);
        current = std::move(candidate);
        hist = std::move(h);
        bad = b;
        improved = bad > 0;
        break;
      }
    }
  }
  return hist;
}

SupportLine tangent_line(const ClosedCurve& curve, std::size_t i) {
  const auto ii = static_cast<std::ptrdiff_t>(i);
  const Vec2 d = curve.at(ii + 1) - curve.at(ii - 1);
  if (d.norm() == 0.0) throw Error(ErrorCode::DegenerateEdge, "vanishing central difference", i);
  const Vec2 normal = -perp(d.normalized());
  return {normal, normal.dot(curve[i])};
}

bool is_support_line(const ClosedCurve& curve, const SupportLine& line, double tol) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& p : curve.points()) {
    const double v = line.normal.dot(p) - line.offset;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return lo >= -tol || hi <= tol;
}

bool is_convex(const ClosedCurve& curve, std::optional<double> tol) {
  require_uniform(curve);
  const double t = tol.value_or(1e-6 * bounds(curve).half_extent());
  double total = 0.0;
  for (double theta : turning_angles(curve)) total += theta;
  if (std::abs(std::abs(total) - 2.0 * std::numbers::pi) > 1e-6) return false;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!is_support_line(curve, tangent_line(curve, i), t)) return false;
  }
  return true;
}

double bh_ratio(const ClosedCurve& curve) {
  SelfContactOptions strict;
  strict.tol_d = 1e-6 * bounds(curve).half_extent();
  const auto couples = self_contacts(curve, strict);
  if (!couples.empty()) {
    throw Error(ErrorCode::NotSimple, "curve has self-contacts", couples.front().i,
                couples.front().gap);
  }
  const double W = bending_energy(curve);
  return W * W * std::abs(signed_area(curve)) / (4.0 * std::pow(std::numbers::pi, 3));
}

double arc_energy(const ClosedCurve& curve, std::size_t a, std::size_t b) {
  const std::size_t n = curve.size();
  const double nd = static_cast<double>(n);
  const double L = length(curve);
  const double factor = nd * nd * nd / (L * L * L);
  double sum = 0.0;
  for (std::size_t k = (a + 1) % n; k != b % n; k = (k + 1) % n) {
    const auto kk = static_cast<std::ptrdiff_t>(k);
    sum += (curve.at(kk + 1) - 2.0 * curve[k] + curve.at(kk - 1)).squaredNorm();
  }
  return factor * sum;
}

double branch_energy_ratio(const ClosedCurve& curve, const std::array<CyclicCouple, 2>& special) {
  const auto& [first, second] = special;
  const double forward = arc_energy(curve, first.s, second.t);
  const double backward = arc_energy(curve, second.s, first.t);
  return forward / backward;
}

FreeArcResidual free_arc_residual(const ClosedCurve& curve, const Domain& domain,
                                  const std::vector<SelfCouple>& couples, double tol) {
  const std::size_t n = curve.size();
  const auto residual = el_residual(curve);
  const auto kappa = curvature_field(curve);
  std::vector<bool> free(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool in_contact = false;
    for (const auto& c : couples) {
      in_contact = in_contact || c.branch_i.contains(i, n) || c.branch_j.contains(i, n);
    }
    free[i] = !in_contact && sdf(domain, curve[i]).sdf < -2.0 * tol;
  }

  FreeArcResidual out;
  for (const auto& r : runs(free)) {
    const bool whole = r.count == n;
    double k3 = 0.0;
    for (std::size_t k = 0; k < r.count; ++k) {
      k3 = std::max(k3, std::pow(std::abs(kappa[(r.start + k) % n]), 3));
    }
    // Residual at i reads vertices i-2..i+2.
    const std::size_t skip = whole ? 0 : 2;
    if (r.count <= 2 * skip) continue;
    double worst = 0.0;
    for (std::size_t k = skip; k + skip < r.count; ++k) {
      worst = std::max(worst, std::abs(residual[(r.start + k) % n]));
      ++out.vertices;
    }
    ++out.arcs;
    out.max_residual = std::max(out.max_residual, worst);
    const double ratio = k3 > 0.0 ? worst / k3 : (worst > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    out.worst_ratio = std::max(out.worst_ratio, ratio);
  }
  return out;
}

StructureReport analyze_structure(const ClosedCurve& curve, const Domain& domain,
                                  const AnalyzeOptions& options) {
  require_uniform(curve);
  const double tol = options.contact_tol.value_or(1e-3 * scale(domain));
  StructureReport report;
  report.contacts.boundary_arcs = boundary_contacts(curve, domain, tol);
  SelfContactOptions sc;
  sc.tol_d = tol;
  sc.tol_angle_deg = options.tol_angle_deg;
  report.contacts.self_couples = self_contacts(curve, sc);
  if (report.contacts.boundary_arcs.size() < 2) {
    spdlog::warn("analyze: only {} boundary contact arc(s); a minimizer has at least two",
                 report.contacts.boundary_arcs.size());
  }

  try {
    const Decomposition d = verify_decomposition(report.contacts.self_couples, curve.size());
    report.non_crossing = d.non_crossing;
    report.nested = d.nested;
    report.special_couples = d.special;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::MultiplicityViolation) throw;
    spdlog::warn("analyze: {}", e.what());
    report.multiplicity_ok = false;
    report.non_crossing = false;
    report.nested = false;
  }
  if (report.special_couples) {
    report.branch_energy_ratio = branch_energy_ratio(curve, *report.special_couples);
  }
  report.index_values = index_profile(curve, options.grid_resolution);
  report.is_convex = is_convex(curve);
  try {
    report.bh_ratio = bh_ratio(curve);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotSimple) throw;
  }
  report.free_arcs = free_arc_residual(curve, domain, report.contacts.self_couples, tol);
  return report;
}

}  // namespace elastica
