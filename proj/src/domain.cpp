#include "elastica/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "elastica/error.hpp"

namespace elastica {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedDomain, what);
}

[[noreturn]] void invalid(const std::string& what, std::optional<double> value = std::nullopt) {
  throw Error(ErrorCode::InvalidParameters, what, std::nullopt, value);
}

bool finite(const Vec2& v) { return std::isfinite(v.x()) && std::isfinite(v.y()); }

// Outward unit direction from `from` to `p`; an arbitrary fixed direction when
// the two coincide.
Vec2 direction(const Vec2& p, const Vec2& from) {
  const Vec2 d = p - from;
  const double n = d.norm();
  return n > 0.0 ? Vec2(d / n) : Vec2::UnitX();
}

Vec2 closest_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return a + t * ab;
}

// Counterclockwise angular offset of `angle` from `start`, in [0, 2 pi).
double ccw_offset(double angle, double start) {
  double d = std::fmod(angle - start, kTwoPi);
  if (d < 0.0) d += kTwoPi;
  return d;
}

DomainSample eval(const Disk& d, const Vec2& p) {
  return {(p - d.center).norm() - d.r, direction(p, d.center)};
}

DomainSample eval(const HalfPlane& h, const Vec2& p) {
  return {h.normal.dot(p) - h.offset, h.normal};
}

DomainSample eval(const ConvexPolygon& poly, const Vec2& p) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  double best = -std::numeric_limits<double>::infinity();
  Vec2 best_normal = Vec2::UnitX();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = v[(i + 1) % n] - v[i];
    const Vec2 normal = Vec2(e.y(), -e.x()).normalized();
    const double s = normal.dot(p - v[i]);
    if (s > best) {
      best = s;
      best_normal = normal;
    }
  }
  if (best <= 0.0) return {best, best_normal};
  double dist = std::numeric_limits<double>::infinity();
  Vec2 closest = v[0];
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 c = closest_on_segment(p, v[i], v[(i + 1) % n]);
    const double d = (p - c).norm();
    if (d < dist) {
      dist = d;
      closest = c;
    }
  }
  return {dist, direction(p, closest)};
}

DomainSample eval(const Capsule& c, const Vec2& p) {
  const Vec2 q = closest_on_segment(p, c.a, c.b);
  return {(p - q).norm() - c.half_width, direction(p, q)};
}

DomainSample eval(const ArcTube& t, const Vec2& p) {
  const Vec2 rel = p - t.center;
  const double r = rel.norm();
  const double span = t.angle_end - t.angle_start;
  if (r > 0.0 && ccw_offset(std::atan2(rel.y(), rel.x()), t.angle_start) <= span) {
    const double radial = r - t.radius;
    const Vec2 out = rel / r;
    return {std::abs(radial) - t.half_width, radial >= 0.0 ? out : Vec2(-out)};
  }
  const Vec2 e0 = t.center + t.radius * Vec2(std::cos(t.angle_start), std::sin(t.angle_start));
  const Vec2 e1 = t.center + t.radius * Vec2(std::cos(t.angle_end), std::sin(t.angle_end));
  const double d0 = (p - e0).norm();
  const double d1 = (p - e1).norm();
  if (d0 <= d1) return {d0 - t.half_width, direction(p, e0)};
  return {d1 - t.half_width, direction(p, e1)};
}

DomainSample eval_node(const DomainNode& node, const Vec2& p);

DomainSample eval(const Composite& c, const Vec2& p) {
  switch (c.op) {
    case CsgOp::Complement: {
      DomainSample s = eval_node(c.children[0].node(), p);
      return {-s.sdf, -s.gradient};
    }
    case CsgOp::Union: {
      DomainSample best = eval_node(c.children[0].node(), p);
      for (std::size_t i = 1; i < c.children.size(); ++i) {
        DomainSample s = eval_node(c.children[i].node(), p);
        if (s.sdf < best.sdf) best = s;
      }
      return best;
    }
    case CsgOp::Intersection: {
      DomainSample best = eval_node(c.children[0].node(), p);
      for (std::size_t i = 1; i < c.children.size(); ++i) {
        DomainSample s = eval_node(c.children[i].node(), p);
        if (s.sdf > best.sdf) best = s;
      }
      return best;
    }
  }
  malformed("unknown CSG operator");
}

DomainSample eval_node(const DomainNode& node, const Vec2& p) {
  return std::visit([&](const auto& n) { return eval(n, p); }, node);
}

// Conservative extent: an optional box plus half-plane cuts that apply to it.
// No box means the region is unbounded (or not known to be bounded).
struct Extent {
  std::optional<Box> box;
  std::vector<HalfPlane> cuts;
};

Box pad(Box b, double w) {
  b.lo.array() -= w;
  b.hi.array() += w;
  return b;
}

Extent extent(const DomainNode& node);

Extent extent_of(const Disk& d) {
  return {Box{d.center.array() - d.r, d.center.array() + d.r}, {}};
}

Extent extent_of(const HalfPlane& h) { return {std::nullopt, {h}}; }

Extent extent_of(const ConvexPolygon& poly) { return {bounds(poly.vertices), {}}; }

Extent extent_of(const Capsule& c) {
  const std::array<Vec2, 2> ends{c.a, c.b};
  return {pad(bounds(ends), c.half_width), {}};
}

Extent extent_of(const ArcTube& t) {
  std::vector<Vec2> pts;
  pts.push_back(t.center + t.radius * Vec2(std::cos(t.angle_start), std::sin(t.angle_start)));
  pts.push_back(t.center + t.radius * Vec2(std::cos(t.angle_end), std::sin(t.angle_end)));
  const double span = t.angle_end - t.angle_start;
  for (int k = 0; k < 4; ++k) {
    const double a = k * kPi / 2.0;
    if (ccw_offset(a, t.angle_start) <= span) {
      pts.push_back(t.center + t.radius * Vec2(std::cos(a), std::sin(a)));
    }
  }
  return {pad(bounds(pts), t.half_width), {}};
}

Extent extent_of(const Composite& c) {
  switch (c.op) {
    case CsgOp::Complement:
      return {};
    case CsgOp::Union: {
      Extent out;
      for (const auto& child : c.children) {
        Extent e = extent(child.node());
        if (!e.box) return {};
        if (!out.box) {
          out.box = e.box;
        } else {
          out.box->lo = out.box->lo.cwiseMin(e.box->lo);
          out.box->hi = out.box->hi.cwiseMax(e.box->hi);
        }
      }
      return out;
    }
    case CsgOp::Intersection: {
      Extent out;
      for (const auto& child : c.children) {
        Extent e = extent(child.node());
        if (e.box) {
          if (!out.box) {
            out.box = e.box;
          } else {
            out.box->lo = out.box->lo.cwiseMax(e.box->lo);
            out.box->hi = out.box->hi.cwiseMin(e.box->hi);
          }
        }
        out.cuts.insert(out.cuts.end(), e.cuts.begin(), e.cuts.end());
      }
      return out;
    }
  }
  return {};
}

Extent extent(const DomainNode& node) {
  return std::visit([](const auto& n) { return extent_of(n); }, node);
}

// Sutherland-Hodgman clip of a convex polygon by { normal . p <= offset }.
std::vector<Vec2> clip(const std::vector<Vec2>& poly, const HalfPlane& h) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const double sa = h.normal.dot(a) - h.offset;
    const double sb = h.normal.dot(b) - h.offset;
    if (sa <= 0.0) out.push_back(a);
    if ((sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0)) {
      out.push_back(a + (sa / (sa - sb)) * (b - a));
    }
  }
  return out;
}

void validate_tree(const Domain& d) {
  if (d.empty()) malformed("empty domain node");
}

}  // namespace

const DomainNode& Domain::node() const {
  if (!node_) malformed("empty domain");
  return *node_;
}

bool operator==(const Domain& a, const Domain& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return static_cast<const DomainNode::variant&>(*a.node_) ==
         static_cast<const DomainNode::variant&>(*b.node_);
}

Domain Domain::disk(const Vec2& center, double r) {
  if (!finite(center)) malformed("disk center must be finite");
  if (!(r > 0.0) || !std::isfinite(r)) malformed("disk radius must be positive");
  return Domain(std::make_shared<const DomainNode>(Disk{center, r}));
}

Domain Domain::half_plane(const Vec2& normal, double offset) {
  const double n = normal.norm();
  if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(offset)) {
    malformed("half-plane needs a finite nonzero normal");
  }
  return Domain(std::make_shared<const DomainNode>(HalfPlane{normal / n, offset / n}));
}

Domain Domain::convex_polygon(std::vector<Vec2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) malformed("convex polygon needs at least 3 vertices");
  for (const auto& v : vertices) {
    if (!finite(v)) malformed("convex polygon vertices must be finite");
  }
  const double tol = 1e-12 * bounds(vertices).diagonal();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = vertices[(i + 1) % n] - vertices[i];
    const Vec2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    if (e0.norm() <= tol) malformed("convex polygon has a repeated vertex");
    if (cross(e0, e1) < 0.0) malformed("convex polygon must be convex and counterclockwise");
  }
  double twice_area = 0.0;
  for (std::size_t i = 0; i < n; ++i) twice_area += cross(vertices[i], vertices[(i + 1) % n]);
  if (!(twice_area > 0.0)) malformed("convex polygon must have positive counterclockwise area");
  return Domain(std::make_shared<const DomainNode>(ConvexPolygon{std::move(vertices)}));
}

Domain Domain::capsule(const Vec2& a, const Vec2& b, double half_width) {
  if (!finite(a) || !finite(b)) malformed("capsule endpoints must be finite");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    malformed("capsule half-width must be positive");
  }
  return Domain(std::make_shared<const DomainNode>(Capsule{a, b, half_width}));
}

Domain Domain::arc_tube(const Vec2& center, double radius, double angle_start, double angle_end,
                        double half_width) {
  if (!finite(center)) malformed("arc tube center must be finite");
  if (!(radius > 0.0) || !std::isfinite(radius)) malformed("arc tube radius must be positive");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    malformed("arc tube half-width must be positive");
  }
  if (!(angle_end > angle_start) || !(angle_end - angle_start <= kTwoPi)) {
    malformed("arc tube needs angle_start < angle_end <= angle_start + 2 pi");
  }
  return Domain(std::make_shared<const DomainNode>(
      ArcTube{center, radius, angle_start, angle_end, half_width}));
}

Domain Domain::unite(std::vector<Domain> children) {
  if (children.empty()) malformed("union needs at least one child");
  for (const auto& c : children) validate_tree(c);
  return Domain(std::make_shared<const DomainNode>(Composite{CsgOp::Union, std::move(children)}));
}

Domain Domain::intersect(std::vector<Domain> children) {
  if (children.empty()) malformed("intersection needs at least one child");
  for (const auto& c : children) validate_tree(c);
  return Domain(
      std::make_shared<const DomainNode>(Composite{CsgOp::Intersection, std::move(children)}));
}

Domain Domain::complement(Domain child) {
  validate_tree(child);
  return Domain(std::make_shared<const DomainNode>(
      Composite{CsgOp::Complement, std::vector<Domain>{std::move(child)}}));
}

DomainSample sdf(const Domain& domain, const Vec2& p) { return eval_node(domain.node(), p); }

bool contains(const Domain& domain, const Vec2& p, double tol) {
  return sdf(domain, p).sdf <= tol;
}

Vec2 project(const Domain& domain, const Vec2& p) { return project(domain, p, scale(domain)); }

Vec2 project(const Domain& domain, const Vec2& p, double s) {
  const double target = 1e-9 * s;
  Vec2 q = p;
  DomainSample sample = sdf(domain, q);
  for (int step = 0; step < 50; ++step) {
    if (sample.sdf <= target) return q;
    // Aim slightly past the zero level so round-off lands inside the band.
    q -= (sample.sdf + 0.5 * target) * sample.gradient;
    sample = sdf(domain, q);
  }
  if (sample.sdf <= target) return q;
  throw Error(ErrorCode::ProjectionFailed, "projection did not reach the domain", std::nullopt,
              sample.sdf);
}

Box bounds(const Domain& domain) {
  // Half-planes alone may still bound a region; clip a huge box and check
  // that nothing of it survives at the far edge.
  constexpr double kFar = 1e9;
  const Extent e = extent(domain.node());
  if (!e.box && e.cuts.empty()) malformed("domain is unbounded");
  const Box box = e.box ? *e.box : Box{Vec2::Constant(-kFar), Vec2::Constant(kFar)};
  if (box.lo.x() > box.hi.x() || box.lo.y() > box.hi.y()) malformed("domain is empty");
  std::vector<Vec2> poly{box.lo, {box.hi.x(), box.lo.y()}, box.hi, {box.lo.x(), box.hi.y()}};
  for (const auto& cut : e.cuts) {
    poly = clip(poly, cut);
    if (poly.empty()) malformed("domain is empty");
  }
  const Box out = elastica::bounds(std::span<const Vec2>(poly));
  if (!e.box && out.lo.cwiseAbs().maxCoeff() >= 0.5 * kFar) malformed("domain is unbounded");
  if (!e.box && out.hi.cwiseAbs().maxCoeff() >= 0.5 * kFar) malformed("domain is unbounded");
  return out;
}

double scale(const Domain& domain) { return bounds(domain).half_extent(); }

TwoDropsLayout two_drops_layout(const TwoDropsParams& p) {
  if (!(p.epsilon > 0.0)) invalid("epsilon must be positive", p.epsilon);
  if (!(p.arc_radius > 0.0)) invalid("arc radius must be positive", p.arc_radius);
  if (!(p.drop_scale > 0.0)) invalid("drop scale must be positive", p.drop_scale);
  if (!(p.arc_span > kPi) || !(p.arc_span < kTwoPi)) {
    invalid("arc span must lie strictly between pi and 2 pi", p.arc_span);
  }
  if (!(p.epsilon < 0.2 * p.drop_scale)) invalid("epsilon must be below 0.2 * drop_scale");

  TwoDropsLayout layout;
  layout.arc_radius = p.arc_radius;
  layout.angle_start = kPi / 2.0 - p.arc_span / 2.0;
  layout.angle_end = kPi / 2.0 + p.arc_span / 2.0;

  // Each drop is a circle of radius rho joined to the tip by two concave arcs of
  // the same radius, centered 2 rho from the drop center at +-30 degrees off
  // the axis. They meet tangent to the axis in a cusp sqrt(3) rho from the
  // center, so the spine is C^1 through the tip into the connecting arc.
  const double rho = p.drop_scale / (1.0 + std::sqrt(3.0));
  const std::array<double, 2> angles{layout.angle_start, layout.angle_end};
  for (int k = 0; k < 2; ++k) {
    const double a = angles[k];
    const Vec2 radial(std::cos(a), std::sin(a));
    // Keep moving along the arc past its end: clockwise at the start,
    // counterclockwise at the end.
    const Vec2 axis = k == 0 ? Vec2(radial.y(), -radial.x()) : Vec2(-radial.y(), radial.x());
    DropSpine& drop = layout.drops[k];
    drop.tip = p.arc_radius * radial;
    drop.radius = rho;
    drop.center = drop.tip + std::sqrt(3.0) * rho * axis;
    const double back = std::atan2(-axis.y(), -axis.x());
    drop.tangent_a = drop.center + rho * Vec2(std::cos(back + kPi / 6.0), std::sin(back + kPi / 6.0));
    drop.tangent_b = drop.center + rho * Vec2(std::cos(back - kPi / 6.0), std::sin(back - kPi / 6.0));
  }

  // Pieces must stay apart by more than a tube width or holes merge.
  const double gap = (layout.drops[0].center - layout.drops[1].center).norm();
  if (!(gap > 2.0 * (rho + 2.0 * p.epsilon))) invalid("drops overlap; enlarge the arc span");
  const Domain spine = Domain::arc_tube(Vec2::Zero(), p.arc_radius, layout.angle_start,
                                        layout.angle_end, p.epsilon);
  for (const auto& drop : layout.drops) {
    if (!(sdf(spine, drop.center).sdf > rho + p.epsilon)) {
      invalid("drop loop runs into the connecting arc");
    }
  }
  return layout;
}

Domain two_drops(const TwoDropsParams& p) {
  const TwoDropsLayout layout = two_drops_layout(p);
  std::vector<Domain> pieces;
  pieces.push_back(Domain::arc_tube(Vec2::Zero(), layout.arc_radius, layout.angle_start,
                                    layout.angle_end, p.epsilon));
  for (const auto& drop : layout.drops) {
    const Vec2 back = drop.tip - drop.center;
    const double phi = std::atan2(back.y(), back.x());
    const double r = drop.radius;
    const Vec2 side_a = drop.center + 2.0 * r * Vec2(std::cos(phi + kPi / 6.0), std::sin(phi + kPi / 6.0));
    const Vec2 side_b = drop.center + 2.0 * r * Vec2(std::cos(phi - kPi / 6.0), std::sin(phi - kPi / 6.0));
    pieces.push_back(Domain::arc_tube(side_a, r, phi - 5.0 * kPi / 6.0, phi - kPi / 2.0, p.epsilon));
    pieces.push_back(Domain::arc_tube(side_b, r, phi + kPi / 2.0, phi + 5.0 * kPi / 6.0, p.epsilon));
    pieces.push_back(Domain::arc_tube(drop.center, r, phi + kPi / 6.0, phi + 11.0 * kPi / 6.0,
                                      p.epsilon));
  }
  return Domain::unite(std::move(pieces));
}

Domain stadium(double length, double radius) {
  if (!(length > 0.0)) invalid("stadium length must be positive", length);
  if (!(radius > 0.0)) invalid("stadium radius must be positive", radius);
  return Domain::capsule({-length / 2.0, 0.0}, {length / 2.0, 0.0}, radius);
}

Domain ellipse_domain(double a, double b) {
  if (!(a > 0.0)) invalid("ellipse semi-axis a must be positive", a);
  if (!(b > 0.0)) invalid("ellipse semi-axis b must be positive", b);
  constexpr int kSides = 256;
  std::vector<Domain> planes;
  planes.reserve(kSides);
  for (int k = 0; k < kSides; ++k) {
    const double t = kTwoPi * k / kSides;
    // Tangent at (a cos t, b sin t) has normal (cos t / a, sin t / b).
    const Vec2 normal(std::cos(t) / a, std::sin(t) / b);
    planes.push_back(Domain::half_plane(normal, 1.0));
  }
  return Domain::intersect(std::move(planes));
}

Domain disk_domain(const Vec2& center, double r) {
  if (!(r > 0.0)) invalid("disk radius must be positive", r);
  return Domain::disk(center, r);
}

}  // namespace elastica
