#pragma once

// Confinement regions as signed-distance CSG trees.
//
// Sign convention: negative inside, positive outside. Primitives return exact
// distances; union/intersection/complement use min/max/negation, which keeps
// the sign exact everywhere and the value exact near the active sheet.

#include <array>
#include <memory>
#include <numbers>
#include <variant>
#include <vector>

#include "elastica/curve.hpp"

namespace elastica {

struct DomainSample {
  double sdf = 0.0;
  Vec2 gradient = Vec2::UnitX();  // outward unit normal of the active sheet
};

struct Disk {
  Vec2 center;
  double r = 1.0;
  friend bool operator==(const Disk&, const Disk&) = default;
};

/// { p : normal . p <= offset }, with |normal| = 1.
struct HalfPlane {
  Vec2 normal;
  double offset = 0.0;
  friend bool operator==(const HalfPlane&, const HalfPlane&) = default;
};

/// Convex, counterclockwise.
struct ConvexPolygon {
  std::vector<Vec2> vertices;
  friend bool operator==(const ConvexPolygon&, const ConvexPolygon&) = default;
};

/// Points within half_width of the segment [a, b].
struct Capsule {
  Vec2 a;
  Vec2 b;
  double half_width = 0.0;
  friend bool operator==(const Capsule&, const Capsule&) = default;
};

/// Points within half_width of the circular arc of `radius` about `center`
/// running counterclockwise from angle_start to angle_end (radians).
struct ArcTube {
  Vec2 center;
  double radius = 1.0;
  double angle_start = 0.0;
  double angle_end = 0.0;
  double half_width = 0.0;
  friend bool operator==(const ArcTube&, const ArcTube&) = default;
};

enum class CsgOp { Union, Intersection, Complement };

struct DomainNode;

/// Immutable handle to a CSG tree. Copies share structure. A default
/// constructed Domain is empty and every query on it throws MalformedDomain.
class Domain {
 public:
  Domain() = default;

  // Each factory validates its invariants and throws MalformedDomain.
  static Domain disk(const Vec2& center, double r);
  static Domain half_plane(const Vec2& normal, double offset);
  static Domain convex_polygon(std::vector<Vec2> vertices);
  static Domain capsule(const Vec2& a, const Vec2& b, double half_width);
  static Domain arc_tube(const Vec2& center, double radius, double angle_start, double angle_end,
                         double half_width);
  static Domain unite(std::vector<Domain> children);
  static Domain intersect(std::vector<Domain> children);
  static Domain complement(Domain child);

  bool empty() const { return node_ == nullptr; }
  /// Throws MalformedDomain when empty.
  const DomainNode& node() const;

  friend bool operator==(const Domain& a, const Domain& b);

 private:
  explicit Domain(std::shared_ptr<const DomainNode> node) : node_(std::move(node)) {}

  std::shared_ptr<const DomainNode> node_;
};

struct Composite {
  CsgOp op = CsgOp::Union;
  std::vector<Domain> children;
  friend bool operator==(const Composite&, const Composite&) = default;
};

struct DomainNode : std::variant<Disk, HalfPlane, ConvexPolygon, Capsule, ArcTube, Composite> {
  using variant::variant;
};

DomainSample sdf(const Domain& domain, const Vec2& p);
bool contains(const Domain& domain, const Vec2& p, double tol = 0.0);

/// Pulls an outside point onto the boundary by damped steps along the sdf
/// gradient. Inside points are returned unchanged. Throws ProjectionFailed.
Vec2 project(const Domain& domain, const Vec2& p);
/// Same, with the domain scale supplied by the caller.
Vec2 project(const Domain& domain, const Vec2& p, double scale);

/// Bounding box of the region. Throws MalformedDomain for unbounded trees.
Box bounds(const Domain& domain);

/// Largest half-extent of `bounds`; sets absolute tolerances.
double scale(const Domain& domain);

struct TwoDropsParams {
  double epsilon = 0.05;
  double arc_radius = 2.0;
  double arc_span = 1.5 * std::numbers::pi;
  /// Distance from a drop's tip to the far side of its loop.
  double drop_scale = 1.0;
};

struct DropSpine {
  Vec2 tip;     // joins the connecting arc
  Vec2 center;  // center of the round part; lies in the hole
  double radius = 0.0;
  Vec2 tangent_a;  // where the straight sides meet the round part
  Vec2 tangent_b;
};

/// Spine geometry of the two-drops region: a circular arc about the origin
/// centered on the +y axis, with a drop hanging off each end along the arc
/// tangent.
struct TwoDropsLayout {
  double arc_radius = 0.0;
  double angle_start = 0.0;
  double angle_end = 0.0;
  std::array<DropSpine, 2> drops;  // [0] at angle_start, [1] at angle_end
};

/// Throws InvalidParameters.
TwoDropsLayout two_drops_layout(const TwoDropsParams& params);
Domain two_drops(const TwoDropsParams& params = {});

/// Capsule from (-length/2, 0) to (length/2, 0).
Domain stadium(double length, double radius);

/// Intersection of 256 half-planes tangent to the ellipse x^2/a^2 + y^2/b^2 = 1.
Domain ellipse_domain(double a, double b);

/// Checked disk generator (InvalidParameters instead of MalformedDomain).
Domain disk_domain(const Vec2& center, double r);

}  // namespace elastica
