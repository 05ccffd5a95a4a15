#pragma once

// Closed planar polygons standing in for regular closed curves, plus the
// discrete differential quantities the rest of the library is built on.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace elastica {

using Vec2 = Eigen::Vector2d;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Counterclockwise quarter turn.
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

/// Smallest number of vertices a curve may have.
inline constexpr std::size_t kMinVertices = 8;

/// Maximum tolerated `edge_spread` for operations that assume a constant
/// speed parametrization.
inline constexpr double kUniformSpread = 1e-3;

struct Box {
  Vec2 lo;
  Vec2 hi;

  double diagonal() const { return (hi - lo).norm(); }
  /// Half of the larger side; the characteristic radius used for tolerances.
  double half_extent() const { return 0.5 * (hi - lo).maxCoeff(); }
  Vec2 center() const { return 0.5 * (lo + hi); }
};

/// Ordered polygon, closure implicit (last vertex connects to the first).
/// Always holds at least `kMinVertices` points and no zero-length edge.
class ClosedCurve {
 public:
  /// Validates and wraps `points`. Throws TooFewPoints or DegenerateEdge.
  static ClosedCurve from_points(std::vector<Vec2> points);

  std::size_t size() const { return points_.size(); }
  std::span<const Vec2> points() const { return points_; }
  const Vec2& operator[](std::size_t i) const { return points_[i]; }
  /// Cyclic access; `i` may be any integer.
  const Vec2& at(std::ptrdiff_t i) const;

  friend bool operator==(const ClosedCurve& a, const ClosedCurve& b) {
    return a.points_ == b.points_;
  }

 private:
  explicit ClosedCurve(std::vector<Vec2> points) : points_(std::move(points)) {}

  std::vector<Vec2> points_;
};

/// Per-vertex vectors aligned with a curve (perturbations, gradients).
struct VertexField {
  std::vector<Vec2> vectors;

  std::size_t size() const { return vectors.size(); }
  Vec2& operator[](std::size_t i) { return vectors[i]; }
  const Vec2& operator[](std::size_t i) const { return vectors[i]; }

  double dot(const VertexField& other) const;
  double norm() const;
};

// Basic measures.
double length(const ClosedCurve& curve);
std::vector<double> edge_lengths(const ClosedCurve& curve);
/// Length of the dual cell at each vertex, (|e_{i-1}| + |e_i|) / 2.
std::vector<double> dual_lengths(const ClosedCurve& curve);
/// max edge / min edge - 1.
double edge_spread(const ClosedCurve& curve);
double signed_area(const ClosedCurve& curve);
Box bounds(std::span<const Vec2> points);
Box bounds(const ClosedCurve& curve);

/// Throws NonUniform when `edge_spread` exceeds `kUniformSpread`.
void require_uniform(const ClosedCurve& curve);

/// Re-places `n` vertices along the polygon so that consecutive chords are
/// equal; vertex 0 stays where it was.
ClosedCurve resample_uniform(const ClosedCurve& curve, std::size_t n);

/// Normalized central differences.
VertexField tangent_field(const ClosedCurve& curve);

/// Signed exterior angle at every vertex, in (-pi, pi]; positive for left turns.
std::vector<double> turning_angles(const ClosedCurve& curve);

/// Turning angle over dual length. Requires a uniform curve.
std::vector<double> curvature_field(const ClosedCurve& curve);

/// Index of the curve around `z`. Throws PointOnCurve when `z` lies on an edge.
int winding_number(const ClosedCurve& curve, const Vec2& z);

/// Distance from `z` to the nearest edge.
double distance_to_curve(const ClosedCurve& curve, const Vec2& z);

ClosedCurve scale_about(const ClosedCurve& curve, const Vec2& center, double factor);
ClosedCurve reversed(const ClosedCurve& curve);

/// Regular n-gon inscribed in the circle, counterclockwise, vertex 0 at angle 0.
ClosedCurve circle(const Vec2& center, double radius, std::size_t n);

/// Closest distance between segments [a0,a1] and [b0,b1].
double segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);
bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);

}  // namespace elastica
