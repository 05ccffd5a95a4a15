#include "elastica/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "elastica/error.hpp"

namespace elastica {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Point at arc length `s` along the polygon described by `pts` with prefix
// lengths `cumulative` (cumulative[k] = length up to vertex k, size n+1).
Vec2 point_at(std::span<const Vec2> pts, const std::vector<double>& cumulative, double s) {
  const std::size_t n = pts.size();
  const double total = cumulative.back();
  if (s <= 0.0) return pts[0];
  if (s >= total) s = std::fmod(s, total);
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
  std::size_t k = static_cast<std::size_t>(std::distance(cumulative.begin(), it)) - 1;
  k = std::min(k, n - 1);
  const double edge = cumulative[k + 1] - cumulative[k];
  const double f = edge > 0.0 ? (s - cumulative[k]) / edge : 0.0;
  if (f == 0.0) return pts[k];
  const Vec2& a = pts[k];
  const Vec2& b = pts[(k + 1) % n];
  return a + f * (b - a);
}

// Equal-chord walk: from arc length 0, repeatedly jump to the first later point
// at distance `c`. Fills `positions` with the n vertex positions and returns
// the arc length reached after n jumps, or +inf when some jump finds no point
// within one lap.
double chord_walk(std::span<const Vec2> pts, const std::vector<double>& cumulative, double c,
                  std::size_t n, std::vector<double>& positions) {
  const std::size_t m = pts.size();
  const double total = cumulative.back();
  positions.assign(n, 0.0);
  double s = 0.0;
  std::size_t k = 0;  // segment holding s, counted without wrapping
  for (std::size_t j = 0; j < n; ++j) {
    positions[j] = s;
    const Vec2 q = point_at(pts, cumulative, s);
    const std::size_t limit = k + m + 1;
    bool found = false;
    for (; k < limit; ++k) {
      const double base = static_cast<double>(k / m) * total + cumulative[k % m];
      const Vec2& a = pts[k % m];
      const Vec2& b = pts[(k + 1) % m];
      const double edge = cumulative[k % m + 1] - cumulative[k % m];
      const double t0 = std::max(0.0, (s - base) / edge);
      // |a + t (b - a) - q| = c; q is closer than c at t0, so the larger root
      // is the first crossing.
      const Vec2 d = b - a;
      const Vec2 e = a - q;
      const double qa = d.squaredNorm();
      const double qb = 2.0 * d.dot(e);
      const double qc = e.squaredNorm() - c * c;
      const double t = (-qb + std::sqrt(std::max(0.0, qb * qb - 4.0 * qa * qc))) / (2.0 * qa);
      if (t >= t0 && t <= 1.0) {
        s = base + t * edge;
        found = true;
        break;
      }
    }
    if (!found) return std::numeric_limits<double>::infinity();
  }
  return s;
}

}  // namespace

const Vec2& ClosedCurve::at(std::ptrdiff_t i) const {
  const auto n = static_cast<std::ptrdiff_t>(points_.size());
  i %= n;
  if (i < 0) i += n;
  return points_[static_cast<std::size_t>(i)];
}

ClosedCurve ClosedCurve::from_points(std::vector<Vec2> points) {
  if (points.size() < kMinVertices) {
    throw Error(ErrorCode::TooFewPoints,
                "need at least " + std::to_string(kMinVertices) + " points, got " +
                    std::to_string(points.size()));
  }
  const double threshold = 1e-12 * bounds(points).diagonal();
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (points[(i + 1) % n] - points[i]).norm();
    if (!(d > threshold)) {
      throw Error(ErrorCode::DegenerateEdge,
                  "edge " + std::to_string(i) + " has (near) zero length", i);
    }
  }
  return ClosedCurve(std::move(points));
}

double VertexField::dot(const VertexField& other) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) sum += vectors[i].dot(other.vectors[i]);
  return sum;
}

double VertexField::norm() const { return std::sqrt(dot(*this)); }

double length(const ClosedCurve& curve) {
  double sum = 0.0;
  const std::size_t n = curve.size();
  for (std::size_t i = 0; i < n; ++i) sum += (curve[(i + 1) % n] - curve[i]).norm();
  return sum;
}

std::vector<double> edge_lengths(const ClosedCurve& curve) {
  const std::size_t n = curve.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (curve[(i + 1) % n] - curve[i]).norm();
  return out;
}

std::vector<double> dual_lengths(const ClosedCurve& curve) {
  const auto edges = edge_lengths(curve);
  const std::size_t n = edges.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (edges[(i + n - 1) % n] + edges[i]);
  return out;
}

double edge_spread(const ClosedCurve& curve) {
  const auto edges = edge_lengths(curve);
  const auto [lo, hi] = std::minmax_element(edges.begin(), edges.end());
  return *hi / *lo - 1.0;
}

double signed_area(const ClosedCurve& curve) {
  double sum = 0.0;
  const std::size_t n = curve.size();
  for (std::size_t i = 0; i < n; ++i) sum += cross(curve[i], curve[(i + 1) % n]);
  return 0.5 * sum;
}

Box bounds(std::span<const Vec2> points) {
  Box box{Vec2::Constant(0.0), Vec2::Constant(0.0)};
  if (points.empty()) return box;
  box.lo = box.hi = points[0];
  for (const auto& p : points) {
    box.lo = box.lo.cwiseMin(p);
    box.hi = box.hi.cwiseMax(p);
  }
  return box;
}

Box bounds(const ClosedCurve& curve) { return bounds(curve.points()); }

void require_uniform(const ClosedCurve& curve) {
  const double spread = edge_spread(curve);
  if (spread > kUniformSpread) {
    throw Error(ErrorCode::NonUniform,
                "edge spread " + std::to_string(spread) + " exceeds " +
                    std::to_string(kUniformSpread) + "; resample first",
                std::nullopt, spread);
  }
}

ClosedCurve resample_uniform(const ClosedCurve& curve, std::size_t n) {
  if (n < kMinVertices) {
    throw Error(ErrorCode::TooFewPoints, "resampling needs at least " +
                                             std::to_string(kMinVertices) + " vertices");
  }
  const auto pts = curve.points();
  const std::size_t m = pts.size();
  std::vector<double> cumulative(m + 1, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    cumulative[k + 1] = cumulative[k] + (pts[(k + 1) % m] - pts[k]).norm();
  }
  const double total = cumulative.back();

  // Arc-length gaps between consecutive output vertices. Equal gaps give equal
  // chords only on straight stretches, so the gaps are rescaled by the chord
  // defect until the chords agree. Near corners the full correction can
  // overshoot; a step that widens the spread is retried at half strength.
  std::vector<double> gap(n, total / static_cast<double>(n));
  std::vector<double> trial_gap(n);
  std::vector<Vec2> out(n);
  std::vector<Vec2> trial(n);
  std::vector<double> chord(n);
  auto place = [&](const std::vector<double>& gaps, std::vector<Vec2>& at) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      at[j] = point_at(pts, cumulative, s);
      s += gaps[j];
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      chord[j] = (at[(j + 1) % n] - at[j]).norm();
      lo = std::min(lo, chord[j]);
      hi = std::max(hi, chord[j]);
    }
    return hi / lo - 1.0;
  };
  auto refine = [&](std::vector<double>& g, std::vector<Vec2>& at) {
    double spread = place(g, at);
    double strength = 1.0;
    for (int iter = 0; iter < 500 && spread > 1e-12 && strength > 1e-6; ++iter) {
      // chord[] belongs to `at` here.
      double mean = 0.0;
      for (double c : chord) mean += c;
      mean /= static_cast<double>(n);
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        trial_gap[j] = g[j] * std::pow(mean / chord[j], strength);
        sum += trial_gap[j];
      }
      for (auto& v : trial_gap) v *= total / sum;
      const double next = place(trial_gap, trial);
      if (next < spread) {
        g.swap(trial_gap);
        at.swap(trial);
        spread = next;
        strength = std::min(1.0, 2.0 * strength);
      } else {
        strength *= 0.5;
        place(g, at);
      }
    }
    return spread;
  };
  double spread = refine(gap, out);

  // Jagged input can trap the rescaling. Fall back to shooting on the chord
  // length: the walk overshoots the lap at c = total / n and undershoots as
  // c -> 0.
  if (spread > 1e-9) {
    std::vector<double> positions;
    double lo = 0.0;
    double hi = total / static_cast<double>(n);
    for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
      const double c = 0.5 * (lo + hi);
      (chord_walk(pts, cumulative, c, n, positions) < total ? lo : hi) = c;
    }
    chord_walk(pts, cumulative, hi, n, positions);
    std::vector<double> shot(n);
    for (std::size_t j = 0; j < n; ++j) {
      shot[j] = (j + 1 < n ? positions[j + 1] : total) - positions[j];
    }
    std::vector<Vec2> shot_out(n);
    if (refine(shot, shot_out) < spread) out.swap(shot_out);
  }
  return ClosedCurve::from_points(std::move(out));
}

VertexField tangent_field(const ClosedCurve& curve) {
  const std::size_t n = curve.size();
  VertexField field{std::vector<Vec2>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 d = curve[(i + 1) % n] - curve[(i + n - 1) % n];
    const double norm = d.norm();
    if (norm == 0.0) {
      throw Error(ErrorCode::DegenerateEdge, "central difference vanishes at vertex " +
                                                 std::to_string(i), i);
    }
    field[i] = d / norm;
  }
  return field;
}

std::vector<double> turning_angles(const ClosedCurve& curve) {
  const std::size_t n = curve.size();
  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = curve[i] - curve[(i + n - 1) % n];
    const Vec2 e1 = curve[(i + 1) % n] - curve[i];
    theta[i] = std::atan2(cross(e0, e1), e0.dot(e1));
  }
  return theta;
}

std::vector<double> curvature_field(const ClosedCurve& curve) {
  require_uniform(curve);
  auto kappa = turning_angles(curve);
  const auto dual = dual_lengths(curve);
  for (std::size_t i = 0; i < kappa.size(); ++i) kappa[i] /= dual[i];
  return kappa;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  const double d1 = cross(a1 - a0, b0 - a0);
  const double d2 = cross(a1 - a0, b1 - a0);
  const double d3 = cross(b1 - b0, a0 - b0);
  const double d4 = cross(b1 - b0, a1 - b0);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  auto on_segment = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return std::min(p.x(), q.x()) <= r.x() && r.x() <= std::max(p.x(), q.x()) &&
           std::min(p.y(), q.y()) <= r.y() && r.y() <= std::max(p.y(), q.y());
  };
  if (d1 == 0 && on_segment(a0, a1, b0)) return true;
  if (d2 == 0 && on_segment(a0, a1, b1)) return true;
  if (d3 == 0 && on_segment(b0, b1, a0)) return true;
  if (d4 == 0 && on_segment(b0, b1, a1)) return true;
  return false;
}

double segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  if (segments_intersect(a0, a1, b0, b1)) return 0.0;
  return std::min({point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                   point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
}

double distance_to_curve(const ClosedCurve& curve, const Vec2& z) {
  const std::size_t n = curve.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(z, curve[i], curve[(i + 1) % n]));
  }
  return best;
}

int winding_number(const ClosedCurve& curve, const Vec2& z) {
  const std::size_t n = curve.size();
  const double threshold = 1e-12 * bounds(curve).diagonal();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = curve[i];
    const Vec2& q = curve[(i + 1) % n];
    if (point_segment_distance(z, p, q) <= threshold) {
      throw Error(ErrorCode::PointOnCurve, "query point lies on edge " + std::to_string(i), i);
    }
    const Vec2 a = p - z;
    const Vec2 b = q - z;
    total += std::atan2(cross(a, b), a.dot(b));
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

ClosedCurve scale_about(const ClosedCurve& curve, const Vec2& center, double factor) {
  if (!(factor > 0.0)) {
    throw Error(ErrorCode::NonPositiveFactor, "scale factor must be positive", std::nullopt,
                factor);
  }
  // c + (p - c) need not round back to p.
  if (factor == 1.0) return curve;
  std::vector<Vec2> pts(curve.points().begin(), curve.points().end());
  for (auto& p : pts) p = center + factor * (p - center);
  return ClosedCurve::from_points(std::move(pts));
}

ClosedCurve reversed(const ClosedCurve& curve) {
  // Keep vertex 0 in place so parameter origins stay comparable.
  const std::size_t n = curve.size();
  std::vector<Vec2> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = curve[(n - i) % n];
  return ClosedCurve::from_points(std::move(pts));
}

ClosedCurve circle(const Vec2& center, double radius, std::size_t n) {
  if (!(radius > 0.0)) {
    throw Error(ErrorCode::NonPositiveRadius, "circle radius must be positive", std::nullopt,
                radius);
  }
  if (n < kMinVertices) {
    throw Error(ErrorCode::TooFewPoints, "circle needs at least " +
                                             std::to_string(kMinVertices) + " vertices");
  }
  std::vector<Vec2> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    pts[k] = center + radius * Vec2(std::cos(a), std::sin(a));
  }
  return ClosedCurve::from_points(std::move(pts));
}

}  // namespace elastica
