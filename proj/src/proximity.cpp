#include "proximity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace elastica::detail {

namespace {

std::size_t cyclic_gap(std::size_t a, std::size_t b, std::size_t n) {
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, n - d);
}

class EdgeGrid {
 public:
  EdgeGrid(std::span<const Vec2> pts, double pad) : pts_(pts) {
    const std::size_t n = pts.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += (pts[(i + 1) % n] - pts[i]).norm();
    cell_ = std::max(2.0 * total / static_cast<double>(n), pad);
    for (std::size_t e = 0; e < n; ++e) {
      const Vec2 lo = pts[e].cwiseMin(pts[(e + 1) % n]).array() - pad;
      const Vec2 hi = pts[e].cwiseMax(pts[(e + 1) % n]).array() + pad;
      for (std::int64_t x = coord(lo.x()); x <= coord(hi.x()); ++x) {
        for (std::int64_t y = coord(lo.y()); y <= coord(hi.y()); ++y) {
          cells_[key(x, y)].push_back(static_cast<std::uint32_t>(e));
        }
      }
    }
  }

  std::int64_t coord(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
  static std::int64_t key(std::int64_t x, std::int64_t y) { return x * 73856093 ^ y * 19349663; }

  const std::vector<std::uint32_t>* at(const Vec2& p) const {
    const auto it = cells_.find(key(coord(p.x()), coord(p.y())));
    return it == cells_.end() ? nullptr : &it->second;
  }

  /// Edges sharing a cell with the bounding box of [a, b].
  void near_segment(const Vec2& a, const Vec2& b, std::vector<std::uint32_t>& out) const {
    out.clear();
    const Vec2 lo = a.cwiseMin(b);
    const Vec2 hi = a.cwiseMax(b);
    for (std::int64_t x = coord(lo.x()); x <= coord(hi.x()); ++x) {
      for (std::int64_t y = coord(lo.y()); y <= coord(hi.y()); ++y) {
        const auto it = cells_.find(key(x, y));
        if (it != cells_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

 private:
  std::span<const Vec2> pts_;
  double cell_ = 1.0;
  std::unordered_map<std::int64_t, std::vector<std::uint32_t>> cells_;
};

}  // namespace

std::vector<ProximityTerm> close_pairs(std::span<const Vec2> pts, double delta,
                                       std::size_t min_separation) {
  const std::size_t n = pts.size();
  const EdgeGrid grid(pts, delta);
  std::vector<ProximityTerm> terms;
  for (std::size_t i = 0; i < n; ++i) {
    const auto* bucket = grid.at(pts[i]);
    if (!bucket) continue;
    // Buckets can hold an edge twice when hash keys collide.
    std::uint32_t last = UINT32_MAX;
    for (std::uint32_t e : *bucket) {
      if (e == last) continue;
      last = e;
      const std::size_t b = (e + 1) % n;
      if (cyclic_gap(i, e, n) < min_separation || cyclic_gap(i, b, n) < min_separation) continue;
      const Vec2 a0 = pts[e];
      const Vec2 edge = pts[b] - a0;
      const double t = std::clamp((pts[i] - a0).dot(edge) / edge.squaredNorm(), 0.0, 1.0);
      const Vec2 diff = pts[i] - (a0 + t * edge);
      const double d = diff.norm();
      if (d >= delta || d == 0.0) continue;
      terms.push_back({i, e, d, t, diff / d});
    }
  }
  return terms;
}

std::size_t crossing_count(std::span<const Vec2> pts) {
  const std::size_t n = pts.size();
  const EdgeGrid grid(pts, 0.0);
  std::vector<std::uint32_t> candidates;
  std::size_t count = 0;
  for (std::size_t e = 0; e < n; ++e) {
    const Vec2& a0 = pts[e];
    const Vec2& a1 = pts[(e + 1) % n];
    grid.near_segment(a0, a1, candidates);
    for (std::uint32_t f : candidates) {
      if (f <= e || cyclic_gap(e, f, n) < 2) continue;
      if (segments_intersect(a0, a1, pts[f], pts[(f + 1) % n])) ++count;
    }
  }
  return count;
}

}  // namespace elastica::detail
