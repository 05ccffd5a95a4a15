#pragma once

// Near-pair and crossing queries between distant parts of a closed polygon,
// bucketed on a uniform grid. Internal to the solver.

#include <cstddef>
#include <span>

#include "elastica/curve.hpp"

namespace elastica::detail {

/// Vertex `vertex` at distance d < delta from edge (a, a+1), closest point at
/// parameter t along the edge, unit direction u from that point to the vertex.
struct ProximityTerm {
  std::size_t vertex = 0;
  std::size_t edge = 0;
  double d = 0.0;
  double t = 0.0;
  Vec2 u = Vec2::Zero();
};

/// Pairs whose vertex and both edge endpoints are at least `min_separation`
/// apart along the polygon. Exactly coincident pairs are skipped.
std::vector<ProximityTerm> close_pairs(std::span<const Vec2> pts, double delta,
                                       std::size_t min_separation);

/// Number of intersecting pairs of non-adjacent edges.
std::size_t crossing_count(std::span<const Vec2> pts);

}  // namespace elastica::detail
