#pragma once

// Marching squares on a regular grid with segment linking.

#include <functional>
#include <vector>

#include "elastica/curve.hpp"

namespace elastica {

struct Polyline {
  std::vector<Vec2> points;
  bool closed = false;
};

/// Level set {f = level} of `f` sampled on an nx-by-ny lattice spanning `box`.
/// Ambiguous cells are resolved with the cell-center average. Lines that
/// leave the box come back open.
std::vector<Polyline> contour(const std::function<double(const Vec2&)>& f, const Box& box,
                              int nx, int ny, double level);

}  // namespace elastica
