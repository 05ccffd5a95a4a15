#pragma once

// Static SVG pictures of curves in their domain. The scene is fitted into a
// 1000-unit view box (longer side) with a 5% margin, y pointing up.

#include <string>
#include <vector>

#include "elastica/curve.hpp"
#include "elastica/domain.hpp"

namespace elastica {

struct SvgScene {
  /// Drawn dashed as the zero contour of its sdf on a 256^2 lattice.
  Domain domain;
  std::vector<ClosedCurve> curves;
  /// Contact points, drawn as small circles.
  std::vector<Vec2> markers;
};

/// Throws InvalidInput for a scene with nothing to draw.
std::string render_svg(const SvgScene& scene);

}  // namespace elastica
