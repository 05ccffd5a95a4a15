#include "elastica/contour.hpp"

#include <array>
#include <cstdint>

#include "elastica/error.hpp"

namespace elastica {

std::vector<Polyline> contour(const std::function<double(const Vec2&)>& f, const Box& box,
                              int nx, int ny, double level) {
  if (nx < 2 || ny < 2) throw Error(ErrorCode::InvalidInput, "contour grid needs 2x2 samples");
  const auto ux = static_cast<std::size_t>(nx);
  const auto uy = static_cast<std::size_t>(ny);
  const double hx = (box.hi.x() - box.lo.x()) / (nx - 1);
  const double hy = (box.hi.y() - box.lo.y()) / (ny - 1);
  auto node = [&](std::size_t i, std::size_t j) {
    return Vec2(box.lo.x() + hx * static_cast<double>(i), box.lo.y() + hy * static_cast<double>(j));
  };

  std::vector<double> value(ux * uy);
  for (std::size_t j = 0; j < uy; ++j) {
    for (std::size_t i = 0; i < ux; ++i) value[j * ux + i] = f(node(i, j)) - level;
  }
  auto val = [&](std::size_t i, std::size_t j) { return value[j * ux + i]; };
  auto above = [&](std::size_t i, std::size_t j) { return val(i, j) > 0.0; };

  // Lattice edges get ids: horizontal (i,j)-(i+1,j) first, then vertical.
  const std::size_t horizontal = (ux - 1) * uy;
  auto h_id = [&](std::size_t i, std::size_t j) { return j * (ux - 1) + i; };
  auto v_id = [&](std::size_t i, std::size_t j) { return horizontal + i * (uy - 1) + j; };
  const std::size_t edge_count = horizontal + ux * (uy - 1);

  constexpr std::size_t kNone = SIZE_MAX;
  std::vector<std::array<std::size_t, 2>> links(edge_count, {kNone, kNone});
  std::vector<Vec2> crossing(edge_count);
  auto crossing_point = [&](std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
    const double a = val(i0, j0);
    const double b = val(i1, j1);
    const double t = a / (a - b);
    return Vec2(node(i0, j0) + t * (node(i1, j1) - node(i0, j0)));
  };
  auto link = [&](std::size_t a, std::size_t b) {
    (links[a][0] == kNone ? links[a][0] : links[a][1]) = b;
    (links[b][0] == kNone ? links[b][0] : links[b][1]) = a;
  };

  for (std::size_t j = 0; j + 1 < uy; ++j) {
    for (std::size_t i = 0; i + 1 < ux; ++i) {
      // Corners: 0 (i,j), 1 (i+1,j), 2 (i+1,j+1), 3 (i,j+1).
      // Sides: 0 bottom, 1 right, 2 top, 3 left.
      const std::array<bool, 4> in{above(i, j), above(i + 1, j), above(i + 1, j + 1),
                                   above(i, j + 1)};
      const std::array<std::size_t, 4> side{h_id(i, j), v_id(i + 1, j), h_id(i, j + 1),
                                            v_id(i, j)};
      std::array<bool, 4> cut{in[0] != in[1], in[1] != in[2], in[3] != in[2], in[0] != in[3]};
      if (cut[0]) crossing[side[0]] = crossing_point(i, j, i + 1, j);
      if (cut[1]) crossing[side[1]] = crossing_point(i + 1, j, i + 1, j + 1);
      if (cut[2]) crossing[side[2]] = crossing_point(i, j + 1, i + 1, j + 1);
      if (cut[3]) crossing[side[3]] = crossing_point(i, j, i, j + 1);
      const int n_cut = cut[0] + cut[1] + cut[2] + cut[3];
      if (n_cut == 2) {
        std::array<std::size_t, 2> ends{};
        int k = 0;
        for (int s = 0; s < 4; ++s) {
          if (cut[s]) ends[k++] = side[s];
        }
        link(ends[0], ends[1]);
      } else if (n_cut == 4) {
        const double center =
            0.25 * (val(i, j) + val(i + 1, j) + val(i + 1, j + 1) + val(i, j + 1));
        if ((center > 0.0) == in[0]) {
          // Corners 0 and 2 connect through the middle; cut off corners 1 and 3.
          link(side[0], side[1]);
          link(side[2], side[3]);
        } else {
          link(side[0], side[3]);
          link(side[1], side[2]);
        }
      }
    }
  }

  std::vector<Polyline> out;
  std::vector<bool> used(edge_count, false);
  auto walk = [&](std::size_t start) {
    Polyline line;
    std::size_t prev = kNone;
    std::size_t cur = start;
    while (cur != kNone && !used[cur]) {
      used[cur] = true;
      line.points.push_back(crossing[cur]);
      const auto& l = links[cur];
      const std::size_t next = l[0] != prev ? l[0] : l[1];
      prev = cur;
      cur = next;
    }
    line.closed = cur == start;
    return line;
  };
  // Open chains start at their ends; whatever remains forms loops.
  for (std::size_t e = 0; e < edge_count; ++e) {
    if (!used[e] && links[e][0] != kNone && links[e][1] == kNone) out.push_back(walk(e));
  }
  for (std::size_t e = 0; e < edge_count; ++e) {
    if (!used[e] && links[e][0] != kNone) out.push_back(walk(e));
  }
  return out;
}

}  // namespace elastica
