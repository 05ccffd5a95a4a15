#include "elastica/svg.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "elastica/contour.hpp"
#include "elastica/error.hpp"

namespace elastica {
namespace {

constexpr double kView = 1000.0;
constexpr double kMargin = 0.05;
constexpr int kLattice = 256;

Box merge(const Box& a, const Box& b) { return {a.lo.cwiseMin(b.lo), a.hi.cwiseMax(b.hi)}; }

struct Frame {
  Box box;
  double unit = 1.0;  // view units per model unit
  double width = kView;
  double height = kView;

  Vec2 map(const Vec2& p) const {
    const double m = kMargin * std::max(width, height);
    return {m + (p.x() - box.lo.x()) * unit, height - m - (p.y() - box.lo.y()) * unit};
  }
};

Frame fit(const Box& box) {
  const Vec2 extent = (box.hi - box.lo).cwiseMax(Vec2::Constant(1e-12));
  const double inner = (1.0 - 2.0 * kMargin) * kView;
  Frame f;
  f.box = box;
  f.unit = inner / extent.maxCoeff();
  const double m = kMargin * kView;
  f.width = extent.x() * f.unit + 2.0 * m;
  f.height = extent.y() * f.unit + 2.0 * m;
  return f;
}

std::string path_data(const std::vector<Vec2>& pts, bool closed, const Frame& f) {
  std::string d;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec2 q = f.map(pts[i]);
    d += fmt::format("{}{:.2f},{:.2f}", i == 0 ? "M" : " L", q.x(), q.y());
  }
  if (closed) d += " Z";
  return d;
}

}  // namespace

std::string render_svg(const SvgScene& scene) {
  std::optional<Box> box;
  auto extend = [&](const Box& b) { box = box ? merge(*box, b) : b; };
  if (!scene.domain.empty()) extend(bounds(scene.domain));
  for (const auto& c : scene.curves) extend(bounds(c));
  if (!scene.markers.empty()) extend(bounds(scene.markers));
  if (!box) throw Error(ErrorCode::InvalidInput, "nothing to draw");
  const Frame f = fit(*box);

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {:.2f} {:.2f}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      f.width, f.height);
  if (!scene.domain.empty()) {
    // Pad the lattice so boundary sheets on the box edge still close up.
    const Vec2 pad = 0.02 * (box->hi - box->lo) + Vec2::Constant(1e-9);
    const Box lattice{box->lo - pad, box->hi + pad};
    const auto lines = contour([&](const Vec2& p) { return sdf(scene.domain, p).sdf; }, lattice,
                               kLattice, kLattice, 0.0);
    for (const auto& line : lines) {
      out += fmt::format(
          "<path d=\"{}\" fill=\"none\" stroke=\"#555\" stroke-width=\"1.5\" "
          "stroke-dasharray=\"6,4\"/>\n",
          path_data(line.points, line.closed, f));
    }
  }
  constexpr const char* palette[] = {"#1f5fbf", "#c0392b", "#2e8b57", "#8e44ad"};
  for (std::size_t k = 0; k < scene.curves.size(); ++k) {
    const auto pts = scene.curves[k].points();
    out += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                       path_data({pts.begin(), pts.end()}, true, f), palette[k % 4]);
  }
  for (const auto& p : scene.markers) {
    const Vec2 q = f.map(p);
    out += fmt::format(
        "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"6\" fill=\"none\" stroke=\"#e67e22\" "
        "stroke-width=\"2\"/>\n",
        q.x(), q.y());
  }
  out += "</svg>\n";
  return out;
}

}  // namespace elastica
