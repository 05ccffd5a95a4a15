#include "elastica/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <spdlog/spdlog.h>

#include "elastica/error.hpp"

namespace elastica {

namespace kernel {

namespace {

struct Sums {
  double S = 0.0;  // sum |d_i|^2
  double L = 0.0;  // polygon length
};

Sums sums(std::span<const Vec2> pts) {
  const std::size_t n = pts.size();
  Sums out;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& prev = pts[(i + n - 1) % n];
    const Vec2& next = pts[(i + 1) % n];
    out.S += (next - 2.0 * pts[i] + prev).squaredNorm();
    out.L += (next - pts[i]).norm();
  }
  return out;
}

}  // namespace

double bending_energy(std::span<const Vec2> pts) {
  const double n = static_cast<double>(pts.size());
  const Sums s = sums(pts);
  return n * n * n * s.S / (s.L * s.L * s.L);
}

double bending_energy_gradient(std::span<const Vec2> pts, std::span<Vec2> grad) {
  const std::size_t n = pts.size();
  const double nd = static_cast<double>(n);
  std::vector<Vec2> d(n);
  std::vector<Vec2> u(n);
  double S = 0.0;
  double L = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = pts[(i + 1) % n] - 2.0 * pts[i] + pts[(i + n - 1) % n];
    const Vec2 e = pts[(i + 1) % n] - pts[i];
    const double len = e.norm();
    u[i] = e / len;
    S += d[i].squaredNorm();
    L += len;
  }
  const double L3 = L * L * L;
  const double W = nd * nd * nd * S / L3;
  // dW = N^3 (dS / L^3 - 3 S dL / L^4)
  const double a = nd * nd * nd / L3;
  const double b = 3.0 * W / L;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jm = (j + n - 1) % n;
    const std::size_t jp = (j + 1) % n;
    const Vec2 dS = 2.0 * (d[jm] - 2.0 * d[j] + d[jp]);
    const Vec2 dL = u[jm] - u[j];
    grad[j] = a * dS - b * dL;
  }
  return W;
}

}  // namespace kernel

double bending_energy(const ClosedCurve& curve) {
  require_uniform(curve);
  return kernel::bending_energy(curve.points());
}

double directional_derivative(const ClosedCurve& curve, const VertexField& delta) {
  require_uniform(curve);
  const std::size_t n = curve.size();
  if (delta.size() != n) {
    throw Error(ErrorCode::LengthMismatch, "perturbation has " + std::to_string(delta.size()) +
                                               " vectors for a curve of " + std::to_string(n));
  }
  const double nd = static_cast<double>(n);
  double S = 0.0;
  double L = 0.0;
  double dS = 0.0;
  double dL = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = (i + n - 1) % n;
    const std::size_t ip = (i + 1) % n;
    const Vec2 d = curve[ip] - 2.0 * curve[i] + curve[im];
    const Vec2 dd = delta[ip] - 2.0 * delta[i] + delta[im];
    const Vec2 e = curve[ip] - curve[i];
    const double len = e.norm();
    S += d.squaredNorm();
    L += len;
    dS += 2.0 * d.dot(dd);
    dL += e.dot(delta[ip] - delta[i]) / len;
  }
  const double L3 = L * L * L;
  return nd * nd * nd * (dS / L3 - 3.0 * S * dL / (L3 * L));
}

VertexField first_variation(const ClosedCurve& curve) {
  require_uniform(curve);
  VertexField g{std::vector<Vec2>(curve.size())};
  kernel::bending_energy_gradient(curve.points(), g.vectors);
  return g;
}

std::vector<double> el_residual(const ClosedCurve& curve) {
  const auto kappa = curvature_field(curve);
  const auto edges = edge_lengths(curve);
  const std::size_t n = curve.size();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = (i + n - 1) % n;
    const std::size_t ip = (i + 1) % n;
    const double hb = edges[im];
    const double hf = edges[i];
    const double k2 =
        2.0 * ((kappa[ip] - kappa[i]) / hf - (kappa[i] - kappa[im]) / hb) / (hf + hb);
    r[i] = 2.0 * k2 + kappa[i] * kappa[i] * kappa[i];
  }
  return r;
}

EnergyReport energy_report(const ClosedCurve& curve) {
  EnergyReport report;
  report.W = bending_energy(curve);
  report.L = length(curve);
  report.kappa = curvature_field(curve);
  report.grad_norm = first_variation(curve).norm();
  const auto r = el_residual(curve);
  for (double v : r) report.el_residual_max = std::max(report.el_residual_max, std::abs(v));
  constexpr double kFloor = 4.0 * std::numbers::pi * std::numbers::pi;
  if (report.W * report.L < 0.95 * kFloor) {
    report.below_floor = true;
    spdlog::warn("W*L = {} is below the 4pi^2 floor (discretization too coarse?)",
                 report.W * report.L);
  }
  return report;
}

double turning_angle_energy(const ClosedCurve& curve) {
  const auto theta = turning_angles(curve);
  const auto dual = dual_lengths(curve);
  double sum = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) sum += theta[i] * theta[i] / dual[i];
  return sum;
}

}  // namespace elastica
