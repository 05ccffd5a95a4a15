#pragma once

// Fixtures and independent oracles shared by the test binaries.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "elastica/curve.hpp"

namespace elastica::testing {

inline constexpr double kPi = std::numbers::pi;

/// Dense analytic samples resampled to n uniform vertices.
inline ClosedCurve uniform_from(const std::function<Vec2(double)>& gamma, std::size_t n,
                                std::size_t oversample = 32) {
  std::vector<Vec2> dense(n * oversample);
  for (std::size_t k = 0; k < dense.size(); ++k) {
    dense[k] = gamma(2.0 * kPi * static_cast<double>(k) / static_cast<double>(dense.size()));
  }
  return resample_uniform(ClosedCurve::from_points(std::move(dense)), n);
}

inline ClosedCurve ellipse_curve(double a, double b, std::size_t n) {
  return uniform_from([=](double t) { return Vec2(a * std::cos(t), b * std::sin(t)); }, n);
}

/// Star-shaped curve r(t) = r0 (1 + sum_k c_k cos(k t + phase_k)) with small
/// random harmonics; simple and smooth for every draw.
struct FourierCurve {
  Vec2 center = Vec2::Zero();
  double r0 = 1.0;
  std::vector<double> amp;
  std::vector<double> phase;

  Vec2 operator()(double t) const {
    double r = 1.0;
    for (std::size_t k = 0; k < amp.size(); ++k) {
      r += amp[k] * std::cos(static_cast<double>(k + 2) * t + phase[k]);
    }
    return center + r0 * r * Vec2(std::cos(t), std::sin(t));
  }
};

inline FourierCurve random_fourier(std::mt19937_64& rng, double r0 = 1.0, Vec2 center = {0, 0}) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FourierCurve f;
  f.center = center;
  f.r0 = r0;
  const int harmonics = 1 + static_cast<int>(u(rng) * 3.0);
  for (int k = 0; k < harmonics; ++k) {
    // Amplitude decays with frequency so the curve stays star-shaped.
    f.amp.push_back(0.12 * u(rng) / static_cast<double>(k + 1));
    f.phase.push_back(2.0 * kPi * u(rng));
  }
  return f;
}

inline ClosedCurve random_smooth_curve(std::mt19937_64& rng, std::size_t n, double r0 = 1.0,
                                       Vec2 center = {0, 0}) {
  return uniform_from(random_fourier(rng, r0, center), n);
}

/// Random perturbation direction: Gaussian Fourier modes up to `modes` in the
/// vertex index plus a little white noise, O(1) per vertex.
inline VertexField random_direction(std::mt19937_64& rng, std::size_t n, int modes = 4,
                                    double noise = 1e-2) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::array<double, 4>> coef(static_cast<std::size_t>(modes) + 1);
  for (auto& c : coef) c = {g(rng), g(rng), g(rng), g(rng)};
  VertexField f;
  f.vectors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    Vec2 v = noise * Vec2(g(rng), g(rng));
    for (std::size_t k = 0; k < coef.size(); ++k) {
      const double kt = static_cast<double>(k) * t;
      const double w = 1.0 / static_cast<double>(k + 1);
      v += w * Vec2(coef[k][0] * std::cos(kt) + coef[k][1] * std::sin(kt),
                    coef[k][2] * std::cos(kt) + coef[k][3] * std::sin(kt));
    }
    f.vectors[i] = v;
  }
  return f;
}

/// Bernoulli lemniscate x = cos t / (1 + sin^2 t), y = sin t cos t / (1 + sin^2 t).
inline Vec2 lemniscate(double t) {
  const double d = 1.0 + std::sin(t) * std::sin(t);
  return {std::cos(t) / d, std::sin(t) * std::cos(t) / d};
}

inline ClosedCurve lemniscate_curve(std::size_t n) {
  std::vector<Vec2> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Offset by half a step so no vertex sits exactly on the crossing.
    pts[k] = lemniscate(2.0 * kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(n));
  }
  return ClosedCurve::from_points(std::move(pts));
}

/// Two mirrored drops touching at the origin: (2 cos t, sin t cos^2 t). The
/// upper strand passes the origin heading -x, the lower one heading +x, both
/// lobes counterclockwise, so the pinch is an antiparallel tangential contact.
inline Vec2 pinched_eight(double t) {
  const double c = std::cos(t);
  return {2.0 * c, std::sin(t) * c * c};
}

inline ClosedCurve pinched_eight_curve(std::size_t n) { return uniform_from(pinched_eight, n); }

/// Crossing-parity winding number: signed upward/downward crossings of the
/// ray {z + (s, 0), s > 0}.
inline int ray_crossing_winding(std::span<const Vec2> pts, const Vec2& z) {
  int w = 0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = pts[i];
    const Vec2& b = pts[(i + 1) % n];
    if (a.y() <= z.y()) {
      if (b.y() > z.y() && cross(b - a, z - a) > 0.0) ++w;
    } else if (b.y() <= z.y() && cross(b - a, z - a) < 0.0) {
      --w;
    }
  }
  return w;
}

/// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol,
                      int depth = 40) {
  auto rule = [&](double lo, double hi, double flo, double fmid, double fhi) {
    return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  };
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps,
          int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid);
        const double rm = 0.5 * (mid + hi);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = rule(lo, mid, flo, flm, fmid);
        const double right = rule(mid, hi, fmid, frm, fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
          return left + right + (left + right - whole) / 15.0;
        }
        return rec(lo, mid, flo, flm, fmid, left, 0.5 * eps, d - 1) +
               rec(mid, hi, fmid, frm, fhi, right, 0.5 * eps, d - 1);
      };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, rule(a, b, fa, fm, fb), tol, depth);
}

inline double relative(double got, double want) { return std::abs(got - want) / std::abs(want); }

inline Vec2 rotate(const Vec2& p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x() - s * p.y(), s * p.x() + c * p.y()};
}

inline ClosedCurve rigid_motion(const ClosedCurve& curve, double angle, const Vec2& shift) {
  std::vector<Vec2> pts;
  for (const auto& p : curve.points()) pts.push_back(rotate(p, angle) + shift);
  return ClosedCurve::from_points(std::move(pts));
}

}  // namespace elastica::testing
