#include <doctest.h>

#include <cmath>
#include <random>

#include "elastica/energy.hpp"
#include "elastica/error.hpp"
#include "support.hpp"

using namespace elastica;
using namespace elastica::testing;

namespace {

VertexField random_field(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  VertexField f;
  f.vectors.resize(n);
  for (auto& v : f.vectors) v = {g(rng), g(rng)};
  return f;
}

// Independent evaluation of N^3 sum |p_{i+1} - 2 p_i + p_{i-1}|^2 / L^3 at
// p + h d in extended precision, so central differences are not limited by
// the rounding of W.
long double energy_ld(const ClosedCurve& c, const VertexField& d, long double h) {
  const std::size_t n = c.size();
  std::vector<long double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<long double>(c[i].x()) + h * static_cast<long double>(d[i].x());
    y[i] = static_cast<long double>(c[i].y()) + h * static_cast<long double>(d[i].y());
  }
  long double sum = 0.0L;
  long double len = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = (i + 1) % n;
    const std::size_t im = (i + n - 1) % n;
    const long double dx = x[ip] - 2.0L * x[i] + x[im];
    const long double dy = y[ip] - 2.0L * y[i] + y[im];
    sum += dx * dx + dy * dy;
    len += std::sqrt((x[ip] - x[i]) * (x[ip] - x[i]) + (y[ip] - y[i]) * (y[ip] - y[i]));
  }
  const long double nn = static_cast<long double>(n);
  return nn * nn * nn * sum / (len * len * len);
}

ClosedCurve displaced(const ClosedCurve& c, const VertexField& d, double h) {
  std::vector<Vec2> pts(c.points().begin(), c.points().end());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] += h * d[i];
  return ClosedCurve::from_points(std::move(pts));
}

// Rounded rectangle: straight sides from x = -1 to 1 at y = +-1, half-disk caps.
ClosedCurve racetrack(std::size_t n) {
  std::vector<Vec2> dense;
  for (int k = 0; k < 400; ++k) dense.push_back({-1.0 + 2.0 * k / 400.0, -1.0});
  for (int k = 0; k < 400; ++k) {
    const double a = -kPi / 2 + kPi * k / 400.0;
    dense.push_back({1.0 + std::cos(a), std::sin(a)});
  }
  for (int k = 0; k < 400; ++k) dense.push_back({1.0 - 2.0 * k / 400.0, 1.0});
  for (int k = 0; k < 400; ++k) {
    const double a = kPi / 2 + kPi * k / 400.0;
    dense.push_back({-1.0 + std::cos(a), std::sin(a)});
  }
  return resample_uniform(ClosedCurve::from_points(std::move(dense)), n);
}

}  // namespace

TEST_CASE("bending energy of circles and the ellipse") {
  CHECK(relative(bending_energy(circle({0, 0}, 1.0, 1024)), 2.0 * kPi) < 1e-3);
  for (double r : {0.5, 1.0, 3.0}) {
    CHECK(relative(bending_energy(circle({1, -1}, r, 1024)), 2.0 * kPi / r) < 1e-3);
  }

  // Integral of kappa^2 ds over the 2x1 ellipse, by adaptive Simpson and
  // frozen from a 30-digit quadrature.
  const double oracle = simpson(
      [](double t) {
        const double q = 4.0 * std::sin(t) * std::sin(t) + std::cos(t) * std::cos(t);
        return 4.0 / std::pow(q, 2.5);
      },
      0.0, 2.0 * kPi, 1e-13);
  CHECK(std::abs(oracle - 6.636029752123301) < 1e-9);
  CHECK(relative(bending_energy(ellipse_curve(2.0, 1.0, 2048)), oracle) < 1e-3);
}

TEST_CASE("bending energy rejects non-uniform polygons") {
  const ClosedCurve lumpy = ClosedCurve::from_points(
      {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {3, 2}, {2, 2}, {1, 2}, {0, 2}});
  CHECK_THROWS_AS(bending_energy(lumpy), Error);
  try {
    bending_energy(lumpy);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonUniform);
  }
}

TEST_CASE("scaling law and rigid invariance") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 10; ++k) {
    const ClosedCurve c = random_smooth_curve(rng, 256);
    const double w = bending_energy(c);
    for (double lambda : {0.5, 2.0, 10.0}) {
      CHECK(relative(bending_energy(scale_about(c, {0.1, 0.2}, lambda)) * lambda, w) < 1e-12);
    }
    CHECK(relative(bending_energy(rigid_motion(c, 1.1, {3.0, -4.0})), w) < 1e-12);
  }
}

TEST_CASE("directional derivative") {
  const ClosedCurve c = circle({0.5, 0.5}, 1.3, 256);
  const double w = bending_energy(c);

  VertexField shift;
  shift.vectors.assign(c.size(), Vec2(0.3, -0.8));
  CHECK(std::abs(directional_derivative(c, shift)) <= 1e-10 * w);

  VertexField radial;
  for (const auto& p : c.points()) radial.vectors.push_back(p - Vec2(0.5, 0.5));
  CHECK(relative(directional_derivative(c, radial), -w) < 1e-8);

  VertexField short_field;
  short_field.vectors.assign(c.size() - 1, Vec2::Zero());
  try {
    directional_derivative(c, short_field);
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
}

TEST_CASE("directional derivative matches central differences") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const ClosedCurve c = random_smooth_curve(rng, 128);
    const VertexField d = random_direction(rng, c.size());
    const long double h = 1e-6L * bounds(c).diagonal();
    const auto fd = static_cast<double>((energy_ld(c, d, h) - energy_ld(c, d, -h)) / (2.0L * h));
    const double exact = directional_derivative(c, d);
    CHECK(std::abs(fd - exact) / std::abs(exact) < 1e-6);
    CHECK(relative(static_cast<double>(energy_ld(c, d, 0.0L)), bending_energy(c)) < 1e-13);
  }
}

TEST_CASE("first variation") {
  std::mt19937_64 rng(202);
  const ClosedCurve c = random_smooth_curve(rng, 200);
  const VertexField g = first_variation(c);
  for (int trial = 0; trial < 100; ++trial) {
    const VertexField d = random_field(rng, c.size());
    const double exact = directional_derivative(c, d);
    CHECK(std::abs(g.dot(d) - exact) <= 1e-12 * std::max(std::abs(exact), g.norm() * d.norm()));
  }

  Vec2 total = Vec2::Zero();
  double torque = 0.0;
  const Vec2 center = bounds(c).center();
  for (std::size_t i = 0; i < c.size(); ++i) {
    total += g[i];
    torque += g[i].dot(perp(c[i] - center));
  }
  CHECK(total.norm() <= 1e-10 * g.norm());
  CHECK(std::abs(torque) <= 1e-10 * g.norm() * bounds(c).diagonal());
}

TEST_CASE("Euler-Lagrange residual") {
  for (double r : {0.5, 1.0, 2.0}) {
    const auto res = el_residual(circle({0, 0}, r, 512));
    for (double v : res) CHECK(relative(v, 1.0 / (r * r * r)) < 1e-3);
  }

  // Straight stretches are exactly flat, so the residual vanishes there.
  const ClosedCurve track = racetrack(400);
  const auto res = el_residual(track);
  int flat = 0;
  for (std::size_t i = 0; i < track.size(); ++i) {
    bool straight = true;
    for (int k = -3; k <= 3; ++k) {
      const Vec2& p = track.at(static_cast<std::ptrdiff_t>(i) + k);
      straight = straight && std::abs(p.x()) < 0.999 && std::abs(std::abs(p.y()) - 1.0) == 0.0;
    }
    if (!straight) continue;
    CHECK(res[i] == 0.0);
    ++flat;
  }
  CHECK(flat > 100);
}

TEST_CASE("energy report") {
  const EnergyReport unit = energy_report(circle({0, 0}, 1.0, 1024));
  CHECK(relative(unit.W, 2.0 * kPi) < 1e-3);
  CHECK(relative(unit.L, 2.0 * kPi) < 1e-5);
  for (double k : unit.kappa) CHECK(std::abs(k - 1.0) < 1e-4);
  CHECK_FALSE(unit.below_floor);

  std::mt19937_64 rng(303);
  const ClosedCurve c = random_smooth_curve(rng, 256);
  const EnergyReport a = energy_report(c);
  const EnergyReport b = energy_report(scale_about(c, {0, 0}, 3.0));
  CHECK(relative(b.W, a.W / 3.0) < 1e-12);
  CHECK(relative(b.L, 3.0 * a.L) < 1e-12);
}

TEST_CASE("W L stays above the 4 pi^2 floor on random curves") {
  std::mt19937_64 rng(404);
  for (int k = 0; k < 100; ++k) {
    const EnergyReport r = energy_report(random_smooth_curve(rng, 128 + 4 * k, 0.2 + 0.01 * k));
    CHECK(r.W >= 0.0);
    CHECK(r.L > 0.0);
    CHECK(r.W * r.L >= 4.0 * kPi * kPi * 0.95);
    CHECK_FALSE(r.below_floor);
  }
}

TEST_CASE("length bound in the unit disk") {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double bound = std::pow(2.0 * kPi, 3);
  for (int k = 0; k < 200; ++k) {
    // Radius at most 0.6 including harmonics, center within 0.3 of the origin.
    const double r0 = 0.05 + 0.45 * u(rng);
    const double a = 2.0 * kPi * u(rng);
    const Vec2 center = 0.3 * u(rng) * Vec2(std::cos(a), std::sin(a));
    const ClosedCurve c = random_smooth_curve(rng, 256, r0, center);
    for (const auto& p : c.points()) REQUIRE(p.norm() <= 1.0);
    CHECK(length(c) <= bound * bending_energy(c) * 1.05);
  }
}

TEST_CASE("turning-angle energy agrees with the second-difference energy") {
  std::mt19937_64 rng(606);
  for (int k = 0; k < 10; ++k) {
    const ClosedCurve c = random_smooth_curve(rng, 512 + 64 * k);
    CHECK(relative(turning_angle_energy(c), bending_energy(c)) < 0.01);
  }
}
