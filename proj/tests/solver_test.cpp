#include <doctest.h>

#include <cmath>

#include "elastica/energy.hpp"
#include "elastica/error.hpp"
#include "elastica/solver.hpp"
#include "support.hpp"

using namespace elastica;
using namespace elastica::testing;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidInput;
}

double radius_spread(const ClosedCurve& c, const Vec2& center, double r) {
  double worst = 0.0;
  for (const auto& p : c.points()) worst = std::max(worst, std::abs((p - center).norm() - r));
  return worst;
}

}  // namespace

TEST_CASE("penalized energy") {
  const ClosedCurve c = circle({0, 0}, 1.0, 512);
  const double w = bending_energy(c);
  CHECK(penalized_energy(c, Domain::disk({0, 0}, 2.0), 1e6) == w);
  CHECK(penalized_energy(c, Domain::disk({0, 0}, 0.5), 0.0) == w);

  // Hand sum of max(0, |p_i| - 0.5)^2 l_i, with l_i the mean of the two
  // incident edges.
  double hand = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double l = 0.5 * ((c.at(static_cast<std::ptrdiff_t>(i) + 1) - c[i]).norm() +
                            (c[i] - c.at(static_cast<std::ptrdiff_t>(i) - 1)).norm());
    hand += std::pow(std::max(0.0, c[i].norm() - 0.5), 2) * l;
  }
  const double got = penalized_energy(c, Domain::disk({0, 0}, 0.5), 1.0);
  CHECK(relative(got, w + hand) < 1e-12);
  CHECK(relative(got, 2.0 * kPi + 0.25 * 2.0 * kPi) < 1e-3);

  const ClosedCurve lumpy = ClosedCurve::from_points(
      {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {3, 2}, {2, 2}, {1, 2}, {0, 2}});
  CHECK(code_of([&] { penalized_energy(lumpy, Domain::disk({0, 0}, 1.0), 1.0); }) ==
        ErrorCode::NonUniform);
  CHECK(code_of([&] { penalized_energy(c, Domain(), 1.0); }) == ErrorCode::MalformedDomain);
}

TEST_CASE("minimize in a disk reaches the boundary circle") {
  for (double r : {1.0, 2.0}) {
    const Domain disk = Domain::disk({0, 0}, r);
    const SolveReport rep = minimize(circle({0, 0}, 0.3, 512), disk);
    CHECK(rep.termination == Termination::Converged);
    CHECK(relative(rep.final_W, 2.0 * kPi / r) < 1e-2);
    CHECK(rep.final_W == bending_energy(rep.final_curve));
    CHECK(rep.final_curve.size() == 512);
    CHECK(rep.final_violation <= 1e-4 * r);
    CHECK(radius_spread(rep.final_curve, {0, 0}, r) <= 1e-4 * r);
    CHECK(rep.iters == static_cast<int>(rep.energy_trace.size()));
    CHECK(rep.final_grad_norm < 1e-6 * bending_energy(circle({0, 0}, 0.3, 512)));
  }
}

TEST_CASE("accepted steps never raise the penalized energy") {
  const Domain d = stadium(2.0, 1.0);
  SolverConfig cfg;
  cfg.N = 256;
  cfg.outer_loops = 4;
  const SolveReport rep = minimize(circle({0.1, 0}, 0.3, 256), d, cfg);
  REQUIRE(rep.energy_trace.size() > 10);
  const double w0 = rep.energy_trace.front().W;
  int strict = 0;
  for (std::size_t k = 1; k < rep.energy_trace.size(); ++k) {
    const TraceRow& a = rep.energy_trace[k - 1];
    const TraceRow& b = rep.energy_trace[k];
    CHECK(b.iter == a.iter + 1);
    CHECK(b.step > 0.0);
    CHECK(b.mu >= a.mu);
    if (b.mu != a.mu) continue;
    // Resampling between rows may move the energy by O(1/N^2).
    CHECK(b.W + b.penalty <= a.W + a.penalty + 10.0 * w0 / (256.0 * 256.0));
    strict += b.W + b.penalty < a.W + a.penalty ? 1 : 0;
  }
  CHECK(strict > static_cast<int>(rep.energy_trace.size()) / 2);
  if (rep.termination == Termination::Converged) {
    CHECK(rep.final_violation <= 1e-4 * scale(d));
  }
}

TEST_CASE("minimize is deterministic") {
  const Domain d = ellipse_domain(2.0, 1.0);
  SolverConfig cfg;
  cfg.N = 128;
  cfg.jitter = 0.2;
  cfg.seed = 5;
  cfg.outer_loops = 2;
  cfg.max_inner_iters = 300;
  const SolveReport a = minimize(circle({0, 0}, 0.3, 128), d, cfg);
  const SolveReport b = minimize(circle({0, 0}, 0.3, 128), d, cfg);
  CHECK(a == b);
  cfg.seed = 6;
  const SolveReport c = minimize(circle({0, 0}, 0.3, 128), d, cfg);
  CHECK_FALSE(a.final_curve == c.final_curve);
}

TEST_CASE("minimize rejects hopeless starts and bad configs") {
  CHECK(code_of([] { minimize(circle({10, 10}, 0.3, 64), Domain::disk({0, 0}, 1.0)); }) ==
        ErrorCode::Infeasible);

  const std::vector<std::function<void(SolverConfig&)>> breakers{
      [](SolverConfig& c) { c.mu0 = 0.0; },
      [](SolverConfig& c) { c.mu_growth = -1.0; },
      [](SolverConfig& c) { c.outer_loops = 0; },
      [](SolverConfig& c) { c.max_inner_iters = 0; },
      [](SolverConfig& c) { c.armijo_c = 1.0; },
      [](SolverConfig& c) { c.backtrack = 0.0; },
      [](SolverConfig& c) { c.initial_step = -1.0; },
      [](SolverConfig& c) { c.grad_tol = 0.0; },
      [](SolverConfig& c) { c.constraint_tol = 0.0; },
      [](SolverConfig& c) { c.resample_every = 0; },
      [](SolverConfig& c) { c.N = 4; },
      [](SolverConfig& c) { c.jitter = -0.1; },
      [](SolverConfig& c) { c.guard_distance = 0.0; },
  };
  for (const auto& breaker : breakers) {
    SolverConfig cfg;
    breaker(cfg);
    CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidParameters);
    CHECK(code_of([&] { minimize(circle({0, 0}, 0.3, 64), Domain::disk({0, 0}, 1.0), cfg); }) ==
          ErrorCode::InvalidParameters);
  }
  CHECK_NOTHROW(SolverConfig{}.validate());
}

TEST_CASE("iteration cap is reported, not thrown") {
  SolverConfig cfg;
  cfg.N = 128;
  cfg.max_inner_iters = 3;
  cfg.outer_loops = 1;
  const SolveReport rep = minimize(circle({0, 0}, 0.3, 128), Domain::disk({0, 0}, 1.0), cfg);
  CHECK(rep.termination == Termination::MaxIters);
  CHECK(rep.iters <= 3);
}

TEST_CASE("termination names") {
  for (auto t : {Termination::Converged, Termination::MaxIters, Termination::LineSearchStall}) {
    CHECK(termination_from_string(to_string(t)) == t);
  }
  CHECK(code_of([] { termination_from_string("Done"); }) == ErrorCode::InvalidInput);
}

TEST_CASE("inflate_to_saturation") {
  const Domain disk = Domain::disk({0, 0}, 1.0);
  const ClosedCurve small = circle({0, 0}, 0.3, 256);
  const ClosedCurve big = inflate_to_saturation(small, disk, {0, 0});
  CHECK(radius_spread(big, {0, 0}, 1.0) <= 1e-6);
  CHECK(bending_energy(big) < bending_energy(small));

  const ClosedCurve touching = circle({0, 0}, 1.0, 256);
  CHECK(inflate_to_saturation(touching, disk, {0, 0}) == touching);

  // Off-center circle saturates when its far side reaches the wall.
  const ClosedCurve off = circle({0.5, 0}, 0.2, 256);
  const ClosedCurve off_big = inflate_to_saturation(off, disk, {0.5, 0});
  double reach = 0.0;
  for (const auto& p : off_big.points()) reach = std::max(reach, p.norm());
  CHECK(std::abs(reach - 1.0) < 1e-8);
  CHECK(bending_energy(off_big) <= bending_energy(off));

  CHECK(code_of([&] { inflate_to_saturation(circle({3, 0}, 0.5, 64), disk, {3, 0}); }) ==
        ErrorCode::Infeasible);
}

TEST_CASE("seed_from_offset") {
  const ClosedCurve c = seed_from_offset(Domain::disk({0, 0}, 1.0), 0.1, 256);
  CHECK(c.size() == 256);
  CHECK(radius_spread(c, {0, 0}, 0.9) < 2e-3);
  CHECK(signed_area(c) > 0.0);
  CHECK(edge_spread(c) <= kUniformSpread);

  const Domain drops = two_drops();
  const ClosedCurve loop = seed_from_offset(drops, 0.025, 1024);
  double worst = 0.0;
  for (const auto& p : loop.points()) worst = std::max(worst, std::abs(sdf(drops, p).sdf + 0.025));
  CHECK(worst < 1e-3);

  CHECK(code_of([] { seed_from_offset(Domain::disk({0, 0}, 1.0), 1.5, 64); }) ==
        ErrorCode::Infeasible);
  CHECK(code_of([] { seed_from_offset(Domain::disk({0, 0}, 1.0), -0.1, 64); }) ==
        ErrorCode::InvalidParameters);
}
