#pragma once

// Penalized descent for the bending energy of a curve confined to a domain.
//
// Outer loop: penalty weight mu = mu0 * mu_growth^k, k < outer_loops.
// Inner loop: descent on W + mu * sum_i max(0, sdf(p_i))^2 * l_i along
// d = -M^{-1} g, where M is the fourth-difference stiffness of W plus the
// Gauss-Newton block of the active penalty terms, with Armijo backtracking and
// uniform resampling every `resample_every` iterations (earlier when the
// spacing drifts). Steps move vertices along their normals, each paired with
// the tangential motion that keeps the edges equal to first order.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elastica/curve.hpp"
#include "elastica/domain.hpp"

namespace elastica {

struct SolverConfig {
  double mu0 = 10.0;
  double mu_growth = 10.0;
  int outer_loops = 6;
  int max_inner_iters = 2000;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  /// Largest vertex displacement of a first line-search trial.
  /// Unset means 1e-2 * scale(domain).
  std::optional<double> initial_step;
  /// Bound on the preconditioned gradient norm sqrt(g^T M^{-1} g). Unset means
  /// 1e-6 * W(initial curve).
  std::optional<double> grad_tol;
  /// Unset means 1e-4 * scale(domain).
  std::optional<double> constraint_tol;
  int resample_every = 25;
  std::size_t N = 512;
  std::uint64_t seed = 0;
  /// RMS of a random normal displacement of the initial curve, in mean edge
  /// lengths. The noise is correlated over a few vertices.
  double jitter = 0.0;
  /// Keeps distant parts of the curve from passing through each other: trial
  /// steps and resamplings that add an edge crossing are rejected, and
  /// vertices closer than `guard_distance` to a distant edge are pushed apart
  /// with the final penalty weight.
  bool crossing_guard = false;
  /// Unset means 5e-4 * scale(domain).
  std::optional<double> guard_distance;

  /// Throws InvalidParameters.
  void validate() const;
  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

enum class Termination { Converged, MaxIters, LineSearchStall };

const char* to_string(Termination t);
/// Throws InvalidInput for unknown names.
Termination termination_from_string(const std::string& name);

struct TraceRow {
  int iter = 0;
  double mu = 0.0;
  double W = 0.0;
  double penalty = 0.0;
  double max_violation = 0.0;
  double step = 0.0;
  double grad_norm = 0.0;
  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct SolveReport {
  ClosedCurve final_curve;
  std::vector<TraceRow> energy_trace;
  Termination termination = Termination::MaxIters;
  int iters = 0;
  /// W of `final_curve`.
  double final_W = 0.0;
  /// max(0, max_i sdf) of `final_curve`.
  double final_violation = 0.0;
  /// Last preconditioned gradient norm seen before cleanup.
  double final_grad_norm = 0.0;
  friend bool operator==(const SolveReport&, const SolveReport&) = default;
};

/// W + mu * sum_i max(0, sdf(p_i))^2 * l_i. Requires a uniform curve.
double penalized_energy(const ClosedCurve& curve, const Domain& domain, double mu);

/// Throws Infeasible when no vertex comes within 0.1 * scale of the domain, or
/// InvalidParameters for a bad config. Line-search failure is reported through
/// `termination`, not thrown.
SolveReport minimize(const ClosedCurve& curve0, const Domain& domain,
                     const SolverConfig& config = {});

/// Largest dilation about `center` in [1, lambda_max] that keeps every vertex
/// in the domain, to 1e-9 relative. Throws Infeasible if the curve is not
/// inside to begin with.
ClosedCurve inflate_to_saturation(const ClosedCurve& curve, const Domain& domain,
                                  const Vec2& center, double lambda_max = 1e3);

/// Longest closed component of {sdf = -offset}, traced by marching squares and
/// resampled to n vertices, counterclockwise. Throws Infeasible when the level
/// set is empty.
ClosedCurve seed_from_offset(const Domain& domain, double offset, std::size_t n);

}  // namespace elastica
