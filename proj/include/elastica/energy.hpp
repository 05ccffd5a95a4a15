#pragma once

// Discrete Bernoulli-Euler bending energy on constant-speed polygons.
//
// With the parameter circle normalized to unit length (dt = 1/N) and
// d_i = p_{i+1} - 2 p_i + p_{i-1}, the energy is
//
//   W = (1/L^3) * sum_i |d_i / dt^2|^2 dt = N^3 * sum_i |d_i|^2 / L^3,
//
// which equals the integral of kappa^2 ds for a constant-speed curve and is
// homogeneous of degree -1 under scaling.

#include <span>
#include <vector>

#include "elastica/curve.hpp"

namespace elastica {

struct EnergyReport {
  double W = 0.0;
  double L = 0.0;
  std::vector<double> kappa;
  double grad_norm = 0.0;
  double el_residual_max = 0.0;
  /// Set when W * L falls below 0.95 * 4 pi^2, the Fenchel/Cauchy-Schwarz
  /// floor; only coarse polygons get there.
  bool below_floor = false;
  friend bool operator==(const EnergyReport&, const EnergyReport&) = default;
};

double bending_energy(const ClosedCurve& curve);

/// Exact derivative of `bending_energy` along `delta`.
double directional_derivative(const ClosedCurve& curve, const VertexField& delta);

/// Exact gradient of `bending_energy` with respect to the vertex positions.
VertexField first_variation(const ClosedCurve& curve);

/// 2 kappa'' + kappa^3 per vertex, kappa'' taken in arc length.
std::vector<double> el_residual(const ClosedCurve& curve);

EnergyReport energy_report(const ClosedCurve& curve);

/// sum theta_i^2 / l_i, the turning-angle discretization of the same energy.
double turning_angle_energy(const ClosedCurve& curve);

/// Unchecked kernels over raw vertex arrays. These skip the uniformity
/// precondition, which the solver needs between resampling passes.
namespace kernel {

double bending_energy(std::span<const Vec2> pts);

/// Writes dW/dp_i into `grad` (same size as `pts`) and returns W.
double bending_energy_gradient(std::span<const Vec2> pts, std::span<Vec2> grad);

}  // namespace kernel

}  // namespace elastica
