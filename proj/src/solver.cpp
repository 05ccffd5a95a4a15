#include "elastica/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <spdlog/spdlog.h>

#include "elastica/contour.hpp"
#include "elastica/energy.hpp"
#include "elastica/error.hpp"
#include "proximity.hpp"

namespace elastica {

namespace {

struct Evaluation {
  double W = 0.0;
  double penalty = 0.0;
  double max_violation = 0.0;
  double total() const { return W + penalty; }
};

// Penalty value; fills per-vertex samples when `samples` is non-null.
double penalty_value(std::span<const Vec2> pts, const Domain& domain, double mu,
                     std::vector<DomainSample>* samples, double* max_violation) {
  const std::size_t n = pts.size();
  if (samples) samples->resize(n);
  double sum = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const DomainSample s = sdf(domain, pts[i]);
    if (samples) (*samples)[i] = s;
    worst = std::max(worst, s.sdf);
    if (s.sdf > 0.0) {
      const double dual =
          0.5 * ((pts[i] - pts[(i + n - 1) % n]).norm() + (pts[(i + 1) % n] - pts[i]).norm());
      sum += s.sdf * s.sdf * dual;
    }
  }
  if (max_violation) *max_violation = worst;
  return mu * sum;
}

// Short-range repulsion between distant parts of the curve:
// weight * sum (delta - d)^2 over vertex/edge pairs closer than delta.
struct Guard {
  double delta = 0.0;
  std::size_t min_separation = 0;
  double weight = 0.0;
};

double repulsion_value(const std::vector<detail::ProximityTerm>& terms, const Guard& guard) {
  double sum = 0.0;
  for (const auto& t : terms) sum += (guard.delta - t.d) * (guard.delta - t.d);
  return guard.weight * sum;
}

Evaluation evaluate(std::span<const Vec2> pts, const Domain& domain, double mu,
                    const Guard* guard) {
  Evaluation ev;
  ev.W = kernel::bending_energy(pts);
  ev.penalty = penalty_value(pts, domain, mu, nullptr, &ev.max_violation);
  if (guard) {
    ev.penalty +=
        repulsion_value(detail::close_pairs(pts, guard->delta, guard->min_separation), *guard);
  }
  return ev;
}

Evaluation evaluate_with_gradient(std::span<const Vec2> pts, const Domain& domain, double mu,
                                  const Guard* guard, std::vector<Vec2>& grad,
                                  std::vector<DomainSample>& samples,
                                  std::vector<detail::ProximityTerm>& terms) {
  const std::size_t n = pts.size();
  grad.resize(n);
  Evaluation ev;
  ev.W = kernel::bending_energy_gradient(pts, grad);
  ev.penalty = penalty_value(pts, domain, mu, &samples, &ev.max_violation);
  terms.clear();
  if (guard) {
    terms = detail::close_pairs(pts, guard->delta, guard->min_separation);
    ev.penalty += repulsion_value(terms, *guard);
    // d moves with the vertex along u and with the edge endpoints along
    // -(1 - t) u and -t u.
    for (const auto& t : terms) {
      const double f = -2.0 * guard->weight * (guard->delta - t.d);
      grad[t.vertex] += f * t.u;
      grad[t.edge] -= f * (1.0 - t.t) * t.u;
      grad[(t.edge + 1) % n] -= f * t.t * t.u;
    }
  }
  // d/dp_i of mu * s_i^2 * l_i, with l_i = (|e_{i-1}| + |e_i|) / 2 also
  // depending on the neighbours.
  auto sq = [&](std::size_t i) {
    const double s = std::max(0.0, samples[i].sdf);
    return s * s;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = (i + n - 1) % n;
    const std::size_t ip = (i + 1) % n;
    const double s = std::max(0.0, samples[i].sdf);
    const double back_w = 0.5 * (sq(im) + sq(i));
    const double fwd_w = 0.5 * (sq(i) + sq(ip));
    if (s == 0.0 && back_w == 0.0 && fwd_w == 0.0) continue;
    const Vec2 eb = pts[i] - pts[im];
    const Vec2 ef = pts[ip] - pts[i];
    const double lb = eb.norm();
    const double lf = ef.norm();
    const double dual = 0.5 * (lb + lf);
    grad[i] += mu * (2.0 * s * dual * samples[i].gradient + back_w * eb / lb - fwd_w * ef / lf);
  }
  return ev;
}

// Descent runs in the space of normal displacements z (see UniformLift).
//
// Metric on z: n_i^T K_ij n_j with K = a * (D2^T D2 (x) I) + beta * I plus the
// Gauss-Newton blocks 2 mu l_i grad(sdf) grad(sdf)^T of the active penalty
// terms (and of the repulsion terms when the crossing guard is on); a = 2 N^3 / L^3 is the leading stiffness of W and beta the stiffness
// of its lowest nontrivial mode. Cyclic pentadiagonal, so the symbolic
// factorization is done once per vertex count.
class NormalMetric {
 public:
  /// `extra` holds further Gauss-Newton entries in normal coordinates; they
  /// may couple distant vertices, in which case the ordering is redone.
  bool factor(std::span<const Vec2> pts, std::span<const Vec2> normals,
              const std::vector<DomainSample>& samples, double mu,
              const std::vector<Eigen::Triplet<double>>& extra) {
    const std::size_t n = pts.size();
    const double nd = static_cast<double>(n);
    double L = 0.0;
    for (std::size_t i = 0; i < n; ++i) L += (pts[(i + 1) % n] - pts[i]).norm();
    const double a = 2.0 * nd * nd * nd / (L * L * L);
    const double lowest = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi / nd);
    const double beta = a * lowest * lowest;

    constexpr std::array<int, 5> kOffset{-2, -1, 0, 1, 2};
    constexpr std::array<double, 5> kStencil{1.0, -4.0, 6.0, -4.0, 1.0};
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(n * 5);
    const auto sn = static_cast<std::ptrdiff_t>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<std::ptrdiff_t>(i);
      for (int k = 0; k < 5; ++k) {
        const auto j = static_cast<std::size_t>((ii + kOffset[k] + sn) % sn);
        double v = a * kStencil[k] * normals[i].dot(normals[j]);
        if (kOffset[k] == 0) {
          v += beta;
          if (samples[i].sdf > 0.0) {
            const double dual = 0.5 * ((pts[i] - pts[(i + n - 1) % n]).norm() +
                                       (pts[(i + 1) % n] - pts[i]).norm());
            const double c = normals[i].dot(samples[i].gradient);
            v += 2.0 * mu * dual * c * c;
          }
        }
        t.emplace_back(i, j, v);
      }
    }
    t.insert(t.end(), extra.begin(), extra.end());
    const auto dim = static_cast<Eigen::Index>(n);
    matrix_.resize(dim, dim);
    matrix_.setFromTriplets(t.begin(), t.end());
    if (analyzed_size_ != n || !extra.empty() || coupled_) {
      coupled_ = !extra.empty();
      ldlt_.analyzePattern(matrix_);
      analyzed_size_ = n;
    }
    ldlt_.factorize(matrix_);
    return ldlt_.info() == Eigen::Success;
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return ldlt_.solve(rhs); }

 private:
  Eigen::SparseMatrix<double> matrix_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  std::size_t analyzed_size_ = 0;
  bool coupled_ = false;
};

// The energy is evaluated in the constant-speed frame, and its gradient has an
// O(1) tangential part that only reflects the spacing. Normal displacements z
// therefore travel with the tangential companion w that keeps every edge the
// same length to first order:
//
//   e_i . (dp_{i+1} - dp_i) = m  for all i,   dp_k = z_k n_k + w_k t_k,
//
// with w_0 = 0 (vertex 0 anchored, as in resampling) and m free. Written as
// A (w_1..w_{N-1}, m) = R z; the reduced gradient is n.g + R^T A^-T (t.g).
class UniformLift {
 public:
  bool factor(std::span<const Vec2> pts, std::span<const Vec2> tangents,
              std::span<const Vec2> normals) {
    const std::size_t n = pts.size();
    std::vector<Eigen::Triplet<double>> a;
    std::vector<Eigen::Triplet<double>> r;
    a.reserve(3 * n);
    r.reserve(2 * n);
    const auto mu_col = static_cast<Eigen::Index>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t ip = (i + 1) % n;
      const Vec2 e = (pts[ip] - pts[i]).normalized();
      const auto row = static_cast<Eigen::Index>(i);
      if (ip != 0) a.emplace_back(row, static_cast<Eigen::Index>(ip - 1), e.dot(tangents[ip]));
      if (i != 0) a.emplace_back(row, static_cast<Eigen::Index>(i - 1), -e.dot(tangents[i]));
      a.emplace_back(row, mu_col, -1.0);
      r.emplace_back(row, static_cast<Eigen::Index>(ip), -e.dot(normals[ip]));
      r.emplace_back(row, row, e.dot(normals[i]));
    }
    const auto dim = static_cast<Eigen::Index>(n);
    a_.resize(dim, dim);
    a_.setFromTriplets(a.begin(), a.end());
    r_.resize(dim, dim);
    r_.setFromTriplets(r.begin(), r.end());
    at_ = a_.transpose();
    if (analyzed_size_ != n) {
      lu_.analyzePattern(a_);
      lu_t_.analyzePattern(at_);
      analyzed_size_ = n;
    }
    lu_.factorize(a_);
    lu_t_.factorize(at_);
    return lu_.info() == Eigen::Success && lu_t_.info() == Eigen::Success;
  }

  /// Tangential companion of z, one entry per vertex.
  Eigen::VectorXd companion(const Eigen::VectorXd& z) const {
    const Eigen::VectorXd y = lu_.solve(r_ * z);
    Eigen::VectorXd w(z.size());
    w[0] = 0.0;
    w.tail(z.size() - 1) = y.head(z.size() - 1);
    return w;
  }

  /// Pull-back of a tangential covector onto z.
  Eigen::VectorXd pullback(const Eigen::VectorXd& gt) const {
    Eigen::VectorXd rhs(gt.size());
    rhs.head(gt.size() - 1) = gt.tail(gt.size() - 1);
    rhs[gt.size() - 1] = 0.0;
    return r_.transpose() * lu_t_.solve(rhs);
  }

 private:
  Eigen::SparseMatrix<double> a_;
  Eigen::SparseMatrix<double> at_;
  Eigen::SparseMatrix<double> r_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_t_;
  std::size_t analyzed_size_ = 0;
};

// Unit tangents (normalized central differences) and left normals.
void vertex_frames(std::span<const Vec2> pts, std::vector<Vec2>& tangents,
                   std::vector<Vec2>& normals) {
  const std::size_t n = pts.size();
  tangents.resize(n);
  normals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    tangents[i] = (pts[(i + 1) % n] - pts[(i + n - 1) % n]).normalized();
    normals[i] = perp(tangents[i]);
  }
}

double max_sdf(std::span<const Vec2> pts, const Domain& domain) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) worst = std::max(worst, sdf(domain, p).sdf);
  return worst;
}

std::vector<Vec2> jittered(const ClosedCurve& curve, double amplitude, std::uint64_t seed) {
  std::vector<Vec2> pts(curve.points().begin(), curve.points().end());
  if (amplitude <= 0.0) return pts;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t n = pts.size();
  const double h = length(curve) / static_cast<double>(n);
  const VertexField tangent = tangent_field(curve);
  // White noise smoothed over a few vertices, then rescaled to unit RMS:
  // vertex-scale zigzags would leave no equal-chord resampling to find.
  std::vector<double> white(n);
  for (auto& v : white) v = normal(rng);
  constexpr int kRadius = 8;
  constexpr double kWidth = 3.0;
  std::vector<double> smooth(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = -kRadius; k <= kRadius; ++k) {
      const auto j = (static_cast<std::ptrdiff_t>(i + n) + k) % static_cast<std::ptrdiff_t>(n);
      smooth[i] += std::exp(-0.5 * k * k / (kWidth * kWidth)) * white[static_cast<std::size_t>(j)];
    }
  }
  double rms = 0.0;
  for (double v : smooth) rms += v * v;
  rms = std::sqrt(rms / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] += amplitude * h * (smooth[i] / rms) * perp(tangent[i]);
  }
  return pts;
}

double spread(std::span<const Vec2> pts) {
  const std::size_t n = pts.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = (pts[(i + 1) % n] - pts[i]).norm();
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return hi / lo - 1.0;
}

enum class LevelResult { Converged, MaxIters, Stall };

}  // namespace

void SolverConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidParameters, what); };
  if (!(mu0 > 0.0)) fail("mu0 must be positive");
  if (!(mu_growth > 0.0)) fail("mu_growth must be positive");
  if (outer_loops <= 0) fail("outer_loops must be positive");
  if (max_inner_iters <= 0) fail("max_inner_iters must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) fail("armijo_c must lie in (0, 1)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) fail("backtrack must lie in (0, 1)");
  if (initial_step && !(*initial_step > 0.0)) fail("initial_step must be positive");
  if (grad_tol && !(*grad_tol > 0.0)) fail("grad_tol must be positive");
  if (constraint_tol && !(*constraint_tol > 0.0)) fail("constraint_tol must be positive");
  if (resample_every <= 0) fail("resample_every must be positive");
  if (N < kMinVertices) fail("N must be at least " + std::to_string(kMinVertices));
  if (!(jitter >= 0.0)) fail("jitter must be non-negative");
  if (guard_distance && !(*guard_distance > 0.0)) fail("guard_distance must be positive");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "Converged";
    case Termination::MaxIters: return "MaxIters";
    case Termination::LineSearchStall: return "LineSearchStall";
  }
  return "Unknown";
}

Termination termination_from_string(const std::string& name) {
  for (auto t : {Termination::Converged, Termination::MaxIters, Termination::LineSearchStall}) {
    if (name == to_string(t)) return t;
  }
  throw Error(ErrorCode::InvalidInput, "unknown termination '" + name + "'");
}

double penalized_energy(const ClosedCurve& curve, const Domain& domain, double mu) {
  return bending_energy(curve) + penalty_value(curve.points(), domain, mu, nullptr, nullptr);
}

SolveReport minimize(const ClosedCurve& curve0, const Domain& domain, const SolverConfig& config) {
  config.validate();
  const double dscale = scale(domain);
  ClosedCurve start = resample_uniform(curve0, config.N);
  if (config.jitter > 0.0) {
    start = resample_uniform(
        ClosedCurve::from_points(jittered(start, config.jitter, config.seed)), config.N);
  }
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& p : start.points()) nearest = std::min(nearest, sdf(domain, p).sdf);
  if (nearest > 0.1 * dscale) {
    throw Error(ErrorCode::Infeasible, "initial curve lies entirely outside the domain",
                std::nullopt, nearest);
  }

  const double W0 = bending_energy(start);
  const double grad_tol = config.grad_tol.value_or(1e-6 * W0);
  const double constraint_tol = config.constraint_tol.value_or(1e-4 * dscale);
  const double step_cap = config.initial_step.value_or(1e-2 * dscale);
  spdlog::info("minimize: N={} W0={:.6g} scale={:.6g} grad_tol={:.3g} constraint_tol={:.3g}",
               config.N, W0, dscale, grad_tol, constraint_tol);

  std::vector<Vec2> pts(start.points().begin(), start.points().end());
  const std::size_t n = pts.size();
  std::vector<Vec2> grad(n);
  std::vector<Vec2> trial(n);
  std::vector<DomainSample> samples;
  std::vector<detail::ProximityTerm> close;
  std::vector<Eigen::Triplet<double>> extra;
  std::optional<Guard> guard;
  if (config.crossing_guard) {
    guard = Guard{config.guard_distance.value_or(5e-4 * dscale), (n + 19) / 20, 0.0};
  }
  const double edge_scale = length(start) / static_cast<double>(n);
  const Guard* guard_ptr = guard ? &*guard : nullptr;
  std::size_t crossings = 0;
  std::vector<Vec2> tangents(n);
  std::vector<Vec2> normals(n);
  Eigen::VectorXd g(static_cast<Eigen::Index>(n));
  Eigen::VectorXd gt(static_cast<Eigen::Index>(n));
  NormalMetric metric;
  UniformLift lift;
  std::vector<TraceRow> trace;
  int iter = 0;
  double grad_norm = 0.0;
  double violation = 0.0;
  LevelResult level_result = LevelResult::MaxIters;

  auto resample = [&] {
    const ClosedCurve c = resample_uniform(ClosedCurve::from_points(pts), config.N);
    if (guard && detail::crossing_count(c.points()) > detail::crossing_count(pts)) {
      spdlog::debug("minimize: resampling would add a crossing, skipped");
      return;
    }
    pts.assign(c.points().begin(), c.points().end());
  };

  double mu = config.mu0;
  for (int level = 0; level < config.outer_loops; ++level, mu *= config.mu_growth) {
    level_result = LevelResult::MaxIters;
    if (guard) guard->weight = mu * edge_scale;
    bool fresh = true;  // no step taken since the last resampling
    for (int inner = 0; inner < config.max_inner_iters; ++inner) {
      const Evaluation ev =
          evaluate_with_gradient(pts, domain, mu, guard_ptr, grad, samples, close);
      violation = std::max(0.0, ev.max_violation);
      vertex_frames(pts, tangents, normals);
      for (std::size_t i = 0; i < n; ++i) {
        g[static_cast<Eigen::Index>(i)] = normals[i].dot(grad[i]);
        gt[static_cast<Eigen::Index>(i)] = tangents[i].dot(grad[i]);
      }
      // Gauss-Newton block 2 w J J^T of each repulsion term, J = dd/dz.
      extra.clear();
      for (const auto& t : close) {
        const std::size_t b = (t.edge + 1) % n;
        const std::array<std::size_t, 3> idx{t.vertex, t.edge, b};
        const std::array<double, 3> jac{normals[t.vertex].dot(t.u),
                                        -(1.0 - t.t) * normals[t.edge].dot(t.u),
                                        -t.t * normals[b].dot(t.u)};
        for (int r = 0; r < 3; ++r) {
          for (int c = 0; c < 3; ++c) {
            extra.emplace_back(static_cast<Eigen::Index>(idx[r]), static_cast<Eigen::Index>(idx[c]),
                               2.0 * guard->weight * jac[r] * jac[c]);
          }
        }
      }
      if (guard) crossings = detail::crossing_count(pts);
      if (!metric.factor(pts, normals, samples, mu, extra) ||
          !lift.factor(pts, tangents, normals)) {
        spdlog::warn("minimize: factorization failed at iter {}", iter);
        level_result = LevelResult::Stall;
        break;
      }
      g += lift.pullback(gt);
      const Eigen::VectorXd d = -metric.solve(g);
      const Eigen::VectorXd w = lift.companion(d);
      grad_norm = std::sqrt(std::max(0.0, -g.dot(d)));
      if (grad_norm < grad_tol) {
        level_result = LevelResult::Converged;
        break;
      }

      const double max_move = (d.array().square() + w.array().square()).sqrt().maxCoeff();
      double alpha = std::min(1.0, step_cap / max_move);
      const double slope = g.dot(d);
      bool accepted = false;
      Evaluation next;
      for (int k = 0; k < 60; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
          const auto k = static_cast<Eigen::Index>(i);
          trial[i] = pts[i] + alpha * (d[k] * normals[i] + w[k] * tangents[i]);
        }
        next = evaluate(trial, domain, mu, guard_ptr);
        if (next.total() <= ev.total() + config.armijo_c * alpha * slope &&
            !(guard && detail::crossing_count(trial) > crossings)) {
          accepted = true;
          break;
        }
        alpha *= config.backtrack;
      }
      if (!accepted) {
        if (!fresh) {
          // A stale parametrization can block progress; retry once resampled.
          resample();
          fresh = true;
          continue;
        }
        spdlog::warn("minimize: line search stalled at iter {} (grad_norm {:.3g})", iter,
                     grad_norm);
        level_result = LevelResult::Stall;
        break;
      }
      pts.swap(trial);
      fresh = false;
      ++iter;
      trace.push_back(TraceRow{iter, mu, next.W, next.penalty, std::max(0.0, next.max_violation),
                               alpha, grad_norm});
      spdlog::debug("iter {} mu={:.3g} W={:.10g} P={:.3g} viol={:.3g} step={:.3g} dec={:.3g}",
                    iter, mu, next.W, next.penalty, next.max_violation, alpha, grad_norm);
      // The energy is only meaningful at constant speed; resample early when
      // the spacing drifts past the uniformity tolerance.
      if ((inner + 1) % config.resample_every == 0 || spread(pts) > kUniformSpread) {
        resample();
        fresh = true;
      }
    }
    spdlog::info("minimize: mu={:.3g} done after {} iterations ({}), W={:.8g} violation={:.3g}",
                 mu, iter,
                 level_result == LevelResult::Converged ? "converged"
                 : level_result == LevelResult::Stall   ? "stalled"
                                                        : "iteration cap",
                 kernel::bending_energy(pts), violation);
    if (level_result == LevelResult::Stall) break;
  }

  Termination termination = Termination::MaxIters;
  if (level_result == LevelResult::Stall) {
    termination = Termination::LineSearchStall;
  } else if (level_result == LevelResult::Converged && violation < constraint_tol) {
    termination = Termination::Converged;
  }

  // Cleanup: constant speed first, then pull stray vertices onto the boundary.
  // A resampling puts vertices on chords, which shows up as curvature noise,
  // so it is skipped when the spacing is already uniform.
  if (spread(pts) > kUniformSpread) resample();
  for (auto& p : pts) p = project(domain, p, dscale);
  ClosedCurve final_curve = ClosedCurve::from_points(pts);
  const double final_W = kernel::bending_energy(final_curve.points());
  const double final_violation = std::max(0.0, max_sdf(final_curve.points(), domain));
  spdlog::info("minimize: {} after {} iterations, W={:.10g}", to_string(termination), iter,
               final_W);
  return SolveReport{std::move(final_curve), std::move(trace), termination, iter,
                     final_W,              final_violation,  grad_norm};
}

ClosedCurve inflate_to_saturation(const ClosedCurve& curve, const Domain& domain,
                                  const Vec2& center, double lambda_max) {
  if (!(lambda_max >= 1.0)) {
    throw Error(ErrorCode::InvalidParameters, "lambda_max must be at least 1", std::nullopt,
                lambda_max);
  }
  auto inside = [&](double lambda) {
    for (const auto& p : curve.points()) {
      if (sdf(domain, center + lambda * (p - center)).sdf > 0.0) return false;
    }
    return true;
  };
  if (!inside(1.0)) {
    throw Error(ErrorCode::Infeasible, "curve is not inside the domain", std::nullopt,
                max_sdf(curve.points(), domain));
  }
  if (inside(lambda_max)) return scale_about(curve, center, lambda_max);
  double lo = 1.0;
  double hi = std::min(2.0, lambda_max);
  while (inside(hi)) {
    lo = hi;
    hi = std::min(2.0 * hi, lambda_max);
  }
  while (hi - lo > 1e-9 * lo) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }
  if (lo == 1.0) return curve;
  return scale_about(curve, center, lo);
}

ClosedCurve seed_from_offset(const Domain& domain, double offset, std::size_t n) {
  if (!(offset >= 0.0)) {
    throw Error(ErrorCode::InvalidParameters, "offset must be non-negative", std::nullopt, offset);
  }
  Box box = bounds(domain);
  const double margin = 0.05 * box.diagonal();
  box.lo.array() -= margin;
  box.hi.array() += margin;
  const double extent = (box.hi - box.lo).maxCoeff();
  double h = extent / 256.0;
  if (offset > 0.0) h = std::min(h, offset / 4.0);
  const int cells = std::min(2048, static_cast<int>(std::ceil(extent / h)));
  const int nx = std::max(16, static_cast<int>(std::ceil(cells * (box.hi.x() - box.lo.x()) / extent)));
  const int ny = std::max(16, static_cast<int>(std::ceil(cells * (box.hi.y() - box.lo.y()) / extent)));
  const auto lines = contour([&](const Vec2& p) { return sdf(domain, p).sdf; }, box, nx + 1,
                             ny + 1, -offset);

  const Polyline* best = nullptr;
  double best_length = 0.0;
  for (const auto& line : lines) {
    if (!line.closed || line.points.size() < kMinVertices) continue;
    double len = 0.0;
    for (std::size_t i = 0; i < line.points.size(); ++i) {
      len += (line.points[(i + 1) % line.points.size()] - line.points[i]).norm();
    }
    if (len > best_length) {
      best_length = len;
      best = &line;
    }
  }
  if (!best) throw Error(ErrorCode::Infeasible, "offset level set is empty", std::nullopt, offset);

  // Marching squares can emit near-duplicate points at lattice corners.
  std::vector<Vec2> pts;
  const double min_gap = 1e-9 * extent;
  for (const auto& p : best->points) {
    if (pts.empty() || (p - pts.back()).norm() > min_gap) pts.push_back(p);
  }
  while (pts.size() > 1 && (pts.front() - pts.back()).norm() <= min_gap) pts.pop_back();
  ClosedCurve loop = ClosedCurve::from_points(std::move(pts));
  if (signed_area(loop) < 0.0) loop = reversed(loop);
  return resample_uniform(loop, n);
}

}  // namespace elastica
