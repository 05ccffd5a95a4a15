#pragma once

// Structural checks on (candidate) minimizers: where the curve touches the
// boundary and itself, how self-contacts are arranged along the parameter
// circle, the index of complement points, convexity and the W^2 * area bound.
//
// Index conventions: vertex indices are cyclic in [0, N). A cyclic range
// {start, count} covers start, start + 1, ..., start + count - 1 (mod N).

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "elastica/curve.hpp"
#include "elastica/domain.hpp"

namespace elastica {

struct IndexRange {
  std::size_t start = 0;
  std::size_t count = 0;

  std::size_t last(std::size_t n) const { return (start + count + n - 1) % n; }
  bool contains(std::size_t i, std::size_t n) const { return (i + n - start) % n < count; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Maximal run of vertices on the boundary; `point` is the middle vertex.
struct BoundaryArc {
  std::size_t start = 0;
  /// Inclusive; smaller than `start` when the arc wraps past vertex 0.
  std::size_t end = 0;
  Vec2 point = Vec2::Zero();
  friend bool operator==(const BoundaryArc&, const BoundaryArc&) = default;
};

enum class ContactClass { TangentialParallel, TangentialAntiparallel, Transversal };

const char* to_string(ContactClass c);
/// Throws InvalidInput for unknown names.
ContactClass contact_class_from_string(const std::string& name);

/// One cluster of near-coincident vertex pairs, represented by its closest
/// pair (i, j), i < j. `branch_i` / `branch_j` are the vertex ranges the
/// cluster covers on the strand through i and through j.
struct SelfCouple {
  std::size_t i = 0;
  std::size_t j = 0;
  double gap = 0.0;
  /// Angle between the tangent lines at the closest pair, in [0, 90].
  double angle_deg = 0.0;
  ContactClass cls = ContactClass::Transversal;
  IndexRange branch_i;
  IndexRange branch_j;
  friend bool operator==(const SelfCouple&, const SelfCouple&) = default;
};

/// Point couple with its branch ranges collapsed onto the two vertices.
SelfCouple point_couple(std::size_t i, std::size_t j);

struct ContactReport {
  std::vector<BoundaryArc> boundary_arcs;
  std::vector<SelfCouple> self_couples;
  friend bool operator==(const ContactReport&, const ContactReport&) = default;
};

/// Couple (t, s) whose open arc ]t, s[, read forward and cyclically, meets no
/// contact index.
struct CyclicCouple {
  std::size_t t = 0;
  std::size_t s = 0;
  friend bool operator==(const CyclicCouple&, const CyclicCouple&) = default;
};

struct Decomposition {
  bool non_crossing = true;
  bool nested = true;
  /// Ordered so that t < s < tau < sigma cyclically starting from the first.
  std::optional<std::array<CyclicCouple, 2>> special;
  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

/// Line { x : normal . x = offset }.
struct SupportLine {
  Vec2 normal = Vec2::UnitX();
  double offset = 0.0;
};

/// Maximal cyclic runs with |sdf| <= tol, runs separated by fewer than three
/// off-boundary vertices merged. Default tol: 1e-3 * scale(domain).
std::vector<BoundaryArc> boundary_contacts(const ClosedCurve& curve, const Domain& domain,
                                           std::optional<double> tol = std::nullopt);

struct SelfContactOptions {
  /// Default: 1e-3 * half extent of the curve's bounding box.
  std::optional<double> tol_d;
  double tol_angle_deg = 5.0;
  /// Smallest cyclic index separation of a pair. Default: ceil(N / 20).
  std::optional<std::size_t> min_separation;
};

/// Edge pairs at segment distance <= tol_d and cyclic separation at least
/// `min_separation`, clustered by index adjacency. Each cluster becomes one
/// couple represented by its closest pair.
std::vector<SelfCouple> self_contacts(const ClosedCurve& curve,
                                      const SelfContactOptions& options = {});

/// Throws MultiplicityViolation when two couples share a strand, which means
/// three branches meet. `special` is the pair of contact-free arcs bounded by
/// couple ends; it needs two couples or one extended cluster, whose two end
/// pairs count as separate couples.
Decomposition verify_decomposition(const std::vector<SelfCouple>& couples, std::size_t n);

/// Reverses the vertex order when the signed area is negative.
ClosedCurve reorient_canonical(const ClosedCurve& curve);

/// Runs vertices i+1..j-1 backwards. At an antiparallel couple (i, j) this
/// keeps the polygon's tangent continuous while flipping the orientation of
/// the loop between i and j. Requires i + 1 < j < N.
ClosedCurve splice(const ClosedCurve& curve, std::size_t i, std::size_t j);

/// Histogram of winding numbers on a resolution^2 grid of cell centers over
/// the bounding box, skipping points within two mean edge lengths of the
/// curve. The curve is canonically oriented first; if values outside {0, 1}
/// remain, antiparallel couples are spliced while that reduces them.
std::map<int, std::size_t> index_profile(const ClosedCurve& curve, int grid_resolution);

/// Tangent line at vertex i (direction from the tangent field).
SupportLine tangent_line(const ClosedCurve& curve, std::size_t i);
/// True when every vertex lies within tol on one side of `line`.
bool is_support_line(const ClosedCurve& curve, const SupportLine& line, double tol);

/// Every tangent line is a support line and the total turning is +-2 pi.
/// Requires a uniform curve. Default tol: 1e-6 * half extent of the bounds.
bool is_convex(const ClosedCurve& curve, std::optional<double> tol = std::nullopt);

/// W^2 * |area| / (4 pi^3). Throws NotSimple when the curve has self-contacts
/// at 1e-6 of its scale, NonUniform for non-uniform curves.
double bh_ratio(const ClosedCurve& curve);

/// Energy of the open arc from vertex a to vertex b (forward, exclusive).
double arc_energy(const ClosedCurve& curve, std::size_t a, std::size_t b);

/// W(]s, tau[) / W(]sigma, t[) for special couples (t, s), (tau, sigma).
double branch_energy_ratio(const ClosedCurve& curve, const std::array<CyclicCouple, 2>& special);

struct FreeArcResidual {
  std::size_t arcs = 0;
  std::size_t vertices = 0;
  /// Over all arcs: max |2 kappa'' + kappa^3| / max |kappa|^3, both taken
  /// per arc.
  double worst_ratio = 0.0;
  double max_residual = 0.0;
  friend bool operator==(const FreeArcResidual&, const FreeArcResidual&) = default;
};

/// Euler-Lagrange residual on free arcs: vertices with sdf < -2 tol that lie
/// in no self-contact branch. Only vertices whose five-point stencil is free
/// are scored. Requires a uniform curve.
FreeArcResidual free_arc_residual(const ClosedCurve& curve, const Domain& domain,
                                  const std::vector<SelfCouple>& couples, double tol);

struct AnalyzeOptions {
  /// Boundary and self-contact distance; default 1e-3 * scale(domain).
  std::optional<double> contact_tol;
  double tol_angle_deg = 5.0;
  int grid_resolution = 128;
};

struct StructureReport {
  ContactReport contacts;
  bool multiplicity_ok = true;
  bool non_crossing = true;
  bool nested = true;
  std::optional<std::array<CyclicCouple, 2>> special_couples;
  std::optional<double> branch_energy_ratio;
  std::map<int, std::size_t> index_values;
  bool is_convex = false;
  std::optional<double> bh_ratio;
  FreeArcResidual free_arcs;
  friend bool operator==(const StructureReport&, const StructureReport&) = default;
};

/// Everything above in one pass. Requires a uniform curve.
StructureReport analyze_structure(const ClosedCurve& curve, const Domain& domain,
                                  const AnalyzeOptions& options = {});

}  // namespace elastica
