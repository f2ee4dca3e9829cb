#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "poroiga/model.hpp"
#include "poroiga/splines.hpp"

namespace poroiga {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class OrderMode { mixed, equal };
enum class InterfaceContinuity { c0, max };
enum class ExecutionPolicy { serial, parallel };

/// Knot-span layout of the patch.
struct MeshSpec {
  int spans_x = 1;
  int spans_y = 1;
  bool graded = false;         // geometric grading in y toward the interfaces
  double grading_ratio = 1.2;
  std::vector<double> interfaces;  // eta parameter values of material interfaces
  InterfaceContinuity continuity = InterfaceContinuity::max;
};

enum class Edge { left, right, bottom, top };

/// Pressure and displacement spline spaces on one patch.
///
/// Both spaces share the same knot-span boundaries. Global DOF numbering puts
/// all displacement DOFs first, interleaved (x, y) per control point, then all
/// pressure DOFs.
struct MixedSpace {
  SplineSurface geometry;
  TensorSpace2D pressure;
  TensorSpace2D displacement;
  OrderMode mode = OrderMode::mixed;

  int pressure_degree() const { return pressure.xi.degree(); }
  int displacement_degree() const { return displacement.xi.degree(); }
  int displacement_basis_count() const { return displacement.basis_count(); }
  int pressure_basis_count() const { return pressure.basis_count(); }
  int displacement_dofs() const { return 2 * displacement_basis_count(); }
  int total_dofs() const { return displacement_dofs() + pressure_basis_count(); }

  int udof(int basis, int component) const { return 2 * basis + component; }
  int pdof(int basis) const { return displacement_dofs() + basis; }

  /// Distinct span boundaries in each parametric direction.
  std::vector<double> breaks_xi() const { return pressure.xi.unique_knots(); }
  std::vector<double> breaks_eta() const { return pressure.eta.unique_knots(); }
  int span_count() const;
};

/// Basis functions of a tensor space that do not vanish on an edge. For open
/// knot vectors these are exactly the edge rows/columns of the control net.
std::vector<int> edge_functions(const TensorSpace2D& space, Edge edge);

/// Builds the pressure space (degree p_p) and displacement space (p_p + 1 in
/// mixed mode, p_p in equal mode) by k-refining the geometry patch. C0
/// interfaces repeat the interface knot p_p times in the pressure space and
/// p_u times in the displacement space.
MixedSpace build_mixed_space(const SplineSurface& geometry, int pressure_degree, const MeshSpec& mesh,
                             OrderMode mode);

/// Points and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

struct QuadraturePoint {
  double xi;
  double eta;
  double weight;  // parametric weight
};

struct SpanBox {
  double xi0, xi1, eta0, eta1;
};

/// Tensor Gauss-Legendre rule on every knot span; points of span s occupy
/// [s * order^2, (s + 1) * order^2).
struct QuadratureRule {
  int order = 0;
  std::vector<SpanBox> spans;
  std::vector<QuadraturePoint> points;

  int points_per_span() const { return order * order; }
};

/// Default order is p_u + 1 points per direction.
QuadratureRule make_quadrature(const MixedSpace& space, int order = 0);

/// Physical location and integration weight (weight * det J) of a quadrature point.
struct PhysicalPoint {
  Eigen::Vector2d x;
  double weight;
};
std::vector<PhysicalPoint> physical_points(const MixedSpace& space, const QuadratureRule& rule);

struct SystemMatrices {
  SparseMatrix K;  // 2N_u x 2N_u
  SparseMatrix Q;  // 2N_u x N_p
  SparseMatrix S;  // N_p x N_p
  SparseMatrix P;  // N_p x N_p
  Eigen::VectorXd f_u;
  Eigen::VectorXd f_p;
};

SparseMatrix assemble_stiffness(const MixedSpace& space, const MaterialLayerSet& layers,
                                const QuadratureRule& rule, ExecutionPolicy policy = ExecutionPolicy::serial);
SparseMatrix assemble_coupling(const MixedSpace& space, const MaterialLayerSet& layers,
                               const QuadratureRule& rule, ExecutionPolicy policy = ExecutionPolicy::serial);
SparseMatrix assemble_storage(const MixedSpace& space, const MaterialLayerSet& layers,
                              const QuadratureRule& rule, ExecutionPolicy policy = ExecutionPolicy::serial);
SparseMatrix assemble_permeability(const MixedSpace& space, const MaterialLayerSet& layers,
                                   const QuadratureRule& rule,
                                   ExecutionPolicy policy = ExecutionPolicy::serial);

struct LoadVectors {
  Eigen::VectorXd f_u;
  Eigen::VectorXd f_p;
};

/// Full (unramped) loads: body forces, the top traction (0, -p0) and the
/// side/bottom fluxes of the spec.
LoadVectors assemble_loads(const MixedSpace& space, const ProblemSpec& spec, const QuadratureRule& rule);

/// K, Q, S, P and loads in one pass over the spans.
SystemMatrices assemble_system(const MixedSpace& space, const ProblemSpec& spec, const QuadratureRule& rule,
                               ExecutionPolicy policy = ExecutionPolicy::serial);

/// Dirichlet DOF classification. Free DOFs keep their relative order, so the
/// free displacement DOFs precede the free pressure DOFs.
struct Constraints {
  std::vector<int> constrained;
  std::vector<int> free;
  std::vector<int> full_to_free;  // -1 for constrained DOFs
  int free_displacement = 0;
  int free_pressure = 0;
};

Constraints classify_dirichlet(const MixedSpace& space, const ProblemSpec& spec);

/// System restricted to the free DOFs by symmetric elimination.
struct ConstrainedSystem {
  SparseMatrix K, Q, S, P;
  Eigen::VectorXd f_u, f_p;
  Constraints constraints;
};

/// Throws UnsupportedError if the spec prescribes a nonzero Dirichlet value.
ConstrainedSystem apply_dirichlet(const SystemMatrices& system, const MixedSpace& space,
                                  const ProblemSpec& spec);

/// Scatters free displacement/pressure coefficients back into full vectors.
Eigen::VectorXd expand_displacement(const Constraints& c, const MixedSpace& space, const Eigen::VectorXd& u);
Eigen::VectorXd expand_pressure(const Constraints& c, const MixedSpace& space, const Eigen::VectorXd& p);

/// Pressure field p_h(xi, eta) for full pressure coefficients.
double eval_pressure(const MixedSpace& space, const Eigen::VectorXd& p_full, double xi, double eta);
/// Displacement field u_h(xi, eta) for full displacement coefficients.
Eigen::Vector2d eval_displacement(const MixedSpace& space, const Eigen::VectorXd& u_full, double xi, double eta);

/// Coordinate-format dump: one "row col value" line per stored entry.
void write_coordinate(std::ostream& os, const SparseMatrix& m);

}  // namespace poroiga
