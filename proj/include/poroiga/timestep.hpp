#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "poroiga/assembly.hpp"
#include "poroiga/model.hpp"

namespace poroiga {

/// Direct sparse solver for the symmetric indefinite coupled system. The
/// matrix is symmetrically equilibrated (rows and columns scaled by the
/// inverse square root of their largest entry) and factorized by sparse LU
/// with partial pivoting.
class LinearSolver {
 public:
  LinearSolver();
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  /// Throws SolverError on structural or numerical singularity. Unknowns
  /// below `split` are reported as the displacement block, the rest as the
  /// pressure block.
  void factorize(const SparseMatrix& A, int split = -1);
  /// One step of iterative refinement is applied when the first solve leaves
  /// a relative residual above 1e-13.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  bool factorized() const;
  const SparseMatrix& matrix() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Eigen::VectorXd solve_linear(const SparseMatrix& A, const Eigen::VectorXd& b);

/// ||A x - b|| / ||b||, or the absolute residual when b = 0.
double relative_residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b);

/// Coefficients of the free DOFs at one time level.
struct TransientState {
  Eigen::VectorXd u;
  Eigen::VectorXd p;
  double t = 0.0;
  int step = 0;
  double residual = 0.0;  // relative residual of the step that produced it
};

/// Generalized trapezoidal marching of
///   [-K Q; Q^T S] dX/dt + [0 0; 0 P] X = {-df_u/dt; f_p}.
/// theta = 1 is backward Euler. Loads are the full loads of the system scaled
/// by a ramp factor supplied per time level.
class TimeIntegrator {
 public:
  TimeIntegrator(const ConstrainedSystem& system, double dt, double theta = 1.0,
                 bool reuse_factorization = true);

  double dt() const { return dt_; }
  double theta() const { return theta_; }

  /// Advances from `state` (load factor `scale_now`) to the next level (`scale_next`).
  TransientState step(const TransientState& state, double scale_now, double scale_next);

  /// Assembled step matrix [-K Q; Q^T S + theta dt P].
  const SparseMatrix& system_matrix() const { return lhs_; }

 private:
  Eigen::VectorXd rhs(const TransientState& state, double scale_now, double scale_next) const;

  const ConstrainedSystem& system_;
  double dt_;
  double theta_;
  bool reuse_;
  SparseMatrix lhs_;
  SparseMatrix history_;  // [-K Q; Q^T S - (1 - theta) dt P]
  LinearSolver solver_;
};

/// Load factor of step n: zero initial equilibrium, full load from the first step on.
inline double ramp_factor(int step) { return step <= 0 ? 0.0 : 1.0; }

struct Discretization {
  int pressure_degree = 1;
  OrderMode mode = OrderMode::mixed;
  MeshSpec mesh;
  int quadrature_order = 0;  // 0: p_u + 1
};

/// Discrete problem: spaces, assembled and constrained matrices.
class Simulation {
 public:
  Simulation(ProblemSpec spec, const Discretization& disc, ExecutionPolicy policy = ExecutionPolicy::serial);

  const ProblemSpec& spec() const { return spec_; }
  const MixedSpace& space() const { return space_; }
  const QuadratureRule& quadrature() const { return rule_; }
  const SystemMatrices& system() const { return system_; }
  const ConstrainedSystem& constrained() const { return constrained_; }

  TransientState initial_state() const;

  using Hook = std::function<void(const TransientState&)>;

  /// Marches spec.steps steps from X0 = 0. The returned series contains the
  /// initial state and every step listed in `output_steps`; `hook` sees every
  /// state. Solver errors are rethrown with the failing step index.
  std::vector<TransientState> run(std::span<const int> output_steps, const Hook& hook = {},
                                  bool reuse_factorization = true) const;

  Eigen::VectorXd full_pressure(const TransientState& s) const;
  Eigen::VectorXd full_displacement(const TransientState& s) const;
  double pressure(const TransientState& s, double xi, double eta) const;

 private:
  ProblemSpec spec_;
  MixedSpace space_;
  QuadratureRule rule_;
  SystemMatrices system_;
  ConstrainedSystem constrained_;
};

/// Maps a physical material interface y to the patch parameter eta (the
/// preset geometries are axis-aligned rectangles).
MeshSpec mesh_for(const ProblemSpec& spec, int spans_x, int spans_y, bool graded,
                  InterfaceContinuity continuity, double grading_ratio = 1.2);

}  // namespace poroiga
