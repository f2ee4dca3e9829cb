#include "poroiga/timestep.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include <Eigen/SparseLU>

#include "poroiga/errors.hpp"

namespace poroiga {

struct LinearSolver::Impl {
  SparseMatrix A;
  Eigen::VectorXd scale;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  bool ready = false;
};

LinearSolver::LinearSolver() : impl_(std::make_unique<Impl>()) {}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

namespace {

std::string block_name(int index, int split) {
  if (split < 0) return "unknown " + std::to_string(index);
  return (index < split ? "displacement block, unknown " : "pressure block, unknown ") + std::to_string(index);
}

}  // namespace

void LinearSolver::factorize(const SparseMatrix& A, int split) {
  if (A.rows() != A.cols()) throw ArgumentError("matrix must be square");
  auto& d = *impl_;
  d.ready = false;
  d.A = A;
  d.A.makeCompressed();
  const Eigen::Index n = A.rows();
  Eigen::VectorXd row_max = Eigen::VectorXd::Zero(n);
  for (int col = 0; col < d.A.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(d.A, col); it; ++it)
      row_max[it.row()] = std::max(row_max[it.row()], std::abs(it.value()));
  d.scale.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(row_max[i] > 0.0) || !std::isfinite(row_max[i]))
      throw SolverError("structurally singular system: zero pivot in the " +
                        block_name(static_cast<int>(i), split));
    d.scale[i] = 1.0 / std::sqrt(row_max[i]);
  }
  SparseMatrix scaled = d.scale.asDiagonal() * d.A * d.scale.asDiagonal();
  scaled.makeCompressed();
  d.lu.analyzePattern(scaled);
  d.lu.factorize(scaled);
  if (d.lu.info() != Eigen::Success) {
    // SparseLU reports the failing column of the permuted matrix.
    std::string where = d.lu.lastErrorMessage();
    const auto pos = where.find_last_of(' ');
    int col = -1;
    if (pos != std::string::npos) {
      try {
        col = std::stoi(where.substr(pos + 1));
      } catch (const std::exception&) {
        col = -1;
      }
    }
    if (col >= 0 && col < n) col = d.lu.colsPermutation().indices()[col];
    throw SolverError("singular factorization (" + where + ")" +
                      (col >= 0 ? ": zero pivot in the " + block_name(col, split) : std::string()));
  }
  d.ready = true;
}

bool LinearSolver::factorized() const { return impl_->ready; }

const SparseMatrix& LinearSolver::matrix() const { return impl_->A; }

Eigen::VectorXd LinearSolver::solve(const Eigen::VectorXd& b) const {
  const auto& d = *impl_;
  if (!d.ready) throw SolverError("solve called before factorize");
  if (b.size() != d.A.rows()) throw ArgumentError("right-hand side size does not match the matrix");
  auto apply = [&](const Eigen::VectorXd& rhs) {
    Eigen::VectorXd y = d.lu.solve(d.scale.cwiseProduct(rhs));
    return Eigen::VectorXd(d.scale.cwiseProduct(y));
  };
  Eigen::VectorXd x = apply(b);
  if (relative_residual(d.A, x, b) > 1e-13) x += apply(b - d.A * x);
  if (!x.allFinite()) throw SolverError("non-finite solution");
  return x;
}

double relative_residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double r = (A * x - b).norm();
  const double nb = b.norm();
  return nb > 0.0 ? r / nb : r;
}

Eigen::VectorXd solve_linear(const SparseMatrix& A, const Eigen::VectorXd& b) {
  LinearSolver s;
  s.factorize(A);
  return s.solve(b);
}

namespace {

// [[-K, Q], [Q^T, S + c P]].
SparseMatrix block_matrix(const ConstrainedSystem& sys, double c) {
  const int fu = static_cast<int>(sys.K.rows());
  const int fp = static_cast<int>(sys.S.rows());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(sys.K.nonZeros() + 2 * sys.Q.nonZeros() + sys.S.nonZeros() +
                                     sys.P.nonZeros()));
  for (int col = 0; col < sys.K.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(sys.K, col); it; ++it) t.emplace_back(it.row(), it.col(), -it.value());
  for (int col = 0; col < sys.Q.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(sys.Q, col); it; ++it) {
      t.emplace_back(it.row(), fu + it.col(), it.value());
      t.emplace_back(fu + it.col(), it.row(), it.value());
    }
  for (int col = 0; col < sys.S.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(sys.S, col); it; ++it)
      t.emplace_back(fu + it.row(), fu + it.col(), it.value());
  if (c != 0.0)
    for (int col = 0; col < sys.P.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(sys.P, col); it; ++it)
        t.emplace_back(fu + it.row(), fu + it.col(), c * it.value());
  SparseMatrix m(fu + fp, fu + fp);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

TimeIntegrator::TimeIntegrator(const ConstrainedSystem& system, double dt, double theta, bool reuse_factorization)
    : system_(system), dt_(dt), theta_(theta), reuse_(reuse_factorization) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("time step must be positive");
  if (!(theta >= 0.0 && theta <= 1.0)) throw ArgumentError("theta must lie in [0, 1]");
  lhs_ = block_matrix(system, theta * dt);
  history_ = block_matrix(system, -(1.0 - theta) * dt);
  if (reuse_) solver_.factorize(lhs_, static_cast<int>(system.K.rows()));
}

Eigen::VectorXd TimeIntegrator::rhs(const TransientState& state, double scale_now, double scale_next) const {
  const Eigen::Index fu = system_.K.rows();
  const Eigen::Index fp = system_.S.rows();
  Eigen::VectorXd x(fu + fp);
  x << state.u, state.p;
  Eigen::VectorXd b = history_ * x;
  b.head(fu) -= (scale_next - scale_now) * system_.f_u;
  b.tail(fp) += dt_ * ((1.0 - theta_) * scale_now + theta_ * scale_next) * system_.f_p;
  return b;
}

TransientState TimeIntegrator::step(const TransientState& state, double scale_now, double scale_next) {
  const Eigen::Index fu = system_.K.rows();
  const Eigen::Index fp = system_.S.rows();
  if (state.u.size() != fu || state.p.size() != fp)
    throw ArgumentError("state does not match the constrained system");
  if (!reuse_) solver_.factorize(lhs_, static_cast<int>(fu));
  const Eigen::VectorXd b = rhs(state, scale_now, scale_next);
  const Eigen::VectorXd x = solver_.solve(b);
  TransientState next;
  next.u = x.head(fu);
  next.p = x.tail(fp);
  next.t = state.t + dt_;
  next.step = state.step + 1;
  next.residual = relative_residual(lhs_, x, b);
  return next;
}

MeshSpec mesh_for(const ProblemSpec& spec, int spans_x, int spans_y, bool graded,
                  InterfaceContinuity continuity, double grading_ratio) {
  MeshSpec mesh;
  mesh.spans_x = spans_x;
  mesh.spans_y = spans_y;
  mesh.graded = graded;
  mesh.grading_ratio = grading_ratio;
  mesh.continuity = continuity;
  const double y0 = spec.layers.bottom();
  const double h = spec.layers.top() - y0;
  for (double y : spec.layers.interfaces()) mesh.interfaces.push_back((y - y0) / h);
  return mesh;
}

Simulation::Simulation(ProblemSpec spec, const Discretization& disc, ExecutionPolicy policy)
    : spec_(std::move(spec)),
      space_(build_mixed_space(SplineSurface::rectangle(spec_.width, spec_.height), disc.pressure_degree,
                               disc.mesh, disc.mode)),
      rule_(make_quadrature(space_, disc.quadrature_order)),
      system_(assemble_system(space_, spec_, rule_, policy)),
      constrained_(apply_dirichlet(system_, space_, spec_)) {}

TransientState Simulation::initial_state() const {
  TransientState s;
  s.u = Eigen::VectorXd::Zero(constrained_.constraints.free_displacement);
  s.p = Eigen::VectorXd::Zero(constrained_.constraints.free_pressure);
  return s;
}

std::vector<TransientState> Simulation::run(std::span<const int> output_steps, const Hook& hook,
                                            bool reuse_factorization) const {
  std::vector<TransientState> series;
  TransientState state = initial_state();
  series.push_back(state);
  if (hook) hook(state);
  if (spec_.steps <= 0) return series;

  const auto wanted = [&](int n) {
    return std::find(output_steps.begin(), output_steps.end(), n) != output_steps.end();
  };
  // The first factorization happens on construction; report it as step 1.
  std::optional<TimeIntegrator> integrator;
  try {
    integrator.emplace(constrained_, spec_.dt, spec_.theta, reuse_factorization);
  } catch (const SolverError& e) {
    throw SolverError(std::string("step 1: ") + e.what());
  }
  for (int n = 0; n < spec_.steps; ++n) {
    try {
      state = integrator->step(state, ramp_factor(n), ramp_factor(n + 1));
    } catch (const SolverError& e) {
      throw SolverError("step " + std::to_string(n + 1) + ": " + e.what());
    }
    if (hook) hook(state);
    if (wanted(state.step)) series.push_back(state);
  }
  return series;
}

Eigen::VectorXd Simulation::full_pressure(const TransientState& s) const {
  return expand_pressure(constrained_.constraints, space_, s.p);
}

Eigen::VectorXd Simulation::full_displacement(const TransientState& s) const {
  return expand_displacement(constrained_.constraints, space_, s.u);
}

double Simulation::pressure(const TransientState& s, double xi, double eta) const {
  return eval_pressure(space_, full_pressure(s), xi, eta);
}

}  // namespace poroiga
