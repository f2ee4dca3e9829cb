#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "poroiga/errors.hpp"
#include "poroiga/timestep.hpp"
#include "support.hpp"

using namespace poroiga;

namespace {

SparseMatrix sparse(const Eigen::MatrixXd& d) { return d.sparseView(); }

Discretization small_disc(int pp = 1, OrderMode mode = OrderMode::mixed, int n = 4) {
  Discretization d;
  d.pressure_degree = pp;
  d.mode = mode;
  d.mesh.spans_x = n;
  d.mesh.spans_y = n;
  return d;
}

// Unit square, c_v = 0.8, with the time step given in units of h^2 / c_v.
ProblemSpec column(double dt_scaled, int steps) {
  ProblemSpec spec = convergence_preset();
  spec.dt = dt_scaled / 0.8;
  spec.steps = steps;
  return spec;
}

}  // namespace

TEST(LinearSolve, SmallSystems) {
  const Eigen::VectorXd b = Eigen::Vector2d(3.0, -1.0);
  EXPECT_LT((solve_linear(sparse(Eigen::Matrix2d::Identity()), b) - b).norm(), 1e-15);
  Eigen::Matrix2d swap;
  swap << 0, 1, 1, 0;
  EXPECT_LT((solve_linear(sparse(swap), b) - Eigen::Vector2d(-1.0, 3.0)).norm(), 1e-15);
}

TEST(LinearSolve, RandomSymmetricSystemsMatchDenseOracle) {
  std::mt19937 rng(testing_support::kSeed);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int c = 0; c < 10; ++c) {
    Eigen::MatrixXd G(50, 50);
    for (Eigen::Index i = 0; i < G.size(); ++i) G.data()[i] = n(rng);
    Eigen::MatrixXd A = G * G.transpose() + 50.0 * Eigen::MatrixXd::Identity(50, 50);
    if (c % 2) A.bottomRightCorner(20, 20) *= -1.0;  // indefinite, still symmetric
    Eigen::VectorXd b(50);
    for (auto& v : b) v = n(rng);
    const Eigen::VectorXd x = solve_linear(sparse(A), b);
    const Eigen::VectorXd ref = A.fullPivLu().solve(b);
    EXPECT_LT((x - ref).norm() / ref.norm(), 1e-10);
    EXPECT_LT(relative_residual(sparse(A), x, b), 1e-12);
  }
}

TEST(LinearSolve, SingularMatrixIsReported) {
  Eigen::Matrix3d A;
  A << 1, 2, 0, 2, 4, 0, 0, 0, 1;
  EXPECT_THROW(solve_linear(sparse(A), Eigen::Vector3d::Ones()), SolverError);
  Eigen::Matrix3d Z = Eigen::Matrix3d::Identity();
  Z(2, 2) = 0.0;
  LinearSolver s;
  try {
    s.factorize(sparse(Z), 2);
    FAIL() << "zero row not detected";
  } catch (const SolverError& e) {
    EXPECT_NE(std::string(e.what()).find("pressure"), std::string::npos) << e.what();
  }
  EXPECT_FALSE(s.factorized());
}

TEST(Integrator, RejectsBadParameters) {
  const Simulation sim(column(1.0, 1), small_disc());
  EXPECT_THROW(TimeIntegrator(sim.constrained(), 0.0), ArgumentError);
  EXPECT_THROW(TimeIntegrator(sim.constrained(), 1.0, 1.5), ArgumentError);
  EXPECT_THROW(TimeIntegrator(sim.constrained(), 1.0, -0.1), ArgumentError);
}

TEST(Integrator, StepMatrixIsSymmetric) {
  const Simulation sim(column(0.1, 1), small_disc(2));
  const TimeIntegrator ti(sim.constrained(), sim.spec().dt);
  const SparseMatrix& A = ti.system_matrix();
  const SparseMatrix d = A - SparseMatrix(A.transpose());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < d.nonZeros(); ++i) worst = std::max(worst, std::abs(d.valuePtr()[i]));
  EXPECT_LT(worst, 1e-12);
  EXPECT_EQ(A.rows(), sim.constrained().K.rows() + sim.constrained().S.rows());
}

TEST(Simulation, ZeroLoadStaysAtRest) {
  ProblemSpec spec = column(0.1, 3);
  spec.load = 0.0;
  const Simulation sim(spec, small_disc());
  const std::vector<int> out{1, 2, 3};
  for (const auto& s : sim.run(out)) {
    EXPECT_EQ(s.u.norm(), 0.0);
    EXPECT_EQ(s.p.norm(), 0.0);
  }
}

TEST(Simulation, OutputSelection) {
  const Simulation none(column(0.1, 0), small_disc());
  const auto a = none.run(std::vector<int>{1, 2});
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a.front().step, 0);

  const Simulation two(column(0.1, 2), small_disc());
  int seen = 0;
  const auto b = two.run(std::vector<int>{1, 2}, [&](const TransientState&) { ++seen; });
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(seen, 3);
  EXPECT_EQ(b[2].step, 2);
  EXPECT_DOUBLE_EQ(b[2].t, 2 * two.spec().dt);
}

TEST(Simulation, FirstStepMatchesOneStepSolution) {
  // Backward Euler step from rest: p0 (1 - cosh(y/L) / cosh(h/L)), L = sqrt(c_v dt),
  // measured from the impervious bottom. L = 0.1 h is resolved by 16 spans.
  const Simulation sim(column(1e-2, 1), small_disc(2, OrderMode::mixed, 16));
  const auto s = sim.run(std::vector<int>{1});
  const double L = 0.1;
  for (double y : {0.0, 0.3, 0.6, 0.9, 0.97}) {
    const double exact = 1.0 - std::cosh(y / L) / std::cosh(1.0 / L);
    EXPECT_NEAR(sim.pressure(s[1], 0.5, y), exact, 2e-3) << y;
  }
  EXPECT_EQ(sim.pressure(s[1], 0.5, 1.0), 0.0);
}

TEST(Simulation, DrainedLimitMatchesElasticSolve) {
  const Simulation sim(column(1e4, 6), small_disc(1, OrderMode::mixed, 4));
  const auto s = sim.run(std::vector<int>{6});
  const ConstrainedSystem& c = sim.constrained();
  // Sign convention K u - Q p = f_u with the load ramped in at step 1.
  const Eigen::VectorXd drained = solve_linear(c.K, c.f_u);
  EXPECT_LT((s.back().u - drained).norm() / drained.norm(), 1e-8);
  EXPECT_LT(s.back().p.lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(Simulation, SteadyStateIsIndependentOfTimeStep) {
  const Simulation coarse(column(1e3, 8), small_disc(2));
  const Simulation fine(column(2e2, 40), small_disc(2));
  const auto a = coarse.run(std::vector<int>{8});
  const auto b = fine.run(std::vector<int>{40});
  EXPECT_LT((a.back().u - b.back().u).norm() / b.back().u.norm(), 1e-8);
}

TEST(Simulation, ResponseIsLinearInTheLoad) {
  ProblemSpec spec = column(0.05, 3);
  const Simulation one(spec, small_disc(2));
  spec.load = 2.5;
  const Simulation scaled(spec, small_disc(2));
  const auto a = one.run(std::vector<int>{3});
  const auto b = scaled.run(std::vector<int>{3});
  EXPECT_LT((2.5 * a.back().u - b.back().u).norm(), 1e-12 * b.back().u.norm());
  EXPECT_LT((2.5 * a.back().p - b.back().p).norm(), 1e-12 * b.back().p.norm());
}

TEST(Simulation, FactorizationReuseDoesNotChangeTheAnswer) {
  const Simulation sim(haga_preset(), [] {
    Discretization d;
    d.pressure_degree = 2;
    d.mesh = mesh_for(haga_preset(), 1, 24, false, InterfaceContinuity::max);
    return d;
  }());
  const auto a = sim.run(std::vector<int>{2}, {}, true);
  const auto b = sim.run(std::vector<int>{2}, {}, false);
  EXPECT_LT((a.back().p - b.back().p).norm(), 1e-12 * a.back().p.norm());
  EXPECT_LT((a.back().u - b.back().u).norm(), 1e-12 * a.back().u.norm());
  EXPECT_LT(a.back().residual, 1e-9);
}

TEST(Simulation, CrankNicolsonDecays) {
  ProblemSpec spec = column(0.05, 40);
  spec.theta = 0.5;
  const Simulation sim(spec, small_disc(2));
  const auto s = sim.run(std::vector<int>{1, 40});
  EXPECT_LT(s[2].p.lpNorm<Eigen::Infinity>(), s[1].p.lpNorm<Eigen::Infinity>());
  EXPECT_LT(s[2].residual, 1e-9);
}

TEST(Simulation, InterfacesAreMappedToParameters) {
  const MeshSpec m = mesh_for(haga_preset(), 1, 60, true, InterfaceContinuity::c0);
  EXPECT_EQ(m.interfaces, (std::vector<double>{0.25, 0.75}));
  EXPECT_TRUE(m.graded);
  EXPECT_EQ(m.continuity, InterfaceContinuity::c0);
  EXPECT_EQ(m.spans_y, 60);
}
