#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "poroiga/errors.hpp"
#include "poroiga/model.hpp"

using namespace poroiga;

TEST(Elasticity, PlaneStrainMatrix) {
  const double E = 10.0, nu = 0.25;
  const Eigen::Matrix3d D = elasticity_matrix(E, nu);
  // Lame form: lambda + 2 mu on the diagonal, lambda off it, mu for shear.
  const double lambda = E * nu / ((1 + nu) * (1 - 2 * nu));
  const double mu = E / (2 * (1 + nu));
  EXPECT_NEAR(D(0, 0), lambda + 2 * mu, 1e-13);
  EXPECT_NEAR(D(0, 1), lambda, 1e-13);
  EXPECT_NEAR(D(1, 0), lambda, 1e-13);
  EXPECT_NEAR(D(2, 2), mu, 1e-13);
  EXPECT_EQ(D(0, 2), 0.0);
  EXPECT_THROW(elasticity_matrix(E, 0.5), DomainError);
}

TEST(Coefficients, BiotAndStorativity) {
  EXPECT_DOUBLE_EQ(biot_coefficient(1.0, 4.0), 0.75);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_DOUBLE_EQ(storativity(1.0, 0.3, inf, inf), 0.0);
  EXPECT_NEAR(storativity(0.9, 0.3, 10.0, 2.0), 0.6 / 10.0 + 0.3 / 2.0, 1e-15);
}

TEST(Coefficients, ConsolidationCoefficient) {
  // Constrained modulus times mobility.
  const double E = 6e6, nu = 0.4, k = 1.962e-14;
  const double M = E * (1 - nu) / ((1 + nu) * (1 - 2 * nu));
  EXPECT_NEAR(consolidation_coefficient(E, nu, k), M * k, 1e-12 * M * k);
  EXPECT_NEAR(consolidation_coefficient(2.0 / 3.0, 0.25, 1.0), 0.8, 1e-15);
}

TEST(Coefficients, CriticalTimeStep) {
  EXPECT_NEAR(critical_time_step(0.1, 2.0), 0.01 / 12.0, 1e-17);
  EXPECT_NEAR(critical_time_step(0.1, 2.0, 0.5), 0.01 / 6.0, 1e-17);
  EXPECT_THROW(critical_time_step(0.0, 1.0), ArgumentError);
}

TEST(Layers, HagaLookup) {
  const ProblemSpec spec = haga_preset();
  EXPECT_EQ(spec.layers.lookup(0.5).mobility(1, 1), 1e-8);
  EXPECT_EQ(spec.layers.lookup(0.1).mobility(1, 1), 1.0);
  EXPECT_EQ(spec.layers.lookup(0.25).mobility(1, 1), 1e-8);
  EXPECT_EQ(spec.layers.lookup(0.75).mobility(1, 1), 1.0);
  EXPECT_EQ(spec.layers.lookup(1.0).mobility(1, 1), 1.0);
  EXPECT_THROW(spec.layers.lookup(1.5), DomainError);
  EXPECT_EQ(spec.layers.interfaces(), (std::vector<double>{0.25, 0.75}));
}

TEST(Layers, RejectsGapsAndOverlaps) {
  MaterialParams m;
  m.poisson_ratio = 0.2;
  EXPECT_THROW(MaterialLayerSet({{0.0, 0.4, m}, {0.5, 1.0, m}}), ArgumentError);
  EXPECT_THROW(MaterialLayerSet({{0.0, 0.6, m}, {0.5, 1.0, m}}), ArgumentError);
  EXPECT_THROW(MaterialLayerSet(std::vector<MaterialLayer>{}), ArgumentError);
}

TEST(Params, Validation) {
  MaterialParams m;
  EXPECT_NO_THROW(m.validate());
  m.poisson_ratio = 0.5;
  EXPECT_THROW(m.validate(), ArgumentError);
  m.poisson_ratio = 0.2;
  m.mobility(0, 1) = 0.3;
  EXPECT_THROW(m.validate(), ArgumentError);  // not symmetric
  m.mobility(1, 0) = 0.3;
  EXPECT_NO_THROW(m.validate());
  m.storativity = -1.0;
  EXPECT_THROW(m.validate(), ArgumentError);
}

TEST(Presets, AreValid) {
  for (const auto& spec : {terzaghi_preset(), convergence_preset(), haga_preset()}) {
    EXPECT_NO_THROW(spec.validate());
    for (const auto& l : spec.layers.layers()) EXPECT_NO_THROW(l.params.validate());
  }
}

TEST(Presets, TerzaghiTimeStepIsCritical) {
  const ProblemSpec s = terzaghi_preset();
  const double cv = (1 - 0.4) * 6e6 * 1.962e-14 / ((1 + 0.4) * (1 - 0.8));
  const double dy = 8e-3 / 72;
  EXPECT_NEAR(s.dt, dy * dy / (6 * cv), 1e-12 * s.dt);
}

TEST(Oedometer, Settlement) {
  const double p0 = 2.0, h = 3.0, E = 5.0, nu = 0.3;
  const double M = E * (1 - nu) / ((1 + nu) * (1 - 2 * nu));
  EXPECT_NEAR(oedometer_settlement(p0, h, E, nu), -p0 * h / M, 1e-14);
}
