#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "poroiga/errors.hpp"
#include "poroiga/oracles.hpp"
#include "support.hpp"

using namespace poroiga;

namespace {

// Method of images for the same column: drained top at y = h, impervious bottom.
double image_solution(double p0, double h, double cv, double t, double y) {
  const double s = 2.0 * std::sqrt(cv * t);
  double v = 1.0;
  for (int k = 0; k < 60; ++k) {
    const double sign = k % 2 ? -1.0 : 1.0;
    v -= sign * (std::erfc(((2 * k + 1) * h - y) / s) + std::erfc(((2 * k + 1) * h + y) / s));
  }
  return p0 * v;
}

std::vector<PhysicalPoint> grid_points(int n) {
  // Midpoint rule on the unit square; exactness is not needed for the ratio tests.
  std::vector<PhysicalPoint> pts;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) pts.push_back({Eigen::Vector2d((i + 0.5) / n, (j + 0.5) / n), 1.0 / (n * n)});
  return pts;
}

using Profile = std::vector<std::pair<double, double>>;

Profile sampled(int n, const std::function<double(double)>& f) {
  Profile p;
  for (int i = 0; i <= n; ++i) p.emplace_back(double(i) / n, f(double(i) / n));
  return p;
}

}  // namespace

TEST(Terzaghi, BoundaryAndLimits) {
  const TerzaghiSolution sol{2.0, 3.0, 0.5};
  const double tc = 9.0 / 0.5;  // h^2 / c_v
  EXPECT_NEAR(terzaghi_pressure(sol, 0.3 * tc, 3.0), 0.0, 1e-12);
  EXPECT_LT(std::abs(terzaghi_pressure(sol, 10 * tc, 1.0)), 1e-10);
  EXPECT_NEAR(terzaghi_pressure(sol, 1e-6 * tc, 0.0), 2.0, 1e-6 * 2.0);
  EXPECT_THROW(terzaghi_pressure(sol, 0.0, 1.0), ArgumentError);
  EXPECT_THROW(terzaghi_pressure(sol, -1.0, 1.0), ArgumentError);
  EXPECT_THROW(terzaghi_pressure(sol, 1.0, 3.5), ArgumentError);
}

TEST(Terzaghi, MatchesImageSolution) {
  const TerzaghiSolution sol{1.5, 2.0, 0.7};
  const double tc = 4.0 / 0.7;
  for (double ts : {1e-3, 0.01, 0.1, 0.5, 2.0})
    for (double y : {0.0, 0.4, 1.0, 1.7, 1.99})
      EXPECT_NEAR(terzaghi_pressure(sol, ts * tc, y), image_solution(1.5, 2.0, 0.7, ts * tc, y), 1e-10)
          << ts << " " << y;
}

TEST(Terzaghi, TighterToleranceChangesLittle) {
  TerzaghiSolution a{1.0, 1.0, 1.0, 1e-6};
  TerzaghiSolution b = a;
  b.tolerance = 5e-7;
  for (double y : {0.0, 0.5, 0.9})
    EXPECT_NEAR(terzaghi_pressure(a, 1e-4, y), terzaghi_pressure(b, 1e-4, y), 2e-6);
}

TEST(Terzaghi, SatisfiesDiffusionEquation) {
  const TerzaghiSolution sol{1.0, 1.0, 0.8};
  const double t = 0.05, dt = 1e-5, dy = 1e-3;
  for (double y : {0.2, 0.5, 0.8}) {
    const double pt = (terzaghi_pressure(sol, t + dt, y) - terzaghi_pressure(sol, t - dt, y)) / (2 * dt);
    const double pyy = (terzaghi_pressure(sol, t, y + dy) - 2 * terzaghi_pressure(sol, t, y) +
                        terzaghi_pressure(sol, t, y - dy)) / (dy * dy);
    EXPECT_NEAR(pt, 0.8 * pyy, 1e-4);
  }
}

TEST(Terzaghi, FirstStepSolvesItsOde) {
  // (p - p0) / dt = c_v p'' with p(h) = 0 and p'(0) = 0.
  const TerzaghiSolution sol{2.0, 1.0, 0.8};
  const double dt = 0.01, d = 1e-4;
  auto p = [&](double y) { return terzaghi_first_step_pressure(sol, dt, y); };
  EXPECT_NEAR(p(1.0), 0.0, 1e-14);
  EXPECT_NEAR((p(d) - p(0.0)) / d, 0.0, 1e-6);
  for (double y : {0.3, 0.7, 0.95}) {
    const double pyy = (p(y + d) - 2 * p(y) + p(y - d)) / (d * d);
    EXPECT_NEAR((p(y) - 2.0) / dt, 0.8 * pyy, 1e-3 * std::abs(p(y) - 2.0) / dt + 1e-6);
  }
  // Very short steps must not overflow.
  EXPECT_NEAR(terzaghi_first_step_pressure(sol, 1e-14, 0.5), 2.0, 1e-14);
  EXPECT_TRUE(std::isfinite(terzaghi_first_step_pressure(sol, 1e-14, 1.0 - 1e-9)));
}

TEST(L2Error, BasicCases) {
  const auto pts = grid_points(20);
  auto f = [](const Eigen::Vector2d& x) { return 1.0 + x[0] * x[1]; };
  auto same = [&](std::size_t k) { return f(pts[k].x); };
  EXPECT_NEAR(relative_l2_error(same, f, pts), 0.0, 1e-15);
  auto zero = [](std::size_t) { return 0.0; };
  EXPECT_NEAR(relative_l2_error(zero, f, pts), 1.0, 1e-15);
  auto scaled = [&](std::size_t k) { return 1.01 * f(pts[k].x); };
  EXPECT_NEAR(relative_l2_error(scaled, f, pts), 0.01, 1e-12);
  EXPECT_THROW(relative_l2_error(zero, [](const Eigen::Vector2d&) { return 0.0; }, pts), DomainError);
}

TEST(L2Error, InvariantUnderCommonScaling) {
  std::mt19937 rng(testing_support::kSeed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto pts = grid_points(8);
  for (int c = 0; c < 20; ++c) {
    std::vector<double> noise(pts.size());
    for (auto& v : noise) v = u(rng);
    const double s = std::exp(5 * u(rng));
    auto f = [](const Eigen::Vector2d& x) { return std::sin(3 * x[0]) + x[1]; };
    const double e1 = relative_l2_error([&](std::size_t k) { return f(pts[k].x) + 0.1 * noise[k]; }, f, pts);
    const double e2 = relative_l2_error([&](std::size_t k) { return s * (f(pts[k].x) + 0.1 * noise[k]); },
                                        [&](const Eigen::Vector2d& x) { return s * f(x); }, pts);
    EXPECT_NEAR(e1, e2, 1e-12 * e1);
  }
}

TEST(ProfileError, Basics) {
  const std::vector<double> a{1, 2, 3}, b{1, 2, 3.3};
  EXPECT_EQ(relative_profile_error(a, a), 0.0);
  EXPECT_NEAR(relative_profile_error(b, a), 0.3 / std::sqrt(14.0), 1e-15);
  EXPECT_THROW(relative_profile_error(a, std::vector<double>{1, 2}), ArgumentError);
  EXPECT_THROW(relative_profile_error(a, std::vector<double>{0, 0, 0}), DomainError);
}

TEST(Oscillation, MonotoneProfileIsClean) {
  const auto r = oscillation_metrics(sampled(100, [](double y) { return 1.0 - y * y; }), 1.0);
  EXPECT_TRUE(r.clean());
  // Constant plateaus are not slope changes.
  EXPECT_TRUE(oscillation_metrics(sampled(50, [](double y) { return y < 0.5 ? 1.0 : 2.0 - 2.0 * y; }), 1.0).clean());
}

TEST(Oscillation, OvershootUndershootAndSignChanges) {
  const Profile p{{0.0, 1.0}, {0.1, 1.2}, {0.2, 0.5}, {0.3, -0.1}, {0.4, 0.0}};
  const auto r = oscillation_metrics(p, 1.0);
  EXPECT_NEAR(r.overshoot, 0.2, 1e-15);
  EXPECT_NEAR(r.undershoot, 0.1, 1e-15);
  EXPECT_EQ(r.violations, 2);
  EXPECT_EQ(r.violation_positions, (std::vector<double>{0.1, 0.3}));
  EXPECT_FALSE(r.clean());
  // Relative to p0.
  const auto s = oscillation_metrics(p, 2.0);
  EXPECT_NEAR(s.overshoot, 0.0, 0.0);
  EXPECT_NEAR(s.undershoot, 0.05, 1e-15);
}

TEST(Oscillation, RoundOffBelowNoiseFloorIsIgnored) {
  std::mt19937 rng(testing_support::kSeed + 1);
  std::uniform_real_distribution<double> jitter(-1e-10, 1e-10);
  const auto r = oscillation_metrics(sampled(200, [&](double y) { return 1.0 - y + jitter(rng); }), 1.0);
  EXPECT_EQ(r.violations, 0);
  EXPECT_EQ(r.overshoot, 0.0);
  EXPECT_EQ(r.undershoot, 0.0);
}

TEST(Oscillation, CountsEveryWiggle) {
  // k full sine periods on top of a decreasing ramp have 2k sign changes when the wiggle dominates.
  for (int k = 1; k <= 5; ++k) {
    const auto r = oscillation_metrics(
        sampled(2000, [&](double y) { return 0.5 - 0.01 * y + 0.1 * std::sin(2 * M_PI * k * y + 0.3); }), 1.0);
    EXPECT_EQ(r.violations, 2 * k) << k;
  }
}

TEST(Slope, ExactPowerLaws) {
  for (double rate : {-0.5, -1.0, -2.5}) {
    std::vector<std::pair<double, double>> pts;
    for (double n : {16.0, 64.0, 256.0, 1024.0}) pts.emplace_back(n, 3.0 * std::pow(n, rate));
    EXPECT_NEAR(fit_convergence_slope(pts), rate, 1e-12);
  }
}

TEST(Slope, LeastSquaresThroughNoise) {
  const std::vector<std::pair<double, double>> pts{{1, 1}, {2, 0.5 * 1.1}, {4, 0.25 / 1.1}, {8, 0.125}};
  EXPECT_NEAR(fit_convergence_slope(pts), -1.0, 0.1);
}

TEST(Slope, RejectsDegenerateInput) {
  EXPECT_THROW(fit_convergence_slope(std::vector<std::pair<double, double>>{{1, 1}, {2, 0.5}}), ArgumentError);
  EXPECT_THROW(fit_convergence_slope(std::vector<std::pair<double, double>>{{1, 1}, {2, 0}, {4, 1}}),
               ArgumentError);
  EXPECT_THROW(fit_convergence_slope(std::vector<std::pair<double, double>>{{2, 1}, {2, 0.5}, {2, 1}}),
               ArgumentError);
}
