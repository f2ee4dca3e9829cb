#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "poroiga/errors.hpp"
#include "poroiga/splines.hpp"
#include "support.hpp"

using namespace poroiga;
using testing_support::cox_de_boor;
using testing_support::cox_de_boor_derivative;

namespace {

const KnotVector quartic_example() {
  return KnotVector({0, 0, 0, 0, 0, 1, 2, 2, 3, 3, 3, 4, 4, 4, 4, 5, 5, 5, 5, 5}, 4);
}

SplineCurve random_curve(std::mt19937& rng, int p, bool rational) {
  const KnotVector kv = testing_support::random_knot_vector(rng, p);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd pts(kv.basis_count(), 3);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = n(rng);
  std::optional<std::vector<double>> w;
  if (rational) {
    std::uniform_real_distribution<double> u(0.3, 3.0);
    w.emplace();
    for (int i = 0; i < kv.basis_count(); ++i) w->push_back(u(rng));
  }
  return SplineCurve(kv, pts, w);
}

}  // namespace

TEST(KnotVector, RejectsInvalidInput) {
  EXPECT_THROW(KnotVector({0, 0, 1, 0.5}, 1), ArgumentError);
  EXPECT_THROW(KnotVector({0, 0.1, 1, 1}, 1), ArgumentError);
  EXPECT_THROW(KnotVector({0, 0, 1, 1}, -1), ArgumentError);
  EXPECT_THROW(KnotVector({0, 0, 0.5, 0.5, 0.5, 1, 1}, 1), ArgumentError);
  EXPECT_THROW(KnotVector({0, 1}, 1), ArgumentError);
}

TEST(KnotVector, CountsAndMultiplicities) {
  const KnotVector kv = quartic_example();
  EXPECT_EQ(kv.basis_count(), 15);
  EXPECT_EQ(kv.span_count(), 5);
  EXPECT_EQ(kv.multiplicity(3.0), 3);
  EXPECT_EQ(kv.multiplicity(2.5), 0);
  EXPECT_EQ(kv.unique_knots(), (std::vector<double>{0, 1, 2, 3, 4, 5}));
}

TEST(KnotVector, OpenUniform) {
  const KnotVector kv = KnotVector::open_uniform(2, 3, 0.0, 3.0);
  EXPECT_EQ(std::vector<double>(kv.knots().begin(), kv.knots().end()),
            (std::vector<double>{0, 0, 0, 1, 2, 3, 3, 3}));
}

TEST(FindSpan, RightEndpointBelongsToLastNonemptySpan) {
  const KnotVector kv({0, 0, 0, 0.5, 1, 1, 1}, 2);
  EXPECT_EQ(find_span(kv, 0.0), 2);
  EXPECT_EQ(find_span(kv, 0.5), 3);
  EXPECT_EQ(find_span(kv, 1.0), 3);
  EXPECT_THROW(find_span(kv, 1.5), DomainError);
}

TEST(EvalBasis, LinearHatHalves) {
  const KnotVector kv({0, 0, 1, 1}, 1);
  for (double xi : {0.0, 0.3, 1.0}) {
    const auto b = eval_basis(kv, xi, 1);
    EXPECT_NEAR(b.ders(0, 0), 1.0 - xi, 1e-15);
    EXPECT_NEAR(b.ders(0, 1), xi, 1e-15);
    EXPECT_NEAR(b.ders(1, 0), -1.0, 1e-15);
    EXPECT_NEAR(b.ders(1, 1), 1.0, 1e-15);
  }
}

TEST(EvalBasis, DerivativeOrderAboveDegreeThrows) {
  EXPECT_THROW(eval_basis(KnotVector({0, 0, 1, 1}, 1), 0.5, 2), ArgumentError);
}

TEST(EvalBasis, MatchesRecursionOnRandomKnotVectors) {
  std::mt19937 rng(testing_support::kSeed);
  for (int c = 0; c < 2000; ++c) {
    const int p = 1 + c % 5;
    const KnotVector kv = testing_support::random_knot_vector(rng, p);
    const double xi = testing_support::random_parameter(rng, kv);
    if (kv.multiplicity(xi) > 0) continue;
    const auto b = eval_basis(kv, xi, 1);
    const int first = b.first_index(p);
    for (int i = 0; i < kv.basis_count(); ++i) {
      const bool active = i >= first && i <= first + p;
      EXPECT_NEAR(active ? b.ders(0, i - first) : 0.0, cox_de_boor(kv, i, p, xi), 1e-13);
      if (active) EXPECT_NEAR(b.ders(1, i - first), cox_de_boor_derivative(kv, i, p, xi), 1e-10 * (1 + std::abs(b.ders(1, i - first))));
    }
  }
}

TEST(EvalBasis, PartitionOfUnityAndNonNegativity) {
  std::mt19937 rng(testing_support::kSeed + 1);
  for (int c = 0; c < 2000; ++c) {
    const int p = c % 6;
    const KnotVector kv = testing_support::random_knot_vector(rng, std::max(p, 0));
    const double xi = testing_support::random_parameter(rng, kv);
    const auto b = eval_basis(kv, xi, 0);
    EXPECT_NEAR(b.values().sum(), 1.0, 1e-13);
    EXPECT_GE(b.values().minCoeff(), 0.0);
  }
}

TEST(EvalBasis, HigherDerivativesMatchFiniteDifferences) {
  std::mt19937 rng(testing_support::kSeed + 2);
  for (int c = 0; c < 500; ++c) {
    const int p = 2 + c % 4;
    const KnotVector kv = testing_support::random_knot_vector(rng, p);
    const auto br = kv.unique_knots();
    std::uniform_int_distribution<std::size_t> pick(0, br.size() - 2);
    const std::size_t s = pick(rng);
    const double xi = 0.5 * (br[s] + br[s + 1]);
    const double h = 1e-4 * (br[s + 1] - br[s]);
    const auto b = eval_basis(kv, xi, 2);
    const auto bp = eval_basis(kv, xi + h, 1);
    const auto bm = eval_basis(kv, xi - h, 1);
    // Central differences lose about eps * |N'| / h to cancellation.
    const double scale = b.ders.row(1).cwiseAbs().maxCoeff() / h;
    for (int k = 0; k <= p; ++k) {
      const double fd = (bp.ders(1, k) - bm.ders(1, k)) / (2 * h);
      EXPECT_NEAR(b.ders(2, k), fd, 1e-6 * (1 + std::abs(fd)) + 1e-9 * scale);
    }
  }
}

TEST(ContinuityReport, QuarticExample) {
  const auto report = continuity_report(quartic_example());
  ASSERT_EQ(report.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(report[k].knot, k + 1.0);
    EXPECT_EQ(report[k].continuity, 3 - k);
  }
}

TEST(Greville, QuadraticUniform) {
  const auto g = greville_points(KnotVector::open_uniform(2, 2));
  const std::vector<double> expected{0.0, 0.25, 0.75, 1.0};
  ASSERT_EQ(g.size(), expected.size());
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(g[i], expected[i], 1e-15);
}

TEST(Greville, ReproducesLinearFunction) {
  // sum_i g_i N_i(xi) = xi for any open knot vector with p >= 1.
  std::mt19937 rng(testing_support::kSeed + 3);
  for (int c = 0; c < 200; ++c) {
    const KnotVector kv = testing_support::random_knot_vector(rng, 1 + c % 4);
    const auto g = greville_points(kv);
    const double xi = testing_support::random_parameter(rng, kv);
    const auto b = eval_basis(kv, xi);
    double x = 0.0;
    for (int k = 0; k <= kv.degree(); ++k) x += g[b.first_index(kv.degree()) + k] * b.ders(0, k);
    EXPECT_NEAR(x, xi, 1e-12);
  }
}

TEST(Refinement, KnotInsertionPreservesCurves) {
  std::mt19937 rng(testing_support::kSeed + 4);
  for (int c = 0; c < 300; ++c) {
    const SplineCurve curve = random_curve(rng, 1 + c % 5, c % 2 == 1);
    const double u = testing_support::random_parameter(rng, curve.knots);
    if (curve.knots.multiplicity(u) > 0) continue;
    const SplineCurve refined = insert_knot(curve, u);
    EXPECT_EQ(refined.knots.basis_count(), curve.knots.basis_count() + 1);
    for (int s = 0; s < 7; ++s) {
      const double xi = testing_support::random_parameter(rng, curve.knots);
      EXPECT_LT((refined.eval(xi) - curve.eval(xi)).norm(), 1e-11);
    }
  }
}

TEST(Refinement, DegreeElevationPreservesCurvesAndContinuity) {
  std::mt19937 rng(testing_support::kSeed + 5);
  for (int c = 0; c < 300; ++c) {
    const SplineCurve curve = random_curve(rng, 1 + c % 4, c % 3 == 0);
    const SplineCurve up = elevate_degree(curve);
    EXPECT_EQ(up.knots.degree(), curve.knots.degree() + 1);
    const auto before = continuity_report(curve.knots);
    const auto after = continuity_report(up.knots);
    ASSERT_EQ(before.size(), after.size());
    for (std::size_t k = 0; k < before.size(); ++k) EXPECT_EQ(before[k].continuity, after[k].continuity);
    for (int s = 0; s < 7; ++s) {
      const double xi = testing_support::random_parameter(rng, curve.knots);
      EXPECT_LT((up.eval(xi) - curve.eval(xi)).norm(), 1e-10);
    }
  }
}

TEST(Refinement, QuarterCircleStaysOnCircle) {
  const double w = std::sqrt(0.5);
  Eigen::MatrixXd pts(3, 2);
  pts << 1, 0, 1, 1, 0, 1;
  const SplineCurve arc(KnotVector({0, 0, 0, 1, 1, 1}, 2), pts, std::vector<double>{1, w, 1});
  const SplineCurve refined = elevate_degree(insert_knot(insert_knot(arc, 0.3), 0.7));
  for (int s = 0; s <= 50; ++s) {
    const double xi = s / 50.0;
    EXPECT_NEAR(refined.eval(xi).norm(), 1.0, 1e-13);
    EXPECT_LT((refined.eval(xi) - arc.eval(xi)).norm(), 1e-13);
  }
}

TEST(Refinement, KRefineRaisesDegreeThenInserts) {
  const KnotVector kv({0, 0, 1, 1}, 1);
  const std::vector<double> knots{0.25, 0.5, 0.75};
  const KnotVector r = k_refine(kv, 3, knots);
  EXPECT_EQ(r.degree(), 3);
  EXPECT_EQ(r.basis_count(), 3 + 4);
  for (const auto& k : continuity_report(r)) EXPECT_EQ(k.continuity, 2);
}

TEST(Refinement, SurfaceKRefinePreservesRectangleMap) {
  const SplineSurface rect = SplineSurface::rectangle(2.0, 0.5);
  const std::vector<double> kx{0.5}, ky{0.2, 0.6};
  const SplineSurface fine = k_refine(rect, 3, kx, ky);
  EXPECT_EQ(fine.space.n(), 5);
  EXPECT_EQ(fine.space.m(), 6);
  std::mt19937 rng(testing_support::kSeed + 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 50; ++s) {
    const double xi = u(rng), eta = u(rng);
    const auto a = eval_surface(rect, xi, eta);
    const auto b = eval_surface(fine, xi, eta);
    EXPECT_LT((a.x - b.x).norm(), 1e-13);
    EXPECT_LT((a.jacobian - b.jacobian).norm(), 1e-12);
  }
}

TEST(Breaks, GradedApportionsSpansByLength) {
  const std::vector<double> interfaces{0.25, 0.75};
  const auto breaks = graded_breaks(0.0, 1.0, 60, interfaces);
  ASSERT_EQ(breaks.size(), 59u);
  int below = 0, middle = 0;
  for (double b : breaks) {
    if (b < 0.25 - 1e-12) ++below;
    else if (b < 0.75 - 1e-12) ++middle;
  }
  // 15 spans below give 14 interior breaks plus the interface itself.
  EXPECT_EQ(below, 14);
  EXPECT_EQ(middle, 30);
  EXPECT_TRUE(std::is_sorted(breaks.begin(), breaks.end()));
  // Spans shrink toward the lower interface.
  std::vector<double> all{0.0};
  all.insert(all.end(), breaks.begin(), breaks.end());
  all.push_back(1.0);
  EXPECT_NEAR((all[14] - all[13]) / (all[15] - all[14]), 1.2, 1e-9);
}

TEST(Breaks, UniformInterior) {
  const auto b = uniform_breaks(0.0, 1.0, 4);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_NEAR(b[1], 0.5, 1e-15);
}

TEST(BasisTable, RowsSumToOne) {
  const Eigen::MatrixXd t = basis_table(quartic_example(), 101);
  ASSERT_EQ(t.cols(), 16);
  for (Eigen::Index r = 0; r < t.rows(); ++r) EXPECT_NEAR(t.row(r).tail(15).sum(), 1.0, 1e-13);
}
