#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace poroiga {

/// Open (clamped) knot vector together with its polynomial degree.
///
/// Construction validates the invariants: non-decreasing knots, end knots of
/// multiplicity p + 1, interior multiplicities at most p + 1 and at least
/// p + 1 basis functions. Instances are immutable.
class KnotVector {
 public:
  KnotVector(std::vector<double> knots, int degree);

  /// Open knot vector on [a, b] with `spans` equal knot spans.
  static KnotVector open_uniform(int degree, int spans, double a = 0.0, double b = 1.0);

  /// Open knot vector whose interior knots are `breaks` (each with multiplicity one).
  static KnotVector from_breaks(int degree, std::span<const double> breaks);

  int degree() const { return degree_; }
  std::span<const double> knots() const { return knots_; }
  double operator[](int i) const { return knots_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(knots_.size()); }
  int basis_count() const { return size() - degree_ - 1; }
  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }

  /// Absolute tolerance used to decide that two knots coincide.
  double tolerance() const;

  /// Distinct knot values, endpoints included.
  std::vector<double> unique_knots() const;
  int multiplicity(double value) const;

  /// Number of nonempty knot spans.
  int span_count() const { return static_cast<int>(unique_knots().size()) - 1; }

  bool operator==(const KnotVector&) const = default;

 private:
  std::vector<double> knots_;
  int degree_;
};

/// Nonvanishing basis functions at one parameter and their derivatives.
struct BasisEval {
  int span = 0;
  // Row k holds the k-th derivative of N_{span-p}, ..., N_{span}.
  Eigen::MatrixXd ders;

  auto values() const { return ders.row(0); }
  int first_index(int degree) const { return span - degree; }
};

/// Knot span index i with knots[i] <= xi < knots[i+1]; the right end of the
/// domain maps to the last nonempty span.
int find_span(const KnotVector& kv, double xi);

/// Basis functions and derivatives up to `deriv_order` (<= p) at xi.
BasisEval eval_basis(const KnotVector& kv, double xi, int deriv_order = 0);

struct KnotContinuity {
  double knot;
  int multiplicity;
  int continuity;  // p - m; -1 means discontinuous
  bool operator==(const KnotContinuity&) const = default;
};

/// C^{p-m} continuity at every distinct interior knot.
std::vector<KnotContinuity> continuity_report(const KnotVector& kv);

/// Greville abscissae: averages of p consecutive knots, one per basis function.
std::vector<double> greville_points(const KnotVector& kv);

/// Spline curve in R^d. Row i of `points` is control point P_i. Optional
/// weights turn the curve into a NURBS curve.
struct SplineCurve {
  KnotVector knots;
  Eigen::MatrixXd points;
  std::optional<std::vector<double>> weights;

  SplineCurve(KnotVector kv, Eigen::MatrixXd pts,
              std::optional<std::vector<double>> w = std::nullopt);

  int dimension() const { return static_cast<int>(points.cols()); }
  bool rational() const { return weights.has_value(); }

  /// Point on the curve (rational if weights are present).
  Eigen::VectorXd eval(double xi) const;
};

/// Rational evaluation sum(N_i w_i P_i) / sum(N_i w_i). Requires weights.
Eigen::VectorXd nurbs_eval(const SplineCurve& curve, double xi);

/// Boehm single knot insertion; geometry preserved.
SplineCurve insert_knot(const SplineCurve& curve, double xi);

/// Raises the degree by one without changing the curve. Every distinct knot
/// gains one multiplicity, so interior continuity is unchanged.
SplineCurve elevate_degree(const SplineCurve& curve);

/// Knot-vector-only refinement helpers.
KnotVector elevate_knots(const KnotVector& kv, int times = 1);
KnotVector insert_knots(const KnotVector& kv, std::span<const double> values);

/// k-refinement of a single knot vector: elevate to `target_degree`, then
/// insert `new_knots`.
KnotVector k_refine(const KnotVector& kv, int target_degree, std::span<const double> new_knots);

/// Tensor-product space spanned by N_{i,p}(xi) M_{j,q}(eta).
/// Global basis index of (i, j) is i + n * j.
struct TensorSpace2D {
  KnotVector xi;
  KnotVector eta;

  int n() const { return xi.basis_count(); }
  int m() const { return eta.basis_count(); }
  int basis_count() const { return n() * m(); }
  int index(int i, int j) const { return i + n() * j; }
  bool operator==(const TensorSpace2D&) const = default;
};

TensorSpace2D k_refine(const TensorSpace2D& space, int target_degree,
                       std::span<const double> knots_xi, std::span<const double> knots_eta);

/// Tensor-product spline surface; row a = i + n*j of `points` is P_{i,j}.
struct SplineSurface {
  TensorSpace2D space;
  Eigen::MatrixXd points;

  /// Bilinear patch covering [0, width] x [0, height].
  static SplineSurface rectangle(double width, double height);
};

struct SurfacePoint {
  Eigen::Vector2d x;
  Eigen::Matrix2d jacobian;  // d(x, y) / d(xi, eta)
};

SurfacePoint eval_surface(const SplineSurface& surface, double xi, double eta);

SplineSurface insert_knot_xi(const SplineSurface& s, double value);
SplineSurface insert_knot_eta(const SplineSurface& s, double value);
SplineSurface elevate_degree_xi(const SplineSurface& s);
SplineSurface elevate_degree_eta(const SplineSurface& s);

/// Geometry-preserving k-refinement of a surface: degree elevation in both
/// directions followed by knot insertion.
SplineSurface k_refine(const SplineSurface& surface, int target_degree,
                       std::span<const double> knots_xi, std::span<const double> knots_eta);

/// Interior breakpoints of `spans` uniform spans on [a, b].
std::vector<double> uniform_breaks(double a, double b, int spans);

/// Interior breakpoints of `spans` spans on [a, b] that always include the
/// given interface coordinates. Spans are distributed over the segments
/// between interfaces proportionally to segment length and, within each
/// segment, sizes grow geometrically by `ratio` away from every adjacent
/// interface. ratio == 1 gives piecewise uniform spacing.
std::vector<double> graded_breaks(double a, double b, int spans,
                                  std::span<const double> interfaces, double ratio = 1.2);

/// Basis values of every function on a uniform grid of `samples` points:
/// row r = (xi_r, N_0(xi_r), ..., N_{n-1}(xi_r)).
Eigen::MatrixXd basis_table(const KnotVector& kv, int samples);

}  // namespace poroiga
