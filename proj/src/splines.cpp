#include "poroiga/splines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "poroiga/errors.hpp"

namespace poroiga {

namespace {

constexpr double kRelativeKnotTol = 1e-10;

std::string describe(std::span<const double> knots) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < knots.size(); ++i) os << (i ? "," : "") << knots[i];
  os << '}';
  return os.str();
}

}  // namespace

KnotVector::KnotVector(std::vector<double> knots, int degree)
    : knots_(std::move(knots)), degree_(degree) {
  if (degree_ < 0) throw ArgumentError("negative spline degree");
  const int p = degree_;
  if (static_cast<int>(knots_.size()) < 2 * (p + 1))
    throw ArgumentError("knot vector " + describe(knots_) + " too short for degree " +
                        std::to_string(p));
  if (!std::is_sorted(knots_.begin(), knots_.end()))
    throw ArgumentError("knot vector " + describe(knots_) + " is not non-decreasing");
  if (!(knots_.back() > knots_.front()))
    throw ArgumentError("knot vector " + describe(knots_) + " has an empty domain");
  const double tol = tolerance();
  for (int i = 0; i <= p; ++i) {
    if (std::abs(knots_[i] - knots_.front()) > tol ||
        std::abs(knots_[knots_.size() - 1 - i] - knots_.back()) > tol)
      throw ArgumentError("knot vector " + describe(knots_) + " is not open");
  }
  // Snap clamped ends so that later comparisons are exact.
  std::fill_n(knots_.begin(), p + 1, knots_.front());
  std::fill_n(knots_.end() - (p + 1), p + 1, knots_.back());
  for (double u : unique_knots()) {
    if (multiplicity(u) > p + 1)
      throw ArgumentError("knot " + std::to_string(u) + " has multiplicity > p + 1");
  }
}

KnotVector KnotVector::open_uniform(int degree, int spans, double a, double b) {
  if (spans < 1) throw ArgumentError("span count must be positive");
  const auto breaks = uniform_breaks(a, b, spans);
  std::vector<double> knots(static_cast<std::size_t>(degree + 1), a);
  knots.insert(knots.end(), breaks.begin(), breaks.end());
  knots.insert(knots.end(), static_cast<std::size_t>(degree + 1), b);
  return KnotVector(std::move(knots), degree);
}

KnotVector KnotVector::from_breaks(int degree, std::span<const double> breaks) {
  if (breaks.size() < 2) throw ArgumentError("need at least two breakpoints");
  std::vector<double> knots(static_cast<std::size_t>(degree + 1), breaks.front());
  knots.insert(knots.end(), breaks.begin() + 1, breaks.end() - 1);
  knots.insert(knots.end(), static_cast<std::size_t>(degree + 1), breaks.back());
  return KnotVector(std::move(knots), degree);
}

double KnotVector::tolerance() const { return kRelativeKnotTol * (knots_.back() - knots_.front()); }

std::vector<double> KnotVector::unique_knots() const {
  std::vector<double> out;
  const double tol = tolerance();
  for (double u : knots_) {
    if (out.empty() || u - out.back() > tol) out.push_back(u);
  }
  return out;
}

int KnotVector::multiplicity(double value) const {
  const double tol = tolerance();
  return static_cast<int>(
      std::count_if(knots_.begin(), knots_.end(), [&](double u) { return std::abs(u - value) <= tol; }));
}

int find_span(const KnotVector& kv, double xi) {
  const int p = kv.degree();
  const int n = kv.basis_count();
  if (!(xi >= kv.front() && xi <= kv.back()))
    throw DomainError("parameter " + std::to_string(xi) + " outside [" + std::to_string(kv.front()) +
                      ", " + std::to_string(kv.back()) + "]");
  if (xi >= kv[n]) return n - 1;
  const auto knots = kv.knots();
  // Last index i in [p, n-1] with knots[i] <= xi.
  const auto it = std::upper_bound(knots.begin() + p, knots.begin() + n, xi);
  return static_cast<int>(it - knots.begin()) - 1;
}

BasisEval eval_basis(const KnotVector& kv, double xi, int deriv_order) {
  const int p = kv.degree();
  if (deriv_order < 0 || deriv_order > p)
    throw ArgumentError("derivative order " + std::to_string(deriv_order) + " exceeds degree " +
                        std::to_string(p));
  const int span = find_span(kv, xi);

  Eigen::MatrixXd ndu(p + 1, p + 1);
  Eigen::VectorXd left(p + 1), right(p + 1);
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = xi - kv[span + 1 - j];
    right[j] = kv[span + j] - xi;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[r + 1] + left[j - r];
      const double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu(j, j) = saved;
  }

  BasisEval out;
  out.span = span;
  out.ders.setZero(deriv_order + 1, p + 1);
  for (int j = 0; j <= p; ++j) out.ders(0, j) = ndu(j, p);

  Eigen::MatrixXd a(2, p + 1);
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a(0, 0) = 1.0;
    for (int k = 1; k <= deriv_order; ++k) {
      double d = 0.0;
      const int rk = r - k;
      const int pk = p - k;
      if (r >= k) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
        d += a(s2, k) * ndu(r, pk);
      }
      out.ders(k, r) = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= deriv_order; ++k) {
    out.ders.row(k) *= factor;
    factor *= (p - k);
  }
  return out;
}

std::vector<KnotContinuity> continuity_report(const KnotVector& kv) {
  const auto unique = kv.unique_knots();
  std::vector<KnotContinuity> out;
  for (std::size_t i = 1; i + 1 < unique.size(); ++i) {
    const int m = kv.multiplicity(unique[i]);
    out.push_back({unique[i], m, kv.degree() - m});
  }
  return out;
}

std::vector<double> greville_points(const KnotVector& kv) {
  const int p = kv.degree();
  const int n = kv.basis_count();
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (p == 0) {
      out[i] = 0.5 * (kv[i] + kv[i + 1]);
      continue;
    }
    double sum = 0.0;
    for (int k = 1; k <= p; ++k) sum += kv[i + k];
    // Averages of repeated end knots can round past the domain.
    out[i] = std::clamp(sum / p, kv.front(), kv.back());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Curves

SplineCurve::SplineCurve(KnotVector kv, Eigen::MatrixXd pts, std::optional<std::vector<double>> w)
    : knots(std::move(kv)), points(std::move(pts)), weights(std::move(w)) {
  if (points.rows() != knots.basis_count())
    throw ArgumentError("control point count " + std::to_string(points.rows()) +
                        " does not match basis count " + std::to_string(knots.basis_count()));
  if (weights) {
    if (static_cast<Eigen::Index>(weights->size()) != points.rows())
      throw ArgumentError("weight count does not match control point count");
    for (double w_i : *weights)
      if (!(w_i > 0.0)) throw ArgumentError("NURBS weights must be strictly positive");
  }
}

Eigen::VectorXd SplineCurve::eval(double xi) const {
  if (weights) return nurbs_eval(*this, xi);
  const auto be = eval_basis(knots, xi, 0);
  const int p = knots.degree();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dimension());
  for (int k = 0; k <= p; ++k) x += be.ders(0, k) * points.row(be.first_index(p) + k).transpose();
  return x;
}

Eigen::VectorXd nurbs_eval(const SplineCurve& curve, double xi) {
  if (!curve.weights) throw ArgumentError("nurbs_eval requires weights");
  const auto& w = *curve.weights;
  const int p = curve.knots.degree();
  const auto be = eval_basis(curve.knots, xi, 0);
  Eigen::VectorXd num = Eigen::VectorXd::Zero(curve.dimension());
  double den = 0.0;
  for (int k = 0; k <= p; ++k) {
    const int i = be.first_index(p) + k;
    const double nw = be.ders(0, k) * w[i];
    num += nw * curve.points.row(i).transpose();
    den += nw;
  }
  return num / den;
}

namespace {

// Homogeneous form (w P, w) of a rational curve; identity for polynomial curves.
Eigen::MatrixXd to_homogeneous(const SplineCurve& c) {
  if (!c.weights) return c.points;
  Eigen::MatrixXd h(c.points.rows(), c.points.cols() + 1);
  for (Eigen::Index i = 0; i < c.points.rows(); ++i) {
    const double w = (*c.weights)[i];
    h.row(i).head(c.points.cols()) = w * c.points.row(i);
    h(i, c.points.cols()) = w;
  }
  return h;
}

SplineCurve from_homogeneous(KnotVector kv, const Eigen::MatrixXd& h, bool rational) {
  if (!rational) return SplineCurve(std::move(kv), h);
  const Eigen::Index d = h.cols() - 1;
  Eigen::MatrixXd pts(h.rows(), d);
  std::vector<double> w(static_cast<std::size_t>(h.rows()));
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    w[i] = h(i, d);
    pts.row(i) = h.row(i).head(d) / w[i];
  }
  return SplineCurve(std::move(kv), std::move(pts), std::move(w));
}

// Polynomial evaluation of a control matrix in an arbitrary knot vector.
Eigen::VectorXd eval_polynomial(const KnotVector& kv, const Eigen::MatrixXd& pts, double xi) {
  const int p = kv.degree();
  const auto be = eval_basis(kv, xi, 0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(pts.cols());
  for (int k = 0; k <= p; ++k) x += be.ders(0, k) * pts.row(be.first_index(p) + k).transpose();
  return x;
}

struct RawCurve {
  std::vector<double> knots;
  Eigen::MatrixXd points;
};

RawCurve boehm_insert(const KnotVector& kv, const Eigen::MatrixXd& pts, double u) {
  const int p = kv.degree();
  const int n = kv.basis_count();
  if (!(u > kv.front() && u < kv.back()))
    throw ArgumentError("knot " + std::to_string(u) + " is not strictly inside the domain");
  const int s = kv.multiplicity(u);
  if (s + 1 > p)
    throw ArgumentError("inserting knot " + std::to_string(u) + " would raise its multiplicity above p = " +
                        std::to_string(p));
  // Snap to an existing knot so multiplicities stay exact.
  const double tol = kv.tolerance();
  for (double k : kv.knots())
    if (std::abs(k - u) <= tol) u = k;
  const int k = find_span(kv, u);

  RawCurve out;
  out.knots.assign(kv.knots().begin(), kv.knots().end());
  out.knots.insert(out.knots.begin() + k + 1, u);
  out.points.resize(n + 1, pts.cols());
  for (int i = 0; i <= k - p; ++i) out.points.row(i) = pts.row(i);
  for (int i = k - s; i < n; ++i) out.points.row(i + 1) = pts.row(i);
  for (int i = k - p + 1; i <= k - s; ++i) {
    const double a = (u - kv[i]) / (kv[i + p] - kv[i]);
    out.points.row(i) = a * pts.row(i) + (1.0 - a) * pts.row(i - 1);
  }
  return out;
}

// Interpolates the polynomial curve (src_kv, src_pts) at the Greville points
// of `target`. Exact when the source curve lies in the target space.
Eigen::MatrixXd project_into(const KnotVector& target, const KnotVector& src_kv,
                             const Eigen::MatrixXd& src_pts) {
  const int n = target.basis_count();
  const int p = target.degree();
  const auto g = greville_points(target);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd rhs(n, src_pts.cols());
  for (int r = 0; r < n; ++r) {
    const auto be = eval_basis(target, g[r], 0);
    for (int k = 0; k <= p; ++k) A(r, be.first_index(p) + k) = be.ders(0, k);
    rhs.row(r) = eval_polynomial(src_kv, src_pts, g[r]).transpose();
  }
  return A.partialPivLu().solve(rhs);
}

}  // namespace

SplineCurve insert_knot(const SplineCurve& curve, double xi) {
  auto raw = boehm_insert(curve.knots, to_homogeneous(curve), xi);
  return from_homogeneous(KnotVector(std::move(raw.knots), curve.knots.degree()), raw.points,
                          curve.rational());
}

KnotVector elevate_knots(const KnotVector& kv, int times) {
  if (times < 0) throw ArgumentError("negative elevation count");
  std::vector<double> knots;
  for (double u : kv.unique_knots()) knots.insert(knots.end(), kv.multiplicity(u) + times, u);
  return KnotVector(std::move(knots), kv.degree() + times);
}

KnotVector insert_knots(const KnotVector& kv, std::span<const double> values) {
  std::vector<double> knots(kv.knots().begin(), kv.knots().end());
  for (double u : values) {
    if (!(u > kv.front() && u < kv.back()))
      throw ArgumentError("knot " + std::to_string(u) + " is not strictly inside the domain");
    for (double k : kv.knots())
      if (std::abs(k - u) <= kv.tolerance()) u = k;
    knots.insert(std::upper_bound(knots.begin(), knots.end(), u), u);
  }
  KnotVector out(std::move(knots), kv.degree());
  for (double u : out.unique_knots())
    if (u != out.front() && u != out.back() && out.multiplicity(u) > out.degree())
      throw ArgumentError("knot " + std::to_string(u) + " multiplicity exceeds p = " +
                          std::to_string(out.degree()));
  return out;
}

KnotVector k_refine(const KnotVector& kv, int target_degree, std::span<const double> new_knots) {
  if (target_degree < kv.degree())
    throw ArgumentError("target degree " + std::to_string(target_degree) + " below current degree " +
                        std::to_string(kv.degree()));
  return insert_knots(elevate_knots(kv, target_degree - kv.degree()), new_knots);
}

SplineCurve elevate_degree(const SplineCurve& curve) {
  const KnotVector& kv = curve.knots;
  const int p = kv.degree();
  const bool rational = curve.rational();
  Eigen::MatrixXd pts = to_homogeneous(curve);

  // Bezier extraction: raise every interior knot to multiplicity p.
  KnotVector bez = kv;
  for (double u : kv.unique_knots()) {
    if (u == kv.front() || u == kv.back()) continue;
    for (int m = bez.multiplicity(u); m < p; ++m) {
      auto raw = boehm_insert(bez, pts, u);
      bez = KnotVector(std::move(raw.knots), p);
      pts = std::move(raw.points);
    }
  }

  // Elevate each Bezier segment; neighbours share their end points.
  const int segments = bez.span_count();
  const int q = p + 1;
  Eigen::MatrixXd elevated(segments * q + 1, pts.cols());
  for (int s = 0; s < segments; ++s) {
    const auto seg = pts.middleRows(s * p, p + 1);
    elevated.row(s * q) = seg.row(0);
    for (int i = 1; i <= p; ++i) {
      const double a = static_cast<double>(i) / q;
      elevated.row(s * q + i) = a * seg.row(i - 1) + (1.0 - a) * seg.row(i);
    }
    elevated.row(s * q + q) = seg.row(p);
  }
  std::vector<double> bez_knots;
  const auto breaks = bez.unique_knots();
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    const int m = (i == 0 || i + 1 == breaks.size()) ? q + 1 : q;
    bez_knots.insert(bez_knots.end(), m, breaks[i]);
  }
  const KnotVector bez_elevated(std::move(bez_knots), q);

  // Reassemble in the target space, where each original knot has gained one multiplicity.
  const KnotVector target = elevate_knots(kv, 1);
  Eigen::MatrixXd out = project_into(target, bez_elevated, elevated);
  return from_homogeneous(target, out, rational);
}

// ---------------------------------------------------------------------------
// Tensor-product spaces and surfaces

TensorSpace2D k_refine(const TensorSpace2D& space, int target_degree,
                       std::span<const double> knots_xi, std::span<const double> knots_eta) {
  return {k_refine(space.xi, target_degree, knots_xi), k_refine(space.eta, target_degree, knots_eta)};
}

SplineSurface SplineSurface::rectangle(double width, double height) {
  if (!(width > 0.0 && height > 0.0)) throw ArgumentError("rectangle dimensions must be positive");
  SplineSurface s{{KnotVector({0, 0, 1, 1}, 1), KnotVector({0, 0, 1, 1}, 1)}, Eigen::MatrixXd(4, 2)};
  s.points << 0, 0, width, 0, 0, height, width, height;
  return s;
}

SurfacePoint eval_surface(const SplineSurface& s, double xi, double eta) {
  const int p = s.space.xi.degree();
  const int q = s.space.eta.degree();
  const auto bx = eval_basis(s.space.xi, xi, std::min(1, p));
  const auto by = eval_basis(s.space.eta, eta, std::min(1, q));
  SurfacePoint out;
  out.x.setZero();
  out.jacobian.setZero();
  for (int b = 0; b <= q; ++b) {
    const int j = by.first_index(q) + b;
    for (int a = 0; a <= p; ++a) {
      const int i = bx.first_index(p) + a;
      const Eigen::Vector2d P = s.points.row(s.space.index(i, j)).transpose();
      const double dx = p > 0 ? bx.ders(1, a) : 0.0;
      const double dy = q > 0 ? by.ders(1, b) : 0.0;
      out.x += bx.ders(0, a) * by.ders(0, b) * P;
      out.jacobian.col(0) += dx * by.ders(0, b) * P;
      out.jacobian.col(1) += bx.ders(0, a) * dy * P;
    }
  }
  return out;
}

namespace {

// Applies a curve operation to every row (direction 0: along xi) or column
// (direction 1: along eta) of the control net.
template <typename Op>
SplineSurface map_lines(const SplineSurface& s, int direction, Op op) {
  const int n = s.space.n();
  const int m = s.space.m();
  const int lines = direction == 0 ? m : n;
  const int len = direction == 0 ? n : m;
  const KnotVector& kv = direction == 0 ? s.space.xi : s.space.eta;
  const int dim = static_cast<int>(s.points.cols());

  std::vector<SplineCurve> refined;
  refined.reserve(static_cast<std::size_t>(lines));
  for (int l = 0; l < lines; ++l) {
    Eigen::MatrixXd pts(len, dim);
    for (int k = 0; k < len; ++k)
      pts.row(k) = s.points.row(direction == 0 ? s.space.index(k, l) : s.space.index(l, k));
    refined.push_back(op(SplineCurve(kv, std::move(pts))));
  }
  SplineSurface out{s.space, {}};
  (direction == 0 ? out.space.xi : out.space.eta) = refined.front().knots;
  const int new_len = refined.front().knots.basis_count();
  out.points.resize(static_cast<Eigen::Index>(new_len) * lines, dim);
  for (int l = 0; l < lines; ++l)
    for (int k = 0; k < new_len; ++k)
      out.points.row(direction == 0 ? out.space.index(k, l) : out.space.index(l, k)) =
          refined[l].points.row(k);
  return out;
}

}  // namespace

SplineSurface insert_knot_xi(const SplineSurface& s, double value) {
  return map_lines(s, 0, [&](const SplineCurve& c) { return insert_knot(c, value); });
}
SplineSurface insert_knot_eta(const SplineSurface& s, double value) {
  return map_lines(s, 1, [&](const SplineCurve& c) { return insert_knot(c, value); });
}
SplineSurface elevate_degree_xi(const SplineSurface& s) {
  return map_lines(s, 0, [](const SplineCurve& c) { return elevate_degree(c); });
}
SplineSurface elevate_degree_eta(const SplineSurface& s) {
  return map_lines(s, 1, [](const SplineCurve& c) { return elevate_degree(c); });
}

SplineSurface k_refine(const SplineSurface& surface, int target_degree,
                       std::span<const double> knots_xi, std::span<const double> knots_eta) {
  SplineSurface s = surface;
  if (target_degree < s.space.xi.degree() || target_degree < s.space.eta.degree())
    throw ArgumentError("target degree below current degree");
  while (s.space.xi.degree() < target_degree) s = elevate_degree_xi(s);
  while (s.space.eta.degree() < target_degree) s = elevate_degree_eta(s);
  for (double u : knots_xi) s = insert_knot_xi(s, u);
  for (double u : knots_eta) s = insert_knot_eta(s, u);
  return s;
}

// ---------------------------------------------------------------------------
// Mesh grading

std::vector<double> uniform_breaks(double a, double b, int spans) {
  if (spans < 1) throw ArgumentError("span count must be positive");
  std::vector<double> out;
  for (int i = 1; i < spans; ++i) out.push_back(a + (b - a) * i / spans);
  return out;
}

std::vector<double> graded_breaks(double a, double b, int spans, std::span<const double> interfaces,
                                  double ratio) {
  if (!(ratio > 0.0)) throw ArgumentError("grading ratio must be positive");
  std::vector<double> pts{a};
  std::vector<double> sorted(interfaces.begin(), interfaces.end());
  std::sort(sorted.begin(), sorted.end());
  for (double y : sorted) {
    if (!(y > a && y < b)) throw ArgumentError("interface " + std::to_string(y) + " outside domain");
    pts.push_back(y);
  }
  pts.push_back(b);
  const int segments = static_cast<int>(pts.size()) - 1;
  if (spans < segments) throw ArgumentError("fewer spans than interface segments");

  // Largest-remainder apportionment of spans to segments, at least one each.
  std::vector<int> counts(static_cast<std::size_t>(segments), 1);
  std::vector<double> remainder(static_cast<std::size_t>(segments));
  int assigned = segments;
  const int extra = spans - segments;
  for (int s = 0; s < segments; ++s) {
    const double share = extra * (pts[s + 1] - pts[s]) / (b - a);
    counts[s] += static_cast<int>(std::floor(share));
    assigned += static_cast<int>(std::floor(share));
    remainder[s] = share - std::floor(share);
  }
  std::vector<int> order(static_cast<std::size_t>(segments));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) { return remainder[l] > remainder[r]; });
  for (int k = 0; assigned < spans; ++k, ++assigned) ++counts[order[k % segments]];

  std::vector<double> out;
  for (int s = 0; s < segments; ++s) {
    const bool fine_left = s > 0;
    const bool fine_right = s + 1 < segments;
    const int k = counts[s];
    std::vector<double> sizes(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      int steps = 0;
      if (fine_left && fine_right)
        steps = std::min(i, k - 1 - i);
      else if (fine_left)
        steps = i;
      else if (fine_right)
        steps = k - 1 - i;
      sizes[i] = std::pow(ratio, steps);
    }
    const double total = std::accumulate(sizes.begin(), sizes.end(), 0.0);
    double y = pts[s];
    for (int i = 0; i + 1 < k; ++i) {
      y += (pts[s + 1] - pts[s]) * sizes[i] / total;
      out.push_back(y);
    }
    if (s + 1 < segments) out.push_back(pts[s + 1]);
  }
  return out;
}

Eigen::MatrixXd basis_table(const KnotVector& kv, int samples) {
  if (samples < 2) throw ArgumentError("need at least two samples");
  const int n = kv.basis_count();
  const int p = kv.degree();
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(samples, n + 1);
  for (int r = 0; r < samples; ++r) {
    const double xi = kv.front() + (kv.back() - kv.front()) * r / (samples - 1);
    const auto be = eval_basis(kv, xi, 0);
    table(r, 0) = xi;
    for (int k = 0; k <= p; ++k) table(r, 1 + be.first_index(p) + k) = be.ders(0, k);
  }
  return table;
}

}  // namespace poroiga
