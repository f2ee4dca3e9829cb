#include <algorithm>
#include <cmath>
#include <numbers>

#include "poroiga/assembly.hpp"
#include "poroiga/errors.hpp"

namespace poroiga {

int MixedSpace::span_count() const {
  return (static_cast<int>(breaks_xi().size()) - 1) * (static_cast<int>(breaks_eta().size()) - 1);
}

std::vector<int> edge_functions(const TensorSpace2D& space, Edge edge) {
  std::vector<int> out;
  const int n = space.n();
  const int m = space.m();
  switch (edge) {
    case Edge::left:
      for (int j = 0; j < m; ++j) out.push_back(space.index(0, j));
      break;
    case Edge::right:
      for (int j = 0; j < m; ++j) out.push_back(space.index(n - 1, j));
      break;
    case Edge::bottom:
      for (int i = 0; i < n; ++i) out.push_back(space.index(i, 0));
      break;
    case Edge::top:
      for (int i = 0; i < n; ++i) out.push_back(space.index(i, m - 1));
      break;
  }
  return out;
}

namespace {

std::vector<double> with_interfaces(std::vector<double> breaks, std::span<const double> interfaces,
                                    double tol) {
  for (double y : interfaces) {
    const bool present =
        std::any_of(breaks.begin(), breaks.end(), [&](double b) { return std::abs(b - y) <= tol; });
    if (!present) breaks.push_back(y);
  }
  std::sort(breaks.begin(), breaks.end());
  return breaks;
}

KnotVector raise_interfaces(KnotVector kv, std::span<const double> interfaces, int target_multiplicity) {
  std::vector<double> extra;
  for (double y : interfaces) {
    double snapped = y;
    for (double k : kv.knots())
      if (std::abs(k - y) <= kv.tolerance()) snapped = k;
    for (int m = kv.multiplicity(snapped); m < target_multiplicity; ++m) extra.push_back(snapped);
  }
  return extra.empty() ? kv : insert_knots(kv, extra);
}

}  // namespace

MixedSpace build_mixed_space(const SplineSurface& geometry, int pressure_degree, const MeshSpec& mesh,
                             OrderMode mode) {
  if (pressure_degree < 1) throw ArgumentError("pressure degree must be at least 1");
  if (mesh.spans_x < 1 || mesh.spans_y < 1) throw ArgumentError("span counts must be positive");
  if (geometry.space.xi.degree() > pressure_degree || geometry.space.eta.degree() > pressure_degree)
    throw ArgumentError("geometry degree exceeds the pressure degree");

  const KnotVector& gx = geometry.space.xi;
  const KnotVector& gy = geometry.space.eta;
  for (double y : mesh.interfaces)
    if (!(y > gy.front() && y < gy.back()))
      throw ArgumentError("interface parameter " + std::to_string(y) + " outside the patch");

  const auto breaks_x = uniform_breaks(gx.front(), gx.back(), mesh.spans_x);
  auto breaks_y = mesh.graded
                      ? graded_breaks(gy.front(), gy.back(), mesh.spans_y, mesh.interfaces, mesh.grading_ratio)
                      : uniform_breaks(gy.front(), gy.back(), mesh.spans_y);
  breaks_y = with_interfaces(std::move(breaks_y), mesh.interfaces, gy.tolerance());

  const int pp = pressure_degree;
  const int pu = mode == OrderMode::mixed ? pp + 1 : pp;

  MixedSpace space{geometry, k_refine(geometry.space, pp, breaks_x, breaks_y),
                   k_refine(geometry.space, pu, breaks_x, breaks_y), mode};
  if (mesh.continuity == InterfaceContinuity::c0) {
    space.pressure.eta = raise_interfaces(space.pressure.eta, mesh.interfaces, pp);
    space.displacement.eta = raise_interfaces(space.displacement.eta, mesh.interfaces, pu);
  }
  return space;
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw ArgumentError("Gauss rule needs at least one point");
  GaussRule rule;
  rule.points.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[i] = -x;
    rule.points[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.0;
  return rule;
}

QuadratureRule make_quadrature(const MixedSpace& space, int order) {
  if (order <= 0) order = space.displacement_degree() + 1;
  const GaussRule g = gauss_legendre(order);
  const auto bx = space.breaks_xi();
  const auto by = space.breaks_eta();
  QuadratureRule rule;
  rule.order = order;
  for (std::size_t sy = 0; sy + 1 < by.size(); ++sy) {
    for (std::size_t sx = 0; sx + 1 < bx.size(); ++sx) {
      const SpanBox box{bx[sx], bx[sx + 1], by[sy], by[sy + 1]};
      rule.spans.push_back(box);
      const double hx = 0.5 * (box.xi1 - box.xi0);
      const double hy = 0.5 * (box.eta1 - box.eta0);
      for (int b = 0; b < order; ++b)
        for (int a = 0; a < order; ++a)
          rule.points.push_back({box.xi0 + hx * (g.points[a] + 1.0), box.eta0 + hy * (g.points[b] + 1.0),
                                 g.weights[a] * g.weights[b] * hx * hy});
    }
  }
  return rule;
}

std::vector<PhysicalPoint> physical_points(const MixedSpace& space, const QuadratureRule& rule) {
  std::vector<PhysicalPoint> out;
  out.reserve(rule.points.size());
  for (const auto& q : rule.points) {
    const auto sp = eval_surface(space.geometry, q.xi, q.eta);
    const double det = sp.jacobian.determinant();
    if (!(det > 0.0)) throw GeometryError("non-positive Jacobian determinant in the geometry map");
    out.push_back({sp.x, q.weight * det});
  }
  return out;
}

double eval_pressure(const MixedSpace& space, const Eigen::VectorXd& p_full, double xi, double eta) {
  const auto& ps = space.pressure;
  const int p = ps.xi.degree();
  const int q = ps.eta.degree();
  const auto bx = eval_basis(ps.xi, xi, 0);
  const auto by = eval_basis(ps.eta, eta, 0);
  double value = 0.0;
  for (int b = 0; b <= q; ++b)
    for (int a = 0; a <= p; ++a)
      value += bx.ders(0, a) * by.ders(0, b) * p_full[ps.index(bx.first_index(p) + a, by.first_index(q) + b)];
  return value;
}

Eigen::Vector2d eval_displacement(const MixedSpace& space, const Eigen::VectorXd& u_full, double xi,
                                  double eta) {
  const auto& us = space.displacement;
  const int p = us.xi.degree();
  const int q = us.eta.degree();
  const auto bx = eval_basis(us.xi, xi, 0);
  const auto by = eval_basis(us.eta, eta, 0);
  Eigen::Vector2d value = Eigen::Vector2d::Zero();
  for (int b = 0; b <= q; ++b)
    for (int a = 0; a <= p; ++a) {
      const int k = us.index(bx.first_index(p) + a, by.first_index(q) + b);
      const double N = bx.ders(0, a) * by.ders(0, b);
      value += N * Eigen::Vector2d(u_full[space.udof(k, 0)], u_full[space.udof(k, 1)]);
    }
  return value;
}

}  // namespace poroiga
