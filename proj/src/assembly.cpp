#include "poroiga/assembly.hpp"

#include <exception>
#include <ostream>

#include "poroiga/errors.hpp"

namespace poroiga {

namespace {

enum Block : unsigned {
  kStiffness = 1u,
  kCoupling = 2u,
  kStorage = 4u,
  kPermeability = 8u,
  kAllBlocks = 15u,
};

using Triplet = Eigen::Triplet<double>;

struct TripletBuffers {
  std::vector<Triplet> K, Q, S, P;

  void append(const TripletBuffers& other) {
    K.insert(K.end(), other.K.begin(), other.K.end());
    Q.insert(Q.end(), other.Q.begin(), other.Q.end());
    S.insert(S.end(), other.S.begin(), other.S.end());
    P.insert(P.end(), other.P.begin(), other.P.end());
  }
};

// Global indices of the (p+1)(q+1) functions supported on a span, in the
// local order a + (p+1) * b.
std::vector<int> span_functions(const TensorSpace2D& space, int span_x, int span_y) {
  const int p = space.xi.degree();
  const int q = space.eta.degree();
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>((p + 1) * (q + 1)));
  for (int b = 0; b <= q; ++b)
    for (int a = 0; a <= p; ++a) out.push_back(space.index(span_x - p + a, span_y - q + b));
  return out;
}

// Local values and physical gradients of all span functions at one point.
struct LocalBasis {
  Eigen::VectorXd N;
  Eigen::MatrixXd grad;  // 2 x count
};

LocalBasis local_basis(const TensorSpace2D& space, const BasisEval& bx, const BasisEval& by,
                       const Eigen::Matrix2d& inv_jac_t) {
  const int p = space.xi.degree();
  const int q = space.eta.degree();
  const int count = (p + 1) * (q + 1);
  LocalBasis lb{Eigen::VectorXd(count), Eigen::MatrixXd(2, count)};
  for (int b = 0; b <= q; ++b)
    for (int a = 0; a <= p; ++a) {
      const int k = a + (p + 1) * b;
      lb.N[k] = bx.ders(0, a) * by.ders(0, b);
      const Eigen::Vector2d dref(bx.ders(1, a) * by.ders(0, b), bx.ders(0, a) * by.ders(1, b));
      lb.grad.col(k) = inv_jac_t * dref;
    }
  return lb;
}

// Element integrals of the requested blocks over one knot span, appended to `out`.
void span_kernel(const MixedSpace& space, const MaterialLayerSet& layers, const QuadratureRule& rule, int span,
                 unsigned blocks, TripletBuffers& out) {
  const SpanBox& box = rule.spans[span];
  const double xm = 0.5 * (box.xi0 + box.xi1);
  const double ym = 0.5 * (box.eta0 + box.eta1);
  const auto& us = space.displacement;
  const auto& ps = space.pressure;

  const int sxu = find_span(us.xi, xm), syu = find_span(us.eta, ym);
  const int sxp = find_span(ps.xi, xm), syp = find_span(ps.eta, ym);
  const auto ufun = span_functions(us, sxu, syu);
  const auto pfun = span_functions(ps, sxp, syp);
  const int nu = static_cast<int>(ufun.size());
  const int np = static_cast<int>(pfun.size());

  Eigen::MatrixXd Ke, Qe, Se, Pe;
  if (blocks & kStiffness) Ke.setZero(2 * nu, 2 * nu);
  if (blocks & kCoupling) Qe.setZero(2 * nu, np);
  if (blocks & kStorage) Se.setZero(np, np);
  if (blocks & kPermeability) Pe.setZero(np, np);

  const int per_span = rule.points_per_span();
  for (int g = span * per_span; g < (span + 1) * per_span; ++g) {
    const auto& qp = rule.points[g];
    const auto geo = eval_surface(space.geometry, qp.xi, qp.eta);
    const double det = geo.jacobian.determinant();
    if (!(det > 0.0))
      throw GeometryError("non-positive Jacobian determinant at (" + std::to_string(qp.xi) + ", " +
                          std::to_string(qp.eta) + ")");
    const Eigen::Matrix2d inv_jac_t = geo.jacobian.inverse().transpose();
    const double w = qp.weight * det;
    const MaterialParams& mat = layers.lookup(geo.x.y());

    if (blocks & (kStiffness | kCoupling)) {
      const auto bx = eval_basis(us.xi, qp.xi, 1);
      const auto by = eval_basis(us.eta, qp.eta, 1);
      const LocalBasis ub = local_basis(us, bx, by, inv_jac_t);
      if (blocks & kStiffness) {
        const Eigen::Matrix3d D = elasticity_matrix(mat.youngs_modulus, mat.poisson_ratio);
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 2 * nu);
        for (int a = 0; a < nu; ++a) {
          B(0, 2 * a) = ub.grad(0, a);
          B(1, 2 * a + 1) = ub.grad(1, a);
          B(2, 2 * a) = ub.grad(1, a);
          B(2, 2 * a + 1) = ub.grad(0, a);
        }
        Ke.noalias() += w * (B.transpose() * D * B);
      }
      if (blocks & kCoupling) {
        const auto px = eval_basis(ps.xi, qp.xi, 0);
        const auto py = eval_basis(ps.eta, qp.eta, 0);
        Eigen::VectorXd Np(np);
        const int pp = ps.xi.degree();
        for (int b = 0; b <= ps.eta.degree(); ++b)
          for (int a = 0; a <= pp; ++a) Np[a + (pp + 1) * b] = px.ders(0, a) * py.ders(0, b);
        // B^T * {1, 1, 0} reduces to the gradient of each displacement function.
        for (int a = 0; a < nu; ++a) {
          Qe.row(2 * a).noalias() += (w * mat.biot_alpha * ub.grad(0, a)) * Np.transpose();
          Qe.row(2 * a + 1).noalias() += (w * mat.biot_alpha * ub.grad(1, a)) * Np.transpose();
        }
      }
    }
    if (blocks & (kStorage | kPermeability)) {
      const int dorder = (blocks & kPermeability) ? 1 : 0;
      const auto bx = eval_basis(ps.xi, qp.xi, dorder);
      const auto by = eval_basis(ps.eta, qp.eta, dorder);
      if (blocks & kStorage) {
        Eigen::VectorXd Np(np);
        const int pp = ps.xi.degree();
        for (int b = 0; b <= ps.eta.degree(); ++b)
          for (int a = 0; a <= pp; ++a) Np[a + (pp + 1) * b] = bx.ders(0, a) * by.ders(0, b);
        Se.noalias() += (w * mat.storativity) * (Np * Np.transpose());
      }
      if (blocks & kPermeability) {
        const LocalBasis pb = local_basis(ps, bx, by, inv_jac_t);
        Pe.noalias() += w * (pb.grad.transpose() * mat.mobility * pb.grad);
      }
    }
  }

  if (blocks & kStiffness)
    for (int a = 0; a < 2 * nu; ++a)
      for (int b = 0; b < 2 * nu; ++b)
        out.K.emplace_back(space.udof(ufun[a / 2], a % 2), space.udof(ufun[b / 2], b % 2), Ke(a, b));
  if (blocks & kCoupling)
    for (int a = 0; a < 2 * nu; ++a)
      for (int k = 0; k < np; ++k) out.Q.emplace_back(space.udof(ufun[a / 2], a % 2), pfun[k], Qe(a, k));
  if (blocks & kStorage)
    for (int k = 0; k < np; ++k)
      for (int l = 0; l < np; ++l) out.S.emplace_back(pfun[k], pfun[l], Se(k, l));
  if (blocks & kPermeability)
    for (int k = 0; k < np; ++k)
      for (int l = 0; l < np; ++l) out.P.emplace_back(pfun[k], pfun[l], Pe(k, l));
}

// Serial reference: one buffer, spans visited in order.
TripletBuffers gather_serial(const MixedSpace& space, const MaterialLayerSet& layers, const QuadratureRule& rule,
                             unsigned blocks) {
  TripletBuffers all;
  const int spans = static_cast<int>(rule.spans.size());
  for (int s = 0; s < spans; ++s) span_kernel(space, layers, rule, s, blocks, all);
  return all;
}

// Span-parallel: per-span buffers filled concurrently, concatenated in span
// order so that the triplet stream equals the serial one.
TripletBuffers gather_parallel(const MixedSpace& space, const MaterialLayerSet& layers,
                               const QuadratureRule& rule, unsigned blocks) {
  const int spans = static_cast<int>(rule.spans.size());
  std::vector<TripletBuffers> per_span(static_cast<std::size_t>(spans));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < spans; ++s) {
    try {
      span_kernel(space, layers, rule, s, blocks, per_span[s]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  TripletBuffers all;
  for (const auto& b : per_span) all.append(b);
  return all;
}

TripletBuffers gather(const MixedSpace& space, const MaterialLayerSet& layers, const QuadratureRule& rule,
                      unsigned blocks, ExecutionPolicy policy) {
  if (static_cast<int>(rule.spans.size()) != space.span_count())
    throw ArgumentError("quadrature rule does not match the space's span layout");
  return policy == ExecutionPolicy::parallel ? gather_parallel(space, layers, rule, blocks)
                                             : gather_serial(space, layers, rule, blocks);
}

SparseMatrix compress(int rows, int cols, const std::vector<Triplet>& triplets) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.prune(0.0);
  m.makeCompressed();
  return m;
}

}  // namespace

SparseMatrix assemble_stiffness(const MixedSpace& space, const MaterialLayerSet& layers, const QuadratureRule& rule,
                                ExecutionPolicy policy) {
  const auto t = gather(space, layers, rule, kStiffness, policy);
  return compress(space.displacement_dofs(), space.displacement_dofs(), t.K);
}

SparseMatrix assemble_coupling(const MixedSpace& space, const MaterialLayerSet& layers, const QuadratureRule& rule,
                               ExecutionPolicy policy) {
  const auto t = gather(space, layers, rule, kCoupling, policy);
  return compress(space.displacement_dofs(), space.pressure_basis_count(), t.Q);
}

SparseMatrix assemble_storage(const MixedSpace& space, const MaterialLayerSet& layers, const QuadratureRule& rule,
                              ExecutionPolicy policy) {
  const auto t = gather(space, layers, rule, kStorage, policy);
  return compress(space.pressure_basis_count(), space.pressure_basis_count(), t.S);
}

SparseMatrix assemble_permeability(const MixedSpace& space, const MaterialLayerSet& layers,
                                   const QuadratureRule& rule, ExecutionPolicy policy) {
  const auto t = gather(space, layers, rule, kPermeability, policy);
  return compress(space.pressure_basis_count(), space.pressure_basis_count(), t.P);
}

LoadVectors assemble_loads(const MixedSpace& space, const ProblemSpec& spec, const QuadratureRule& rule) {
  const auto& us = space.displacement;
  const auto& ps = space.pressure;
  LoadVectors loads{Eigen::VectorXd::Zero(space.displacement_dofs()),
                    Eigen::VectorXd::Zero(space.pressure_basis_count())};

  // Body forces rho b and the gravity-driven Darcy term.
  const auto phys = physical_points(space, rule);
  for (std::size_t g = 0; g < rule.points.size(); ++g) {
    const auto& qp = rule.points[g];
    const MaterialParams& mat = spec.layers.lookup(phys[g].x.y());
    if (mat.body_force.isZero(0.0)) continue;
    const double w = phys[g].weight;
    {
      const int p = us.xi.degree(), q = us.eta.degree();
      const auto bx = eval_basis(us.xi, qp.xi, 0);
      const auto by = eval_basis(us.eta, qp.eta, 0);
      for (int b = 0; b <= q; ++b)
        for (int a = 0; a <= p; ++a) {
          const int k = us.index(bx.first_index(p) + a, by.first_index(q) + b);
          const double N = bx.ders(0, a) * by.ders(0, b);
          loads.f_u[space.udof(k, 0)] += w * N * mat.density * mat.body_force.x();
          loads.f_u[space.udof(k, 1)] += w * N * mat.density * mat.body_force.y();
        }
    }
    {
      const int p = ps.xi.degree(), q = ps.eta.degree();
      const auto geo = eval_surface(space.geometry, qp.xi, qp.eta);
      const Eigen::Matrix2d inv_jac_t = geo.jacobian.inverse().transpose();
      const auto bx = eval_basis(ps.xi, qp.xi, 1);
      const auto by = eval_basis(ps.eta, qp.eta, 1);
      const Eigen::Vector2d flux = mat.mobility * (mat.fluid_density * mat.body_force);
      for (int b = 0; b <= q; ++b)
        for (int a = 0; a <= p; ++a) {
          const int k = ps.index(bx.first_index(p) + a, by.first_index(q) + b);
          const Eigen::Vector2d grad =
              inv_jac_t * Eigen::Vector2d(bx.ders(1, a) * by.ders(0, b), bx.ders(0, a) * by.ders(1, b));
          loads.f_p[k] += w * grad.dot(flux);
        }
    }
  }

  // Edge integrals with the same number of Gauss points per span.
  const GaussRule gr = gauss_legendre(rule.order);
  auto edge_loop = [&](Edge edge, auto&& body) {
    const bool horizontal = edge == Edge::bottom || edge == Edge::top;
    const auto breaks = horizontal ? space.breaks_xi() : space.breaks_eta();
    const double fixed = (edge == Edge::top || edge == Edge::right) ? 1.0 : 0.0;
    const KnotVector& fixed_kv = horizontal ? space.geometry.space.eta : space.geometry.space.xi;
    const double fixed_param = fixed_kv.front() + fixed * (fixed_kv.back() - fixed_kv.front());
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
      const double h = 0.5 * (breaks[s + 1] - breaks[s]);
      for (std::size_t g = 0; g < gr.points.size(); ++g) {
        const double t = breaks[s] + h * (gr.points[g] + 1.0);
        const double xi = horizontal ? t : fixed_param;
        const double eta = horizontal ? fixed_param : t;
        const auto geo = eval_surface(space.geometry, xi, eta);
        const double ds = geo.jacobian.col(horizontal ? 0 : 1).norm();
        body(xi, eta, gr.weights[g] * h * ds);
      }
    }
  };

  if (spec.load != 0.0) {
    edge_loop(Edge::top, [&](double xi, double eta, double w) {
      const int p = us.xi.degree(), q = us.eta.degree();
      const auto bx = eval_basis(us.xi, xi, 0);
      const auto by = eval_basis(us.eta, eta, 0);
      for (int b = 0; b <= q; ++b)
        for (int a = 0; a <= p; ++a) {
          const int k = us.index(bx.first_index(p) + a, by.first_index(q) + b);
          loads.f_u[space.udof(k, 1)] += w * bx.ders(0, a) * by.ders(0, b) * (-spec.load);
        }
    });
  }

  auto flux_edge = [&](Edge edge, double qbar) {
    if (qbar == 0.0) return;
    edge_loop(edge, [&](double xi, double eta, double w) {
      const int p = ps.xi.degree(), q = ps.eta.degree();
      const auto bx = eval_basis(ps.xi, xi, 0);
      const auto by = eval_basis(ps.eta, eta, 0);
      for (int b = 0; b <= q; ++b)
        for (int a = 0; a <= p; ++a) {
          const int k = ps.index(bx.first_index(p) + a, by.first_index(q) + b);
          loads.f_p[k] -= w * bx.ders(0, a) * by.ders(0, b) * qbar;
        }
    });
  };
  flux_edge(Edge::left, spec.side_flux);
  flux_edge(Edge::right, spec.side_flux);
  flux_edge(Edge::bottom, spec.bottom_flux);
  return loads;
}

SystemMatrices assemble_system(const MixedSpace& space, const ProblemSpec& spec, const QuadratureRule& rule,
                               ExecutionPolicy policy) {
  const auto t = gather(space, spec.layers, rule, kAllBlocks, policy);
  const int nu = space.displacement_dofs();
  const int np = space.pressure_basis_count();
  auto loads = assemble_loads(space, spec, rule);
  return {compress(nu, nu, t.K), compress(nu, np, t.Q), compress(np, np, t.S), compress(np, np, t.P),
          std::move(loads.f_u), std::move(loads.f_p)};
}

void write_coordinate(std::ostream& os, const SparseMatrix& m) {
  os << "% " << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  os.precision(17);
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace poroiga
