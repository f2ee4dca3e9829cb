#include <algorithm>

#include "poroiga/assembly.hpp"
#include "poroiga/errors.hpp"

namespace poroiga {

Constraints classify_dirichlet(const MixedSpace& space, const ProblemSpec& spec) {
  if (spec.prescribed_displacement != 0.0 || spec.prescribed_pressure != 0.0)
    throw UnsupportedError("nonzero prescribed Dirichlet values are not supported");

  const int total = space.total_dofs();
  std::vector<char> fixed(static_cast<std::size_t>(total), 0);
  const auto& us = space.displacement;
  // u_x = 0 on every edge (roller sides, loaded top, fixed bottom); u_y = 0 at the bottom.
  for (Edge e : {Edge::left, Edge::right, Edge::top, Edge::bottom})
    for (int a : edge_functions(us, e)) fixed[space.udof(a, 0)] = 1;
  for (int a : edge_functions(us, Edge::bottom)) fixed[space.udof(a, 1)] = 1;
  // Drained top.
  for (int k : edge_functions(space.pressure, Edge::top)) fixed[space.pdof(k)] = 1;

  Constraints c;
  c.full_to_free.assign(static_cast<std::size_t>(total), -1);
  for (int d = 0; d < total; ++d) {
    if (fixed[d]) {
      c.constrained.push_back(d);
      continue;
    }
    c.full_to_free[d] = static_cast<int>(c.free.size());
    c.free.push_back(d);
    (d < space.displacement_dofs() ? c.free_displacement : c.free_pressure)++;
  }
  return c;
}

namespace {

// Restriction of a block to free rows/columns. Offsets translate block-local
// indices into global DOF numbers and free numbers back into block-local ones.
SparseMatrix restrict_block(const SparseMatrix& m, const Constraints& c, int row_offset, int col_offset,
                            int rows, int cols, int free_row_offset, int free_col_offset) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (int col = 0; col < m.outerSize(); ++col) {
    const int fc = c.full_to_free[col_offset + col];
    if (fc < 0) continue;
    for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
      const int fr = c.full_to_free[row_offset + it.row()];
      if (fr < 0) continue;
      t.emplace_back(fr - free_row_offset, fc - free_col_offset, it.value());
    }
  }
  SparseMatrix out(rows, cols);
  out.setFromTriplets(t.begin(), t.end());
  out.makeCompressed();
  return out;
}

Eigen::VectorXd restrict_vector(const Eigen::VectorXd& v, const Constraints& c, int offset, int size,
                                int free_offset) {
  Eigen::VectorXd out(size);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const int f = c.full_to_free[offset + i];
    if (f >= 0) out[f - free_offset] = v[i];
  }
  return out;
}

}  // namespace

ConstrainedSystem apply_dirichlet(const SystemMatrices& system, const MixedSpace& space, const ProblemSpec& spec) {
  ConstrainedSystem out;
  out.constraints = classify_dirichlet(space, spec);
  const auto& c = out.constraints;
  const int ud = space.displacement_dofs();
  const int fu = c.free_displacement;
  const int fp = c.free_pressure;
  out.K = restrict_block(system.K, c, 0, 0, fu, fu, 0, 0);
  out.Q = restrict_block(system.Q, c, 0, ud, fu, fp, 0, fu);
  out.S = restrict_block(system.S, c, ud, ud, fp, fp, fu, fu);
  out.P = restrict_block(system.P, c, ud, ud, fp, fp, fu, fu);
  out.f_u = restrict_vector(system.f_u, c, 0, fu, 0);
  out.f_p = restrict_vector(system.f_p, c, ud, fp, fu);
  return out;
}

Eigen::VectorXd expand_displacement(const Constraints& c, const MixedSpace& space, const Eigen::VectorXd& u) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(space.displacement_dofs());
  for (int d = 0; d < space.displacement_dofs(); ++d)
    if (c.full_to_free[d] >= 0) full[d] = u[c.full_to_free[d]];
  return full;
}

Eigen::VectorXd expand_pressure(const Constraints& c, const MixedSpace& space, const Eigen::VectorXd& p) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(space.pressure_basis_count());
  for (int k = 0; k < space.pressure_basis_count(); ++k) {
    const int f = c.full_to_free[space.pdof(k)];
    if (f >= 0) full[k] = p[f - c.free_displacement];
  }
  return full;
}

}  // namespace poroiga
