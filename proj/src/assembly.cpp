#include "shockamr/assembly.hpp"

#include <algorithm>

namespace shockamr {

ElementalGeometry elemental_geometry(const Rect& cell) {
  const double hx = cell.width();
  const double hy = cell.height();
  // 1D: M1[a][b] = (N_b, N_a), D1[a][b] = (N_b', N_a).
  const double Mx[2][2] = {{hx / 3.0, hx / 6.0}, {hx / 6.0, hx / 3.0}};
  const double My[2][2] = {{hy / 3.0, hy / 6.0}, {hy / 6.0, hy / 3.0}};
  const double D[2][2] = {{-0.5, 0.5}, {-0.5, 0.5}};
  ElementalGeometry g;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const int ax = a & 1, ay = a >> 1, bx = b & 1, by = b >> 1;
      g.c[a][b] = {D[ax][bx] * My[ay][by], Mx[ax][bx] * D[ay][by]};
      g.mass[a][b] = Mx[ax][bx] * My[ay][by];
    }
  return g;
}

GroupOperators assemble_operators(const FESpace& space) {
  const auto& idx = space.neighbour_index();
  GroupOperators ops;
  ops.cx.assign(idx.size(), 0.0);
  ops.cy.assign(idx.size(), 0.0);
  ops.mass.assign(idx.size(), 0.0);
  for (std::size_t c = 0; c < space.mesh().num_cells(); ++c) {
    const ElementalGeometry g = elemental_geometry(space.mesh().cell_box(c));
    const CellDofs cd = space.cell_dofs(c);
    for (int p = 0; p < cd.n; ++p) {
      const std::size_t i = cd.dof[p];
      for (int q = 0; q < cd.n; ++q) {
        const std::size_t e = space.find_neighbour(i, cd.dof[q]);
        double cx = 0.0, cy = 0.0, mm = 0.0;
        for (int a = 0; a < 4; ++a) {
          const double wa = cd.C[a][p];
          if (wa == 0.0) continue;
          for (int b = 0; b < 4; ++b) {
            const double w = wa * cd.C[b][q];
            if (w == 0.0) continue;
            cx += w * g.c[a][b].x;
            cy += w * g.c[a][b].y;
            mm += w * g.mass[a][b];
          }
        }
        ops.cx[e] += cx;
        ops.cy[e] += cy;
        ops.mass[e] += mm;
      }
    }
  }
  const std::size_t N = space.num_dofs();
  ops.lumped.assign(N, 0.0);
  ops.transpose.assign(idx.size(), 0);
  for (std::size_t i = 0; i < N; ++i) {
    const auto nb = space.neighbours(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const std::size_t e = space.neighbour_offset(i) + k;
      ops.lumped[i] += ops.mass[e];
      ops.transpose[e] = space.find_neighbour(nb[k], i);
    }
  }
  return ops;
}

bool DirichletData::any() const {
  return std::any_of(mask.begin(), mask.end(), [](std::uint8_t b) { return b != 0; });
}

AssembledSystem assemble_system(const FESpace& space, const GroupOperators& ops,
                                const PhysicsModel& model, const StateVector& U) {
  const int m = model.m();
  const auto& ptr = space.neighbour_ptr();
  const auto& idx = space.neighbour_index();
  AssembledSystem sys{BlockSparseMatrix(ptr, idx, m), BlockSparseMatrix(ptr, idx, m),
                      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.num_dofs() * m))};
  std::vector<Block> ax(space.num_dofs()), ay(space.num_dofs());
  for (std::size_t j = 0; j < space.num_dofs(); ++j) {
    const double* uj = U.data() + j * m;
    if (!model.is_scalar()) euler::check_admissible(uj, model.gamma(), static_cast<std::int64_t>(j));
    ax[j] = model.flux_jacobian(uj, space.coord(j), {1.0, 0.0});
    ay[j] = model.flux_jacobian(uj, space.coord(j), {0.0, 1.0});
  }
  for (std::size_t i = 0; i < space.num_dofs(); ++i)
    for (std::size_t e = ptr[i]; e < ptr[i + 1]; ++e) {
      const std::size_t j = idx[e];
      for (int r = 0; r < m; ++r) {
        sys.M(e, r, r) = ops.mass[e];
        for (int c = 0; c < m; ++c) sys.K(e, r, c) = ops.cx[e] * ax[j](r, c) + ops.cy[e] * ay[j](r, c);
      }
    }
  return sys;
}

Eigen::VectorXd galerkin_residual(const FESpace& space, const GroupOperators& ops,
                                  const PhysicsModel& model, const StateVector& U) {
  const int m = model.m();
  const std::size_t N = space.num_dofs();
  Eigen::MatrixXd fx(m, static_cast<Eigen::Index>(N)), fy(m, static_cast<Eigen::Index>(N));
  for (std::size_t j = 0; j < N; ++j) {
    const double* uj = U.data() + j * m;
    if (!model.is_scalar()) euler::check_admissible(uj, model.gamma(), static_cast<std::int64_t>(j));
    model.flux(uj, space.coord(j), fx.col(static_cast<Eigen::Index>(j)).data(),
               fy.col(static_cast<Eigen::Index>(j)).data());
  }
  Eigen::VectorXd R = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N * m));
  const auto& ptr = space.neighbour_ptr();
  const auto& idx = space.neighbour_index();
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t e = ptr[i]; e < ptr[i + 1]; ++e) {
      const auto j = static_cast<Eigen::Index>(idx[e]);
      R.segment(static_cast<Eigen::Index>(i * m), m) += ops.cx[e] * fx.col(j) + ops.cy[e] * fy.col(j);
    }
  return R;
}

void apply_dirichlet(SparseMatrix& A, Eigen::VectorXd& b, const DirichletData& bc, int m) {
  if (!bc.any()) return;
  const Eigen::Index n = A.rows();
  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < bc.mask.size(); ++i)
    for (int c = 0; c < m; ++c)
      if (bc.fixed(i, c)) fixed[i * m + c] = 1;
  for (Eigen::Index r = 0; r < n; ++r) {
    for (SparseMatrix::InnerIterator it(A, r); it; ++it) {
      const auto c = it.col();
      if (fixed[static_cast<std::size_t>(r)]) {
        it.valueRef() = (c == r) ? 1.0 : 0.0;
      } else if (fixed[static_cast<std::size_t>(c)]) {
        b[r] -= it.value() * bc.values[c];
        it.valueRef() = 0.0;
      }
    }
    if (fixed[static_cast<std::size_t>(r)]) b[r] = bc.values[r];
  }
}

}  // namespace shockamr
