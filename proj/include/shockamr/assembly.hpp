#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "shockamr/block_sparse.hpp"
#include "shockamr/fespace.hpp"
#include "shockamr/physics.hpp"

namespace shockamr {

/// Exact Q1 integrals on one rectangular cell, local vertex order.
struct ElementalGeometry {
  std::array<std::array<Vec2, 4>, 4> c;     // c[a][b] = (grad phi_b, phi_a)
  std::array<std::array<double, 4>, 4> mass;  // (phi_b, phi_a)
};

ElementalGeometry elemental_geometry(const Rect& cell);

/// Constraint-folded scalar operators on the N(i) pattern: c_ij = (grad phi_j, phi_i)
/// split into components, and the consistent mass M_ij.
struct GroupOperators {
  std::vector<double> cx;
  std::vector<double> cy;
  std::vector<double> mass;
  std::vector<double> lumped;  // row sums of mass
  std::vector<std::size_t> transpose;  // entry index of (j, i) for entry (i, j)
};

GroupOperators assemble_operators(const FESpace& space);

/// Strong Dirichlet data: mask bit c set when component c of dof i is fixed.
struct DirichletData {
  std::vector<std::uint8_t> mask;
  StateVector values;

  bool any() const;
  bool fixed(std::size_t i, int c) const { return !mask.empty() && ((mask[i] >> c) & 1u); }
  bool all_fixed(std::size_t i, int m) const {
    return !mask.empty() && mask[i] == static_cast<std::uint8_t>((1u << m) - 1u);
  }
};

struct AssembledSystem {
  BlockSparseMatrix M;
  BlockSparseMatrix K;
  Eigen::VectorXd G;
};

/// Group-FEM mass and convection blocks: M_ij = m_ij I, K_ij = c_ij . f'(u_j).
/// Body forces are zero for every supported case, so G = 0.
AssembledSystem assemble_system(const FESpace& space, const GroupOperators& ops,
                                const PhysicsModel& model, const StateVector& U);

/// Galerkin convection term K(U) U = sum_j c_ij . f(u_j).
Eigen::VectorXd galerkin_residual(const FESpace& space, const GroupOperators& ops,
                                  const PhysicsModel& model, const StateVector& U);

/// Replace fixed rows by identity rows with the prescribed value and fold the
/// fixed columns into the right-hand side.
void apply_dirichlet(SparseMatrix& A, Eigen::VectorXd& b, const DirichletData& bc, int m);

}  // namespace shockamr
