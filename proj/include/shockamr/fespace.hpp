#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "shockamr/mesh.hpp"

namespace shockamr {

/// Nodal values over conforming dofs, node-major: entry i*m + comp.
using StateVector = Eigen::VectorXd;

struct DofWeight {
  std::size_t dof;
  double weight;
};

/// Point on the line through x_i and x_j, opposite to x_j, where the ray
/// leaves the patch of x_i.
struct SymmetricStencil {
  Vec2 x_sym;
  double r = 0.0;      // |x_j - x_i|
  double r_sym = 0.0;  // |x_sym - x_i|
  bool reduced = false;
  std::span<const DofWeight> weights;  // over conforming dofs
};

/// Effective (constraint-folded) dofs of one cell: shape function a of the
/// cell equals sum_k C[a][k] * phi_{dof[k]} on that cell.
struct CellDofs {
  int n = 0;
  std::array<std::size_t, 8> dof{};
  std::array<std::array<double, 8>, 4> C{};
};

/// Q1 space on an adaptive mesh. Local vertex order on a cell is
/// 0:(x0,y0) 1:(x1,y0) 2:(x0,y1) 3:(x1,y1). Conforming nodes are numbered
/// [0, N) and hanging nodes [N, N+H).
class FESpace {
 public:
  explicit FESpace(AdaptiveMesh mesh);

  const AdaptiveMesh& mesh() const { return mesh_; }
  std::size_t num_dofs() const { return num_conforming_; }
  std::size_t num_hanging() const { return coords_.size() - num_conforming_; }
  std::size_t num_nodes() const { return coords_.size(); }
  bool is_hanging(std::size_t node) const { return node >= num_conforming_; }
  const Vec2& coord(std::size_t node) const { return coords_[node]; }

  const std::array<std::size_t, 4>& cell_nodes(std::size_t c) const { return cell_nodes_[c]; }
  CellDofs cell_dofs(std::size_t c) const;

  /// Masters and weights of a node; a conforming node maps to itself with weight 1.
  std::span<const DofWeight> expansion(std::size_t node) const {
    return {expand_.data() + expand_ptr_[node], expand_.data() + expand_ptr_[node + 1]};
  }
  /// Hanging nodes constrained by conforming dof i.
  std::span<const std::size_t> constrained_by(std::size_t i) const {
    return {inverse_.data() + inverse_ptr_[i], inverse_.data() + inverse_ptr_[i + 1]};
  }

  /// Sorted neighbourhood N(i) over conforming dofs (includes i).
  std::span<const std::size_t> neighbours(std::size_t i) const {
    return {nbr_.data() + nbr_ptr_[i], nbr_.data() + nbr_ptr_[i + 1]};
  }
  std::size_t neighbour_offset(std::size_t i) const { return nbr_ptr_[i]; }
  const std::vector<std::size_t>& neighbour_ptr() const { return nbr_ptr_; }
  const std::vector<std::size_t>& neighbour_index() const { return nbr_; }
  /// Position of j in N(i) as an index into neighbour_index(), or npos.
  std::size_t find_neighbour(std::size_t i, std::size_t j) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Cells having the node as a vertex.
  std::span<const std::size_t> node_cells(std::size_t node) const {
    return {node_cells_.data() + node_cells_ptr_[node],
            node_cells_.data() + node_cells_ptr_[node + 1]};
  }
  /// Smallest adjacent cell size.
  double node_size(std::size_t node) const { return node_size_[node]; }

  /// Stencil for the k-th entry of N(i) (k indexes neighbour_index()).
  SymmetricStencil stencil(std::size_t i, std::size_t entry) const;
  SymmetricStencil symmetric_stencil(std::size_t i, std::size_t j) const;

  /// Value of component comp at any node (hanging values interpolated).
  double node_value(const StateVector& U, int m, std::size_t node, int comp) const;
  /// Nodal values at every node (conforming then hanging), one component.
  Eigen::VectorXd all_node_values(const StateVector& U, int m, int comp) const;
  /// Bilinear evaluation of the FE function in cell c at physical point p.
  double evaluate(const StateVector& U, int m, std::size_t c, const Vec2& p, int comp) const;

  /// Bilinear shape values of cell c at p (local vertex order).
  std::array<double, 4> shape_values(std::size_t c, const Vec2& p) const;

 private:
  void build_nodes();
  void build_neighbourhoods();
  void build_stencils();

  AdaptiveMesh mesh_;
  std::size_t num_conforming_ = 0;
  std::vector<Vec2> coords_;
  std::vector<std::array<std::size_t, 4>> cell_nodes_;
  std::vector<std::size_t> expand_ptr_;
  std::vector<DofWeight> expand_;
  std::vector<std::size_t> inverse_ptr_;
  std::vector<std::size_t> inverse_;
  std::vector<std::size_t> nbr_ptr_;
  std::vector<std::size_t> nbr_;
  std::vector<std::size_t> node_cells_ptr_;
  std::vector<std::size_t> node_cells_;
  std::vector<double> node_size_;

  struct StencilData {
    Vec2 x_sym;
    double r;
    double r_sym;
    bool reduced;
  };
  std::vector<StencilData> stencil_;      // parallel to nbr_
  std::vector<std::size_t> stencil_ptr_;  // into stencil_weights_
  std::vector<DofWeight> stencil_weights_;
};

/// Nodal interpolation of the old FE function onto the new space.
StateVector transfer(const StateVector& u_old, int m, const FESpace& old_space,
                     const FESpace& new_space, const CellMapping& mapping);

}  // namespace shockamr
