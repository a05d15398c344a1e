#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shockamr/types.hpp"

namespace shockamr {

/// Leaf cell address: refinement level and integer position in the level grid
/// of (nx * 2^level) x (ny * 2^level) cells.
struct CellKey {
  int level = 0;
  std::int64_t ix = 0;
  std::int64_t iy = 0;

  bool operator==(const CellKey&) const = default;
  CellKey parent() const { return {level - 1, ix >> 1, iy >> 1}; }
  CellKey child(int cx, int cy) const { return {level + 1, 2 * ix + cx, 2 * iy + cy}; }
};

enum class Mark : std::int8_t { Coarsen = -1, Keep = 0, Refine = 1 };

/// Provenance of a leaf of an adapted mesh with respect to the previous leaves.
struct CellOrigin {
  enum class Kind : std::uint8_t { Same, Refined, Coarsened };
  Kind kind = Kind::Same;
  /// Same / Refined: old[0] is the old leaf (ancestor for Refined).
  /// Coarsened: the four old children in (cx, cy) lexicographic order.
  std::array<std::size_t, 4> old{};
};

struct CellMapping {
  std::vector<CellOrigin> origin;  // one entry per new leaf
  /// Old leaves whose coarsen mark was dropped (non-unanimous siblings or balance).
  std::vector<std::size_t> downgraded;
};

/// A coarse leaf face carrying a hanging node at its midpoint.
struct HangingInterface {
  std::size_t coarse_cell;
  int face;  // 0: x-, 1: x+, 2: y-, 3: y+
  Vec2 midpoint;
};

/// 2:1 balanced quadtree forest over a rectangle with an nx x ny root grid.
/// Leaves are stored in (root cell, Morton) order; the mesh is immutable and
/// adapt() returns a new one.
class AdaptiveMesh {
 public:
  static constexpr int kMaxLevel = 24;

  static AdaptiveMesh uniform(int nx, int ny, const Rect& domain);

  std::size_t num_cells() const { return leaves_.size(); }
  const CellKey& key(std::size_t c) const { return leaves_[c]; }
  std::span<const CellKey> leaves() const { return leaves_; }
  const Rect& domain() const { return domain_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int max_level() const { return max_level_; }

  Rect cell_box(std::size_t c) const;
  /// Longest side of the cell.
  double cell_size(std::size_t c) const;
  /// Physical coordinate of lattice point (X, Y) at the given level.
  Vec2 lattice_point(int level, std::int64_t X, std::int64_t Y) const;

  bool in_domain(int level, std::int64_t ix, std::int64_t iy) const;
  std::optional<std::size_t> find(const CellKey& k) const;
  /// Leaf equal to or containing the region (level, ix, iy); empty when the
  /// region is covered by finer leaves (or lies outside the domain).
  std::optional<std::size_t> covering_leaf(int level, std::int64_t ix, std::int64_t iy) const;
  /// Leaf containing p (points on shared edges go to the upper/right cell).
  std::size_t locate(const Vec2& p) const;

  /// Refine / coarsen according to marks and restore 2:1 balance (edge and
  /// corner neighbours). Coarsening needs four sibling leaves marked coarsen
  /// and must not break balance; refinement wins over coarsening.
  std::pair<AdaptiveMesh, CellMapping> adapt(std::span<const Mark> marks) const;

  std::vector<HangingInterface> hanging_interfaces() const;

  /// Fast neighbour-lookup balance check.
  bool is_balanced() const;

 private:
  AdaptiveMesh(Rect domain, int nx, int ny, std::vector<CellKey> leaves);
  static std::uint64_t hash_key(const CellKey& k);
  std::uint64_t order_key(const CellKey& k) const;

  Rect domain_;
  int nx_ = 1;
  int ny_ = 1;
  int max_level_ = 0;
  std::vector<CellKey> leaves_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

}  // namespace shockamr
