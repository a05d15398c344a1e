#include "shockamr/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace shockamr {

namespace {

constexpr std::array<std::array<int, 2>, 8> kNeighbourOffsets = {{
    {-1, 0}, {1, 0}, {0, -1}, {0, 1}, {-1, -1}, {1, -1}, {-1, 1}, {1, 1}}};

std::uint64_t spread_bits(std::uint64_t v) {
  v &= 0xFFFFFFull;
  v = (v | (v << 16)) & 0x0000FFFF0000FFFFull;
  v = (v | (v << 8)) & 0x00FF00FF00FF00FFull;
  v = (v | (v << 4)) & 0x0F0F0F0F0F0F0F0Full;
  v = (v | (v << 2)) & 0x3333333333333333ull;
  v = (v | (v << 1)) & 0x5555555555555555ull;
  return v;
}

struct WorkCell {
  CellKey key;
  CellOrigin origin;
};

}  // namespace

AdaptiveMesh::AdaptiveMesh(Rect domain, int nx, int ny, std::vector<CellKey> leaves)
    : domain_(domain), nx_(nx), ny_(ny), leaves_(std::move(leaves)) {
  std::sort(leaves_.begin(), leaves_.end(), [this](const CellKey& a, const CellKey& b) {
    return order_key(a) < order_key(b);
  });
  index_.reserve(leaves_.size() * 2);
  for (std::size_t c = 0; c < leaves_.size(); ++c) {
    index_.emplace(hash_key(leaves_[c]), c);
    max_level_ = std::max(max_level_, leaves_[c].level);
  }
}

AdaptiveMesh AdaptiveMesh::uniform(int nx, int ny, const Rect& domain) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("root grid dimensions must be >= 1");
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0))
    throw std::invalid_argument("domain must have positive extent");
  std::vector<CellKey> leaves;
  leaves.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) leaves.push_back({0, i, j});
  return AdaptiveMesh(domain, nx, ny, std::move(leaves));
}

std::uint64_t AdaptiveMesh::hash_key(const CellKey& k) {
  return (static_cast<std::uint64_t>(k.level) << 58) | (static_cast<std::uint64_t>(k.ix) << 29) |
         static_cast<std::uint64_t>(k.iy);
}

std::uint64_t AdaptiveMesh::order_key(const CellKey& k) const {
  const std::int64_t rx = k.ix >> k.level;
  const std::int64_t ry = k.iy >> k.level;
  const std::uint64_t root = static_cast<std::uint64_t>(ry * nx_ + rx);
  const int shift = kMaxLevel - k.level;
  const std::uint64_t ox = static_cast<std::uint64_t>(k.ix - (rx << k.level)) << shift;
  const std::uint64_t oy = static_cast<std::uint64_t>(k.iy - (ry << k.level)) << shift;
  return (root << 48) | (spread_bits(oy) << 1) | spread_bits(ox);
}

Vec2 AdaptiveMesh::lattice_point(int level, std::int64_t X, std::int64_t Y) const {
  const double fx = static_cast<double>(X) / static_cast<double>(static_cast<std::int64_t>(nx_) << level);
  const double fy = static_cast<double>(Y) / static_cast<double>(static_cast<std::int64_t>(ny_) << level);
  return {domain_.x0 + domain_.width() * fx, domain_.y0 + domain_.height() * fy};
}

Rect AdaptiveMesh::cell_box(std::size_t c) const {
  const CellKey& k = leaves_[c];
  const Vec2 lo = lattice_point(k.level, k.ix, k.iy);
  const Vec2 hi = lattice_point(k.level, k.ix + 1, k.iy + 1);
  return {lo.x, lo.y, hi.x, hi.y};
}

double AdaptiveMesh::cell_size(std::size_t c) const {
  const Rect b = cell_box(c);
  return std::max(b.width(), b.height());
}

bool AdaptiveMesh::in_domain(int level, std::int64_t ix, std::int64_t iy) const {
  return ix >= 0 && iy >= 0 && ix < (static_cast<std::int64_t>(nx_) << level) &&
         iy < (static_cast<std::int64_t>(ny_) << level);
}

std::optional<std::size_t> AdaptiveMesh::find(const CellKey& k) const {
  auto it = index_.find(hash_key(k));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> AdaptiveMesh::covering_leaf(int level, std::int64_t ix,
                                                       std::int64_t iy) const {
  if (!in_domain(level, ix, iy)) return std::nullopt;
  for (int lev = std::min(level, max_level_); lev >= 0; --lev) {
    const int s = level - lev;
    if (auto c = find({lev, ix >> s, iy >> s})) return c;
  }
  return std::nullopt;
}

std::size_t AdaptiveMesh::locate(const Vec2& p) const {
  const double fx = (p.x - domain_.x0) / domain_.width();
  const double fy = (p.y - domain_.y0) / domain_.height();
  for (int lev = 0; lev <= max_level_; ++lev) {
    const std::int64_t nxl = static_cast<std::int64_t>(nx_) << lev;
    const std::int64_t nyl = static_cast<std::int64_t>(ny_) << lev;
    const std::int64_t ix = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(fx * nxl)), 0, nxl - 1);
    const std::int64_t iy = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(fy * nyl)), 0, nyl - 1);
    if (auto c = find({lev, ix, iy})) return *c;
  }
  throw std::logic_error("locate: point not covered by any leaf");
}

bool AdaptiveMesh::is_balanced() const {
  for (const CellKey& k : leaves_) {
    for (const auto& d : kNeighbourOffsets) {
      auto n = covering_leaf(k.level, k.ix + d[0], k.iy + d[1]);
      if (n && leaves_[*n].level < k.level - 1) return false;
    }
  }
  return true;
}

std::vector<HangingInterface> AdaptiveMesh::hanging_interfaces() const {
  std::vector<HangingInterface> out;
  for (std::size_t c = 0; c < leaves_.size(); ++c) {
    const CellKey& k = leaves_[c];
    for (int f = 0; f < 4; ++f) {
      const auto& d = kNeighbourOffsets[f];
      if (!in_domain(k.level, k.ix + d[0], k.iy + d[1])) continue;
      if (covering_leaf(k.level, k.ix + d[0], k.iy + d[1])) continue;
      // Finer neighbour: midpoint of this face is hanging. Use level+1 lattice.
      const std::int64_t X = 2 * k.ix + (f == 1 ? 2 : (f == 0 ? 0 : 1));
      const std::int64_t Y = 2 * k.iy + (f == 3 ? 2 : (f == 2 ? 0 : 1));
      out.push_back({c, f, lattice_point(k.level + 1, X, Y)});
    }
  }
  return out;
}

std::pair<AdaptiveMesh, CellMapping> AdaptiveMesh::adapt(std::span<const Mark> marks) const {
  if (marks.size() != leaves_.size())
    throw std::invalid_argument("adapt: marks must cover every leaf");

  std::vector<WorkCell> work;
  work.reserve(leaves_.size() * 2);
  for (std::size_t c = 0; c < leaves_.size(); ++c) {
    CellOrigin o;
    o.old[0] = c;
    if (marks[c] == Mark::Refine && leaves_[c].level < kMaxLevel) {
      o.kind = CellOrigin::Kind::Refined;
      for (int cy = 0; cy < 2; ++cy)
        for (int cx = 0; cx < 2; ++cx) work.push_back({leaves_[c].child(cx, cy), o});
    } else {
      o.kind = CellOrigin::Kind::Same;
      work.push_back({leaves_[c], o});
    }
  }

  // Balance closure: refine any leaf more than one level coarser than a neighbour.
  for (;;) {
    AdaptiveMesh probe(domain_, nx_, ny_, [&] {
      std::vector<CellKey> ks;
      ks.reserve(work.size());
      for (const auto& w : work) ks.push_back(w.key);
      return ks;
    }());
    std::unordered_set<std::uint64_t> to_refine;
    for (const CellKey& k : probe.leaves_) {
      for (const auto& d : kNeighbourOffsets) {
        auto n = probe.covering_leaf(k.level, k.ix + d[0], k.iy + d[1]);
        if (n && probe.leaves_[*n].level < k.level - 1) to_refine.insert(hash_key(probe.leaves_[*n]));
      }
    }
    if (to_refine.empty()) break;
    std::vector<WorkCell> next;
    next.reserve(work.size() + 3 * to_refine.size());
    for (const auto& w : work) {
      if (to_refine.count(hash_key(w.key))) {
        CellOrigin o = w.origin;
        o.kind = CellOrigin::Kind::Refined;
        for (int cy = 0; cy < 2; ++cy)
          for (int cx = 0; cx < 2; ++cx) next.push_back({w.key.child(cx, cy), o});
      } else {
        next.push_back(w);
      }
    }
    work = std::move(next);
  }

  // Coarsening of unanimous sibling families that keep the balance.
  AdaptiveMesh refined(domain_, nx_, ny_, [&] {
    std::vector<CellKey> ks;
    ks.reserve(work.size());
    for (const auto& w : work) ks.push_back(w.key);
    return ks;
  }());
  std::unordered_map<std::uint64_t, std::size_t> work_index;
  for (std::size_t w = 0; w < work.size(); ++w) work_index.emplace(hash_key(work[w].key), w);

  auto coarsen_candidate = [&](const WorkCell& w) {
    return w.origin.kind == CellOrigin::Kind::Same && w.key.level > 0 &&
           marks[w.origin.old[0]] == Mark::Coarsen;
  };

  std::vector<char> removed(work.size(), 0);
  std::vector<WorkCell> parents;
  std::unordered_set<std::uint64_t> visited_parents;
  for (const auto& w : work) {
    if (!coarsen_candidate(w)) continue;
    const CellKey p = w.key.parent();
    if (!visited_parents.insert(hash_key(p)).second) continue;

    std::array<std::size_t, 4> family{};
    bool unanimous = true;
    for (int cy = 0; cy < 2 && unanimous; ++cy)
      for (int cx = 0; cx < 2 && unanimous; ++cx) {
        auto it = work_index.find(hash_key(p.child(cx, cy)));
        if (it == work_index.end() || !coarsen_candidate(work[it->second])) unanimous = false;
        else family[cy * 2 + cx] = it->second;
      }
    if (!unanimous) continue;

    // Neighbours of the parent may be at most one level finer than the parent.
    const int child_level = p.level + 1;
    bool ok = true;
    for (const auto& d : kNeighbourOffsets) {
      const std::int64_t nxp = p.ix + d[0];
      const std::int64_t nyp = p.iy + d[1];
      if (!in_domain(p.level, nxp, nyp)) continue;
      if (refined.covering_leaf(p.level, nxp, nyp)) continue;
      for (int cy = 0; cy < 2 && ok; ++cy)
        for (int cx = 0; cx < 2 && ok; ++cx) {
          if ((d[0] == 1 && cx != 0) || (d[0] == -1 && cx != 1)) continue;
          if ((d[1] == 1 && cy != 0) || (d[1] == -1 && cy != 1)) continue;
          if (!refined.covering_leaf(child_level, 2 * nxp + cx, 2 * nyp + cy)) ok = false;
        }
      if (!ok) break;
    }
    if (!ok) continue;

    CellOrigin o;
    o.kind = CellOrigin::Kind::Coarsened;
    for (int q = 0; q < 4; ++q) {
      removed[family[q]] = 1;
      o.old[q] = work[family[q]].origin.old[0];
    }
    parents.push_back({p, o});
  }

  std::vector<WorkCell> final_cells;
  final_cells.reserve(work.size());
  for (std::size_t w = 0; w < work.size(); ++w)
    if (!removed[w]) final_cells.push_back(work[w]);
  final_cells.insert(final_cells.end(), parents.begin(), parents.end());

  std::vector<CellKey> keys;
  keys.reserve(final_cells.size());
  for (const auto& w : final_cells) keys.push_back(w.key);
  AdaptiveMesh out(domain_, nx_, ny_, std::move(keys));

  CellMapping mapping;
  mapping.origin.resize(out.num_cells());
  for (const auto& w : final_cells) mapping.origin[*out.find(w.key)] = w.origin;

  std::vector<char> coarsened(leaves_.size(), 0);
  for (const auto& o : mapping.origin)
    if (o.kind == CellOrigin::Kind::Coarsened)
      for (auto c : o.old) coarsened[c] = 1;
  for (std::size_t c = 0; c < leaves_.size(); ++c)
    if (marks[c] == Mark::Coarsen && !coarsened[c]) mapping.downgraded.push_back(c);

  return {std::move(out), std::move(mapping)};
}

}  // namespace shockamr
