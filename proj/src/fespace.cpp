#include "shockamr/fespace.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace shockamr {

namespace {

struct LatticeKey {
  std::int64_t X, Y;
};

}  // namespace

FESpace::FESpace(AdaptiveMesh mesh) : mesh_(std::move(mesh)) {
  build_nodes();
  build_neighbourhoods();
  build_stencils();
}

void FESpace::build_nodes() {
  const int L = mesh_.max_level();
  const std::uint64_t stride = (static_cast<std::uint64_t>(mesh_.ny()) << L) + 1;
  auto pack = [stride](std::int64_t X, std::int64_t Y) {
    return static_cast<std::uint64_t>(X) * stride + static_cast<std::uint64_t>(Y);
  };

  // Hanging lattice points and their two masters.
  std::unordered_map<std::uint64_t, std::array<LatticeKey, 2>> hanging;
  for (const auto& hi : mesh_.hanging_interfaces()) {
    const CellKey& k = mesh_.key(hi.coarse_cell);
    const std::int64_t s = std::int64_t{1} << (L - k.level);
    const std::int64_t x0 = k.ix * s, y0 = k.iy * s;
    std::array<LatticeKey, 2> ends{};
    LatticeKey mid{};
    switch (hi.face) {
      case 0: ends = {{{x0, y0}, {x0, y0 + s}}}; mid = {x0, y0 + s / 2}; break;
      case 1: ends = {{{x0 + s, y0}, {x0 + s, y0 + s}}}; mid = {x0 + s, y0 + s / 2}; break;
      case 2: ends = {{{x0, y0}, {x0 + s, y0}}}; mid = {x0 + s / 2, y0}; break;
      default: ends = {{{x0, y0 + s}, {x0 + s, y0 + s}}}; mid = {x0 + s / 2, y0 + s}; break;
    }
    hanging.emplace(pack(mid.X, mid.Y), ends);
  }

  const std::size_t nc = mesh_.num_cells();
  cell_nodes_.assign(nc, {});
  std::unordered_map<std::uint64_t, std::size_t> conforming_id;
  std::unordered_map<std::uint64_t, std::size_t> hanging_order;
  std::vector<LatticeKey> conforming_pts;
  std::vector<std::uint64_t> hanging_keys;
  std::vector<LatticeKey> hanging_pts;
  conforming_id.reserve(nc * 2);

  // First pass: temporary ids, hanging marked with the top bit.
  constexpr std::size_t kHangBit = std::size_t{1} << 62;
  for (std::size_t c = 0; c < nc; ++c) {
    const CellKey& k = mesh_.key(c);
    const std::int64_t s = std::int64_t{1} << (L - k.level);
    for (int a = 0; a < 4; ++a) {
      const std::int64_t X = (k.ix + (a & 1)) * s;
      const std::int64_t Y = (k.iy + (a >> 1)) * s;
      const std::uint64_t key = pack(X, Y);
      if (hanging.count(key)) {
        auto [it, fresh] = hanging_order.emplace(key, hanging_keys.size());
        if (fresh) {
          hanging_keys.push_back(key);
          hanging_pts.push_back({X, Y});
        }
        cell_nodes_[c][a] = kHangBit | it->second;
      } else {
        auto [it, fresh] = conforming_id.emplace(key, conforming_pts.size());
        if (fresh) conforming_pts.push_back({X, Y});
        cell_nodes_[c][a] = it->second;
      }
    }
  }
  num_conforming_ = conforming_pts.size();
  const std::size_t total = num_conforming_ + hanging_pts.size();
  for (auto& nodes : cell_nodes_)
    for (auto& n : nodes)
      if (n & kHangBit) n = num_conforming_ + (n & ~kHangBit);

  coords_.resize(total);
  for (std::size_t i = 0; i < num_conforming_; ++i)
    coords_[i] = mesh_.lattice_point(L, conforming_pts[i].X, conforming_pts[i].Y);
  for (std::size_t h = 0; h < hanging_pts.size(); ++h)
    coords_[num_conforming_ + h] = mesh_.lattice_point(L, hanging_pts[h].X, hanging_pts[h].Y);

  expand_ptr_.assign(total + 1, 0);
  expand_.clear();
  expand_.reserve(total + hanging_pts.size());
  for (std::size_t i = 0; i < num_conforming_; ++i) {
    expand_.push_back({i, 1.0});
    expand_ptr_[i + 1] = expand_.size();
  }
  std::vector<std::vector<std::size_t>> inv(num_conforming_);
  for (std::size_t h = 0; h < hanging_pts.size(); ++h) {
    const auto& ends = hanging.at(hanging_keys[h]);
    for (const auto& e : ends) {
      auto it = conforming_id.find(pack(e.X, e.Y));
      if (it == conforming_id.end())
        throw std::logic_error("hanging node master is not a conforming node");
      expand_.push_back({it->second, 0.5});
      inv[it->second].push_back(num_conforming_ + h);
    }
    expand_ptr_[num_conforming_ + h + 1] = expand_.size();
  }
  inverse_ptr_.assign(num_conforming_ + 1, 0);
  inverse_.clear();
  for (std::size_t i = 0; i < num_conforming_; ++i) {
    inverse_.insert(inverse_.end(), inv[i].begin(), inv[i].end());
    inverse_ptr_[i + 1] = inverse_.size();
  }

  node_cells_ptr_.assign(total + 1, 0);
  for (const auto& nodes : cell_nodes_)
    for (auto n : nodes) ++node_cells_ptr_[n + 1];
  for (std::size_t n = 0; n < total; ++n) node_cells_ptr_[n + 1] += node_cells_ptr_[n];
  node_cells_.assign(node_cells_ptr_.back(), 0);
  std::vector<std::size_t> fill(node_cells_ptr_.begin(), node_cells_ptr_.end() - 1);
  for (std::size_t c = 0; c < nc; ++c)
    for (auto n : cell_nodes_[c]) node_cells_[fill[n]++] = c;

  node_size_.assign(total, std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < nc; ++c) {
    const double h = mesh_.cell_size(c);
    for (auto n : cell_nodes_[c]) node_size_[n] = std::min(node_size_[n], h);
  }
}

CellDofs FESpace::cell_dofs(std::size_t c) const {
  CellDofs out;
  for (int a = 0; a < 4; ++a) {
    for (const auto& dw : expansion(cell_nodes_[c][a])) {
      int k = 0;
      while (k < out.n && out.dof[k] != dw.dof) ++k;
      if (k == out.n) {
        out.dof[k] = dw.dof;
        for (int b = 0; b < 4; ++b) out.C[b][k] = 0.0;
        ++out.n;
      }
      out.C[a][k] += dw.weight;
    }
  }
  return out;
}

void FESpace::build_neighbourhoods() {
  std::vector<std::vector<std::size_t>> rows(num_conforming_);
  for (std::size_t c = 0; c < mesh_.num_cells(); ++c) {
    const CellDofs cd = cell_dofs(c);
    for (int a = 0; a < cd.n; ++a)
      for (int b = 0; b < cd.n; ++b) rows[cd.dof[a]].push_back(cd.dof[b]);
  }
  nbr_ptr_.assign(num_conforming_ + 1, 0);
  nbr_.clear();
  for (std::size_t i = 0; i < num_conforming_; ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    nbr_.insert(nbr_.end(), r.begin(), r.end());
    nbr_ptr_[i + 1] = nbr_.size();
  }
}

std::size_t FESpace::find_neighbour(std::size_t i, std::size_t j) const {
  auto first = nbr_.begin() + static_cast<std::ptrdiff_t>(nbr_ptr_[i]);
  auto last = nbr_.begin() + static_cast<std::ptrdiff_t>(nbr_ptr_[i + 1]);
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return npos;
  return static_cast<std::size_t>(it - nbr_.begin());
}

std::array<double, 4> FESpace::shape_values(std::size_t c, const Vec2& p) const {
  const Rect b = mesh_.cell_box(c);
  const double xi = (p.x - b.x0) / b.width();
  const double eta = (p.y - b.y0) / b.height();
  return {(1.0 - xi) * (1.0 - eta), xi * (1.0 - eta), (1.0 - xi) * eta, xi * eta};
}

void FESpace::build_stencils() {
  stencil_.assign(nbr_.size(), {});
  stencil_ptr_.assign(nbr_.size() + 1, 0);
  stencil_weights_.clear();
  stencil_weights_.reserve(nbr_.size() * 3);

  for (std::size_t i = 0; i < num_conforming_; ++i) {
    const Vec2 xi = coords_[i];
    for (std::size_t e = nbr_ptr_[i]; e < nbr_ptr_[i + 1]; ++e) {
      const std::size_t j = nbr_[e];
      StencilData& sd = stencil_[e];
      sd = {xi, 0.0, 0.0, true};
      if (j != i) {
        const Vec2 d = xi - coords_[j];
        sd.r = d.norm();
        std::size_t best = std::numeric_limits<std::size_t>::max();
        int best_vertex = -1;
        for (auto c : node_cells(i)) {
          if (c >= best) continue;
          int a = 0;
          while (cell_nodes_[c][a] != i) ++a;
          const bool x_ok = (a & 1) ? d.x <= 0.0 : d.x >= 0.0;
          const bool y_ok = (a >> 1) ? d.y <= 0.0 : d.y >= 0.0;
          if (x_ok && y_ok) {
            best = c;
            best_vertex = a;
          }
        }
        if (best_vertex >= 0) {
          const Rect b = mesh_.cell_box(best);
          const double tx = d.x != 0.0 ? b.width() / std::abs(d.x) : std::numeric_limits<double>::infinity();
          const double ty = d.y != 0.0 ? b.height() / std::abs(d.y) : std::numeric_limits<double>::infinity();
          const double t = std::min(tx, ty);
          Vec2 xs = xi + d * t;
          if (tx <= ty) xs.x = (best_vertex & 1) ? b.x0 : b.x1;
          if (ty <= tx) xs.y = (best_vertex >> 1) ? b.y0 : b.y1;
          sd.x_sym = xs;
          sd.r_sym = (xs - xi).norm();
          sd.reduced = false;
          const auto phi = shape_values(best, xs);
          const std::size_t start = stencil_weights_.size();
          for (int a = 0; a < 4; ++a) {
            if (phi[a] == 0.0) continue;
            for (const auto& dw : expansion(cell_nodes_[best][a])) {
              auto first = stencil_weights_.begin() + static_cast<std::ptrdiff_t>(start);
              auto it = std::find_if(first, stencil_weights_.end(),
                                     [&](const DofWeight& w) { return w.dof == dw.dof; });
              if (it == stencil_weights_.end()) stencil_weights_.push_back({dw.dof, phi[a] * dw.weight});
              else it->weight += phi[a] * dw.weight;
            }
          }
        }
      }
      stencil_ptr_[e + 1] = stencil_weights_.size();
    }
  }
}

SymmetricStencil FESpace::stencil(std::size_t i, std::size_t entry) const {
  (void)i;
  const StencilData& sd = stencil_[entry];
  return {sd.x_sym, sd.r, sd.r_sym, sd.reduced,
          {stencil_weights_.data() + stencil_ptr_[entry],
           stencil_weights_.data() + stencil_ptr_[entry + 1]}};
}

SymmetricStencil FESpace::symmetric_stencil(std::size_t i, std::size_t j) const {
  const std::size_t e = find_neighbour(i, j);
  if (e == npos || i == j) throw std::invalid_argument("symmetric_stencil: j must be in N(i) \\ {i}");
  return stencil(i, e);
}

double FESpace::node_value(const StateVector& U, int m, std::size_t node, int comp) const {
  double v = 0.0;
  for (const auto& dw : expansion(node)) v += dw.weight * U[static_cast<Eigen::Index>(dw.dof * m + comp)];
  return v;
}

Eigen::VectorXd FESpace::all_node_values(const StateVector& U, int m, int comp) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(num_nodes()));
  for (std::size_t n = 0; n < num_nodes(); ++n) v[static_cast<Eigen::Index>(n)] = node_value(U, m, n, comp);
  return v;
}

double FESpace::evaluate(const StateVector& U, int m, std::size_t c, const Vec2& p, int comp) const {
  const auto phi = shape_values(c, p);
  double v = 0.0;
  for (int a = 0; a < 4; ++a) v += phi[a] * node_value(U, m, cell_nodes_[c][a], comp);
  return v;
}

StateVector transfer(const StateVector& u_old, int m, const FESpace& old_space,
                     const FESpace& new_space, const CellMapping& mapping) {
  if (mapping.origin.size() != new_space.mesh().num_cells())
    throw std::invalid_argument("transfer: mapping does not match the new mesh");
  StateVector out(static_cast<Eigen::Index>(new_space.num_dofs() * m));
  std::vector<char> done(new_space.num_dofs(), 0);
  for (std::size_t c = 0; c < new_space.mesh().num_cells(); ++c) {
    const CellOrigin& o = mapping.origin[c];
    for (int a = 0; a < 4; ++a) {
      const std::size_t n = new_space.cell_nodes(c)[a];
      if (new_space.is_hanging(n) || done[n]) continue;
      const std::size_t old_cell = o.kind == CellOrigin::Kind::Coarsened ? o.old[a] : o.old[0];
      for (int comp = 0; comp < m; ++comp)
        out[static_cast<Eigen::Index>(n * m + comp)] =
            old_space.evaluate(u_old, m, old_cell, new_space.coord(n), comp);
      done[n] = 1;
    }
  }
  return out;
}

}  // namespace shockamr
