#include "shockamr/amr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "shockamr/cases.hpp"

namespace shockamr {

namespace {

Vec2 cell_gradient(const FESpace& space, const Eigen::VectorXd& u, std::size_t c, const Vec2& p) {
  const Rect b = space.mesh().cell_box(c);
  const auto& nd = space.cell_nodes(c);
  const double xi = (p.x - b.x0) / b.width();
  const double eta = (p.y - b.y0) / b.height();
  const double gx = ((1.0 - eta) * (u[nd[1]] - u[nd[0]]) + eta * (u[nd[3]] - u[nd[2]])) / b.width();
  const double gy = ((1.0 - xi) * (u[nd[2]] - u[nd[0]]) + xi * (u[nd[3]] - u[nd[1]])) / b.height();
  return {gx, gy};
}

}  // namespace

IndicatorField kelly(const FESpace& space, const StateVector& U, int m, int beta) {
  const AdaptiveMesh& mesh = space.mesh();
  const Rect& d = mesh.domain();
  const Eigen::VectorXd u = space.all_node_values(U, m, beta);
  const double g = 0.5 / std::sqrt(3.0);
  IndicatorField eta(mesh.num_cells(), 0.0);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const Rect b = mesh.cell_box(c);
    const double shift = 1e-6 * std::min(b.width(), b.height());
    double sum = 0.0;
    for (int f = 0; f < 4; ++f) {
      const bool vertical = f < 2;
      const Vec2 n = vertical ? Vec2{f == 0 ? -1.0 : 1.0, 0.0} : Vec2{0.0, f == 2 ? -1.0 : 1.0};
      const Vec2 a = vertical ? Vec2{f == 0 ? b.x0 : b.x1, b.y0} : Vec2{b.x0, f == 2 ? b.y0 : b.y1};
      const Vec2 t = vertical ? Vec2{0.0, b.height()} : Vec2{b.width(), 0.0};
      if (!d.contains(a + t * 0.5 + n * shift)) continue;
      auto neighbour = [&](double s) { return mesh.locate(a + t * s + n * shift); };
      const std::size_t n_lo = neighbour(0.25), n_hi = neighbour(0.75);
      auto integrate = [&](double s0, double s1, std::size_t nb) {
        const double len = (s1 - s0) * t.norm();
        for (double q : {0.5 - g, 0.5 + g}) {
          const Vec2 p = a + t * (s0 + q * (s1 - s0));
          const double jump = (cell_gradient(space, u, c, p) - cell_gradient(space, u, nb, p)).dot(n);
          sum += 0.5 * len * jump * jump;
        }
      };
      if (n_lo == n_hi) {
        integrate(0.0, 1.0, n_lo);
      } else {
        integrate(0.0, 0.5, n_lo);
        integrate(0.5, 1.0, n_hi);
      }
    }
    eta[c] = mesh.cell_size(c) / 24.0 * sum;
  }
  return eta;
}

IndicatorField graph_indicator(const FESpace& space, const StateVector& U, int m, int beta) {
  const std::size_t N = space.num_dofs();
  std::vector<double> node(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const double ui = U[static_cast<Eigen::Index>(i * m + beta)];
    for (std::size_t j : space.neighbours(i)) {
      const double diff = ui - U[static_cast<Eigen::Index>(j * m + beta)];
      node[i] += diff * diff;
    }
  }
  IndicatorField eta(space.mesh().num_cells(), 0.0);
  for (std::size_t c = 0; c < eta.size(); ++c)
    for (std::size_t k : space.cell_nodes(c))
      if (!space.is_hanging(k)) eta[c] += node[k];
  return eta;
}

IndicatorField indicator(IndicatorKind kind, const FESpace& space, const StateVector& U, int m, int beta) {
  return kind == IndicatorKind::Kelly ? kelly(space, U, m, beta) : graph_indicator(space, U, m, beta);
}

std::vector<Mark> mark(const IndicatorField& values, const AmrConfig& cfg) {
  if (!(cfg.refine_fraction >= 0.0 && cfg.coarsen_fraction >= 0.0 &&
        cfg.refine_fraction + cfg.coarsen_fraction <= 1.0))
    throw std::invalid_argument("invalid marking fractions");
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  const double dn = static_cast<double>(n);
  std::size_t n_ref = static_cast<std::size_t>(std::ceil(cfg.refine_fraction * dn - 1e-9));
  const auto n_coarse = static_cast<std::size_t>(std::floor(cfg.coarsen_fraction * dn + 1e-9));
  if (n >= cfg.max_cells) n_ref = 0;
  std::vector<Mark> marks(n, Mark::Keep);
  for (std::size_t k = 0; k < std::min(n_ref, n); ++k) marks[order[k]] = Mark::Refine;
  for (std::size_t k = n - std::min(n_coarse, n); k < n; ++k)
    if (k >= n_ref) marks[order[k]] = Mark::Coarsen;
  return marks;
}

std::vector<StepRecord> amr_loop(const CaseDefinition& c, const AmrConfig& cfg, const StepCallback& on_step,
                                 AmrState* final_state) {
  const int m = c.model.m();
  const auto t0 = std::chrono::steady_clock::now();
  auto space = std::make_shared<const FESpace>(AdaptiveMesh::uniform(c.nx, c.ny, c.domain));
  StateVector U = c.initial(*space);
  std::vector<StepRecord> out;
  for (int step = 0;; ++step) {
    StepRecord rec = solve_on(c, *space, U);
    rec.step = step;
    const bool last = step >= cfg.max_steps || rec.cells >= cfg.max_cells;
    AmrState st{space, U, {}};
    if (!last) st.indicator = indicator(cfg.indicator, *space, U, m, cfg.component);
    rec.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(rec);
    if (on_step) on_step(rec, st);
    if (last) {
      if (final_state) *final_state = std::move(st);
      break;
    }
    const std::vector<Mark> marks = mark(st.indicator, cfg);
    auto [mesh2, mapping] = space->mesh().adapt(marks);
    auto space2 = std::make_shared<const FESpace>(std::move(mesh2));
    U = transfer(U, m, *space, *space2, mapping);
    space = std::move(space2);
  }
  return out;
}

}  // namespace shockamr
