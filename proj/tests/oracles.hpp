#pragma once

// Independent reference implementations used only by the tests.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "shockamr/fespace.hpp"
#include "shockamr/physics.hpp"
#include "shockamr/stabilization.hpp"

namespace shockamr::testing {

inline AdaptiveMesh seven_leaf_mesh() {
  auto base = AdaptiveMesh::uniform(2, 2, {0.0, 0.0, 1.0, 1.0});
  std::vector<Mark> marks(4, Mark::Keep);
  marks[*base.find({0, 0, 0})] = Mark::Refine;
  return base.adapt(marks).first;
}

inline AdaptiveMesh random_mesh(std::uint64_t seed, int steps, int nx = 3, int ny = 2,
                                Rect domain = {0.0, 0.0, 1.5, 1.0}) {
  std::mt19937_64 rng(seed);
  auto m = AdaptiveMesh::uniform(nx, ny, domain);
  std::uniform_int_distribution<int> pick(0, 9);
  for (int s = 0; s < steps; ++s) {
    std::vector<Mark> marks(m.num_cells());
    for (auto& mk : marks) mk = pick(rng) < 3 ? Mark::Refine : (pick(rng) < 3 ? Mark::Coarsen : Mark::Keep);
    m = m.adapt(marks).first;
  }
  return m;
}

/// (N+H) x N matrix mapping conforming values to all node values.
inline Eigen::MatrixXd constraint_matrix(const FESpace& V) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(V.num_nodes()),
                                            static_cast<Eigen::Index>(V.num_dofs()));
  for (std::size_t n = 0; n < V.num_nodes(); ++n) {
    if (!V.is_hanging(n)) {
      P(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = 1.0;
      continue;
    }
    // Constraint weight = master shape function at the hanging node: find the
    // coarse cell with the hanging point on an edge and evaluate its shapes.
    for (std::size_t c = 0; c < V.mesh().num_cells(); ++c) {
      const Rect b = V.mesh().cell_box(c);
      const Vec2 x = V.coord(n);
      if (!b.contains(x)) continue;
      const auto& nodes = V.cell_nodes(c);
      if (std::find(nodes.begin(), nodes.end(), n) != nodes.end()) continue;
      const double xi = (x.x - b.x0) / b.width(), eta = (x.y - b.y0) / b.height();
      const double phi[4] = {(1 - xi) * (1 - eta), xi * (1 - eta), (1 - xi) * eta, xi * eta};
      for (int a = 0; a < 4; ++a)
        if (phi[a] != 0.0)
          P(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(nodes[a])) = phi[a];
      break;
    }
  }
  return P;
}

struct DenseOperators {
  Eigen::MatrixXd cx, cy, mass;  // over all nodes
};

/// Unconstrained operators over all nodes by 2x2 Gauss quadrature per cell.
inline DenseOperators dense_operators(const FESpace& V) {
  const auto n = static_cast<Eigen::Index>(V.num_nodes());
  DenseOperators D{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  const double g = 0.5 / std::sqrt(3.0);
  const double q[2] = {0.5 - g, 0.5 + g};
  for (std::size_t c = 0; c < V.mesh().num_cells(); ++c) {
    const Rect b = V.mesh().cell_box(c);
    const double hx = b.width(), hy = b.height();
    const auto& nodes = V.cell_nodes(c);
    for (double s : q)
      for (double t : q) {
        const double w = 0.25 * hx * hy;
        const double phi[4] = {(1 - s) * (1 - t), s * (1 - t), (1 - s) * t, s * t};
        const double dx[4] = {-(1 - t) / hx, (1 - t) / hx, -t / hx, t / hx};
        const double dy[4] = {-(1 - s) / hy, -s / hy, (1 - s) / hy, s / hy};
        for (int a = 0; a < 4; ++a)
          for (int bb = 0; bb < 4; ++bb) {
            const auto i = static_cast<Eigen::Index>(nodes[a]);
            const auto j = static_cast<Eigen::Index>(nodes[bb]);
            D.cx(i, j) += w * phi[a] * dx[bb];
            D.cy(i, j) += w * phi[a] * dy[bb];
            D.mass(i, j) += w * phi[a] * phi[bb];
          }
      }
  }
  return D;
}

template <class Rng>
StateVector random_euler_state(const FESpace& V, Rng& rng, double spread = 1.0) {
  std::uniform_real_distribution<double> rho(1.0, 1.0 + 2.0 * spread), vel(-spread, spread),
      p(0.5, 0.5 + 2.0 * spread);
  StateVector U(static_cast<Eigen::Index>(V.num_dofs() * 4));
  for (std::size_t i = 0; i < V.num_dofs(); ++i) {
    const auto u = euler::conserved(rho(rng), {1.5 + vel(rng), vel(rng)}, p(rng), 1.4);
    for (int k = 0; k < 4; ++k) U[static_cast<Eigen::Index>(i * 4 + k)] = u[k];
  }
  return U;
}

/// Galerkin residual with hanging fluxes interpolated from master fluxes.
inline Eigen::VectorXd dense_galerkin_residual(const FESpace& V, const PhysicsModel& model,
                                               const StateVector& U) {
  const int m = model.m();
  const Eigen::MatrixXd P = constraint_matrix(V);
  const DenseOperators D = dense_operators(V);
  const auto N = static_cast<Eigen::Index>(V.num_dofs());
  Eigen::MatrixXd fx(N, m), fy(N, m);
  for (Eigen::Index j = 0; j < N; ++j) {
    double ax[4], ay[4];
    model.flux(U.data() + j * m, V.coord(static_cast<std::size_t>(j)), ax, ay);
    for (int k = 0; k < m; ++k) {
      fx(j, k) = ax[k];
      fy(j, k) = ay[k];
    }
  }
  const Eigen::MatrixXd Fx = P * fx, Fy = P * fy;
  const Eigen::MatrixXd R = P.transpose() * (D.cx * Fx + D.cy * Fy);
  Eigen::VectorXd out(N * m);
  for (Eigen::Index i = 0; i < N; ++i)
    for (int k = 0; k < m; ++k) out[i * m + k] = R(i, k);
  return out;
}

/// Largest deviation of elemental_diffusion from P^T nuhat P per cell, where
/// nuhat is evaluated on all cell nodes with the Roe state of each effective
/// pair and c^e by 2x2 Gauss quadrature.
inline double elemental_diffusion_oracle_error(const FESpace& V, const PhysicsModel& model, const StateVector& U,
                                               const DetectorField& field, const StabilizationParams& p) {
  const Eigen::MatrixXd P = constraint_matrix(V);
  const bool smooth = p.variant == Variant::Smooth;
  const double gamma = model.gamma();
  double err = 0.0;
  for (std::size_t c = 0; c < V.mesh().num_cells(); ++c) {
    const Eigen::MatrixXd nu = elemental_diffusion(V, model, U, field, c, p);
    const CellDofs cd = V.cell_dofs(c);
    const Rect b = V.mesh().cell_box(c);
    const double h = V.mesh().cell_size(c);
    Eigen::Matrix4d cx = Eigen::Matrix4d::Zero(), cy = cx;
    const double g = 0.5 / std::sqrt(3.0);
    for (double s : {0.5 - g, 0.5 + g})
      for (double t : {0.5 - g, 0.5 + g}) {
        const double w = 0.25 * b.width() * b.height();
        const double phi[4] = {(1 - s) * (1 - t), s * (1 - t), (1 - s) * t, s * t};
        const double dx[4] = {-(1 - t) / b.width(), (1 - t) / b.width(), -t / b.width(), t / b.width()};
        const double dy[4] = {-(1 - s) / b.height(), -s / b.height(), (1 - s) / b.height(), s / b.height()};
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) {
            cx(i, j) += w * phi[i] * dx[j];
            cy(i, j) += w * phi[i] * dy[j];
          }
      }
    const auto& nodes = V.cell_nodes(c);
    for (int pi = 0; pi < cd.n; ++pi)
      for (int qi = 0; qi < cd.n; ++qi) {
        if (pi == qi) continue;
        const auto i = cd.dof[pi], j = cd.dof[qi];
        const auto lo = std::min(i, j), hi = std::max(i, j);
        const RoeState r = euler::roe_average(U.data() + lo * 4, U.data() + hi * 4, gamma);
        const double eps = p.eps_h(h), sigma = p.sigma_h(h);
        auto lambda = [&](int x, int y) {
          const double vc = r.v.x * cx(x, y) + r.v.y * cy(x, y);
          const double n = std::hypot(cx(x, y), cy(x, y));
          return (smooth ? std::sqrt(vc * vc + eps) : std::abs(vc)) + r.a * n;
        };
        Eigen::Matrix4d nuhat;
        for (int x = 0; x < 4; ++x)
          for (int y = 0; y < 4; ++y) {
            const double ax = field.at(nodes[x], V.num_dofs());
            const double ay = field.at(nodes[y], V.num_dofs());
            if (x == y) {
              nuhat(x, y) = ax * lambda(x, y);
            } else {
              const double s1 = ax * lambda(x, y), s2 = ay * lambda(y, x);
              nuhat(x, y) = smooth ? 0.5 * (std::sqrt((s1 - s2) * (s1 - s2) + sigma) + s1 + s2) : std::max(s1, s2);
            }
          }
        Eigen::Vector4d Pi, Pj;
        for (int x = 0; x < 4; ++x) {
          Pi[x] = P(static_cast<Eigen::Index>(nodes[x]), static_cast<Eigen::Index>(i));
          Pj[x] = P(static_cast<Eigen::Index>(nodes[x]), static_cast<Eigen::Index>(j));
        }
        err = std::max(err, std::abs(nu(pi, qi) - Pi.dot(nuhat * Pj)));
      }
  }
  return err;
}

inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const StateVector&)>& f,
                                   const StateVector& U, double rel = 1e-6) {
  const Eigen::VectorXd f0 = f(U);
  Eigen::MatrixXd J(f0.size(), U.size());
  for (Eigen::Index k = 0; k < U.size(); ++k) {
    const double tau = rel * std::max(1.0, std::abs(U[k]));
    StateVector Up = U, Um = U;
    Up[k] += tau;
    Um[k] -= tau;
    J.col(k) = (f(Up) - f(Um)) / (2.0 * tau);
  }
  return J;
}

}  // namespace shockamr::testing
