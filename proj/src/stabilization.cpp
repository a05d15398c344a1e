#include "shockamr/stabilization.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "shockamr/smooth.hpp"

namespace shockamr {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

bool on_boundary(const Rect& d, const Vec2& x) {
  return x.x == d.x0 || x.x == d.x1 || x.y == d.y0 || x.y == d.y1;
}

/// Component detector at i; grad (if given) receives d alpha / d u_k^beta for
/// every k in N(i), indexed by position in N(i).
double component_detector(const FESpace& V, const StateVector& U, int m, int beta, std::size_t i,
                          const StabilizationParams& p, std::vector<double>* grad) {
  const auto nb = V.neighbours(i);
  const std::size_t off = V.neighbour_offset(i);
  const double ui = U[ix(i * m + beta)];
  const bool smooth = p.variant == Variant::Smooth;
  const double eps = p.eps_h(V.node_size(i));
  std::size_t self = 0;
  while (nb[self] != i) ++self;

  std::vector<double> dS, dD;
  if (grad) {
    dS.assign(nb.size(), 0.0);
    dD.assign(nb.size(), 0.0);
  }
  double S = 0.0, D = 0.0;
  auto add_term = [&](double diff, double r, auto&& scatter) {
    const double d = diff / r;
    S += d;
    if (smooth) {
      const smooth::D1 ad = smooth::absd(d, eps);
      D += ad.v;
      if (grad) scatter(1.0 / r, ad.dx / r);
    } else {
      D += std::abs(d);
    }
  };

  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (k == self) continue;
    const SymmetricStencil st = V.stencil(i, off + k);
    add_term(U[ix(nb[k] * m + beta)] - ui, st.r, [&](double s, double t) {
      dS[k] += s;
      dS[self] -= s;
      dD[k] += t;
      dD[self] -= t;
    });
    if (st.reduced) continue;
    double usym = 0.0;
    for (const auto& w : st.weights) usym += w.weight * U[ix(w.dof * m + beta)];
    add_term(usym - ui, st.r_sym, [&](double s, double t) {
      for (const auto& w : st.weights) {
        const std::size_t pos = V.find_neighbour(i, w.dof) - off;
        dS[pos] += s * w.weight;
        dD[pos] += t * w.weight;
      }
      dS[self] -= s;
      dD[self] -= t;
    });
  }

  if (!smooth) {
    if (D == 0.0) return 0.0;
    return std::pow(std::min(1.0, std::abs(S) / D), p.q);
  }
  const double z = p.zeta_h();
  const smooth::D1 an = smooth::absn(S, eps);
  const double x = (an.v + z) / (D + z);
  const smooth::D1 Z = smooth::limit(x);
  const double alpha = std::pow(Z.v, p.q);
  if (grad) {
    const double dalpha_dx = p.q * std::pow(Z.v, p.q - 1.0) * Z.dx;
    const double dx_dS = an.dx / (D + z);
    const double dx_dD = -x / (D + z);
    grad->assign(nb.size(), 0.0);
    for (std::size_t k = 0; k < nb.size(); ++k) (*grad)[k] = dalpha_dx * (dx_dS * dS[k] + dx_dD * dD[k]);
  }
  return alpha;
}

struct WaveSpeed {
  double v;
  Vec2 dv;   // d/d velocity
  double da; // d/d sound speed
};

WaveSpeed wave_speed(const RoeState& r, const Vec2& c, double eps, bool smooth) {
  const double vc = r.v.dot(c);
  const double nc = c.norm();
  if (!smooth) return {std::abs(vc) + r.a * nc, {}, nc};
  const smooth::D1 an = smooth::absn(vc, eps);
  return {an.v + r.a * nc, c * an.dx, nc};
}

struct PairMax {
  double v, dx, dy;
};

PairMax pair_max(double x, double y, double sigma, bool smooth) {
  if (smooth) {
    const smooth::D2 s = smooth::smax(x, y, sigma);
    return {s.v, s.dx, s.dy};
  }
  return x >= y ? PairMax{x, 1.0, 0.0} : PairMax{y, 0.0, 1.0};
}

/// Max of two detector values; the smooth variant is capped at one.
PairMax detector_max(double x, double y, double sigma, bool smooth) {
  PairMax s = pair_max(x, y, sigma, smooth);
  if (smooth) {
    const smooth::D1 c = smooth::cap(s.v, std::sqrt(sigma));
    s = {c.v, c.dx * s.dx, c.dx * s.dy};
  }
  return s;
}

/// Contribution of one cell to nu_ij for the effective-dof pair (p, q).
struct CellPair {
  double nu = 0.0;
  std::array<double, 4> dalpha{};  // per local vertex
  Eigen::Matrix<double, 1, 3> dvel = Eigen::Matrix<double, 1, 3>::Zero();  // (v_x, v_y, a)
};

CellPair cell_pair(const ElementalGeometry& g, const CellDofs& cd, int p, int q,
                   const std::array<double, 4>& alpha, const RoeState& r, double eps, double sigma,
                   bool smooth) {
  CellPair out;
  for (int a = 0; a < 4; ++a) {
    const double wa = cd.C[a][p];
    if (wa == 0.0) continue;
    for (int b = 0; b < 4; ++b) {
      const double w = wa * cd.C[b][q];
      if (w == 0.0) continue;
      if (a == b) {
        const WaveSpeed l = wave_speed(r, g.c[a][a], eps, smooth);
        out.nu += w * alpha[a] * l.v;
        out.dalpha[a] += w * l.v;
        out.dvel += w * alpha[a] * Eigen::Matrix<double, 1, 3>(l.dv.x, l.dv.y, l.da);
        continue;
      }
      const WaveSpeed lab = wave_speed(r, g.c[a][b], eps, smooth);
      const WaveSpeed lba = wave_speed(r, g.c[b][a], eps, smooth);
      const PairMax s = pair_max(alpha[a] * lab.v, alpha[b] * lba.v, sigma, smooth);
      out.nu += w * s.v;
      out.dalpha[a] += w * s.dx * lab.v;
      out.dalpha[b] += w * s.dy * lba.v;
      out.dvel += w * s.dx * alpha[a] * Eigen::Matrix<double, 1, 3>(lab.dv.x, lab.dv.y, lab.da);
      out.dvel += w * s.dy * alpha[b] * Eigen::Matrix<double, 1, 3>(lba.dv.x, lba.dv.y, lba.da);
    }
  }
  return out;
}

std::array<double, 4> vertex_alpha(const FESpace& V, const DetectorField& f, std::size_t c) {
  std::array<double, 4> a{};
  for (int k = 0; k < 4; ++k) a[k] = f.at(V.cell_nodes(c)[k], V.num_dofs());
  return a;
}

/// Adds coef * d alpha_node to column(s) of the alpha-derivative triplets.
void scatter_alpha(const FESpace& V, const DetectorField& f, std::size_t node, Eigen::Index row,
                   double coef, Triplets& out) {
  if (coef == 0.0) return;
  if (!V.is_hanging(node)) {
    out.emplace_back(row, ix(node), coef);
    return;
  }
  const auto masters = V.expansion(node);
  const auto& part = f.hanging_partials[node - V.num_dofs()];
  for (std::size_t k = 0; k < masters.size(); ++k)
    if (part[k] != 0.0) out.emplace_back(row, ix(masters[k].dof), coef * part[k]);
}

}  // namespace

double StabilizationParams::sigma_h(double h) const {
  return sigma * lambda_max * lambda_max * std::pow(L, 2.0 * (d - 3)) * std::pow(h, 4);
}

double StabilizationParams::eps_h(double h) const { return eps * std::pow(L, -4.0) * h * h; }

double global_wave_speed(const FESpace& space, const PhysicsModel& model, const StateVector& U) {
  double lmax = 0.0;
  const int m = model.m();
  for (std::size_t i = 0; i < space.num_dofs(); ++i) {
    if (model.is_scalar()) {
      lmax = std::max(lmax, model.velocity(space.coord(i)).norm());
      continue;
    }
    const double* u = U.data() + i * m;
    euler::check_admissible(u, model.gamma(), static_cast<std::int64_t>(i));
    const double rho = u[0];
    const double v = std::hypot(u[1], u[2]) / rho;
    lmax = std::max(lmax, v + std::sqrt(model.gamma() * euler::pressure(u, model.gamma()) / rho));
  }
  return lmax;
}

JumpMean jump_mean(const FESpace& space, const StateVector& U, int m, int beta, std::size_t i,
                   std::size_t entry) {
  const SymmetricStencil st = space.stencil(i, entry);
  const double ui = U[ix(i * m + beta)];
  const double d1 = (U[ix(space.neighbour_index()[entry] * m + beta)] - ui) / st.r;
  if (st.reduced) return {d1, 0.5 * std::abs(d1)};
  double usym = 0.0;
  for (const auto& w : st.weights) usym += w.weight * U[ix(w.dof * m + beta)];
  const double d2 = (usym - ui) / st.r_sym;
  return {d1 + d2, 0.5 * (std::abs(d1) + std::abs(d2))};
}

double shock_detector(const FESpace& space, const StateVector& U, int m, int beta, std::size_t i,
                      const StabilizationParams& params) {
  return component_detector(space, U, m, beta, i, params, nullptr);
}

DetectorField constant_detector(const FESpace& space, double value) {
  DetectorField f;
  f.alpha = Eigen::VectorXd::Constant(ix(space.num_dofs()), value);
  f.hanging_alpha = Eigen::VectorXd::Constant(ix(space.num_hanging()), value);
  f.hanging_partials.assign(space.num_hanging(), {0.0, 0.0});
  return f;
}

void extend_to_hanging(const FESpace& space, DetectorField& f, const StabilizationParams& params) {
  const std::size_t N = space.num_dofs();
  f.hanging_alpha.resize(ix(space.num_hanging()));
  f.hanging_partials.assign(space.num_hanging(), {0.0, 0.0});
  for (std::size_t k = N; k < space.num_nodes(); ++k) {
    const auto masters = space.expansion(k);
    const double a = f.alpha[ix(masters[0].dof)];
    const double b = f.alpha[ix(masters[1].dof)];
    const PairMax s = detector_max(a, b, params.sigma_h(space.node_size(k)),
                               params.variant == Variant::Smooth && !params.low_order);
    f.hanging_alpha[ix(k - N)] = s.v;
    f.hanging_partials[k - N] = {s.dx, s.dy};
  }
}

DetectorField system_detector(const FESpace& space, const StateVector& U, int m,
                              const StabilizationParams& params, const DirichletData& bc,
                              bool with_jacobian) {
  const std::size_t N = space.num_dofs();
  if (params.low_order) {
    DetectorField f = constant_detector(space, 1.0);
    extend_to_hanging(space, f, params);
    return f;
  }
  if (params.tracked.empty()) throw std::invalid_argument("detector needs at least one tracked component");
  const bool smooth = params.variant == Variant::Smooth;
  const bool grad = with_jacobian && smooth;
  DetectorField f;
  f.alpha = Eigen::VectorXd::Zero(ix(N));
  Triplets trip;
  std::vector<double> g_acc, g_beta;
  for (std::size_t i = 0; i < N; ++i) {
    if (bc.all_fixed(i, m)) continue;
    const auto nb = space.neighbours(i);
    double acc = 0.0;
    // Accumulated gradient per (position in N(i), tracked component index).
    std::vector<std::vector<double>> acc_grad;
    for (std::size_t t = 0; t < params.tracked.size(); ++t) {
      const int beta = params.tracked[t];
      const double a = component_detector(space, U, m, beta, i, params, grad ? &g_beta : nullptr);
      if (t == 0) {
        acc = a;
        if (grad) acc_grad.assign(params.tracked.size(), {}), acc_grad[0] = g_beta;
        continue;
      }
      const PairMax s = detector_max(acc, a, params.sigma_h(space.node_size(i)), smooth);
      acc = s.v;
      if (grad) {
        for (std::size_t u = 0; u < t; ++u)
          for (auto& v : acc_grad[u]) v *= s.dx;
        acc_grad[t] = g_beta;
        for (auto& v : acc_grad[t]) v *= s.dy;
      }
    }
    f.alpha[ix(i)] = acc;
    if (grad)
      for (std::size_t t = 0; t < params.tracked.size(); ++t)
        for (std::size_t k = 0; k < nb.size(); ++k)
          if (acc_grad[t][k] != 0.0)
            trip.emplace_back(ix(i), ix(nb[k] * m + params.tracked[t]), acc_grad[t][k]);
  }
  extend_to_hanging(space, f, params);
  if (grad) {
    SparseMatrix J(ix(N), ix(N * m));
    J.setFromTriplets(trip.begin(), trip.end());
    f.jacobian = std::move(J);
  }
  return f;
}

std::vector<double> scalar_diffusion(const FESpace& space, const GroupOperators& ops,
                                     const PhysicsModel& model, const DetectorField& alpha,
                                     const StabilizationParams& params) {
  StateVector dummy = StateVector::Zero(ix(space.num_dofs()));
  return stabilization_terms(space, ops, model, dummy, alpha, params, {}).nu;
}

Eigen::MatrixXd elemental_diffusion(const FESpace& space, const PhysicsModel& model,
                                    const StateVector& U, const DetectorField& alpha,
                                    std::size_t cell, const StabilizationParams& params) {
  const int m = model.m();
  const CellDofs cd = space.cell_dofs(cell);
  const ElementalGeometry g = elemental_geometry(space.mesh().cell_box(cell));
  const double h = space.mesh().cell_size(cell);
  const bool smooth = params.variant == Variant::Smooth;
  const auto av = vertex_alpha(space, alpha, cell);
  Eigen::MatrixXd nu = Eigen::MatrixXd::Zero(cd.n, cd.n);
  for (int p = 0; p < cd.n; ++p)
    for (int q = p + 1; q < cd.n; ++q) {
      const RoeState r = euler::roe_average(U.data() + cd.dof[p] * m, U.data() + cd.dof[q] * m, model.gamma());
      const CellPair cp = cell_pair(g, cd, p, q, av, r, params.eps_h(h), params.sigma_h(h), smooth);
      nu(p, q) = nu(q, p) = cp.nu;
    }
  for (int p = 0; p < cd.n; ++p) nu(p, p) = nu.row(p).sum();
  return nu;
}

StabilizationTerms stabilization_terms(const FESpace& space, const GroupOperators& ops,
                                       const PhysicsModel& model, const StateVector& U,
                                       const DetectorField& alpha,
                                       const StabilizationParams& params, const TermsRequest& req) {
  const int m = model.m();
  const std::size_t N = space.num_dofs();
  const auto& ptr = space.neighbour_ptr();
  const auto& idx = space.neighbour_index();
  const bool smooth = params.variant == Variant::Smooth;
  const bool deriv = req.derivatives;

  StabilizationTerms out;
  out.nu.assign(idx.size(), 0.0);
  out.BU = Eigen::VectorXd::Zero(ix(N * m));
  Triplets dal;
  if (deriv && !model.is_scalar()) out.direct.emplace(ptr, idx, m);

  auto diff = [&](std::size_t i, std::size_t j, int c) { return U[ix(i * m + c)] - U[ix(j * m + c)]; };

  if (model.is_scalar()) {
    std::vector<Vec2> vel(N);
    for (std::size_t i = 0; i < N; ++i) vel[i] = model.velocity(space.coord(i));
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t e = ptr[i]; e < ptr[i + 1]; ++e) {
        const std::size_t j = idx[e];
        if (j <= i) continue;
        const std::size_t et = ops.transpose[e];
        const double kij = ops.cx[e] * vel[j].x + ops.cy[e] * vel[j].y;
        const double kji = ops.cx[et] * vel[i].x + ops.cy[et] * vel[i].y;
        const double ai = alpha.alpha[ix(i)], aj = alpha.alpha[ix(j)];
        const double sigma = params.sigma_h(std::min(space.node_size(i), space.node_size(j)));
        double nu, dai, daj;
        if (smooth) {
          const smooth::D2 s1 = smooth::smax(ai * kij, aj * kji, sigma);
          const smooth::D2 s2 = smooth::smax(s1.v, 0.0, sigma);
          nu = s2.v;
          dai = s2.dx * s1.dx * kij;
          daj = s2.dx * s1.dy * kji;
        } else {
          nu = std::max({ai * kij, 0.0, aj * kji});
          dai = daj = 0.0;
        }
        out.nu[e] = out.nu[et] = nu;
        const double d = diff(i, j, 0);
        out.BU[ix(i)] += nu * d;
        out.BU[ix(j)] -= nu * d;
        if (deriv) {
          dal.emplace_back(ix(i), ix(i), d * dai);
          dal.emplace_back(ix(i), ix(j), d * daj);
          dal.emplace_back(ix(j), ix(i), -d * dai);
          dal.emplace_back(ix(j), ix(j), -d * daj);
        }
      }
  } else {
    for (std::size_t cell = 0; cell < space.mesh().num_cells(); ++cell) {
      const CellDofs cd = space.cell_dofs(cell);
      const ElementalGeometry g = elemental_geometry(space.mesh().cell_box(cell));
      const double h = space.mesh().cell_size(cell);
      const double eps = params.eps_h(h), sigma = params.sigma_h(h);
      const auto av = vertex_alpha(space, alpha, cell);
      for (int p = 0; p < cd.n; ++p)
        for (int q = p + 1; q < cd.n; ++q) {
          const std::size_t i = cd.dof[p], j = cd.dof[q];
          RoeDerivatives rd;
          const RoeState r = deriv ? euler::roe_average(U.data() + i * m, U.data() + j * m, model.gamma(), rd)
                                   : euler::roe_average(U.data() + i * m, U.data() + j * m, model.gamma());
          const CellPair cp = cell_pair(g, cd, p, q, av, r, eps, sigma, smooth);
          const std::size_t eij = space.find_neighbour(i, j);
          const std::size_t eji = ops.transpose[eij];
          out.nu[eij] += cp.nu;
          out.nu[eji] += cp.nu;
          for (int c = 0; c < m; ++c) {
            const double d = diff(i, j, c);
            out.BU[ix(i * m + c)] += cp.nu * d;
            out.BU[ix(j * m + c)] -= cp.nu * d;
          }
          if (!deriv) continue;
          // nu depends on u_i, u_j through the Roe state.
          const Eigen::Matrix<double, 1, 8> dnu = cp.dvel * rd.d;
          const std::size_t eii = space.find_neighbour(i, i), ejj = space.find_neighbour(j, j);
          for (int c = 0; c < m; ++c) {
            const double d = diff(i, j, c);
            for (int k = 0; k < m; ++k) {
              (*out.direct)(eii, c, k) += d * dnu[k];
              (*out.direct)(eij, c, k) += d * dnu[4 + k];
              (*out.direct)(eji, c, k) -= d * dnu[k];
              (*out.direct)(ejj, c, k) -= d * dnu[4 + k];
            }
          }
          for (int a = 0; a < 4; ++a) {
            if (cp.dalpha[a] == 0.0) continue;
            const std::size_t node = space.cell_nodes(cell)[a];
            for (int c = 0; c < m; ++c) {
              const double d = diff(i, j, c);
              scatter_alpha(space, alpha, node, ix(i * m + c), d * cp.dalpha[a], dal);
              scatter_alpha(space, alpha, node, ix(j * m + c), -d * cp.dalpha[a], dal);
            }
          }
        }
    }
  }

  if (req.W) {
    const StateVector& W = *req.W;
    out.MW = Eigen::VectorXd::Zero(ix(N * m));
    out.mass_s.assign(idx.size(), 0.0);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t e = ptr[i]; e < ptr[i + 1]; ++e) {
        const std::size_t j = idx[e];
        const double mij = ops.mass[e];
        for (int c = 0; c < m; ++c) out.MW[ix(i * m + c)] += mij * W[ix(j * m + c)];
        if (j == i) continue;
        const double sigma = params.sigma_h(std::min(space.node_size(i), space.node_size(j)));
        const PairMax s = pair_max(alpha.alpha[ix(i)], alpha.alpha[ix(j)], sigma, smooth);
        out.mass_s[e] = s.v;
        for (int c = 0; c < m; ++c) {
          const double dw = W[ix(i * m + c)] - W[ix(j * m + c)];
          out.MW[ix(i * m + c)] += s.v * mij * dw;
          if (deriv) {
            dal.emplace_back(ix(i * m + c), ix(i), s.dx * mij * dw);
            dal.emplace_back(ix(i * m + c), ix(j), s.dy * mij * dw);
          }
        }
      }
  }

  if (deriv) {
    SparseMatrix D(ix(N * m), ix(N));
    D.setFromTriplets(dal.begin(), dal.end());
    out.dalpha = std::move(D);
  }
  return out;
}

std::vector<double> diffusion_coefficients(const FESpace& space, const GroupOperators& ops,
                                           const PhysicsModel& model, const StateVector& U,
                                           const DetectorField& alpha,
                                           const StabilizationParams& params) {
  return stabilization_terms(space, ops, model, U, alpha, params, {}).nu;
}

BlockSparseMatrix stabilization_matrix(const FESpace& space, const std::vector<double>& nu, int m) {
  BlockSparseMatrix B(space.neighbour_ptr(), space.neighbour_index(), m);
  for (std::size_t i = 0; i < space.num_dofs(); ++i) {
    const std::size_t eii = space.find_neighbour(i, i);
    for (std::size_t e = B.row_begin(i); e < B.row_end(i); ++e) {
      if (e == eii) continue;
      for (int c = 0; c < m; ++c) {
        B(e, c, c) = -nu[e];
        B(eii, c, c) += nu[e];
      }
    }
  }
  return B;
}

BlockSparseMatrix detector_mass(const FESpace& space, const GroupOperators& ops,
                                const DetectorField& alpha, const StabilizationParams& params, int m) {
  BlockSparseMatrix M(space.neighbour_ptr(), space.neighbour_index(), m);
  const bool smooth = params.variant == Variant::Smooth;
  for (std::size_t i = 0; i < space.num_dofs(); ++i) {
    const std::size_t eii = space.find_neighbour(i, i);
    for (int c = 0; c < m; ++c) M(eii, c, c) += ops.mass[eii];
    for (std::size_t e = M.row_begin(i); e < M.row_end(i); ++e) {
      if (e == eii) continue;
      const std::size_t j = M.col(e);
      const double sigma = params.sigma_h(std::min(space.node_size(i), space.node_size(j)));
      const double s = pair_max(alpha.alpha[ix(i)], alpha.alpha[ix(j)], sigma, smooth).v;
      for (int c = 0; c < m; ++c) {
        M(e, c, c) += (1.0 - s) * ops.mass[e];
        M(eii, c, c) += s * ops.mass[e];
      }
    }
  }
  return M;
}

BoundsReport verify_bounds(const FESpace& space, const GroupOperators& ops,
                           const PhysicsModel& model, const StateVector& U,
                           const DetectorField& alpha, const StabilizationParams& params,
                           const DirichletData& bc, double alpha_threshold, double dmp_tol) {
  const int m = model.m();
  const std::size_t N = space.num_dofs();
  const auto terms = stabilization_terms(space, ops, model, U, alpha, params, {});
  const Eigen::VectorXd KU = galerkin_residual(space, ops, model, U) + terms.BU;
  const Rect dom = space.mesh().domain();
  BoundsReport rep;

  for (std::size_t i = 0; i < N; ++i) {
    const auto nb = space.neighbours(i);
    const std::size_t off = space.neighbour_offset(i);

    if (model.is_scalar() && !bc.all_fixed(i, m)) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (auto j : nb)
        if (j != i) {
          lo = std::min(lo, U[ix(j)]);
          hi = std::max(hi, U[ix(j)]);
        }
      const double ui = U[ix(i)];
      const double viol = std::max({0.0, lo - ui, ui - hi});
      rep.max_dmp_violation = std::max(rep.max_dmp_violation, viol);
      if (viol > dmp_tol) rep.dmp_violations.push_back(i);
    }

    if (alpha.alpha[ix(i)] < alpha_threshold) continue;
    ++rep.checked_nodes;
    Eigen::VectorXd defect = KU.segment(ix(i * m), m);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const std::size_t j = nb[k], e = off + k;
      if (j == i) continue;
      const Vec2 c{ops.cx[e], ops.cy[e]};
      Eigen::MatrixXd A(m, m);
      if (model.is_scalar()) {
        A(0, 0) = c.dot(model.velocity(space.coord(j))) - terms.nu[e];
      } else {
        const RoeState r = euler::roe_average(U.data() + i * m, U.data() + j * m, model.gamma());
        A = euler::jacobian(r.v, r.H, c, model.gamma()) - terms.nu[e] * Eigen::Matrix4d::Identity();
      }
      const double lam = Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues().real().maxCoeff();
      rep.max_offdiag_eigenvalue = std::max(rep.max_offdiag_eigenvalue, lam);
      defect -= A * (U.segment(ix(j * m), m) - U.segment(ix(i * m), m));
    }
    if (!on_boundary(dom, space.coord(i)))
      rep.max_row_sum_defect = std::max(rep.max_row_sum_defect, defect.norm());
  }
  return rep;
}

}  // namespace shockamr
