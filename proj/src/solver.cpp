#include "shockamr/solver.hpp"

#include <cmath>
#include <limits>

namespace shockamr {

namespace {

void add_blocks(BlockSparseMatrix& A, const BlockSparseMatrix& B, double s = 1.0) {
  const std::size_t n = A.nnz_blocks() * static_cast<std::size_t>(A.m() * A.m());
  double* a = A.block(0);
  const double* b = B.block(0);
  for (std::size_t k = 0; k < n; ++k) a[k] += s * b[k];
}

}  // namespace

NonlinearProblem::NonlinearProblem(const FESpace& space, const GroupOperators& ops,
                                   const PhysicsModel& model, DirichletData bc,
                                   StabilizationParams params)
    : space_(&space), ops_(&ops), model_(&model), bc_(std::move(bc)), params_(std::move(params)) {
  if (!bc_.mask.empty() && bc_.mask.size() != space.num_dofs())
    throw std::invalid_argument("Dirichlet mask size does not match the number of dofs");
}

void NonlinearProblem::set_steady() {
  dt_.reset();
  U_prev_.resize(0);
}

void NonlinearProblem::set_transient(const StateVector& U_prev, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  dt_ = dt;
  U_prev_ = U_prev;
}

void NonlinearProblem::update_wave_speed(const StateVector& U) {
  params_.lambda_max = std::max(global_wave_speed(*space_, *model_, U), 1e-300);
}

void NonlinearProblem::impose_bc(StateVector& U) const {
  if (!bc_.any()) return;
  const int m = model_->m();
  for (std::size_t i = 0; i < space_->num_dofs(); ++i)
    for (int c = 0; c < m; ++c)
      if (bc_.fixed(i, c)) {
        const auto r = static_cast<Eigen::Index>(i * m + c);
        U[r] = bc_.values[r];
      }
}

DetectorField NonlinearProblem::detector(const StateVector& U, bool with_jacobian) const {
  if (frozen_) return *frozen_;
  return system_detector(*space_, U, model_->m(), params_, bc_, with_jacobian);
}

Eigen::VectorXd NonlinearProblem::residual(const StateVector& U) const {
  const int m = model_->m();
  if (!model_->is_scalar())
    for (std::size_t i = 0; i < space_->num_dofs(); ++i)
      euler::check_admissible(U.data() + i * m, model_->gamma(), static_cast<std::int64_t>(i));
  const DetectorField alpha = detector(U);
  StateVector W;
  TermsRequest req;
  if (dt_) {
    W = (U - U_prev_) / *dt_;
    req.W = &W;
  }
  const auto terms = stabilization_terms(*space_, *ops_, *model_, U, alpha, params_, req);
  Eigen::VectorXd R = galerkin_residual(*space_, *ops_, *model_, U) + terms.BU;
  if (dt_) R += terms.MW;
  if (bc_.any())
    for (std::size_t i = 0; i < space_->num_dofs(); ++i)
      for (int c = 0; c < m; ++c)
        if (bc_.fixed(i, c)) {
          const auto r = static_cast<Eigen::Index>(i * m + c);
          R[r] = U[r] - bc_.values[r];
        }
  return R;
}

void NonlinearProblem::fix_rows(SparseMatrix& A) const {
  if (!bc_.any()) return;
  const int m = model_->m();
  for (Eigen::Index r = 0; r < A.outerSize(); ++r) {
    const auto i = static_cast<std::size_t>(r / m);
    if (!bc_.fixed(i, static_cast<int>(r % m))) continue;
    for (SparseMatrix::InnerIterator it(A, r); it; ++it) it.valueRef() = it.col() == r ? 1.0 : 0.0;
  }
}

SparseMatrix NonlinearProblem::finish(BlockSparseMatrix& blocks) const {
  SparseMatrix A = blocks.to_sparse();
  A.makeCompressed();
  return A;
}

SparseMatrix NonlinearProblem::jacobian(const StateVector& U) const {
  const int m = model_->m();
  const bool smooth = params_.variant == Variant::Smooth;
  const DetectorField alpha = detector(U, smooth && !params_.low_order);
  StateVector W;
  TermsRequest req;
  req.derivatives = smooth;
  if (dt_) {
    W = (U - U_prev_) / *dt_;
    req.W = &W;
  }
  const auto terms = stabilization_terms(*space_, *ops_, *model_, U, alpha, params_, req);
  AssembledSystem sys = assemble_system(*space_, *ops_, *model_, U);
  BlockSparseMatrix& J = sys.K;
  add_blocks(J, stabilization_matrix(*space_, terms.nu, m));
  if (dt_) add_blocks(J, detector_mass(*space_, *ops_, alpha, params_, m), 1.0 / *dt_);
  if (terms.direct) add_blocks(J, *terms.direct);
  SparseMatrix A = finish(J);
  if (alpha.jacobian && terms.dalpha) {
    SparseMatrix D = (*terms.dalpha) * (*alpha.jacobian);
    A += D;
    A.makeCompressed();
  }
  fix_rows(A);
  return A;
}

SparseMatrix NonlinearProblem::picard_matrix(const StateVector& U) const {
  const int m = model_->m();
  DetectorField ones = constant_detector(*space_, 1.0);
  extend_to_hanging(*space_, ones, params_);
  const auto terms = stabilization_terms(*space_, *ops_, *model_, U, ones, params_, {});
  AssembledSystem sys = assemble_system(*space_, *ops_, *model_, U);
  BlockSparseMatrix& P = sys.K;
  add_blocks(P, stabilization_matrix(*space_, terms.nu, m));
  if (dt_) add_blocks(P, detector_mass(*space_, *ops_, ones, params_, m), 1.0 / *dt_);
  SparseMatrix A = finish(P);
  fix_rows(A);
  return A;
}

StateVector picard_step(const NonlinearProblem& problem, const StateVector& U,
                        const LinearSolverConfig& cfg) {
  return linear_solve(problem.picard_matrix(U), -problem.residual(U), cfg);
}

StateVector newton_step(const NonlinearProblem& problem, const StateVector& U,
                        const LinearSolverConfig& cfg) {
  return linear_solve(problem.jacobian(U), -problem.residual(U), cfg);
}

LineSearchResult line_search(const std::function<double(double)>& norm_at, double norm0,
                             std::optional<double> slope, const LineSearchConfig& cfg) {
  const double inf = std::numeric_limits<double>::infinity();
  if (norm0 == 0.0) return {1.0, 0.0, true, 0};
  auto eval = [&](double lam) {
    try {
      const double n = norm_at(lam);
      return std::isfinite(n) ? n : inf;
    } catch (const InadmissibleState&) {
      return inf;
    }
  };
  const double phi0 = 0.5 * norm0 * norm0;
  const double g0 = slope.value_or(-norm0 * norm0);
  if (g0 >= 0.0) return {cfg.lambda_min, eval(cfg.lambda_min), false, 0};

  double lam = 1.0, prev_lam = 0.0, prev_phi = 0.0;
  bool have_prev = false;
  int bt = 0;
  for (;; ++bt) {
    const double n = eval(lam);
    if (n <= (1.0 - cfg.c * lam) * norm0) return {lam, n, true, bt};
    if (bt == cfg.max_backtracks) break;
    double next;
    if (!std::isfinite(n)) {
      next = 0.5 * lam;
    } else {
      const double phi = 0.5 * n * n;
      if (!have_prev) {
        next = -g0 * lam * lam / (2.0 * (phi - phi0 - g0 * lam));
      } else {
        const double r1 = phi - phi0 - g0 * lam;
        const double r2 = prev_phi - phi0 - g0 * prev_lam;
        const double a = (r1 / (lam * lam) - r2 / (prev_lam * prev_lam)) / (lam - prev_lam);
        const double b = (-prev_lam * r1 / (lam * lam) + lam * r2 / (prev_lam * prev_lam)) / (lam - prev_lam);
        if (a == 0.0) {
          next = -g0 / (2.0 * b);
        } else {
          const double disc = b * b - 3.0 * a * g0;
          if (disc < 0.0) next = 0.5 * lam;
          else if (b <= 0.0) next = (-b + std::sqrt(disc)) / (3.0 * a);
          else next = -g0 / (b + std::sqrt(disc));
        }
      }
      prev_lam = lam;
      prev_phi = phi;
      have_prev = true;
    }
    if (!std::isfinite(next)) next = 0.5 * lam;
    lam = std::clamp(next, 0.1 * lam, 0.5 * lam);
    if (lam < cfg.lambda_min) break;
  }
  return {cfg.lambda_min, eval(cfg.lambda_min), false, bt};
}

std::pair<StateVector, ResidualReport> hybrid_solve(NonlinearProblem& problem, StateVector U,
                                                    const NonlinearConfig& cfg) {
  if (!(cfg.tol1 > cfg.tol2 && cfg.tol2 > 0.0)) throw std::invalid_argument("need tol1 > tol2 > 0");
  ResidualReport rep;
  problem.impose_bc(U);
  problem.update_wave_speed(U);
  Eigen::VectorXd R = problem.residual(U);
  double r = R.norm();
  rep.r0 = r;
  rep.residual_history.push_back(r);
  StateVector best = U;
  double best_r = r;
  Phase phase = Phase::Picard;
  LinearSolver solver(cfg.linear);

  auto finish = [&](bool converged, std::string reason) {
    rep.converged = converged;
    rep.stop_reason = std::move(reason);
    if (!converged && best_r < r) {
      U = best;
      r = best_r;
    }
    rep.r_final = r;
    return std::pair{std::move(U), std::move(rep)};
  };

  auto small = [&] { return r <= std::max(cfg.tol2 * rep.r0, cfg.abs_tol); };
  if (small()) return finish(true, "residual");
  for (int it = 0; it < cfg.max_iters; ++it) {
    if (small()) return finish(true, "residual");
    if (phase == Phase::Picard && r / rep.r0 < cfg.tol1) {
      phase = Phase::Newton;
      rep.switch_iter = it;
      solver.invalidate();
    }
    StateVector dU;
    try {
      dU = solver.solve(phase == Phase::Picard ? problem.picard_matrix(U) : problem.jacobian(U), -R);
    } catch (const LinearSolverError& e) {
      return finish(false, std::string("linear solver: ") + e.what());
    }
    auto norm_along = [&](const StateVector& d) {
      return [&problem, &U, &d](double lam) { return problem.residual(U + lam * d).norm(); };
    };
    LineSearchResult ls = line_search(norm_along(dU), r);
    if (!ls.accepted || ls.lambda < cfg.fallback_lambda) {
      StateVector alt;
      try {
        alt = solver.solve(phase == Phase::Picard ? problem.jacobian(U) : problem.picard_matrix(U), -R);
      } catch (const LinearSolverError& e) {
        return finish(false, std::string("linear solver: ") + e.what());
      }
      const LineSearchResult ls_alt = line_search(norm_along(alt), r);
      if (ls_alt.norm < ls.norm) {
        dU = std::move(alt);
        ls = ls_alt;
        ++rep.direction_fallbacks;
      }
    }
    const double step_rel = dU.norm() / std::max(U.norm(), 1e-300);
    if (!std::isfinite(ls.norm)) return finish(false, "no admissible step");
    U += ls.lambda * dU;
    rep.lambda_history.push_back(ls.lambda);
    (phase == Phase::Picard ? rep.picard_iters : rep.newton_iters) += 1;
    if (phase == Phase::Picard) problem.update_wave_speed(U);
    R = problem.residual(U);
    r = R.norm();
    rep.residual_history.push_back(r);
    if (r < best_r) {
      best_r = r;
      best = U;
    }
    if (phase == Phase::Newton && step_rel < cfg.dU_tol) return finish(true, "increment");
  }
  if (small()) return finish(true, "residual");
  return finish(false, "max iterations");
}

std::pair<StateVector, ResidualReport> be_step(NonlinearProblem& problem, const StateVector& U_n,
                                               double dt, const NonlinearConfig& cfg) {
  problem.set_transient(U_n, dt);
  return hybrid_solve(problem, U_n, cfg);
}

}  // namespace shockamr
