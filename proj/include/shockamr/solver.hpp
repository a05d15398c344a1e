#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "shockamr/assembly.hpp"
#include "shockamr/linear_solver.hpp"
#include "shockamr/stabilization.hpp"

namespace shockamr {

struct NonlinearConfig {
  double tol1 = 1e-2;    // Picard -> Newton switch on ||R|| / ||R0||
  double tol2 = 1e-8;    // final ||R|| / ||R0||
  double dU_tol = 1e-4;  // Newton increment ||dU|| / ||U||
  double abs_tol = 1e-13;  // ||R|| below this counts as converged
  int max_iters = 500;   // total over both phases
  double fallback_lambda = 0.05;  // below this step length the other direction is tried too
  LinearSolverConfig linear;
};

enum class Phase { Picard, Newton };

struct ResidualReport {
  double r0 = 0.0;
  double r_final = 0.0;
  int picard_iters = 0;
  int newton_iters = 0;
  int switch_iter = -1;  // iteration at which Newton took over, -1 if never
  int direction_fallbacks = 0;  // steps taken along the other phase's direction
  std::vector<double> residual_history;  // ||R|| after each accepted step, starting with ||R0||
  std::vector<double> lambda_history;
  bool converged = false;
  std::string stop_reason;

  int iterations() const { return picard_iters + newton_iters; }
  double relative() const { return r0 > 0.0 ? r_final / r0 : 0.0; }
};

/// Discrete steady or Backward-Euler problem:
///   R(U) = Mtilde(U) (U - U_prev) / dt + Kbar(U) U - G,
/// with strongly fixed components replaced by R = U - g.
class NonlinearProblem {
 public:
  NonlinearProblem(const FESpace& space, const GroupOperators& ops, const PhysicsModel& model,
                   DirichletData bc, StabilizationParams params);

  const FESpace& space() const { return *space_; }
  const PhysicsModel& model() const { return *model_; }
  const DirichletData& bc() const { return bc_; }
  const StabilizationParams& params() const { return params_; }
  StabilizationParams& params() { return params_; }

  void set_steady();
  void set_transient(const StateVector& U_prev, double dt);
  bool steady() const { return !dt_.has_value(); }

  /// Recomputes the global wave speed used by sigma_h from U.
  void update_wave_speed(const StateVector& U);
  /// Overwrites fixed components of U with their prescribed values.
  void impose_bc(StateVector& U) const;

  /// Test hook: keep the detector fixed at the given field (no detector derivatives).
  void freeze_detector(std::optional<DetectorField> field) { frozen_ = std::move(field); }

  DetectorField detector(const StateVector& U, bool with_jacobian = false) const;
  Eigen::VectorXd residual(const StateVector& U) const;
  /// Exact derivative of residual().
  SparseMatrix jacobian(const StateVector& U) const;
  /// Picard matrix: Mtilde/dt + Kbar with alpha == 1, no derivative terms.
  SparseMatrix picard_matrix(const StateVector& U) const;

 private:
  SparseMatrix finish(BlockSparseMatrix& blocks) const;
  void fix_rows(SparseMatrix& A) const;

  const FESpace* space_;
  const GroupOperators* ops_;
  const PhysicsModel* model_;
  DirichletData bc_;
  StabilizationParams params_;
  std::optional<double> dt_;
  StateVector U_prev_;
  std::optional<DetectorField> frozen_;
};

/// Picard increment: picard_matrix(U) dU = -R(U).
StateVector picard_step(const NonlinearProblem& problem, const StateVector& U,
                        const LinearSolverConfig& cfg = {});
/// Newton increment: J(U) dU = -R(U).
StateVector newton_step(const NonlinearProblem& problem, const StateVector& U,
                        const LinearSolverConfig& cfg = {});

struct LineSearchConfig {
  double c = 1e-4;
  double lambda_min = 1e-4;
  int max_backtracks = 10;
};

struct LineSearchResult {
  double lambda = 1.0;
  double norm = 0.0;  // ||R(U + lambda dU)|| (infinite when never admissible)
  bool accepted = false;
  int backtracks = 0;
};

/// Cubic backtracking on phi(lambda) = ||R(U + lambda dU)||^2 / 2. norm_at(lambda)
/// returns ||R(U + lambda dU)|| and may throw InadmissibleState, which halves
/// the step. slope is phi'(0); the default assumes a Newton direction.
LineSearchResult line_search(const std::function<double(double)>& norm_at, double norm0,
                             std::optional<double> slope = std::nullopt,
                             const LineSearchConfig& cfg = {});

/// Hybrid Picard-Newton iteration with line search. The global wave speed is
/// refreshed after every Picard step and frozen during the Newton phase. When
/// the line search rejects a step or cuts it below cfg.fallback_lambda, the
/// other phase's direction is searched too and the lower residual wins.
/// Returns the best iterate when not converged.
std::pair<StateVector, ResidualReport> hybrid_solve(NonlinearProblem& problem, StateVector U0,
                                                    const NonlinearConfig& cfg = {});

/// One Backward-Euler step of size dt from U_n.
std::pair<StateVector, ResidualReport> be_step(NonlinearProblem& problem, const StateVector& U_n,
                                               double dt, const NonlinearConfig& cfg = {});

}  // namespace shockamr
