#pragma once

#include <Eigen/Core>
#include <memory>

#include "shockamr/block_sparse.hpp"

namespace shockamr {

enum class LinearSolverKind { Direct, Iterative };

struct LinearSolverConfig {
  LinearSolverKind kind = LinearSolverKind::Direct;
  double tol = 1e-10;        // relative residual target
  int max_iters = 2000;      // iterative mode
  double ilut_drop = 1e-5;   // incomplete factorization drop tolerance
  int ilut_fill = 20;        // incomplete factorization fill factor
  int reuse_iters = 10;      // GMRES budget with a stale factorization, 0 disables reuse
};

/// Name of the direct backend compiled in ("umfpack" or "sparselu").
const char* direct_backend();

/// Solves A x = b. Direct mode factorizes (UMFPACK when available, otherwise
/// Eigen::SparseLU) and applies up to two steps of iterative refinement;
/// iterative mode runs BiCGSTAB with an ILUT preconditioner.
/// Throws LinearSolverError on a singular matrix or non-convergence.
Eigen::VectorXd linear_solve(const SparseMatrix& A, const Eigen::VectorXd& b,
                             const LinearSolverConfig& cfg = {});

/// Direct solver that keeps its last LU factorization. A later matrix with the
/// same size is first solved by GMRES preconditioned with the stale factors;
/// when that misses cfg.tol within cfg.reuse_iters iterations the matrix is
/// refactorized. Iterative mode forwards to linear_solve.
class LinearSolver {
 public:
  explicit LinearSolver(LinearSolverConfig cfg = {});
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  Eigen::VectorXd solve(const SparseMatrix& A, const Eigen::VectorXd& b);
  /// Drops the stored factorization so the next solve refactorizes.
  void invalidate();
  int factorizations() const { return factorizations_; }

 private:
  struct Impl;
  LinearSolverConfig cfg_;
  std::unique_ptr<Impl> impl_;
  int factorizations_ = 0;
};

}  // namespace shockamr
