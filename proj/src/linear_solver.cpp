#include "shockamr/linear_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <string>

#include <unsupported/Eigen/IterativeSolvers>

#ifdef SHOCKAMR_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include "shockamr/types.hpp"

namespace shockamr {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

#ifdef SHOCKAMR_HAVE_UMFPACK
using DirectLU = Eigen::UmfPackLU<ColMatrix>;
#else
using DirectLU = Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>>;
#endif

class StalePreconditioner {
 public:
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  StalePreconditioner() = default;
  template <class M>
  explicit StalePreconditioner(const M&) {}
  template <class M>
  StalePreconditioner& analyzePattern(const M&) { return *this; }
  template <class M>
  StalePreconditioner& factorize(const M&) { return *this; }
  template <class M>
  StalePreconditioner& compute(const M&) { return *this; }
  void set(const DirectLU* lu) { lu_ = lu; }
  template <class Rhs>
  Eigen::VectorXd solve(const Rhs& b) const { return lu_->solve(Eigen::VectorXd(b)); }
  Eigen::ComputationInfo info() const { return Eigen::Success; }

 private:
  const DirectLU* lu_ = nullptr;
};

}  // namespace

const char* direct_backend() {
#ifdef SHOCKAMR_HAVE_UMFPACK
  return "umfpack";
#else
  return "sparselu";
#endif
}

Eigen::VectorXd linear_solve(const SparseMatrix& A, const Eigen::VectorXd& b,
                             const LinearSolverConfig& cfg) {
  if (A.rows() != A.cols() || A.rows() != b.size()) throw std::invalid_argument("linear_solve: size mismatch");
  if (b.size() == 0) return b;
  if (b.isZero(0.0)) return Eigen::VectorXd::Zero(b.size());
  if (cfg.kind == LinearSolverKind::Iterative) {
    Eigen::BiCGSTAB<ColMatrix, Eigen::IncompleteLUT<double>> it;
    it.preconditioner().setDroptol(cfg.ilut_drop);
    it.preconditioner().setFillfactor(cfg.ilut_fill);
    it.setTolerance(cfg.tol);
    it.setMaxIterations(cfg.max_iters);
    const ColMatrix Ac = A;
    it.compute(Ac);
    if (it.info() != Eigen::Success) throw LinearSolverError("incomplete factorization failed");
    Eigen::VectorXd x = it.solve(b);
    if (it.info() != Eigen::Success || !x.allFinite())
      throw LinearSolverError("BiCGSTAB did not converge in " + std::to_string(it.iterations()) +
                              " iterations (error " + std::to_string(it.error()) + ")");
    return x;
  }
  LinearSolver direct(cfg);
  return direct.solve(A, b);
}

struct LinearSolver::Impl {
  ColMatrix factored;
  DirectLU lu;
  Eigen::Index n = -1;
};

LinearSolver::LinearSolver(LinearSolverConfig cfg) : cfg_(cfg), impl_(std::make_unique<Impl>()) {
#ifdef SHOCKAMR_HAVE_UMFPACK
  impl_->lu.umfpackControl()(UMFPACK_IRSTEP) = 0;
#endif
}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

void LinearSolver::invalidate() { impl_->n = -1; }

Eigen::VectorXd LinearSolver::solve(const SparseMatrix& A, const Eigen::VectorXd& b) {
  if (cfg_.kind == LinearSolverKind::Iterative) return linear_solve(A, b, cfg_);
  if (A.rows() != A.cols() || A.rows() != b.size()) throw std::invalid_argument("linear_solve: size mismatch");
  if (b.size() == 0) return b;
  if (b.isZero(0.0)) return Eigen::VectorXd::Zero(b.size());
  const ColMatrix Ac = A;
  if (impl_->n == Ac.rows() && cfg_.reuse_iters > 0) {
    Eigen::GMRES<ColMatrix, StalePreconditioner> gmres;
    gmres.setTolerance(cfg_.tol);
    gmres.setMaxIterations(cfg_.reuse_iters);
    gmres.set_restart(cfg_.reuse_iters);
    gmres.compute(Ac);
    gmres.preconditioner().set(&impl_->lu);
    Eigen::VectorXd x = gmres.solve(b);
    if (gmres.info() == Eigen::Success && x.allFinite() && (b - Ac * x).norm() <= cfg_.tol * b.norm()) return x;
  }
  impl_->n = -1;
  impl_->factored = Ac;
  impl_->lu.compute(impl_->factored);
  ++factorizations_;
  if (impl_->lu.info() != Eigen::Success) throw LinearSolverError("sparse factorization failed (singular matrix?)");
  impl_->n = Ac.rows();
  Eigen::VectorXd x = impl_->lu.solve(b);
  const double bn = b.norm();
  for (int refine = 0; refine < 2; ++refine) {
    const Eigen::VectorXd r = b - Ac * x;
    if (!(r.norm() > cfg_.tol * bn)) break;
    x += impl_->lu.solve(r);
  }
  if (!x.allFinite()) throw LinearSolverError("sparse direct solve produced non-finite values");
  return x;
}

}  // namespace shockamr
