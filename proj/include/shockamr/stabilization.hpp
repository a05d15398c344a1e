#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "shockamr/assembly.hpp"
#include "shockamr/block_sparse.hpp"
#include "shockamr/fespace.hpp"
#include "shockamr/physics.hpp"

namespace shockamr {

enum class Variant { Sharp, Smooth };

struct StabilizationParams {
  double q = 2.0;
  double sigma = 1e-2;
  double eps = 1e-4;
  double zeta = 1e-10;
  double L = 1.0;
  double lambda_max = 1.0;  // global maximum wave speed, refreshed by the solver
  int d = 2;
  Variant variant = Variant::Smooth;
  bool low_order = false;     // alpha == 1 everywhere
  std::vector<int> tracked = {0};

  double sigma_h(double h) const;
  double eps_h(double h) const;
  double zeta_h() const { return zeta / L; }
};

/// Largest |v| (transport) or |v| + a (Euler) over the nodal states.
double global_wave_speed(const FESpace& space, const PhysicsModel& model, const StateVector& U);

struct JumpMean {
  double jump;
  double mean;
};

/// Directional jump and mean of the gradient of component beta at i towards
/// the k-th neighbour entry (index into space.neighbour_index()).
JumpMean jump_mean(const FESpace& space, const StateVector& U, int m, int beta, std::size_t i,
                   std::size_t entry);

/// Nodal detector values: conforming nodes plus the hanging extension.
struct DetectorField {
  Eigen::VectorXd alpha;          // conforming
  Eigen::VectorXd hanging_alpha;  // hanging node k at index k - N
  /// d alpha_k / d alpha_master for the two masters of each hanging node.
  std::vector<std::array<double, 2>> hanging_partials;
  /// d alpha_i / d U  (N x N*m), only for the smooth variant when requested.
  std::optional<SparseMatrix> jacobian;

  double at(std::size_t node, std::size_t num_dofs) const {
    return node < num_dofs ? alpha[static_cast<Eigen::Index>(node)]
                           : hanging_alpha[static_cast<Eigen::Index>(node - num_dofs)];
  }
};

/// Component detector at conforming node i.
double shock_detector(const FESpace& space, const StateVector& U, int m, int beta, std::size_t i,
                      const StabilizationParams& params);

/// System detector: max (sharp) or chained smooth max over tracked components;
/// zero at nodes whose components are all strongly fixed. The low-order
/// scheme returns alpha == 1 at every node.
DetectorField system_detector(const FESpace& space, const StateVector& U, int m,
                              const StabilizationParams& params, const DirichletData& bc,
                              bool with_jacobian = false);
/// Constant detector (low-order scheme or frozen values).
DetectorField constant_detector(const FESpace& space, double value);
/// Fill hanging values from conforming ones.
void extend_to_hanging(const FESpace& space, DetectorField& field, const StabilizationParams& params);

/// Transport diffusion on the pattern: nu[e] for off-diagonal entries, 0 on the diagonal.
std::vector<double> scalar_diffusion(const FESpace& space, const GroupOperators& ops,
                                     const PhysicsModel& model, const DetectorField& alpha,
                                     const StabilizationParams& params);

/// Elemental Euler diffusion of one cell over its effective dofs (cd.n x cd.n,
/// diagonal equal to the row sum of the off-diagonal entries).
Eigen::MatrixXd elemental_diffusion(const FESpace& space, const PhysicsModel& model,
                                    const StateVector& U, const DetectorField& alpha,
                                    std::size_t cell, const StabilizationParams& params);

/// Global diffusion coefficients nu_ij on the pattern (Euler: summed over cells).
std::vector<double> diffusion_coefficients(const FESpace& space, const GroupOperators& ops,
                                           const PhysicsModel& model, const StateVector& U,
                                           const DetectorField& alpha,
                                           const StabilizationParams& params);

/// B_ij = -nu_ij I off the diagonal, B_ii = sum_j nu_ij I.
BlockSparseMatrix stabilization_matrix(const FESpace& space, const std::vector<double>& nu, int m);

/// Detector-weighted mass matrix (Mbar / Mtilde).
BlockSparseMatrix detector_mass(const FESpace& space, const GroupOperators& ops,
                                const DetectorField& alpha, const StabilizationParams& params, int m);

/// Residual-side evaluation of the stabilized operator and its derivatives.
struct StabilizationTerms {
  std::vector<double> nu;     // per pattern entry
  std::vector<double> mass_s; // detector weight s_ij per pattern entry (off-diagonal)
  Eigen::VectorXd BU;         // B(U) U
  Eigen::VectorXd MW;         // Mtilde(U) W when a W vector is supplied
  /// d(BU + MW)/dU through nu's direct dependence on U (Euler Roe states).
  std::optional<BlockSparseMatrix> direct;
  /// d(BU + MW)/d alpha (N*m x N).
  std::optional<SparseMatrix> dalpha;
};

struct TermsRequest {
  const StateVector* W = nullptr;  // vector multiplied by Mtilde (transient only)
  bool derivatives = false;
};

StabilizationTerms stabilization_terms(const FESpace& space, const GroupOperators& ops,
                                       const PhysicsModel& model, const StateVector& U,
                                       const DetectorField& alpha,
                                       const StabilizationParams& params, const TermsRequest& req);

/// Diagnostics of the local discrete maximum principle / local bounds property.
struct BoundsReport {
  std::size_t checked_nodes = 0;
  double max_offdiag_eigenvalue = -std::numeric_limits<double>::infinity();
  double max_row_sum_defect = 0.0;
  double max_dmp_violation = 0.0;  // transport only, over non-Dirichlet nodes
  std::vector<std::size_t> dmp_violations;
};

/// Checks nodes with alpha_i >= alpha_threshold: off-diagonal blocks of Kbar in
/// Roe form have non-positive eigenvalues and interior rows sum to zero.
/// For transport also checks the local discrete maximum principle nodewise,
/// min_{j != i} u_j - tol <= u_i <= max_{j != i} u_j + tol, at free nodes.
BoundsReport verify_bounds(const FESpace& space, const GroupOperators& ops,
                           const PhysicsModel& model, const StateVector& U,
                           const DetectorField& alpha, const StabilizationParams& params,
                           const DirichletData& bc, double alpha_threshold = 1.0,
                           double dmp_tol = 1e-10);

}  // namespace shockamr
