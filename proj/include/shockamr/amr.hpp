#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "shockamr/fespace.hpp"
#include "shockamr/solver.hpp"

namespace shockamr {

enum class IndicatorKind { Kelly, Graph };

struct AmrConfig {
  double refine_fraction = 0.3;
  double coarsen_fraction = 0.1;
  std::size_t max_cells = 50000;
  int max_steps = 30;
  IndicatorKind indicator = IndicatorKind::Graph;
  int component = 0;
};

/// One nonnegative value per leaf cell. Both indicators return squared values
/// (eta_K^2), which rank cells identically to eta_K.
using IndicatorField = std::vector<double>;

/// eta_K^2 = h_K / 24 * int_{dK} [du/dn]^2 over interior faces, h_K the longest
/// cell side. Hanging faces are integrated per fine sub-face.
IndicatorField kelly(const FESpace& space, const StateVector& U, int m, int beta);
/// eta_K^2 = sum over conforming vertices i of K of sum_{j in N(i)} (u_i - u_j)^2.
IndicatorField graph_indicator(const FESpace& space, const StateVector& U, int m, int beta);
IndicatorField indicator(IndicatorKind kind, const FESpace& space, const StateVector& U, int m, int beta);

/// Top ceil(refine_fraction n) cells refine, bottom floor(coarsen_fraction n)
/// coarsen. Ties go by ascending cell index (lower index ranks higher).
/// Nothing is refined once n >= max_cells.
std::vector<Mark> mark(const IndicatorField& values, const AmrConfig& cfg);

struct StepRecord {
  int step = 0;
  std::size_t cells = 0;
  std::size_t dofs = 0;
  double l1_error = std::numeric_limits<double>::quiet_NaN();
  double wall_s = 0.0;  // cumulative since the start of the run
  int nl_iters = 0;
  bool converged = false;
  ResidualReport report;
};

struct AmrState {
  std::shared_ptr<const FESpace> space;
  StateVector U;
  IndicatorField indicator;  // of the current solution (empty on the last step)
};

struct CaseDefinition;

using StepCallback = std::function<void(const StepRecord&, const AmrState&)>;

/// Solve -> estimate -> mark -> adapt -> transfer, starting from the case's
/// root grid, until max_steps adaptations or max_cells is reached (the mesh
/// that reaches the cap is still solved). Solver failures are recorded and the
/// loop continues from the best iterate.
std::vector<StepRecord> amr_loop(const CaseDefinition& c, const AmrConfig& cfg,
                                 const StepCallback& on_step = {}, AmrState* final_state = nullptr);

}  // namespace shockamr
