#pragma once

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "shockamr/amr.hpp"
#include "shockamr/solver.hpp"

namespace shockamr {

/// A benchmark: model, root grid, boundary data, initial guess and optional
/// exact solution for one component.
struct CaseDefinition {
  std::string name;
  PhysicsModel model;
  Rect domain;
  int nx = 16;
  int ny = 16;
  std::function<DirichletData(const FESpace&)> boundary;
  std::function<StateVector(const FESpace&)> initial;
  std::function<double(const Vec2&)> exact;  // component error_component; empty if unknown
  int error_component = 0;
  StabilizationParams stab;
  NonlinearConfig solver;
  AmrConfig amr;                       // high-order cell cap in amr.max_cells
  std::size_t low_order_max_cells = 0;  // cell cap for the low-order scheme
  std::optional<std::pair<int, int>> uniform_default;  // sweep range run by default
};

/// Velocity (1/2, sin(-pi/3)); u = 1 above y = 0.7 + 2 x sin(-pi/3).
CaseDefinition case_linear_discontinuity();
/// Velocity (y, -x); the inflow profile on x = 0 is carried along circles.
CaseDefinition case_circular_discontinuity();
/// Mach 2 flow at -10 degrees onto the wall y = 0 of the unit square.
CaseDefinition case_compression_corner();
/// Two supersonic streams on [0, 4.1] x [0, 1] with a wall at y = 0.
CaseDefinition case_reflected_shock();

/// Case by name: linear_discontinuity (alias scalar_convergence),
/// circular_discontinuity, corner (alias corner_convergence), reflected_shock.
CaseDefinition make_case(const std::string& name);
std::vector<std::string> case_names();

/// Inflow profile of the circular case on x = 0.
double circular_inflow_profile(double y);

struct ObliqueShock {
  double beta;   // shock angle to the upstream flow (radians)
  double rho2;
  double p2;
  double mach2;
};

/// Weak oblique-shock solution for upstream Mach M and deflection theta
/// (radians) from the theta-beta-Mach relation.
ObliqueShock oblique_shock(double mach, double theta, double gamma);

/// Exact two-state solution of the corner case (conserved variables).
std::array<double, 4> corner_exact_state(const Vec2& x);
/// Corner shock angle relative to the wall (radians).
double corner_shock_angle();

/// Region states of the reflected-shock case (conserved variables; the
/// tabulated energies are specific, per unit mass).
std::array<double, 4> reflected_state(char region);
/// Region ('a', 'b' or 'c') of a point in the reflected-shock domain.
char reflected_region(const Vec2& x);

/// int |u - u_h| over the domain, 3x3 Gauss points per cell.
double l1_error(const FESpace& space, const StateVector& U, int m, int comp,
                const std::function<double(const Vec2&)>& exact);

/// Least-squares slope of log(error) against log(1/N).
double fitted_rate(const std::vector<double>& n_per_side, const std::vector<double>& errors);

/// Shock angle (radians, to the x axis) from a line fit through the points of
/// maximal |grad rho| in each column of finest-cell width, restricted to
/// column centres in [x_lo, x_hi].
double shock_angle(const FESpace& space, const StateVector& U, int m, int comp, double x_lo, double x_hi);

/// One steady solve on the given space starting from U (overwritten by the
/// result). Fills cells, dofs, l1_error, nl_iters, converged and report.
StepRecord solve_on(const CaseDefinition& c, const FESpace& space, StateVector& U);

/// Uniform-refinement sweep with meshes of N = a, 2a, ..., b cells along y.
/// Each mesh is solved independently from the case initial state.
std::vector<StepRecord> uniform_sweep(const CaseDefinition& c, int a, int b,
                                      const StepCallback& on_step = {}, AmrState* final_state = nullptr);

}  // namespace shockamr
