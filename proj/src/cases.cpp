#include "shockamr/cases.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

namespace shockamr {

namespace {

constexpr double kGamma = 1.4;
constexpr double kPi = std::numbers::pi;

double boundary_tol(const Rect& d) { return 1e-12 * std::max(d.width(), d.height()); }

/// Outward normals of the domain sides the point lies on.
std::vector<Vec2> side_normals(const Rect& d, const Vec2& x) {
  const double tol = boundary_tol(d);
  std::vector<Vec2> n;
  if (std::abs(x.x - d.x0) <= tol) n.push_back({-1.0, 0.0});
  if (std::abs(x.x - d.x1) <= tol) n.push_back({1.0, 0.0});
  if (std::abs(x.y - d.y0) <= tol) n.push_back({0.0, -1.0});
  if (std::abs(x.y - d.y1) <= tol) n.push_back({0.0, 1.0});
  return n;
}

/// Inflow Dirichlet data for transport: nodes where v . n < 0 on some side.
DirichletData transport_inflow(const FESpace& space, const PhysicsModel& model,
                               const std::function<double(const Vec2&)>& g) {
  const Rect& d = space.mesh().domain();
  DirichletData bc;
  bc.mask.assign(space.num_dofs(), 0);
  bc.values = StateVector::Zero(static_cast<Eigen::Index>(space.num_dofs()));
  for (std::size_t i = 0; i < space.num_dofs(); ++i) {
    const Vec2& x = space.coord(i);
    const Vec2 v = model.velocity(x);
    for (const Vec2& n : side_normals(d, x))
      if (v.dot(n) < 0.0) {
        bc.mask[i] = 1;
        bc.values[static_cast<Eigen::Index>(i)] = g(x);
      }
  }
  return bc;
}

using EulerState = std::array<double, 4>;

/// Euler boundary data: far-field sides with inflow (v . n < 0) fix every
/// component; wall sides fix the normal momentum; outflow sides are free.
/// Inflow takes precedence over the wall at shared corners.
DirichletData euler_boundary(const FESpace& space, const std::function<EulerState(const Vec2&)>& far_field,
                             const std::function<bool(const Vec2& normal)>& is_wall) {
  const Rect& d = space.mesh().domain();
  DirichletData bc;
  bc.mask.assign(space.num_dofs(), 0);
  bc.values = StateVector::Zero(static_cast<Eigen::Index>(4 * space.num_dofs()));
  for (std::size_t i = 0; i < space.num_dofs(); ++i) {
    const Vec2& x = space.coord(i);
    const auto normals = side_normals(d, x);
    if (normals.empty()) continue;
    const EulerState s = far_field(x);
    const Vec2 v{s[1] / s[0], s[2] / s[0]};
    bool inflow = false;
    std::uint8_t wall = 0;
    for (const Vec2& n : normals) {
      if (is_wall(n)) wall |= std::abs(n.x) > 0.5 ? 0x2 : 0x4;
      else if (v.dot(n) < 0.0) inflow = true;
    }
    const auto r = static_cast<Eigen::Index>(4 * i);
    if (inflow) {
      bc.mask[i] = 0xF;
      for (int c = 0; c < 4; ++c) bc.values[r + c] = s[c];
    } else if (wall) {
      bc.mask[i] = wall;
    }
  }
  return bc;
}

StateVector uniform_state(const FESpace& space, const EulerState& s) {
  StateVector U(static_cast<Eigen::Index>(4 * space.num_dofs()));
  for (std::size_t i = 0; i < space.num_dofs(); ++i)
    for (int c = 0; c < 4; ++c) U[static_cast<Eigen::Index>(4 * i + c)] = s[c];
  return U;
}

StabilizationParams scalar_params() {
  StabilizationParams p;
  p.tracked = {0};
  return p;
}

StabilizationParams euler_params(double L) {
  StabilizationParams p;
  p.L = L;
  p.tracked = {0};
  return p;
}

// Corner: Mach 2, unit sound speed, 10 degree deflection.
constexpr double kCornerMach = 2.0;
constexpr double kCornerTheta = 10.0 * kPi / 180.0;

EulerState corner_upstream() {
  const Vec2 v{kCornerMach * std::cos(kCornerTheta), -kCornerMach * std::sin(kCornerTheta)};
  return euler::conserved(1.0, v, 1.0 / kGamma, kGamma);
}

EulerState specific_state(double rho, const Vec2& v, double e_specific) {
  return {rho, rho * v.x, rho * v.y, rho * e_specific};
}

// Shock lines of the reflected-shock case: the velocity jump across a shock
// is normal to it, so the shock direction is perpendicular to v_up - v_down.
struct ReflectedGeometry {
  double incident_slope;   // dy/dx of the incident shock through (0, 1)
  double x_wall;           // where it meets y = 0
  double reflected_slope;  // dy/dx of the reflected shock through (x_wall, 0)
};

ReflectedGeometry reflected_geometry() {
  const auto a = reflected_state('a');
  const auto b = reflected_state('b');
  const auto c = reflected_state('c');
  auto vel = [](const EulerState& s) { return Vec2{s[1] / s[0], s[2] / s[0]}; };
  const Vec2 jab = vel(a) - vel(b);
  const Vec2 jbc = vel(b) - vel(c);
  ReflectedGeometry g;
  g.incident_slope = -jab.x / jab.y;
  g.x_wall = -1.0 / g.incident_slope;
  g.reflected_slope = -jbc.x / jbc.y;
  return g;
}

}  // namespace

double circular_inflow_profile(double y) {
  if (y >= 0.15 && y <= 0.45) return 1.0;
  if (y >= 0.55 && y <= 0.85) {
    const double c = std::cos(10.0 / 3.0 * kPi * (y - 0.4));
    return c * c;
  }
  return 0.0;
}

CaseDefinition case_linear_discontinuity() {
  CaseDefinition c;
  c.name = "linear_discontinuity";
  const Vec2 vel{0.5, std::sin(-kPi / 3.0)};
  c.model = PhysicsModel::scalar([vel](const Vec2&) { return vel; });
  c.domain = {0.0, 0.0, 1.0, 1.0};
  c.nx = c.ny = 16;
  const double tol = boundary_tol(c.domain);
  auto g = [tol](const Vec2& x) {
    if (std::abs(x.y - 1.0) <= tol) return 1.0;
    if (std::abs(x.x) <= tol && x.y > 0.7) return 1.0;
    return 0.0;
  };
  c.boundary = [model = c.model, g](const FESpace& s) { return transport_inflow(s, model, g); };
  c.initial = [](const FESpace& s) { return StateVector::Zero(static_cast<Eigen::Index>(s.num_dofs())).eval(); };
  c.exact = [](const Vec2& x) { return x.y > 0.7 + 2.0 * x.x * std::sin(-kPi / 3.0) ? 1.0 : 0.0; };
  c.stab = scalar_params();
  c.amr.max_cells = 50000;
  c.low_order_max_cells = 2000000;
  return c;
}

CaseDefinition case_circular_discontinuity() {
  CaseDefinition c;
  c.name = "circular_discontinuity";
  c.model = PhysicsModel::scalar([](const Vec2& x) { return Vec2{x.y, -x.x}; });
  c.domain = {0.0, 0.0, 1.0, 1.0};
  c.nx = c.ny = 16;
  const double tol = boundary_tol(c.domain);
  auto g = [tol](const Vec2& x) { return std::abs(x.x) <= tol ? circular_inflow_profile(x.y) : 0.0; };
  c.boundary = [model = c.model, g](const FESpace& s) { return transport_inflow(s, model, g); };
  c.initial = [](const FESpace& s) { return StateVector::Zero(static_cast<Eigen::Index>(s.num_dofs())).eval(); };
  c.exact = [](const Vec2& x) {
    const double r = x.norm();
    return r <= 1.0 ? circular_inflow_profile(r) : 0.0;
  };
  c.stab = scalar_params();
  c.amr.max_cells = 50000;
  c.low_order_max_cells = 2000000;
  return c;
}

ObliqueShock oblique_shock(double mach, double theta, double gamma) {
  auto deflection = [&](double beta) {
    const double s = std::sin(beta);
    return std::atan(2.0 / std::tan(beta) * (mach * mach * s * s - 1.0) /
                     (mach * mach * (gamma + std::cos(2.0 * beta)) + 2.0));
  };
  const double mu = std::asin(1.0 / mach);
  double lo = mu, hi = 0.5 * kPi;
  for (int k = 0; k < 200; ++k) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (deflection(m1) < deflection(m2)) lo = m1;
    else hi = m2;
  }
  const double beta_max = 0.5 * (lo + hi);
  if (theta > deflection(beta_max)) throw std::invalid_argument("deflection exceeds the attached-shock limit");
  lo = mu;
  hi = beta_max;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (deflection(mid) < theta ? lo : hi) = mid;
  }
  ObliqueShock r;
  r.beta = 0.5 * (lo + hi);
  const double mn = mach * std::sin(r.beta);
  const double mn2 = mn * mn;
  r.rho2 = (gamma + 1.0) * mn2 / ((gamma - 1.0) * mn2 + 2.0);
  r.p2 = 1.0 + 2.0 * gamma / (gamma + 1.0) * (mn2 - 1.0);
  const double mdown2 = (1.0 + 0.5 * (gamma - 1.0) * mn2) / (gamma * mn2 - 0.5 * (gamma - 1.0));
  r.mach2 = std::sqrt(mdown2) / std::sin(r.beta - theta);
  return r;
}

double corner_shock_angle() { return oblique_shock(kCornerMach, kCornerTheta, kGamma).beta - kCornerTheta; }

std::array<double, 4> corner_exact_state(const Vec2& x) {
  const ObliqueShock s = oblique_shock(kCornerMach, kCornerTheta, kGamma);
  if (x.y >= x.x * std::tan(s.beta - kCornerTheta)) return corner_upstream();
  const double rho = s.rho2;
  const double p = s.p2 / kGamma;
  const double a = std::sqrt(kGamma * p / rho);
  return euler::conserved(rho, {s.mach2 * a, 0.0}, p, kGamma);
}

CaseDefinition case_compression_corner() {
  CaseDefinition c;
  c.name = "corner";
  c.model = PhysicsModel::euler(kGamma);
  c.domain = {0.0, 0.0, 1.0, 1.0};
  c.nx = c.ny = 16;
  const EulerState up = corner_upstream();
  c.boundary = [up](const FESpace& s) {
    return euler_boundary(s, [up](const Vec2&) { return up; }, [](const Vec2& n) { return n.y < -0.5; });
  };
  c.initial = [up](const FESpace& s) { return uniform_state(s, up); };
  const ObliqueShock sh = oblique_shock(kCornerMach, kCornerTheta, kGamma);
  const double slope = std::tan(sh.beta - kCornerTheta);
  c.exact = [slope, rho2 = sh.rho2](const Vec2& x) { return x.y >= x.x * slope ? 1.0 : rho2; };
  c.stab = euler_params(1.0);
  c.amr.max_cells = 5000;
  c.low_order_max_cells = 50000;
  return c;
}

std::array<double, 4> reflected_state(char region) {
  switch (region) {
    case 'a': return specific_state(1.0, {2.9, 0.0}, 5.99075);
    case 'b': return specific_state(1.7, {2.62, -0.506}, 5.8046);
    case 'c': return specific_state(2.687, {2.401, 0.0}, 5.6122);
    default: throw std::invalid_argument(std::string("unknown reflected-shock region ") + region);
  }
}

char reflected_region(const Vec2& x) {
  static const ReflectedGeometry g = reflected_geometry();
  if (x.y < 1.0 + g.incident_slope * x.x) return 'a';
  if (x.x > g.x_wall && x.y < g.reflected_slope * (x.x - g.x_wall)) return 'c';
  return 'b';
}

CaseDefinition case_reflected_shock() {
  CaseDefinition c;
  c.name = "reflected_shock";
  c.model = PhysicsModel::euler(kGamma);
  c.domain = {0.0, 0.0, 4.1, 1.0};
  c.nx = 64;
  c.ny = 16;
  const double tol = boundary_tol(c.domain);
  c.boundary = [tol](const FESpace& s) {
    return euler_boundary(
        s, [tol](const Vec2& x) { return reflected_state(x.x > tol && x.y > 1.0 - tol ? 'b' : 'a'); },
        [](const Vec2& n) { return n.y < -0.5; });
  };
  c.initial = [](const FESpace& s) { return uniform_state(s, reflected_state('a')); };
  c.exact = [](const Vec2& x) { return reflected_state(reflected_region(x))[0]; };
  c.stab = euler_params(4.1);
  c.amr.max_cells = 10000;
  c.low_order_max_cells = 300000;
  return c;
}

CaseDefinition make_case(const std::string& name) {
  if (name == "linear_discontinuity") return case_linear_discontinuity();
  if (name == "scalar_convergence") {
    CaseDefinition c = case_linear_discontinuity();
    c.name = name;
    c.uniform_default = {16, 256};
    return c;
  }
  if (name == "circular_discontinuity") return case_circular_discontinuity();
  if (name == "corner") return case_compression_corner();
  if (name == "corner_convergence") {
    CaseDefinition c = case_compression_corner();
    c.name = name;
    c.uniform_default = {16, 128};
    return c;
  }
  if (name == "reflected_shock") return case_reflected_shock();
  throw ConfigError("unknown case '" + name + "'");
}

std::vector<std::string> case_names() {
  return {"scalar_convergence", "linear_discontinuity", "circular_discontinuity", "corner", "corner_convergence",
          "reflected_shock"};
}

double l1_error(const FESpace& space, const StateVector& U, int m, int comp,
                const std::function<double(const Vec2&)>& exact) {
  static const double g[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static const double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double sum = 0.0;
  for (std::size_t c = 0; c < space.mesh().num_cells(); ++c) {
    const Rect b = space.mesh().cell_box(c);
    const double hx = 0.5 * b.width(), hy = 0.5 * b.height();
    const double cx = b.x0 + hx, cy = b.y0 + hy;
    for (int a = 0; a < 3; ++a)
      for (int k = 0; k < 3; ++k) {
        const Vec2 p{cx + hx * g[a], cy + hy * g[k]};
        sum += w[a] * w[k] * hx * hy * std::abs(exact(p) - space.evaluate(U, m, c, p, comp));
      }
  }
  return sum;
}

double fitted_rate(const std::vector<double>& n_per_side, const std::vector<double>& errors) {
  if (n_per_side.size() != errors.size() || errors.size() < 2)
    throw std::invalid_argument("fitted_rate needs at least two matching points");
  const auto n = static_cast<double>(errors.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    const double x = -std::log(n_per_side[k]);
    const double y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double shock_angle(const FESpace& space, const StateVector& U, int m, int comp, double x_lo, double x_hi) {
  const AdaptiveMesh& mesh = space.mesh();
  const Rect& d = mesh.domain();
  double h = d.width();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) h = std::min(h, mesh.cell_box(c).width());
  const auto ncol = static_cast<std::size_t>(std::llround(d.width() / h));
  std::vector<double> best(ncol, -1.0), best_y(ncol, 0.0);
  const Eigen::VectorXd u = space.all_node_values(U, m, comp);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const Rect b = mesh.cell_box(c);
    const auto& nd = space.cell_nodes(c);
    const double gx = (u[nd[1]] - u[nd[0]] + u[nd[3]] - u[nd[2]]) / (2.0 * b.width());
    const double gy = (u[nd[2]] - u[nd[0]] + u[nd[3]] - u[nd[1]]) / (2.0 * b.height());
    const double grad = std::hypot(gx, gy);
    const auto k0 = static_cast<std::size_t>(std::llround((b.x0 - d.x0) / h));
    const auto k1 = static_cast<std::size_t>(std::llround((b.x1 - d.x0) / h));
    for (std::size_t k = k0; k < std::min(k1, ncol); ++k)
      if (grad > best[k]) {
        best[k] = grad;
        best_y[k] = 0.5 * (b.y0 + b.y1);
      }
  }
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < ncol; ++k) {
    const double x = d.x0 + (static_cast<double>(k) + 0.5) * h;
    if (x < x_lo || x > x_hi || best[k] < 0.0) continue;
    n += 1;
    sx += x;
    sy += best_y[k];
    sxx += x * x;
    sxy += x * best_y[k];
  }
  if (n < 2) throw std::invalid_argument("shock_angle: fewer than two columns in range");
  return std::atan((n * sxy - sx * sy) / (n * sxx - sx * sx));
}

std::vector<StepRecord> uniform_sweep(const CaseDefinition& c, int a, int b, const StepCallback& on_step,
                                      AmrState* final_state) {
  if (a <= 0 || b < a || (static_cast<long>(c.nx) * a) % c.ny != 0)
    throw ConfigError("invalid uniform range for case " + c.name);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<StepRecord> out;
  for (int n = a, step = 0; n <= b; n *= 2, ++step) {
    auto space = std::make_shared<const FESpace>(AdaptiveMesh::uniform(c.nx * n / c.ny, n, c.domain));
    StateVector U = c.initial(*space);
    StepRecord rec = solve_on(c, *space, U);
    rec.step = step;
    rec.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(rec);
    AmrState st{space, U, {}};
    if (on_step) on_step(rec, st);
    if (2 * n > b && final_state) *final_state = std::move(st);
  }
  return out;
}

StepRecord solve_on(const CaseDefinition& c, const FESpace& space, StateVector& U) {
  const GroupOperators ops = assemble_operators(space);
  NonlinearProblem problem(space, ops, c.model, c.boundary(space), c.stab);
  StepRecord rec;
  rec.cells = space.mesh().num_cells();
  rec.dofs = space.num_dofs();
  try {
    auto [sol, rep] = hybrid_solve(problem, U, c.solver);
    U = std::move(sol);
    rec.report = std::move(rep);
  } catch (const InadmissibleState& e) {
    rec.report.converged = false;
    rec.report.stop_reason = e.what();
  }
  rec.nl_iters = rec.report.iterations();
  rec.converged = rec.report.converged;
  if (c.exact) rec.l1_error = l1_error(space, U, c.model.m(), c.error_component, c.exact);
  return rec;
}

}  // namespace shockamr
