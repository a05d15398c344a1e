#pragma once

#include <array>
#include <functional>

#include <Eigen/Core>

#include "shockamr/types.hpp"

namespace shockamr {

/// Small fixed-capacity blocks: m <= 4 components.
using Block = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

/// Roe-averaged pair state.
struct RoeState {
  Vec2 v;
  double a = 0.0;
  double H = 0.0;
  double rho = 0.0;
};

/// Derivatives of (v_x, v_y, a) of the Roe state with respect to (u_i, u_j).
struct RoeDerivatives {
  Eigen::Matrix<double, 3, 8> d = Eigen::Matrix<double, 3, 8>::Zero();
};

class PhysicsModel {
 public:
  enum class Kind { Scalar, Euler };
  using VelocityField = std::function<Vec2(const Vec2&)>;

  static PhysicsModel scalar(VelocityField velocity);
  static PhysicsModel euler(double gamma = 1.4);

  Kind kind() const { return kind_; }
  bool is_scalar() const { return kind_ == Kind::Scalar; }
  int m() const { return m_; }
  double gamma() const { return gamma_; }
  Vec2 velocity(const Vec2& x) const { return velocity_(x); }

  /// Flux columns f_x(u), f_y(u) at position x (x only matters for transport).
  void flux(const double* u, const Vec2& x, double* fx, double* fy) const;
  /// f'(u) . n.
  Block flux_jacobian(const double* u, const Vec2& x, const Vec2& n) const;
  /// Eigenvalues of f'(u) . n (sorted ascending).
  SmallVec eigenvalues(const double* u, const Vec2& x, const Vec2& n) const;
  /// Spectral radius of f'(u_ij) . c; transport uses the velocity at x.
  double max_wave_speed(const double* ui, const double* uj, const Vec2& c,
                        const Vec2& x = {}) const;

 private:
  Kind kind_ = Kind::Scalar;
  int m_ = 1;
  double gamma_ = 1.4;
  VelocityField velocity_;
};

namespace euler {

double pressure(const double* u, double gamma);
/// Throws InadmissibleState for non-positive density or pressure.
void check_admissible(const double* u, double gamma, std::int64_t node = -1);
/// Flux Jacobian A(v, H) . n of the 2D Euler equations in conserved variables.
Eigen::Matrix4d jacobian(const Vec2& v, double H, const Vec2& n, double gamma);
RoeState roe_average(const double* ui, const double* uj, double gamma);
RoeState roe_average(const double* ui, const double* uj, double gamma, RoeDerivatives& der);
/// Conserved state from primitive (rho, v, p).
std::array<double, 4> conserved(double rho, const Vec2& v, double p, double gamma);

}  // namespace euler

}  // namespace shockamr
