#include "shockamr/physics.hpp"

#include <algorithm>
#include <cmath>

namespace shockamr {

PhysicsModel PhysicsModel::scalar(VelocityField velocity) {
  if (!velocity) throw std::invalid_argument("scalar model needs a velocity field");
  PhysicsModel p;
  p.kind_ = Kind::Scalar;
  p.m_ = 1;
  p.velocity_ = std::move(velocity);
  return p;
}

PhysicsModel PhysicsModel::euler(double gamma) {
  if (!(gamma > 1.0)) throw std::invalid_argument("adiabatic index must exceed 1");
  PhysicsModel p;
  p.kind_ = Kind::Euler;
  p.m_ = 4;
  p.gamma_ = gamma;
  p.velocity_ = [](const Vec2&) { return Vec2{}; };
  return p;
}

void PhysicsModel::flux(const double* u, const Vec2& x, double* fx, double* fy) const {
  if (is_scalar()) {
    const Vec2 v = velocity_(x);
    fx[0] = v.x * u[0];
    fy[0] = v.y * u[0];
    return;
  }
  if (!(u[0] > 0.0)) throw InadmissibleState("non-positive density");
  const double vx = u[1] / u[0];
  const double vy = u[2] / u[0];
  const double p = euler::pressure(u, gamma_);
  fx[0] = u[1];
  fx[1] = u[1] * vx + p;
  fx[2] = u[2] * vx;
  fx[3] = vx * (u[3] + p);
  fy[0] = u[2];
  fy[1] = u[1] * vy;
  fy[2] = u[2] * vy + p;
  fy[3] = vy * (u[3] + p);
}

Block PhysicsModel::flux_jacobian(const double* u, const Vec2& x, const Vec2& n) const {
  if (is_scalar()) {
    Block b(1, 1);
    b(0, 0) = velocity_(x).dot(n);
    return b;
  }
  if (!(u[0] > 0.0)) throw InadmissibleState("non-positive density");
  const Vec2 v{u[1] / u[0], u[2] / u[0]};
  const double H = (u[3] + euler::pressure(u, gamma_)) / u[0];
  return euler::jacobian(v, H, n, gamma_);
}

SmallVec PhysicsModel::eigenvalues(const double* u, const Vec2& x, const Vec2& n) const {
  if (is_scalar()) {
    SmallVec e(1);
    e[0] = velocity_(x).dot(n);
    return e;
  }
  euler::check_admissible(u, gamma_);
  const Vec2 v{u[1] / u[0], u[2] / u[0]};
  const double a = std::sqrt(gamma_ * euler::pressure(u, gamma_) / u[0]);
  const double vn = v.dot(n);
  const double an = a * n.norm();
  SmallVec e(4);
  e << vn - an, vn, vn, vn + an;
  return e;
}

double PhysicsModel::max_wave_speed(const double* ui, const double* uj, const Vec2& c,
                                    const Vec2& x) const {
  if (is_scalar()) return std::abs(velocity_(x).dot(c));
  const RoeState r = euler::roe_average(ui, uj, gamma_);
  return std::abs(r.v.dot(c)) + r.a * c.norm();
}

namespace euler {

double pressure(const double* u, double gamma) {
  return (gamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0]);
}

void check_admissible(const double* u, double gamma, std::int64_t node) {
  if (!(u[0] > 0.0)) throw InadmissibleState("non-positive density", node);
  if (!(pressure(u, gamma) > 0.0)) throw InadmissibleState("non-positive pressure", node);
}

Eigen::Matrix4d jacobian(const Vec2& v, double H, const Vec2& n, double gamma) {
  const double g1 = gamma - 1.0;
  const double u = v.x, w = v.y;
  const double q2 = u * u + w * w;
  const double vn = u * n.x + w * n.y;
  Eigen::Matrix4d A;
  A << 0.0, n.x, n.y, 0.0,
      0.5 * g1 * q2 * n.x - u * vn, vn + (1.0 - g1) * u * n.x, u * n.y - g1 * w * n.x, g1 * n.x,
      0.5 * g1 * q2 * n.y - w * vn, w * n.x - g1 * u * n.y, vn + (1.0 - g1) * w * n.y, g1 * n.y,
      vn * (0.5 * g1 * q2 - H), H * n.x - g1 * u * vn, H * n.y - g1 * w * vn, gamma * vn;
  return A;
}

namespace {

struct Side {
  double w;       // sqrt(rho)
  Vec2 mw;        // m / w
  double hw;      // rho H / w
  double rhoH;
};

Side side(const double* u, double gamma) {
  if (!(u[0] > 0.0)) throw InadmissibleState("non-positive density in Roe average");
  Side s;
  s.w = std::sqrt(u[0]);
  s.mw = {u[1] / s.w, u[2] / s.w};
  s.rhoH = gamma * u[3] - 0.5 * (gamma - 1.0) * (u[1] * u[1] + u[2] * u[2]) / u[0];
  s.hw = s.rhoH / s.w;
  return s;
}

}  // namespace

RoeState roe_average(const double* ui, const double* uj, double gamma) {
  const Side a = side(ui, gamma);
  const Side b = side(uj, gamma);
  const double S = a.w + b.w;
  RoeState r;
  r.v = (a.mw + b.mw) * (1.0 / S);
  r.H = (a.hw + b.hw) / S;
  r.rho = a.w * b.w;
  const double a2 = (gamma - 1.0) * (r.H - 0.5 * r.v.dot(r.v));
  if (!(a2 > 0.0)) throw InadmissibleState("imaginary Roe sound speed");
  r.a = std::sqrt(a2);
  return r;
}

RoeState roe_average(const double* ui, const double* uj, double gamma, RoeDerivatives& der) {
  const RoeState r = roe_average(ui, uj, gamma);
  const double g1 = gamma - 1.0;
  const double S = std::sqrt(ui[0]) + std::sqrt(uj[0]);
  der.d.setZero();
  for (int side_index = 0; side_index < 2; ++side_index) {
    const double* u = side_index == 0 ? ui : uj;
    const int off = 4 * side_index;
    const double w = std::sqrt(u[0]);
    const double rho = u[0];
    const Vec2 m{u[1], u[2]};
    const double rhoH = gamma * u[3] - 0.5 * g1 * m.dot(m) / rho;
    const double dS = 0.5 / w;
    // v = P / S
    const Vec2 dP_drho = m * (-0.5 / (w * w * w));
    const Vec2 dv_drho = (dP_drho - r.v * dS) * (1.0 / S);
    const double dv_dm = 1.0 / (w * S);
    // H = Q / S
    const double drhoH_drho = 0.5 * g1 * m.dot(m) / (rho * rho);
    const double dQ_drho = drhoH_drho / w - rhoH * dS / (w * w);
    const double dQ_dmx = -g1 * m.x / (rho * w);
    const double dQ_dmy = -g1 * m.y / (rho * w);
    const double dQ_dE = gamma / w;
    const double dH_drho = (dQ_drho - r.H * dS) / S;
    const double dH_dmx = dQ_dmx / S;
    const double dH_dmy = dQ_dmy / S;
    const double dH_dE = dQ_dE / S;

    der.d(0, off + 0) = dv_drho.x;
    der.d(1, off + 0) = dv_drho.y;
    der.d(0, off + 1) = dv_dm;
    der.d(1, off + 2) = dv_dm;

    const double inv2a = 1.0 / (2.0 * r.a);
    const double da2_drho = g1 * (dH_drho - r.v.dot(dv_drho));
    const double da2_dmx = g1 * (dH_dmx - r.v.x * dv_dm);
    const double da2_dmy = g1 * (dH_dmy - r.v.y * dv_dm);
    const double da2_dE = g1 * dH_dE;
    der.d(2, off + 0) = da2_drho * inv2a;
    der.d(2, off + 1) = da2_dmx * inv2a;
    der.d(2, off + 2) = da2_dmy * inv2a;
    der.d(2, off + 3) = da2_dE * inv2a;
  }
  return r;
}

std::array<double, 4> conserved(double rho, const Vec2& v, double p, double gamma) {
  return {rho, rho * v.x, rho * v.y, p / (gamma - 1.0) + 0.5 * rho * v.dot(v)};
}

}  // namespace euler

}  // namespace shockamr
