#pragma once

#include <cmath>

namespace shockamr::smooth {

/// Value with first derivatives with respect to its (up to two) arguments.
struct D1 {
  double v;
  double dx;
};
struct D2 {
  double v;
  double dx;
  double dy;
};

/// sqrt(x^2 + eps) >= |x|.
inline D1 absn(double x, double eps) {
  const double s = std::sqrt(x * x + eps);
  return {s, x / s};
}

/// x^2 / sqrt(x^2 + eps) <= |x|.
inline D1 absd(double x, double eps) {
  const double s2 = x * x + eps;
  const double s = std::sqrt(s2);
  return {x * x / s, x * (x * x + 2.0 * eps) / (s2 * s)};
}

/// (absn(x - y; sigma) + x + y) / 2 >= max(x, y).
inline D2 smax(double x, double y, double sigma) {
  const D1 a = absn(x - y, sigma);
  return {0.5 * (a.v + x + y), 0.5 * (a.dx + 1.0), 0.5 * (1.0 - a.dx)};
}

/// Smooth limiter to one: 2x^4 - 5x^3 + 3x^2 + x below one, 1 above.
inline D1 limit(double x) {
  if (x >= 1.0) return {1.0, 0.0};
  const double x2 = x * x;
  return {2.0 * x2 * x2 - 5.0 * x2 * x + 3.0 * x2 + x, 8.0 * x2 * x - 15.0 * x2 + 6.0 * x + 1.0};
}

/// C1 saturation at one: x below 1 - 2w, 1 above 1, and a cubic blend in
/// between that stays in [x, 1]. Keeps smooth maxima of values in [0, 1]
/// inside [0, 1].
inline D1 cap(double x, double w) {
  if (x >= 1.0) return {1.0, 0.0};
  if (x <= 1.0 - 2.0 * w) return {x, 1.0};
  const double t = (x - 1.0 + 2.0 * w) / (2.0 * w);
  return {x + 2.0 * w * t * t * (1.0 - t), 1.0 + 2.0 * t - 3.0 * t * t};
}

}  // namespace shockamr::smooth
