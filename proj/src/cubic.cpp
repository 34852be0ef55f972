#include "cubic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace clusterkin {
namespace {

double polish(double x, double c3, double c2, double c1, double c0) {
  // Newton steps, each kept only if it reduces the residual. Roots much
  // smaller than the largest one start with a large relative error.
  double p = ((c3 * x + c2) * x + c1) * x + c0;
  for (int it = 0; it < 8 && p != 0.0; ++it) {
    const double dp = (3.0 * c3 * x + 2.0 * c2) * x + c1;
    if (dp == 0.0 || !std::isfinite(dp)) break;
    const double next = x - p / dp;
    const double p_next = ((c3 * next + c2) * next + c1) * next + c0;
    if (!(std::abs(p_next) < std::abs(p))) break;
    x = next;
    p = p_next;
  }
  return x;
}

}  // namespace

std::vector<double> real_quadratic_roots(double c2, double c1, double c0) {
  if (c2 == 0.0) {
    if (c1 == 0.0) return {};
    return {-c0 / c1};
  }
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < 0.0) return {};
  const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
  std::vector<double> roots;
  if (q == 0.0) {
    roots = {0.0, 0.0};
  } else {
    roots = {q / c2, c0 / q};
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0) {
  if (c3 == 0.0) return real_quadratic_roots(c2, c1, c0);

  // Monic form x^3 + a x^2 + b x + c, then x = t - a/3 gives t^3 + p t + q.
  const double a = c2 / c3;
  const double b = c1 / c3;
  const double c = c0 / c3;
  const double shift = a / 3.0;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;

  std::vector<double> roots;
  const double half_q = q / 2.0;
  const double third_p = p / 3.0;
  const double disc = half_q * half_q + third_p * third_p * third_p;

  if (p == 0.0 && q == 0.0) {
    roots = {-shift, -shift, -shift};
  } else if (disc > 0.0) {
    // One real root. A = -sign(q) * cbrt(|q|/2 + sqrt(disc)) avoids
    // subtracting nearly equal radicals.
    const double big = std::cbrt(std::abs(half_q) + std::sqrt(disc));
    const double u = half_q > 0.0 ? -big : big;
    const double v = u == 0.0 ? 0.0 : -third_p / u;
    roots = {u + v - shift};
  } else {
    // Three real roots (or a repeated root when disc == 0).
    const double m = 2.0 * std::sqrt(-third_p);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift);
    }
  }

  for (double& r : roots) r = polish(r, c3, c2, c1, c0);
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace clusterkin
