#include "grushin/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace grushin {

namespace {

constexpr std::array<double, 4> kGl8Nodes = {
    0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
    0.9602898564975363};
constexpr std::array<double, 4> kGl8Weights = {
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
    0.1012285362903763};

constexpr double kGradingFloor = 1e-12;
constexpr double kDivergenceSum = 1e6;
constexpr double kDivergenceGrowth = 0.10;

// speed profile along a segment parametrized by x1: sqrt(1 + s^2 |x|^{-2a})
inline double slope_speed(double x, double s, double a) {
  return std::hypot(1.0, s * abs_pow(x, -a));
}

double gl8_slope_speed(double lo, double hi, double s, double a) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double dx = half * kGl8Nodes[i];
    sum += kGl8Weights[i] *
           (slope_speed(mid - dx, s, a) + slope_speed(mid + dx, s, a));
  }
  return half * sum;
}

// adaptive bisection for the slope-speed integrand on [lo,hi], 0 < lo < hi;
// *converged cleared when the depth cap is hit while halves still disagree
double adaptive_slope_speed(double lo, double hi, double s, double a,
                            double rel_tol, int depth, bool* converged) {
  const double whole = gl8_slope_speed(lo, hi, s, a);
  const double mid = 0.5 * (lo + hi);
  const double two = gl8_slope_speed(lo, mid, s, a) + gl8_slope_speed(mid, hi, s, a);
  if (std::fabs(whole - two) <= rel_tol * std::fabs(two)) return two;
  if (depth >= 28) {
    *converged = false;
    return two;
  }
  return adaptive_slope_speed(lo, mid, s, a, rel_tol, depth + 1, converged) +
         adaptive_slope_speed(mid, hi, s, a, rel_tol, depth + 1, converged);
}

// integral of sqrt(1 + s^2 x^{-2a}) over [0, w] with w > 0, s != 0, a < 1.
// Geometric shells toward the singular endpoint; analytic tail below the
// width floor.
LengthResult singular_integral(double w, double s, double a) {
  s = std::fabs(s);
  if (a >= 1.0) return {kInf, LengthStatus::Infinite};
  double sum = 0.0;
  double hi = w;
  const double floor_w = std::max(kGradingFloor, w * 0x1p-48);
  while (hi > floor_w) {
    const double lo = std::max(0.5 * hi, floor_w);
    const double shell = gl8_slope_speed(lo, hi, s, a);
    sum += shell;
    if (shell < 1e-15 * sum) {
      hi = lo;
      break;
    }
    hi = lo;
  }
  // tail: integrand ~ s x^{-a} + O(x^a) near 0
  const double h = hi;
  if (h > 0.0) sum += s * std::pow(h, 1.0 - a) / (1.0 - a) + 0.5 * h;
  return {sum, LengthStatus::Converged};
}

// integral over [lo, hi], 0 < lo < hi, singular behavior only toward 0.
// Dyadic shells toward lo with the divergence backstop.
LengthResult regular_integral(double lo, double hi, double s, double a) {
  s = std::fabs(s);
  double sum = 0.0;
  double top = hi;
  int growth_streak = 0;
  bool converged = true;
  while (top > lo) {
    const double bottom = std::max(lo, 0.5 * top);
    const double shell = adaptive_slope_speed(bottom, top, s, a, 1e-10, 0, &converged);
    const double prev = sum;
    sum += shell;
    if (prev > 0.0 && shell > kDivergenceGrowth * prev)
      ++growth_streak;
    else
      growth_streak = 0;
    if (growth_streak >= 3 && sum > kDivergenceSum)
      return {kInf, LengthStatus::Infinite};
    if (!std::isfinite(sum)) return {kInf, LengthStatus::Infinite};
    top = bottom;
  }
  return {sum, converged ? LengthStatus::Converged : LengthStatus::DidNotConverge};
}

}  // namespace

LengthResult segment_grushin_length(Point p, Point q, Alpha alpha) {
  const double a = alpha.value();
  const double dx = q.x1 - p.x1;
  const double dy = q.x2 - p.x2;
  if (dx == 0.0 && dy == 0.0) return {0.0, LengthStatus::Converged};
  if (a == 0.0) return {std::hypot(dx, dy), LengthStatus::Converged};

  if (dx == 0.0) {
    const double c = p.x1;
    if (c == 0.0) return {kInf, LengthStatus::Infinite};
    return {std::fabs(dy) * abs_pow(c, -a), LengthStatus::Converged};
  }
  if (dy == 0.0) return {std::fabs(dx), LengthStatus::Converged};

  const double s = dy / dx;
  double lo = std::min(p.x1, q.x1);
  double hi = std::max(p.x1, q.x1);

  auto one_side = [&](double w) -> LengthResult {
    if (w == 0.0) return {0.0, LengthStatus::Converged};
    if (a >= 1.0) return {kInf, LengthStatus::Infinite};
    return singular_integral(w, s, a);
  };

  if (lo < 0.0 && hi > 0.0) {
    const LengthResult left = one_side(-lo);
    if (left.status == LengthStatus::Infinite) return left;
    const LengthResult right = one_side(hi);
    if (right.status == LengthStatus::Infinite) return right;
    LengthStatus st = LengthStatus::Converged;
    if (left.status == LengthStatus::DidNotConverge ||
        right.status == LengthStatus::DidNotConverge)
      st = LengthStatus::DidNotConverge;
    return {left.value + right.value, st};
  }

  if (lo <= 0.0 && hi <= 0.0) {
    const double t = -hi;
    hi = -lo;
    lo = t;
  }
  if (lo == 0.0) return one_side(hi);
  return regular_integral(lo, hi, s, a);
}

LengthResult polyline_grushin_length(const Polyline& c, Alpha alpha) {
  c.validate();
  double sum = 0.0;
  LengthStatus st = LengthStatus::Converged;
  for (std::size_t i = 1; i < c.vertices.size(); ++i) {
    const LengthResult r =
        segment_grushin_length(c.vertices[i - 1], c.vertices[i], alpha);
    if (r.status == LengthStatus::Infinite) return {kInf, LengthStatus::Infinite};
    if (r.status == LengthStatus::DidNotConverge) st = LengthStatus::DidNotConverge;
    sum += r.value;
  }
  return {sum, st};
}

double gauss_legendre_8(const std::function<double(double)>& f, double a,
                        double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double dx = half * kGl8Nodes[i];
    sum += kGl8Weights[i] * (f(mid - dx) + f(mid + dx));
  }
  return half * sum;
}

double adaptive_panel(const std::function<double(double)>& f, double a,
                      double b, double rel_tol, int max_depth) {
  const double whole = gauss_legendre_8(f, a, b);
  const double mid = 0.5 * (a + b);
  const double two = gauss_legendre_8(f, a, mid) + gauss_legendre_8(f, mid, b);
  if (std::fabs(whole - two) <=
          rel_tol * std::max(std::fabs(two), 1e-300) ||
      max_depth <= 0)
    return two;
  return adaptive_panel(f, a, mid, rel_tol, max_depth - 1) +
         adaptive_panel(f, mid, b, rel_tol, max_depth - 1);
}

}  // namespace grushin
