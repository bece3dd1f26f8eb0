#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace grushin {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Exponent of the Grushin metric. beta() = 1/(1+alpha) is the snowflake
/// exponent of the singular line.
class Alpha {
 public:
  explicit Alpha(double value) : value_(value) {
    if (!std::isfinite(value) || value < 0.0)
      throw std::invalid_argument("Alpha must be finite and nonnegative");
  }
  double value() const { return value_; }
  double beta() const { return 1.0 / (1.0 + value_); }

 private:
  double value_;
};

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

inline bool finite(const Point& p) {
  return std::isfinite(p.x1) && std::isfinite(p.x2);
}
inline Point operator+(Point a, Point b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Point operator-(Point a, Point b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline Point operator*(double s, Point p) { return {s * p.x1, s * p.x2}; }
inline double euclidean_norm(Point p) { return std::hypot(p.x1, p.x2); }
inline double euclidean_distance(Point a, Point b) {
  return euclidean_norm(b - a);
}

/// Piecewise-linear curve: vertex list plus a strictly increasing parameter
/// grid of the same length. The universal curve representation of the toolkit.
struct Polyline {
  std::vector<Point> vertices;
  std::vector<double> params;

  static Polyline make(std::vector<Point> vertices, std::vector<double> params);
  /// Vertices with a uniform [0,1] parameter grid.
  static Polyline through(std::vector<Point> vertices);

  std::size_t size() const { return vertices.size(); }
  double euclidean_length() const;
  void validate() const;
};

struct Rect {
  double x_min, x_max, y_min, y_max;
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  bool contains(Point p, double pad = 0.0) const {
    return p.x1 >= x_min - pad && p.x1 <= x_max + pad && p.x2 >= y_min - pad &&
           p.x2 <= y_max + pad;
  }
};

/// |x|^p with fast paths for the exponents the metric uses all the time.
double abs_pow(double x, double p);

/// Length element sqrt(v1^2 + v2^2/|x1|^(2a)) at p. Infinite exactly when
/// p sits on the singular line and the velocity has a vertical component
/// (for alpha > 0).
double grushin_speed(Point p, Point velocity, Alpha alpha);

/// Canonical quasisymmetry phi(x1,x2) = ((1+a)^{-1} |x1|^a x1, x2).
Point canonical_phi(Point p, Alpha alpha);

/// Inverse of canonical_phi: x = (1+a)^{1/(1+a)} sgn(u) |u|^{1/(1+a)}.
Point canonical_phi_inverse(Point p, Alpha alpha);

/// Metric dilation (x,y) -> (lx, l^{1+a} y); scales distances by l.
Point dilate(Point p, double lambda, Alpha alpha);

/// Distance between (0,b1) and (0,b2) on the singular line:
/// C |b2-b1|^{1/(1+a)}, where C = d_alpha((0,0),(0,1)) is supplied by the
/// caller (it is a computed, cached quantity).
double snowflake_distance_on_Y(double b1, double b2, Alpha alpha, double C);

/// Antiderivative-based integral of |x|^{-a} over [a,b] (a < b allowed to
/// straddle 0). Infinite when the interval meets 0 and alpha >= 1.
double integral_abs_pow_neg(double a, double b, Alpha alpha);

/// Hausdorff-2 measure of an axis-aligned rectangle off the singular line:
/// the integral of |x1|^{-alpha}. Infinite for alpha >= 1 when the rectangle
/// meets x1 = 0; finite improper value for alpha < 1.
double grushin_area(const Rect& r, Alpha alpha);

}  // namespace grushin
