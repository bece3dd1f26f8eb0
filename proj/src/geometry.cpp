#include "grushin/geometry.hpp"

#include <algorithm>

namespace grushin {

Polyline Polyline::make(std::vector<Point> vertices, std::vector<double> params) {
  Polyline p;
  p.vertices = std::move(vertices);
  p.params = std::move(params);
  p.validate();
  return p;
}

Polyline Polyline::through(std::vector<Point> vertices) {
  std::vector<double> params(vertices.size());
  const double n = static_cast<double>(vertices.size()) - 1.0;
  for (std::size_t i = 0; i < params.size(); ++i)
    params[i] = static_cast<double>(i) / n;
  return make(std::move(vertices), std::move(params));
}

void Polyline::validate() const {
  if (vertices.size() < 2)
    throw std::invalid_argument("Polyline needs at least 2 vertices");
  if (params.size() != vertices.size())
    throw std::invalid_argument("Polyline params/vertices length mismatch");
  for (const Point& v : vertices)
    if (!finite(v)) throw std::invalid_argument("Polyline vertex not finite");
  for (std::size_t i = 1; i < params.size(); ++i) {
    if (!(params[i] > params[i - 1]))
      throw std::invalid_argument("Polyline params must be strictly increasing");
    if (vertices[i].x1 == vertices[i - 1].x1 &&
        vertices[i].x2 == vertices[i - 1].x2)
      throw std::invalid_argument("Polyline has repeated consecutive vertex");
  }
}

double Polyline::euclidean_length() const {
  double len = 0.0;
  for (std::size_t i = 1; i < vertices.size(); ++i)
    len += euclidean_distance(vertices[i - 1], vertices[i]);
  return len;
}

double abs_pow(double x, double p) {
  const double a = std::fabs(x);
  if (p == 0.0) return 1.0;
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  if (p == -1.0) return 1.0 / a;
  if (p == -2.0) return 1.0 / (a * a);
  if (p == -4.0) {
    const double a2 = a * a;
    return 1.0 / (a2 * a2);
  }
  return std::pow(a, p);
}

double grushin_speed(Point p, Point velocity, Alpha alpha) {
  if (!finite(velocity)) throw std::invalid_argument("velocity must be finite");
  const double a = alpha.value();
  if (a == 0.0) return euclidean_norm(velocity);
  if (p.x1 == 0.0) {
    if (velocity.x2 != 0.0) return kInf;
    return std::fabs(velocity.x1);
  }
  // hypot keeps steep segments from overflowing in the square.
  return std::hypot(velocity.x1, velocity.x2 * abs_pow(p.x1, -a));
}

Point canonical_phi(Point p, Alpha alpha) {
  const double a = alpha.value();
  return {abs_pow(p.x1, a) * p.x1 / (1.0 + a), p.x2};
}

Point canonical_phi_inverse(Point p, Alpha alpha) {
  const double a = alpha.value();
  const double u = p.x1;
  if (u == 0.0) return {0.0, p.x2};
  const double mag = std::pow((1.0 + a) * std::fabs(u), 1.0 / (1.0 + a));
  return {std::copysign(mag, u), p.x2};
}

Point dilate(Point p, double lambda, Alpha alpha) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("dilation factor must be positive");
  return {lambda * p.x1, std::pow(lambda, 1.0 + alpha.value()) * p.x2};
}

double snowflake_distance_on_Y(double b1, double b2, Alpha alpha, double C) {
  if (!(C > 0.0)) throw std::invalid_argument("snowflake constant must be positive");
  return C * std::pow(std::fabs(b2 - b1), alpha.beta());
}

namespace {

// integral of x^{-alpha} over [0, m], m >= 0
double integral_pow_from_zero(double m, double a) {
  if (m == 0.0) return 0.0;
  if (a >= 1.0) return kInf;
  return std::pow(m, 1.0 - a) / (1.0 - a);
}

// integral of x^{-alpha} over [lo, hi], 0 < lo <= hi
double integral_pow_off_zero(double lo, double hi, double a) {
  if (a == 1.0) return std::log(hi / lo);
  return (std::pow(hi, 1.0 - a) - std::pow(lo, 1.0 - a)) / (1.0 - a);
}

}  // namespace

double integral_abs_pow_neg(double lo, double hi, Alpha alpha) {
  if (!(lo <= hi)) throw std::invalid_argument("bad interval");
  const double a = alpha.value();
  if (a == 0.0) return hi - lo;
  if (lo >= 0.0 && hi >= 0.0) {
    if (lo == 0.0) return integral_pow_from_zero(hi, a);
    return integral_pow_off_zero(lo, hi, a);
  }
  if (lo <= 0.0 && hi <= 0.0) return integral_abs_pow_neg(-hi, -lo, alpha);
  // straddles 0
  const double left = integral_pow_from_zero(-lo, a);
  const double right = integral_pow_from_zero(hi, a);
  return left + right;
}

double grushin_area(const Rect& r, Alpha alpha) {
  if (!(r.width() > 0.0) || !(r.height() > 0.0))
    throw std::invalid_argument("rectangle must have positive side lengths");
  return integral_abs_pow_neg(r.x_min, r.x_max, alpha) * r.height();
}

}  // namespace grushin
