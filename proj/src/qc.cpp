#include "grushin/qc.hpp"

#include <cmath>
#include <complex>
#include <random>

namespace grushin {

namespace {

double target_distance(Point a, Point b, Metric metric, Alpha alpha,
                       const DistanceOptions& opts) {
  if (metric == Metric::Euclidean) return euclidean_distance(a, b);
  return grushin_distance(a, b, alpha, opts).value;
}

std::vector<Point> source_sphere(Point center, double r, int n, Metric metric,
                                 Alpha alpha, const SphereOptions& sphere,
                                 int* failures) {
  *failures = 0;
  if (metric == Metric::Euclidean) {
    std::vector<Point> pts(n);
    for (int k = 0; k < n; ++k) {
      const double th = 2.0 * M_PI * k / n;
      pts[k] = {center.x1 + r * std::cos(th), center.x2 + r * std::sin(th)};
    }
    return pts;
  }
  const GrushinBallSample s = grushin_sphere_sample(center, r, n, alpha, sphere);
  *failures = s.failures;
  return s.boundary_points;
}

}  // namespace

DilatationReport metric_dilatation(const MapSpec& m, Point p,
                                   const std::vector<double>& radii, Metric source,
                                   Metric target, Alpha alpha,
                                   const DilatationOptions& opts) {
  if (opts.n_dirs < 16)
    throw std::invalid_argument("metric_dilatation needs n_dirs >= 16");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1]))
      throw std::invalid_argument("radii must be positive decreasing");

  DilatationReport rep;
  rep.point = p;
  const Point fp = m(p);
  for (double r : radii) {
    if (!(r > 0.0)) throw std::invalid_argument("radii must be positive");
    int failures = 0;
    const std::vector<Point> sphere =
        source_sphere(p, r, opts.n_dirs, source, alpha, opts.sphere, &failures);
    double lo = kInf, hi = 0.0;
    for (const Point& q : sphere) {
      const double d = target_distance(fp, m(q), target, alpha, opts.target_solver);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    DilatationSample s;
    s.radius = r;
    s.ratio = hi / lo;
    s.rays_total = opts.n_dirs;
    s.rays_ok = opts.n_dirs - failures;
    rep.per_radius.push_back(s);
  }
  for (auto it = rep.per_radius.rbegin(); it != rep.per_radius.rend(); ++it) {
    if (it->rays_ok == it->rays_total) {
      rep.estimate = it->ratio;
      rep.reliable = true;
      break;
    }
  }
  if (!rep.reliable && !rep.per_radius.empty())
    rep.estimate = rep.per_radius.back().ratio;
  return rep;
}

std::vector<EtaSample> quasisymmetry_profile(const MapSpec& m, Rect box,
                                             const std::vector<double>& t_bin_edges,
                                             Metric source, Metric target,
                                             Alpha alpha,
                                             const QuasisymmetryOptions& opts) {
  if (opts.triples < 1000)
    throw std::invalid_argument("quasisymmetry_profile needs >= 1000 triples");
  if (t_bin_edges.size() < 2)
    throw std::invalid_argument("need at least one t bin");
  for (std::size_t i = 1; i < t_bin_edges.size(); ++i)
    if (!(t_bin_edges[i] > t_bin_edges[i - 1]))
      throw std::invalid_argument("t bins must be increasing");
  if (!(box.width() > 0.0) || !(box.height() > 0.0))
    throw std::invalid_argument("sampling box must be bounded and nonempty");

  std::vector<EtaSample> bins(t_bin_edges.size() - 1);
  for (std::size_t b = 0; b < bins.size(); ++b) {
    bins[b].t_lo = t_bin_edges[b];
    bins[b].t_hi = t_bin_edges[b + 1];
  }

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> ux(box.x_min, box.x_max);
  std::uniform_real_distribution<double> uy(box.y_min, box.y_max);
  auto draw = [&]() -> Point { return {ux(rng), uy(rng)}; };

  long done = 0;
  long guard = 0;
  const long guard_cap = opts.triples * 64;
  while (done < opts.triples && guard++ < guard_cap) {
    const Point x = draw(), y = draw(), z = draw();
    const double dxz = target_distance(x, z, source, alpha, opts.solver);
    if (!(dxz > 0.0) || !std::isfinite(dxz)) continue;  // degenerate: resample
    const double dxy = target_distance(x, y, source, alpha, opts.solver);
    if (!std::isfinite(dxy)) continue;
    const double t = dxy / dxz;
    std::size_t b = bins.size();
    for (std::size_t i = 0; i < bins.size(); ++i)
      if (t >= bins[i].t_lo && t < bins[i].t_hi) {
        b = i;
        break;
      }
    ++done;
    if (b == bins.size()) continue;  // outside the requested range
    const Point fx = m(x), fy = m(y), fz = m(z);
    const double ixz = target_distance(fx, fz, target, alpha, opts.solver);
    const double ixy = target_distance(fx, fy, target, alpha, opts.solver);
    if (!(ixz > 0.0) || !std::isfinite(ixy)) continue;
    const double ratio = ixy / ixz;
    ++bins[b].count;
    if (ratio > bins[b].max_ratio) {
      bins[b].max_ratio = ratio;
      bins[b].t_at_max = t;
    }
  }
  return bins;
}

BeltramiResult beltrami_coefficient(const MapSpec& f, Point p, double h,
                                    Alpha alpha) {
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
  if (!(std::fabs(p.x1) > 2.0 * h))
    throw std::invalid_argument("beltrami stencil must stay off the singular line");
  const Alpha a = alpha;
  auto w = [&](double x1, double x2) -> std::complex<double> {
    const Point img = canonical_phi(f({x1, x2}), a);
    return {img.x1, img.x2};
  };
  const std::complex<double> dx =
      (w(p.x1 + h, p.x2) - w(p.x1 - h, p.x2)) / (2.0 * h);
  const std::complex<double> dy =
      (w(p.x1, p.x2 + h) - w(p.x1, p.x2 - h)) / (2.0 * h);
  const std::complex<double> i(0.0, 1.0);
  const double scale = abs_pow(p.x1, a.value());
  const std::complex<double> d_plus = dx + i * scale * dy;   // annihilates conformal maps
  const std::complex<double> d_minus = dx - i * scale * dy;
  BeltramiResult out;
  const double denom = std::abs(d_minus);
  if (denom < 1e-12 * (std::abs(d_plus) + denom)) {
    out.degenerate = true;
    return out;
  }
  out.magnitude = std::abs(d_plus) / denom;
  return out;
}

double beltrami_default_step(Point p) {
  return std::max(1e-5, 1e-3 * std::fabs(p.x1));
}

double DataConversion::eta0(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("eta0 domain is [0, inf)");
  if (t == 0.0) return 0.0;
  return C_K * std::max(std::pow(t, K), std::pow(t, 1.0 / K));
}

DataConversion data_conversions(double K) {
  if (!(K >= 1.0)) throw std::invalid_argument("data_conversions needs K >= 1");
  DataConversion d;
  d.K = K;
  d.C_K = std::pow(4.0, K - 1.0) *
          std::exp(6.0 * (K + 1.0) * (K + 1.0) * std::sqrt(K - 1.0));
  d.mu_norm = (K - 1.0) / (K + 1.0);
  return d;
}

DistortionReport make_distortion_report(
    const std::vector<DilatationReport>& dilatations,
    std::vector<EtaSample> eta_samples, std::optional<double> K_geometric,
    std::optional<double> beltrami_sup) {
  DistortionReport out;
  for (const DilatationReport& d : dilatations)
    for (const DilatationSample& s : d.per_radius)
      out.H_estimates.push_back({d.point, s.radius, s.ratio});
  out.eta_samples = std::move(eta_samples);
  out.K_geometric = K_geometric;
  out.beltrami_sup = beltrami_sup;
  return out;
}

}  // namespace grushin
