#include "grushin/curves.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "grushin/distance.hpp"

namespace grushin {

namespace {

// strictly increasing offsets from the left endpoint for geometric grading:
// dyadic levels of the span, points split evenly across levels
std::vector<double> graded_offsets(double span, int n, double log2_min_offset) {
  const int levels =
      std::max(1, std::min(n - 1, static_cast<int>(log2_min_offset)));
  std::vector<double> offsets;
  offsets.reserve(n);
  const int per = (n - 1) / levels;
  int extra = (n - 1) % levels;
  // level l covers offsets (span 2^-(l+1), span 2^-l], l = levels-1 downward
  for (int l = levels - 1; l >= 0; --l) {
    int count = per + (extra > 0 ? 1 : 0);
    if (extra > 0) --extra;
    const double lo = span * std::exp2(-static_cast<double>(l + 1));
    const double hi = span * std::exp2(-static_cast<double>(l));
    for (int i = 1; i <= count; ++i)
      offsets.push_back(lo + (hi - lo) * i / count);
  }
  offsets.back() = span;
  return offsets;
}

}  // namespace

Polyline sample_curve(const ParametricCurve& c, int n, Grading grading) {
  if (n < 2) throw std::invalid_argument("sample_curve needs n >= 2");
  if (!c.eval) throw std::invalid_argument("curve has no evaluator");
  const double span = c.t1 - c.t0;
  if (!(span > 0.0)) throw std::invalid_argument("curve domain is empty");

  std::vector<double> params;
  params.reserve(n);
  if (grading == Grading::Uniform) {
    const double t_first = c.open_left ? c.t0 + span / n : c.t0;
    for (int i = 0; i < n; ++i)
      params.push_back(t_first + (c.t1 - t_first) * i / (n - 1));
  } else {
    const std::vector<double> offs = graded_offsets(span, n, 40.0);
    params.push_back(c.t0 + span * 0x1p-40);
    for (double o : offs) params.push_back(c.t0 + o);
    while (static_cast<int>(params.size()) > n) params.erase(params.begin() + 1);
  }

  std::vector<Point> vertices;
  vertices.reserve(params.size());
  for (double t : params) {
    const Point p = c.eval(t);
    if (!finite(p)) throw std::invalid_argument("curve evaluator returned non-finite point");
    vertices.push_back(p);
  }
  // drop repeated consecutive vertices (flat stretches of the evaluator)
  std::vector<Point> vs;
  std::vector<double> ps;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!vs.empty() && vertices[i].x1 == vs.back().x1 &&
        vertices[i].x2 == vs.back().x2)
      continue;
    vs.push_back(vertices[i]);
    ps.push_back(params[i]);
  }
  return Polyline::make(std::move(vs), std::move(ps));
}

ParametricCurve nonrectifiable_curve(double a, Alpha alpha) {
  if (!(alpha.value() > 0.0))
    throw std::invalid_argument("the nonrectifiable family needs alpha > 0");
  ParametricCurve c;
  c.t0 = 0.0;
  c.t1 = 0.5;
  c.open_left = true;
  const double av = alpha.value();
  c.eval = [a, av](double t) -> Point {
    return {t, -std::pow(t, av) / std::log(t) + a};
  };
  c.label = "gamma_a(a=" + std::to_string(a) + ")";
  return c;
}

ParametricCurve nonrectifiable_image_curve(double a, Alpha alpha) {
  if (!(alpha.value() > 0.0))
    throw std::invalid_argument("the nonrectifiable family needs alpha > 0");
  ParametricCurve c;
  c.t0 = 0.0;
  c.t1 = 0.5;
  c.open_left = true;
  const double av = alpha.value();
  c.eval = [a, av](double t) -> Point {
    return {std::pow(t, 1.0 + av) / (1.0 + av),
            -std::pow(t, av) / std::log(t) + a};
  };
  c.label = "gamma_tilde_a(a=" + std::to_string(a) + ")";
  return c;
}

namespace {

double polyline_metric_length(const Polyline& p, Alpha alpha, Metric metric,
                              bool* infinite) {
  *infinite = false;
  if (metric == Metric::Euclidean) return p.euclidean_length();
  const LengthResult r = polyline_grushin_length(p, alpha);
  if (r.status == LengthStatus::Infinite) {
    *infinite = true;
    return kInf;
  }
  return r.value;
}

// polyline sample for the probe at refinement k: for left-open domains the
// leftmost offset is span * 2^-w with w = 8 * 1.155^(k - k_min). The ratio
// keeps the per-refinement length growth of log-log divergent integrands
// near 3% (visible to the 2% threshold) while the deepest offsets stay above
// the scale where double precision absorbs the curve's vertical increments
// (w <= 45 through a doubled refinement ceiling).
Polyline probe_sample(const ParametricCurve& c, int k, int k_min) {
  const int n = (1 << k) + 1;
  const double span = c.t1 - c.t0;
  if (!c.open_left) {
    ParametricCurve cc = c;
    return sample_curve(cc, n, Grading::Uniform);
  }
  const double w =
      std::min(45.0, 8.0 * std::pow(1.155, static_cast<double>(k - k_min)));
  const std::vector<double> offs = graded_offsets(span, n, w);
  std::vector<double> params;
  params.reserve(offs.size());
  for (double o : offs) params.push_back(c.t0 + o);
  std::vector<Point> vertices;
  vertices.reserve(params.size());
  for (double t : params) vertices.push_back(c.eval(t));
  std::vector<Point> vs;
  std::vector<double> ps;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!vs.empty() && vertices[i].x1 == vs.back().x1 &&
        vertices[i].x2 == vs.back().x2)
      continue;
    vs.push_back(vertices[i]);
    ps.push_back(params[i]);
  }
  return Polyline::make(std::move(vs), std::move(ps));
}

}  // namespace

RectifiabilityReport rectifiability_probe(const ParametricCurve& c, Alpha alpha,
                                          Metric metric,
                                          const RectifiabilityOptions& opts) {
  RectifiabilityReport rep;
  for (int k = opts.k_min; k <= opts.k_max; ++k) {
    const Polyline sample = probe_sample(c, k, opts.k_min);
    bool infinite = false;
    const double len = polyline_metric_length(sample, alpha, metric, &infinite);
    rep.ks.push_back(k);
    rep.lengths.push_back(len);
    if (infinite) {
      rep.verdict = RectifiabilityVerdict::Divergent;
      rep.length = kInf;
      return rep;
    }
  }
  const auto& L = rep.lengths;
  const std::size_t m = L.size();
  rep.length = L.back();

  bool cauchy = m >= 4;
  for (std::size_t i = m - 3; cauchy && i < m; ++i)
    cauchy = std::fabs(L[i] - L[i - 1]) < opts.cauchy_rel * std::fabs(L[i]);
  if (cauchy) {
    rep.verdict = RectifiabilityVerdict::Convergent;
    return rep;
  }
  bool growing = m >= 5;
  for (std::size_t i = m - 4; growing && i < m; ++i)
    growing = (L[i] - L[i - 1]) > opts.growth_rel * L[i - 1];
  rep.verdict = growing ? RectifiabilityVerdict::Divergent
                        : RectifiabilityVerdict::Inconclusive;
  return rep;
}

namespace {

struct Gap {
  int level;
  double a, b;
};

void collect_gaps(double lo, double hi, double L, int level, int depth,
                  std::vector<Gap>& gaps) {
  if (level > depth) return;
  const double len = hi - lo;
  const double gap = len * (1.0 - 2.0 * L);
  const double a = lo + L * len;
  const double b = a + gap;
  gaps.push_back({level, a, b});
  collect_gaps(lo, a, L, level + 1, depth, gaps);
  collect_gaps(b, hi, L, level + 1, depth, gaps);
}

}  // namespace

CantorCurveResult cantor_curve(const CantorCurveSpec& spec) {
  if (!(spec.L > 0.0 && spec.L < 0.5))
    throw std::invalid_argument("cantor_curve needs L in (0, 1/2)");
  if (spec.depth < 1 || spec.depth > 12)
    throw std::invalid_argument("cantor_curve depth must be in [1, 12]");
  const Alpha alpha(spec.alpha);

  std::vector<Gap> gaps;
  collect_gaps(0.0, 1.0, spec.L, 1, spec.depth, gaps);
  std::sort(gaps.begin(), gaps.end(),
            [](const Gap& x, const Gap& y) { return x.a < y.a; });

  const Polyline& unit = unit_Y_geodesic(alpha);

  CantorCurveResult out;
  out.s = spec.s();
  out.ratio_predicted = 2.0 * std::pow(spec.L, 1.0 / (1.0 + spec.alpha));
  out.convergent = out.ratio_predicted < 1.0;

  // one measured arc length per level (all gaps of a level share one size)
  std::vector<double> arc_len(spec.depth + 1, 0.0);
  for (int lvl = 1; lvl <= spec.depth; ++lvl) {
    const double gap = std::pow(spec.L, lvl - 1) * (1.0 - 2.0 * spec.L);
    const double lambda = std::pow(gap, 1.0 / (1.0 + spec.alpha));
    std::vector<Point> verts;
    verts.reserve(unit.size());
    for (const Point& v : unit.vertices)
      verts.push_back({lambda * v.x1, gap * v.x2});
    const LengthResult r =
        polyline_grushin_length(Polyline::through(std::move(verts)), alpha);
    arc_len[lvl] = r.value;
  }

  std::vector<Point> curve;
  curve.push_back({0.0, 0.0});
  for (const Gap& g : gaps) {
    const double gap = g.b - g.a;
    const double lambda = std::pow(gap, 1.0 / (1.0 + spec.alpha));
    if (curve.back().x2 < g.a)
      curve.push_back({0.0, g.a});  // leftover dust bridged along Y
    for (std::size_t i = 1; i < unit.size(); ++i)
      curve.push_back({lambda * unit.vertices[i].x1,
                       gap * unit.vertices[i].x2 + g.a});
  }
  if (curve.back().x2 < 1.0) curve.push_back({0.0, 1.0});
  out.curve = Polyline::through(std::move(curve));

  double running = 0.0;
  for (int lvl = 1; lvl <= spec.depth; ++lvl) {
    CantorLevel cl;
    cl.level = lvl;
    cl.count = 1L << (lvl - 1);
    cl.gap_length = std::pow(spec.L, lvl - 1) * (1.0 - 2.0 * spec.L);
    cl.arc_length = arc_len[lvl];
    cl.contribution = cl.count * cl.arc_length;
    running += cl.contribution;
    out.levels.push_back(cl);
    out.partial_sums.push_back(running);
  }
  return out;
}

bool monotone_permutation_check(const std::vector<double>& points,
                                const std::vector<int>& sigma, Alpha alpha,
                                double C) {
  const std::size_t n = points.size();
  if (n < 2) return true;
  for (std::size_t i = 1; i < n; ++i)
    if (!(points[i] > points[i - 1]))
      throw std::invalid_argument("points must be strictly increasing");
  if (sigma.size() != n) throw std::invalid_argument("sigma size mismatch");
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    lhs += snowflake_distance_on_Y(points[k - 1], points[k], alpha, C);
    rhs += snowflake_distance_on_Y(points[sigma[k - 1]], points[sigma[k]],
                                   alpha, C);
  }
  return lhs <= rhs * (1.0 + 1e-12) + 1e-12;
}

bool monotone_permutation_exhaustive(const std::vector<double>& points,
                                     Alpha alpha, double C) {
  const std::size_t n = points.size();
  if (n > 9)
    throw std::invalid_argument("exhaustive permutation check capped at 9 points");
  std::vector<int> sigma(n);
  for (std::size_t i = 0; i < n; ++i) sigma[i] = static_cast<int>(i);
  do {
    if (!monotone_permutation_check(points, sigma, alpha, C)) return false;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return true;
}

bool monotone_permutation_sampled(const std::vector<double>& points,
                                  Alpha alpha, double C, int trials,
                                  std::uint64_t seed) {
  std::vector<int> sigma(points.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = static_cast<int>(i);
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    std::shuffle(sigma.begin(), sigma.end(), rng);
    if (!monotone_permutation_check(points, sigma, alpha, C)) return false;
  }
  return true;
}

long snowflake_covering_number(double b, double eps, Alpha alpha, double C) {
  if (!(b > 0.0) || !(eps > 0.0)) throw std::invalid_argument("bad cover input");
  // a Grushin eps-ball centered on Y covers a y-interval of half-width
  // (eps/C)^{1+alpha}
  const double half = std::pow(eps / C, 1.0 + alpha.value());
  return static_cast<long>(std::ceil(b / (2.0 * half)));
}

double snowflake_box_dimension(double b, double eps, Alpha alpha, double C) {
  const double n1 = static_cast<double>(snowflake_covering_number(b, eps, alpha, C));
  const double n2 =
      static_cast<double>(snowflake_covering_number(b, 0.5 * eps, alpha, C));
  return std::log(n2 / n1) / std::log(2.0);
}

}  // namespace grushin
