#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "grushin/grid.hpp"
#include "grushin/quadrature.hpp"

namespace grushin {

/// Curve given by an evaluator on a parameter interval. open_left marks a
/// domain of the form (t0, t1]: the evaluator may be singular or undefined
/// at t0 itself.
struct ParametricCurve {
  double t0 = 0.0;
  double t1 = 1.0;
  bool open_left = false;
  std::function<Point(double)> eval;
  std::string label;
};

enum class Grading { Uniform, GeometricAtLeft };

/// Sample n parameters of c into a Polyline. GeometricAtLeft clusters
/// parameters toward the left endpoint with step ratio 1/2 and smallest
/// offset 2^-40 of the domain span (the behavior of interest for the
/// nonrectifiable family sits at t -> 0+).
Polyline sample_curve(const ParametricCurve& c, int n, Grading grading);

/// gamma_a(t) = (t, -t^alpha/log t + a) on (0, 1/2]: Grushin-plane curves of
/// the positive-modulus nonrectifiable family. Requires alpha > 0.
ParametricCurve nonrectifiable_curve(double a, Alpha alpha);

/// Image of gamma_a under the canonical map:
/// (t^{1+alpha}/(1+alpha), -t^alpha/log t + a).
ParametricCurve nonrectifiable_image_curve(double a, Alpha alpha);

enum class RectifiabilityVerdict { Convergent, Divergent, Inconclusive };

struct RectifiabilityReport {
  RectifiabilityVerdict verdict = RectifiabilityVerdict::Inconclusive;
  double length = 0.0;              // last finite length (the limit when convergent)
  std::vector<double> lengths;      // raw sequence for audit
  std::vector<int> ks;              // refinement exponents (n = 2^k + 1)
};

struct RectifiabilityOptions {
  int k_min = 6;
  int k_max = 16;
  double cauchy_rel = 1e-3;   // convergent: relative change below this, last 3
  double growth_rel = 0.02;   // divergent: relative growth above this, last 4
};

/// Length verdict from graded polyline samples with n = 2^k+1 vertices,
/// k = k_min..k_max. For left-open domains the leftmost parameter marches
/// toward the endpoint doubly-geometrically across refinements, which turns
/// the slow (log log) divergence of the nonrectifiable family into steady
/// per-refinement growth the thresholds can see.
RectifiabilityReport rectifiability_probe(const ParametricCurve& c, Alpha alpha,
                                          Metric metric,
                                          const RectifiabilityOptions& opts = {});

struct CantorCurveSpec {
  double L = 0.2;     // in (0, 1/2)
  int depth = 8;      // <= 12
  double alpha = 1.0;

  double s() const { return (1.0 + alpha) * std::log(2.0) / std::log(1.0 / L); }
};

struct CantorLevel {
  int level = 0;            // 1-based
  long count = 0;           // 2^(level-1)
  double gap_length = 0.0;  // L^(level-1) (1-2L)
  double arc_length = 0.0;  // measured Grushin length of one geodesic arc
  double contribution = 0.0;  // count * arc_length
};

struct CantorCurveResult {
  Polyline curve;                    // finite-depth approximant
  std::vector<CantorLevel> levels;
  std::vector<double> partial_sums;  // cumulative contribution per level
  double s = 0.0;                    // Grushin Hausdorff dimension of the dust
  double ratio_predicted = 0.0;      // 2 L^{1/(1+alpha)}
  bool convergent = false;           // ratio_predicted < 1
};

/// Cantor-type curve through the singular line: removes middle intervals of
/// length L^{n-1}(1-2L) down to the given depth and bridges each with a
/// Grushin geodesic arc (one cached unit geodesic transported by the dilation
/// law). Bookkeeping carries the per-level length contributions whose ratio
/// is 2 L^{1/(1+alpha)}.
CantorCurveResult cantor_curve(const CantorCurveSpec& spec);

/// Monotone rearrangement inequality on the singular line: the sum of
/// consecutive snowflake distances is minimal among all visiting orders.
/// points must be strictly increasing; sigma is the candidate order.
bool monotone_permutation_check(const std::vector<double>& points,
                                const std::vector<int>& sigma, Alpha alpha,
                                double C);

/// Exhaustive version over all permutations; points count capped at 9.
bool monotone_permutation_exhaustive(const std::vector<double>& points,
                                     Alpha alpha, double C);

/// Randomized version for larger tuples: checks `trials` random permutations.
bool monotone_permutation_sampled(const std::vector<double>& points,
                                  Alpha alpha, double C, int trials,
                                  std::uint64_t seed);

/// Number of Grushin eps-balls needed to cover the segment {0} x [0, b] of
/// the singular line (greedy cover along the snowflake).
long snowflake_covering_number(double b, double eps, Alpha alpha, double C);

/// Local box-counting dimension estimate of the singular line at scale eps:
/// slope of log N between eps and eps/2. Tends to 1 + alpha.
double snowflake_box_dimension(double b, double eps, Alpha alpha, double C);

}  // namespace grushin
