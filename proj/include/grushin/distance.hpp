#pragma once

#include <optional>
#include <vector>

#include "grushin/quadrature.hpp"

namespace grushin {

struct DistanceOptions {
  double rel_tol = 1e-3;      // stop refining when relative improvement drops below
  int max_vertices = 129;     // dyadic vertex ladder cap
  int min_vertices = 9;       // ladder start
  int max_sweeps = 60;        // coordinate-descent sweeps per ladder stage
  bool multistart = true;     // straight segment + both mirror bulges
  bool parallel_starts = true;
  std::optional<Polyline> warm_start;  // endpoints must match p and q
};

struct DistanceResult {
  double value = 0.0;
  bool converged = true;
  Polyline path;
  std::vector<double> refinement_history;  // best value after each ladder stage
  long evaluations = 0;
};

/// Upper bound on d_alpha(p,q) by direct transcription: multi-start polyline
/// initialization, derivative-free coordinate-wise vertex descent, dyadic
/// vertex refinement. The returned value decreases monotonically across
/// refinement stages; non-convergence within the budget is flagged, never
/// silent.
DistanceResult grushin_distance(Point p, Point q, Alpha alpha,
                                const DistanceOptions& opts = {});

/// The constant C = d_alpha((0,0),(0,1)), computed once per alpha and cached.
double snowflake_constant(Alpha alpha);

/// Optimal polyline for the unit snowflake constant solve, cached per alpha
/// (used to transport geodesic arcs by the dilation law).
const Polyline& unit_Y_geodesic(Alpha alpha);

struct GrushinBallSample {
  Point center;
  double radius = 0.0;
  std::vector<Point> boundary_points;
  std::vector<bool> ray_ok;           // per-direction bisection success
  std::vector<double> achieved;       // measured distance of each point
  int failures = 0;
};

struct SphereOptions {
  double rel_tol = 2e-3;      // |d - r| <= rel_tol * r per ray
  int max_bisect = 48;
  DistanceOptions solver;     // solver used along the rays
};

/// n points at Grushin distance r from center, located by bisection along n
/// equally spaced Euclidean rays. Failed rays are flagged, not dropped
/// silently.
GrushinBallSample grushin_sphere_sample(Point center, double r, int n,
                                        Alpha alpha,
                                        const SphereOptions& opts = {});

}  // namespace grushin
