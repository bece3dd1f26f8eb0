#pragma once

#include <functional>

#include "grushin/geometry.hpp"

namespace grushin {

enum class LengthStatus { Converged, Infinite, DidNotConverge };

struct LengthResult {
  double value = 0.0;
  LengthStatus status = LengthStatus::Converged;

  bool finite_ok() const { return status == LengthStatus::Converged; }
};

/// Grushin length of the straight segment a->b. Segments crossing or touching
/// x1 = 0 are split at the crossing and integrated with geometrically graded
/// subintervals toward the singular endpoint (ratio 1/2, width floor 1e-12).
/// A sub-integral with an endpoint exactly on x1 = 0, nonzero transverse
/// velocity and alpha >= 1 is infinite by comparison with the divergent
/// integral of |x1|^{-alpha}; near-singular sub-integrals are additionally
/// declared infinite by a growth threshold (three successive refinements each
/// growing the partial sum by more than 10% while it exceeds 1e6).
LengthResult segment_grushin_length(Point a, Point b, Alpha alpha);

/// Sum of segment lengths; Infinite dominates DidNotConverge dominates
/// Converged.
LengthResult polyline_grushin_length(const Polyline& c, Alpha alpha);

/// Fixed 8-point Gauss-Legendre rule on [a,b].
double gauss_legendre_8(const std::function<double(double)>& f, double a,
                        double b);

/// Adaptive bisection on top of the 8-point rule. rel_tol is relative to the
/// local panel value.
double adaptive_panel(const std::function<double(double)>& f, double a,
                      double b, double rel_tol = 1e-10, int max_depth = 32);

}  // namespace grushin
