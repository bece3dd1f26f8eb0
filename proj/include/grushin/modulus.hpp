#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grushin/curves.hpp"
#include "grushin/grid.hpp"

namespace grushin {

/// One member of a sampled curve family. A member may stand in for a
/// transversal band of a foliated continuum family: band_leaves then holds
/// the sub-leaves whose line integrals are averaged into the member's
/// admissibility constraint. Without band data the constraint is the plain
/// line integral of the curve.
struct FamilyMember {
  Polyline curve;
  std::vector<Polyline> band_leaves;
};

struct CurveFamily {
  std::vector<FamilyMember> members;
  std::string label;

  std::size_t size() const { return members.size(); }
};

/// Integral of rho along c in the chosen metric: bilinear density samples at
/// segment-subdivision midpoints times the metric length of each piece,
/// refined until stable. Throws if the curve exits the grid bbox or if it
/// carries infinite metric length through cells of nonzero density.
double line_integral(const DensityGrid& rho, const Polyline& c, Metric metric,
                     Alpha alpha);

struct GridSpec {
  std::optional<Rect> bbox;  // defaults to the family hull padded 10%
  int nx = 256;
  int ny = 256;
  double weight_scale = 1.0;  // rescales the measure; the modulus scales with it
};

struct ModulusOptions {
  long max_sweeps = 100000;
  double residual_tol = 1e-6;
  bool two_resolution = true;  // also solve at half resolution
};

struct ModulusResult {
  double value = 0.0;        // certified upper bound of the discrete modulus
  double residual = 0.0;     // max constraint violation before final scaling
  long iterations = 0;       // dual ascent sweeps
  bool converged = true;
  DensityGrid density;       // optimal (scaled, admissible) density
  double coarse_value = 0.0; // value at half resolution (0 when disabled)
  double richardson = 0.0;   // first-order extrapolation note
};

/// Discrete 2-modulus of the family on a weighted density grid:
///   min sum_c w_c rho_c^2   s.t.  one averaged line-integral constraint
/// per member >= 1 and rho >= 0, solved by Hildreth dual coordinate ascent.
/// The returned density is feasibility-scaled upward, so value is an upper
/// bound of the discrete optimum.
ModulusResult solve_modulus(const CurveFamily& family, const GridSpec& grid,
                            Metric metric, Alpha alpha,
                            const ModulusOptions& opts = {});

enum class RingCoords { Euclidean, GrushinPullback };

struct RingOptions {
  int leaves_per_band = 0;  // 0: choose so leaf spacing resolves a 256 grid
};

/// Radial curve family of the round annulus r_in < |z - center| < r_out:
/// n radial members, each standing for its angular sector (band averaging).
/// In GrushinPullback coordinates every leaf is mapped through the inverse
/// canonical map and resampled with refinement near the singular column;
/// band centers are offset so no leaf degenerates into the singular line.
CurveFamily ring_family(Point center, double r_in, double r_out, int n,
                        RingCoords coords, Alpha alpha,
                        const RingOptions& opts = {});

struct NonrectifiableFamilyOptions {
  int family_size = 33;
  int leaves_per_band = 8;
  int grid_n = 512;
  long max_sweeps = 100000;
};

struct NonrectifiableFamilyBound {
  double upper_integral = 0.0;        // I
  double upper_integral_coarse = 0.0; // I on the coarser quadrature grid
  double modulus_lower_bound = 0.0;   // 1 / I
  double family_modulus_estimate = 0.0;
  ModulusResult modulus;
};

/// The positive-modulus certificate of the nonrectifiable family:
/// I = int_0^{1/2} [t^a + t^-a (t^{a-1}/log^2 t - a t^{a-1}/log t)^2] dt
/// evaluated on two quadrature grids, the lower bound 1/I, and the discrete
/// modulus of the sampled family of image curves. Rejects alpha < 1 (the
/// integral diverges there).
NonrectifiableFamilyBound nonrectifiable_family_bound(Alpha alpha,
                                     const NonrectifiableFamilyOptions& opts = {});

/// The certificate integral alone. refine doubles the quadrature panels.
double certificate_integral(Alpha alpha, int refine = 1);

/// Euclidean-image family of the nonrectifiable curves, banded in the
/// translation parameter a over [0, 1].
CurveFamily nonrectifiable_family(Alpha alpha, int count, int leaves_per_band);

}  // namespace grushin
