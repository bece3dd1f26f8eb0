#pragma once

#include <cstdint>
#include <optional>

#include "grushin/distance.hpp"
#include "grushin/grid.hpp"
#include "grushin/maps.hpp"

namespace grushin {

struct DilatationSample {
  double radius = 0.0;
  double ratio = 0.0;   // max image distance / min image distance
  int rays_ok = 0;
  int rays_total = 0;
};

struct DilatationReport {
  Point point;
  std::vector<DilatationSample> per_radius;  // in the given radius order
  double estimate = 0.0;  // ratio at the smallest radius whose rays all passed
  bool reliable = false;
};

struct DilatationOptions {
  int n_dirs = 32;
  SphereOptions sphere;
  DistanceOptions target_solver;  // used when the target metric is Grushin
};

/// Metric dilatation estimate of m at p: for each radius, sample the source
/// sphere, map it, and take the max/min ratio of target distances. The
/// smallest reliable radius stands in for the limsup; the full radius
/// sequence is reported so the trend is visible.
DilatationReport metric_dilatation(const MapSpec& m, Point p,
                                   const std::vector<double>& radii, Metric source,
                                   Metric target, Alpha alpha,
                                   const DilatationOptions& opts = {});

struct EtaSample {
  double t_lo = 0.0, t_hi = 0.0;  // bin edges
  double t_at_max = 0.0;          // t of the worst triple in the bin
  double max_ratio = 0.0;         // its image distortion
  long count = 0;
};

struct QuasisymmetryOptions {
  long triples = 1000;
  std::uint64_t seed = 12345;
  DistanceOptions solver;  // used for Grushin distances
};

/// Empirical lower envelope of any valid quasisymmetry control function:
/// random triples (x,y,z) in the box, binned by t = d(x,y)/d(x,z), recording
/// the worst image ratio per bin. Never an upper bound on the true eta.
std::vector<EtaSample> quasisymmetry_profile(const MapSpec& m, Rect box,
                                             const std::vector<double>& t_bin_edges,
                                             Metric source, Metric target,
                                             Alpha alpha,
                                             const QuasisymmetryOptions& opts = {});

struct BeltramiResult {
  double magnitude = 0.0;
  bool degenerate = false;  // the direct-type derivative vanished
};

/// |mu(p)| of the composition (canonical map) o f via central finite
/// differences of the two degenerate Wirtinger-type derivatives
/// (d/dx1 -+ i |x1|^alpha d/dx2). Requires |p.x1| > 2h so the stencil stays
/// off the singular line.
BeltramiResult beltrami_coefficient(const MapSpec& f, Point p, double h,
                                    Alpha alpha);

/// Default finite-difference step: max(1e-5, 1e-3 |x1|).
double beltrami_default_step(Point p);

struct DataConversion {
  double K = 1.0;
  double C_K = 1.0;       // 4^{K-1} exp(6 (K+1)^2 sqrt(K-1))
  double mu_norm = 0.0;   // (K-1)/(K+1)
  double eta0(double t) const;  // C_K max{t^K, t^{1/K}}
};

/// Quantitative conversions between the geometric constant K, the
/// quasisymmetry control eta_0, and the Beltrami norm.
DataConversion data_conversions(double K);

/// Combined distortion summary of one map: dilatation samples across base
/// points and radii, the empirical quasisymmetry envelope, and (when
/// computed) the geometric constant and the sup of |mu| over probe points.
struct DistortionReport {
  struct HEstimate {
    Point point;
    double radius = 0.0;
    double ratio = 0.0;
  };
  std::vector<HEstimate> H_estimates;
  std::vector<EtaSample> eta_samples;
  std::optional<double> K_geometric;
  std::optional<double> beltrami_sup;
};

DistortionReport make_distortion_report(
    const std::vector<DilatationReport>& dilatations,
    std::vector<EtaSample> eta_samples, std::optional<double> K_geometric,
    std::optional<double> beltrami_sup);

}  // namespace grushin
