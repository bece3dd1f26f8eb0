#pragma once

#include <vector>

#include "grushin/geometry.hpp"

namespace grushin {

enum class Metric { Euclidean, Grushin };

/// Nonnegative density on a rectangular cell grid plus per-cell measure
/// weights. Euclidean weights are cell areas; Grushin weights are the column
/// integral of |x1|^{-alpha} times the cell height. Cells of infinite weight
/// (the singular column for alpha >= 1) are pinned: their value is forced to
/// zero and they carry no energy.
struct DensityGrid {
  Rect bbox{0, 1, 0, 1};
  int nx = 0, ny = 0;
  std::vector<double> values;   // row-major, j * nx + i
  std::vector<double> weights;  // same layout; +inf marks a pinned cell

  static DensityGrid euclidean(const Rect& bbox, int nx, int ny);
  static DensityGrid grushin(const Rect& bbox, int nx, int ny, Alpha alpha);

  double cell_dx() const { return bbox.width() / nx; }
  double cell_dy() const { return bbox.height() / ny; }
  Point cell_center(int i, int j) const {
    return {bbox.x_min + (i + 0.5) * cell_dx(), bbox.y_min + (j + 0.5) * cell_dy()};
  }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * nx + i;
  }
  bool pinned(std::size_t idx) const { return !std::isfinite(weights[idx]); }

  /// Bilinear interpolation on the cell-center lattice, clamped at the
  /// boundary.
  double sample(Point p) const;

  /// Bilinear stencil at p: up to 4 (index, weight) pairs.
  struct Stencil {
    std::size_t idx[4];
    double w[4];
    int n = 0;
  };
  Stencil stencil(Point p) const;

  /// Sum of w * v^2 over non-pinned cells. Throws if a pinned cell carries a
  /// nonzero value.
  double energy() const;

  void fill(double v) { std::fill(values.begin(), values.end(), v); }
};

/// Push a density on Grushin coordinates forward through the canonical map:
/// rho_tilde(u,v) = |x(u)|^{-alpha} rho(x(u), v), zero on the singular
/// column. The input must vanish on cells meeting x1 = 0. Output grid covers
/// the image rectangle with the same cell counts. Line integrals against the
/// respective metrics and the squared-density energies are preserved up to
/// resampling error.
DensityGrid density_transport(const DensityGrid& rho, Alpha alpha);

}  // namespace grushin
