#include "grushin/grid.hpp"

#include <algorithm>
#include <cmath>

namespace grushin {

namespace {

void check_geometry(const Rect& bbox, int nx, int ny) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("grid needs nx, ny >= 1");
  if (!(bbox.width() > 0.0) || !(bbox.height() > 0.0))
    throw std::invalid_argument("grid bbox must have positive extent");
}

}  // namespace

DensityGrid DensityGrid::euclidean(const Rect& bbox, int nx, int ny) {
  check_geometry(bbox, nx, ny);
  DensityGrid g;
  g.bbox = bbox;
  g.nx = nx;
  g.ny = ny;
  g.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  g.weights.assign(static_cast<std::size_t>(nx) * ny,
                   g.cell_dx() * g.cell_dy());
  return g;
}

DensityGrid DensityGrid::grushin(const Rect& bbox, int nx, int ny, Alpha alpha) {
  check_geometry(bbox, nx, ny);
  DensityGrid g;
  g.bbox = bbox;
  g.nx = nx;
  g.ny = ny;
  g.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  g.weights.resize(static_cast<std::size_t>(nx) * ny);
  const double dy = g.cell_dy();
  for (int i = 0; i < nx; ++i) {
    const double x0 = bbox.x_min + i * g.cell_dx();
    const double x1 = x0 + g.cell_dx();
    const double col = integral_abs_pow_neg(x0, x1, alpha) * dy;
    for (int j = 0; j < ny; ++j) g.weights[g.index(i, j)] = col;
  }
  return g;
}

double DensityGrid::sample(Point p) const {
  const Stencil s = stencil(p);
  double v = 0.0;
  for (int k = 0; k < s.n; ++k) v += s.w[k] * values[s.idx[k]];
  return v;
}

DensityGrid::Stencil DensityGrid::stencil(Point p) const {
  // coordinates in cell-center units
  const double fx = (p.x1 - bbox.x_min) / cell_dx() - 0.5;
  const double fy = (p.x2 - bbox.y_min) / cell_dy() - 0.5;
  const double cx = std::clamp(fx, 0.0, static_cast<double>(nx - 1));
  const double cy = std::clamp(fy, 0.0, static_cast<double>(ny - 1));
  const int i0 = std::min(static_cast<int>(cx), nx - 2 >= 0 ? nx - 2 : 0);
  const int j0 = std::min(static_cast<int>(cy), ny - 2 >= 0 ? ny - 2 : 0);
  const double tx = std::clamp(cx - i0, 0.0, 1.0);
  const double ty = std::clamp(cy - j0, 0.0, 1.0);
  Stencil s;
  const int i1 = std::min(i0 + 1, nx - 1);
  const int j1 = std::min(j0 + 1, ny - 1);
  const double w00 = (1 - tx) * (1 - ty);
  const double w10 = tx * (1 - ty);
  const double w01 = (1 - tx) * ty;
  const double w11 = tx * ty;
  const std::size_t ids[4] = {index(i0, j0), index(i1, j0), index(i0, j1),
                              index(i1, j1)};
  const double ws[4] = {w00, w10, w01, w11};
  for (int k = 0; k < 4; ++k) {
    if (ws[k] == 0.0) continue;
    bool merged = false;
    for (int m = 0; m < s.n; ++m)
      if (s.idx[m] == ids[k]) {
        s.w[m] += ws[k];
        merged = true;
        break;
      }
    if (!merged) {
      s.idx[s.n] = ids[k];
      s.w[s.n] = ws[k];
      ++s.n;
    }
  }
  return s;
}

double DensityGrid::energy() const {
  double e = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (pinned(k)) {
      if (values[k] != 0.0)
        throw std::invalid_argument("nonzero density on a pinned cell");
      continue;
    }
    e += weights[k] * values[k] * values[k];
  }
  return e;
}

DensityGrid density_transport(const DensityGrid& rho, Alpha alpha) {
  // reject nonzero density on cells meeting the singular column
  for (int i = 0; i < rho.nx; ++i) {
    const double x0 = rho.bbox.x_min + i * rho.cell_dx();
    const double x1 = x0 + rho.cell_dx();
    if (x0 <= 0.0 && x1 >= 0.0) {
      for (int j = 0; j < rho.ny; ++j)
        if (rho.values[rho.index(i, j)] != 0.0)
          throw std::invalid_argument(
              "density_transport: nonzero density on the singular column");
    }
  }
  const Point lo = canonical_phi({rho.bbox.x_min, rho.bbox.y_min}, alpha);
  const Point hi = canonical_phi({rho.bbox.x_max, rho.bbox.y_max}, alpha);
  Rect image{lo.x1, hi.x1, rho.bbox.y_min, rho.bbox.y_max};
  DensityGrid out = DensityGrid::euclidean(image, rho.nx, rho.ny);
  const double a = alpha.value();
  for (int j = 0; j < out.ny; ++j) {
    for (int i = 0; i < out.nx; ++i) {
      const Point c = out.cell_center(i, j);
      const Point pre = canonical_phi_inverse(c, alpha);
      if (pre.x1 == 0.0) continue;  // singular column: zero by definition
      const double v = rho.sample({pre.x1, c.x2});
      out.values[out.index(i, j)] = abs_pow(pre.x1, -a) * v;
    }
  }
  return out;
}

}  // namespace grushin
