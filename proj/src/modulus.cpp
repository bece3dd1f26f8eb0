#include "grushin/modulus.hpp"

#include <algorithm>
#include <cmath>

namespace grushin {

namespace {

constexpr double kPi = 3.14159265358979323846;

double piece_metric_length(Point a, Point b, Metric metric, Alpha alpha,
                           bool* infinite) {
  *infinite = false;
  if (metric == Metric::Euclidean) return euclidean_distance(a, b);
  const LengthResult r = segment_grushin_length(a, b, alpha);
  if (r.status == LengthStatus::Infinite) {
    *infinite = true;
    return kInf;
  }
  return r.value;
}

}  // namespace

namespace {

template <typename Fn>
void for_each_leaf(const FamilyMember& member, Fn&& fn) {
  if (member.band_leaves.empty()) {
    fn(member.curve);
    return;
  }
  for (const Polyline& leaf : member.band_leaves) fn(leaf);
}

std::size_t leaf_count(const FamilyMember& member) {
  return member.band_leaves.empty() ? 1 : member.band_leaves.size();
}

}  // namespace

double line_integral(const DensityGrid& rho, const Polyline& c, Metric metric,
                     Alpha alpha) {
  c.validate();
  const double pad = 1e-9 * (rho.bbox.width() + rho.bbox.height());
  for (const Point& v : c.vertices)
    if (!rho.bbox.contains(v, pad))
      throw std::invalid_argument("line_integral: curve exits the grid bbox");

  const double cell = std::min(rho.cell_dx(), rho.cell_dy());
  double prev = kInf;
  double result = 0.0;
  for (int refine = 0; refine < 4; ++refine) {
    const double target = 0.45 * cell / (1 << refine);
    double acc = 0.0;
    for (std::size_t s = 1; s < c.vertices.size(); ++s) {
      const Point a = c.vertices[s - 1];
      const Point b = c.vertices[s];
      const double elen = euclidean_distance(a, b);
      const int m = std::clamp(static_cast<int>(std::ceil(elen / target)), 1, 65536);
      for (int k = 0; k < m; ++k) {
        const double t0 = static_cast<double>(k) / m;
        const double t1 = static_cast<double>(k + 1) / m;
        const Point p0{a.x1 + t0 * (b.x1 - a.x1), a.x2 + t0 * (b.x2 - a.x2)};
        const Point p1{a.x1 + t1 * (b.x1 - a.x1), a.x2 + t1 * (b.x2 - a.x2)};
        const Point mid{0.5 * (p0.x1 + p1.x1), 0.5 * (p0.x2 + p1.x2)};
        const double v = rho.sample(mid);
        bool infinite = false;
        const double ds = piece_metric_length(p0, p1, metric, alpha, &infinite);
        if (infinite) {
          if (v != 0.0)
            throw std::invalid_argument(
                "line_integral: infinite metric length through nonzero density");
          continue;
        }
        acc += v * ds;
      }
    }
    result = acc;
    if (std::fabs(result - prev) <= 1e-4 * std::max(std::fabs(result), 1e-30))
      break;
    prev = result;
  }
  return result;
}

namespace {

struct SparseRow {
  std::vector<std::size_t> idx;
  std::vector<double> a;
  double diag = 0.0;  // sum a^2 / (2 w)
};

// averaged admissibility row of one family member on the grid
SparseRow assemble_row(const FamilyMember& member, const DensityGrid& grid,
                       Metric metric, Alpha alpha, std::vector<double>& scratch,
                       std::vector<std::size_t>& touched) {
  const double leaf_weight = 1.0 / static_cast<double>(leaf_count(member));
  const double cell = std::min(grid.cell_dx(), grid.cell_dy());
  const double target = 0.45 * cell;

  for (std::size_t t : touched) scratch[t] = 0.0;
  touched.clear();

  for_each_leaf(member, [&](const Polyline& leaf) {
    for (std::size_t s = 1; s < leaf.vertices.size(); ++s) {
      const Point a = leaf.vertices[s - 1];
      const Point b = leaf.vertices[s];
      const double elen = euclidean_distance(a, b);
      const int m = std::clamp(static_cast<int>(std::ceil(elen / target)), 1, 65536);
      for (int k = 0; k < m; ++k) {
        const double t0 = static_cast<double>(k) / m;
        const double t1 = static_cast<double>(k + 1) / m;
        const Point p0{a.x1 + t0 * (b.x1 - a.x1), a.x2 + t0 * (b.x2 - a.x2)};
        const Point p1{a.x1 + t1 * (b.x1 - a.x1), a.x2 + t1 * (b.x2 - a.x2)};
        const Point mid{0.5 * (p0.x1 + p1.x1), 0.5 * (p0.x2 + p1.x2)};
        bool infinite = false;
        const double ds = piece_metric_length(p0, p1, metric, alpha, &infinite);
        if (infinite) continue;  // only possible through pinned territory
        const DensityGrid::Stencil st = grid.stencil(mid);
        for (int q = 0; q < st.n; ++q) {
          if (grid.pinned(st.idx[q])) continue;
          if (scratch[st.idx[q]] == 0.0) touched.push_back(st.idx[q]);
          scratch[st.idx[q]] += leaf_weight * st.w[q] * ds;
        }
      }
    }
  });

  SparseRow row;
  std::sort(touched.begin(), touched.end());
  row.idx.reserve(touched.size());
  row.a.reserve(touched.size());
  for (std::size_t t : touched) {
    if (scratch[t] == 0.0) continue;
    row.idx.push_back(t);
    row.a.push_back(scratch[t]);
    row.diag += scratch[t] * scratch[t] / (2.0 * grid.weights[t]);
    scratch[t] = 0.0;
  }
  touched.clear();
  return row;
}

Rect family_hull(const CurveFamily& family, double pad_frac) {
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  for (const FamilyMember& m : family.members) {
    for_each_leaf(m, [&](const Polyline& leaf) {
      for (const Point& v : leaf.vertices) {
        x0 = std::min(x0, v.x1);
        x1 = std::max(x1, v.x1);
        y0 = std::min(y0, v.x2);
        y1 = std::max(y1, v.x2);
      }
    });
  }
  const double px = pad_frac * std::max(x1 - x0, 1e-12);
  const double py = pad_frac * std::max(y1 - y0, 1e-12);
  return {x0 - px, x1 + px, y0 - py, y1 + py};
}

struct QpOutcome {
  double value = 0.0;
  double residual = 0.0;
  long sweeps = 0;
  bool converged = false;
  std::vector<double> rho;
};

QpOutcome hildreth_solve(const std::vector<SparseRow>& rows,
                         const DensityGrid& grid, const ModulusOptions& opts) {
  const std::size_t ncells = grid.values.size();
  QpOutcome out;
  out.rho.assign(ncells, 0.0);
  std::vector<double> lambda(rows.size(), 0.0);

  for (const SparseRow& r : rows)
    if (r.idx.empty() || !(r.diag > 0.0))
      throw std::invalid_argument(
          "solve_modulus: a member constraint has no support on the grid");

  double maxviol = kInf;
  for (long sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    maxviol = 0.0;
    for (std::size_t c = 0; c < rows.size(); ++c) {
      const SparseRow& r = rows[c];
      double dot = 0.0;
      for (std::size_t k = 0; k < r.idx.size(); ++k)
        dot += r.a[k] * out.rho[r.idx[k]];
      const double viol = 1.0 - dot;
      maxviol = std::max(maxviol, viol);
      const double delta = std::max(-lambda[c], viol / r.diag);
      if (delta == 0.0) continue;
      lambda[c] += delta;
      for (std::size_t k = 0; k < r.idx.size(); ++k)
        out.rho[r.idx[k]] += delta * r.a[k] / (2.0 * grid.weights[r.idx[k]]);
    }
    out.sweeps = sweep + 1;
    if (maxviol < opts.residual_tol) {
      out.converged = true;
      break;
    }
  }
  out.residual = std::max(maxviol, 0.0);

  // upward feasibility scaling: the reported value certifies admissibility
  double min_dot = kInf;
  for (const SparseRow& r : rows) {
    double dot = 0.0;
    for (std::size_t k = 0; k < r.idx.size(); ++k)
      dot += r.a[k] * out.rho[r.idx[k]];
    min_dot = std::min(min_dot, dot);
  }
  if (!(min_dot > 0.0))
    throw std::runtime_error("solve_modulus: degenerate dual ascent state");
  const double scale = 1.0 / min_dot;
  double energy = 0.0;
  for (std::size_t k = 0; k < ncells; ++k) {
    if (grid.pinned(k)) continue;
    out.rho[k] *= scale;
    energy += grid.weights[k] * out.rho[k] * out.rho[k];
  }
  out.value = energy;
  return out;
}

ModulusResult solve_on_grid(const CurveFamily& family, const Rect& bbox, int nx,
                            int ny, double weight_scale, Metric metric,
                            Alpha alpha, const ModulusOptions& opts) {
  DensityGrid grid = metric == Metric::Euclidean
                         ? DensityGrid::euclidean(bbox, nx, ny)
                         : DensityGrid::grushin(bbox, nx, ny, alpha);
  if (weight_scale != 1.0)
    for (double& w : grid.weights) w *= weight_scale;
  std::vector<double> scratch(grid.values.size(), 0.0);
  std::vector<std::size_t> touched;
  std::vector<SparseRow> rows;
  rows.reserve(family.size());
  for (const FamilyMember& m : family.members)
    rows.push_back(assemble_row(m, grid, metric, alpha, scratch, touched));

  const QpOutcome qp = hildreth_solve(rows, grid, opts);
  ModulusResult res;
  res.value = qp.value;
  res.residual = qp.residual;
  res.iterations = qp.sweeps;
  res.converged = qp.converged;
  grid.values = qp.rho;
  res.density = std::move(grid);
  return res;
}

}  // namespace

ModulusResult solve_modulus(const CurveFamily& family, const GridSpec& spec,
                            Metric metric, Alpha alpha,
                            const ModulusOptions& opts) {
  if (family.size() == 0)
    throw std::invalid_argument("solve_modulus: empty curve family");
  for (const FamilyMember& m : family.members) {
    m.curve.validate();
    if (!(m.curve.euclidean_length() > 0.0))
      throw std::invalid_argument("solve_modulus: zero-length curve");
    if (metric == Metric::Grushin) {
      const LengthResult lr = polyline_grushin_length(m.curve, alpha);
      if (lr.status == LengthStatus::Infinite)
        throw std::invalid_argument(
            "solve_modulus: family member not rectifiable in the Grushin metric");
    }
  }
  const Rect bbox = spec.bbox ? *spec.bbox : family_hull(family, 0.10);

  if (!(spec.weight_scale > 0.0))
    throw std::invalid_argument("solve_modulus: weight_scale must be positive");
  ModulusResult fine = solve_on_grid(family, bbox, spec.nx, spec.ny,
                                     spec.weight_scale, metric, alpha, opts);
  if (opts.two_resolution && spec.nx >= 32 && spec.ny >= 32) {
    ModulusOptions half = opts;
    half.two_resolution = false;
    const ModulusResult coarse =
        solve_on_grid(family, bbox, spec.nx / 2, spec.ny / 2, spec.weight_scale,
                      metric, alpha, half);
    fine.coarse_value = coarse.value;
    fine.richardson = 2.0 * fine.value - coarse.value;
  }
  return fine;
}

namespace {

Polyline pullback_ray(Point center, double r_in, double r_out, double theta,
                      Alpha alpha) {
  const double c = std::cos(theta), s = std::sin(theta);
  auto map = [&](double r) -> Point {
    const Point uv{center.x1 + r * c, center.x2 + r * s};
    return canonical_phi_inverse(uv, alpha);
  };

  // adaptive flattening of a crossing-free parameter range: subdivide while
  // the image midpoint strays from the chord (the inverse map is steep near
  // the singular column)
  auto flatten = [&](double ra, double rb) {
    std::vector<double> rs{ra, rb};
    std::vector<Point> pts{map(ra), map(rb)};
    bool changed = true;
    int rounds = 0;
    while (changed && rounds++ < 14) {
      changed = false;
      std::vector<double> nrs;
      std::vector<Point> npts;
      nrs.reserve(rs.size() * 2);
      npts.reserve(rs.size() * 2);
      for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
        nrs.push_back(rs[i]);
        npts.push_back(pts[i]);
        const double rm = 0.5 * (rs[i] + rs[i + 1]);
        const Point pm = map(rm);
        const Point chord{0.5 * (pts[i].x1 + pts[i + 1].x1),
                          0.5 * (pts[i].x2 + pts[i + 1].x2)};
        const double dev = euclidean_distance(pm, chord);
        const double seg = euclidean_distance(pts[i], pts[i + 1]);
        if (dev > 2e-3 * (seg + 1e-9) && rs.size() < 4096) {
          nrs.push_back(rm);
          npts.push_back(pm);
          changed = true;
        }
      }
      nrs.push_back(rs.back());
      npts.push_back(pts.back());
      rs = std::move(nrs);
      pts = std::move(npts);
    }
    if (pts.size() < 17) {
      std::vector<Point> dense;
      for (int i = 0; i < 33; ++i) dense.push_back(map(ra + (rb - ra) * i / 32.0));
      pts = std::move(dense);
    }
    return pts;
  };

  std::vector<Point> pts;
  const double r_cross = c != 0.0 ? -center.x1 / c : -1.0;
  if (r_cross > r_in && r_cross < r_out) {
    // the continuum curve crosses the singular line horizontally (dy/dx
    // vanishes there); give the polyline the same structure: flatten the two
    // sides and join them with a leveled horizontal jog
    const double eps = std::min(1e-4 * (r_out - r_in),
                                0.25 * std::min(r_cross - r_in, r_out - r_cross));
    const double v_cross = center.x2 + r_cross * s;
    pts = flatten(r_in, r_cross - eps);
    std::vector<Point> side2 = flatten(r_cross + eps, r_out);
    pts.back().x2 = v_cross;
    side2.front().x2 = v_cross;
    pts.insert(pts.end(), side2.begin(), side2.end());
  } else {
    pts = flatten(r_in, r_out);
  }

  std::vector<Point> clean;
  for (const Point& p : pts)
    if (clean.empty() || p.x1 != clean.back().x1 || p.x2 != clean.back().x2)
      clean.push_back(p);
  return Polyline::through(std::move(clean));
}

}  // namespace

CurveFamily ring_family(Point center, double r_in, double r_out, int n,
                        RingCoords coords, Alpha alpha,
                        const RingOptions& opts) {
  if (!(0.0 < r_in && r_in < r_out))
    throw std::invalid_argument("ring_family needs 0 < r_in < r_out");
  if (n < 4) throw std::invalid_argument("ring_family needs n >= 4");
  int leaves = opts.leaves_per_band;
  if (leaves <= 0) {
    // leaf spacing on the outer circle comparable to a 256-cell grid
    const double h = 2.2 * r_out / 256.0;
    leaves = std::clamp(static_cast<int>(std::ceil(2.0 * kPi * r_out / (n * h))),
                        1, 64);
  }

  CurveFamily fam;
  fam.label = "ring";
  fam.members.reserve(n);
  for (int b = 0; b < n; ++b) {
    const double theta_c = 2.0 * kPi * (b + 0.5) / n;
    FamilyMember member;
    for (int j = 0; j < leaves; ++j) {
      double theta =
          theta_c + 2.0 * kPi * (j + 0.5 - 0.5 * leaves) / (n * leaves);
      if (coords == RingCoords::GrushinPullback) {
        // keep every leaf off the ray that maps into the singular line
        const double u_probe = center.x1 + r_in * std::cos(theta);
        if (std::fabs(u_probe) < 1e-9 * r_in)
          theta += 0.25 * 2.0 * kPi / (n * leaves);
      }
      Polyline leaf;
      if (coords == RingCoords::Euclidean) {
        const Point a{center.x1 + r_in * std::cos(theta),
                      center.x2 + r_in * std::sin(theta)};
        const Point b2{center.x1 + r_out * std::cos(theta),
                       center.x2 + r_out * std::sin(theta)};
        leaf = Polyline::through({a, b2});
      } else {
        leaf = pullback_ray(center, r_in, r_out, theta, alpha);
      }
      if (j == leaves / 2) member.curve = leaf;
      member.band_leaves.push_back(std::move(leaf));
    }
    fam.members.push_back(std::move(member));
  }
  return fam;
}

double certificate_integral(Alpha alpha, int refine) {
  const double a = alpha.value();
  if (a < 1.0)
    throw std::invalid_argument(
        "the certificate integral diverges for alpha < 1");
  // substitute u = log t:
  //   I = int_{-inf}^{-log 2} e^{(1+a)u} + e^{(a-1)u} (1/u^2 - a/u)^2 du
  auto f = [a](double u) {
    const double g = 1.0 / (u * u) - a / u;
    return std::exp((1.0 + a) * u) + std::exp((a - 1.0) * u) * g * g;
  };
  const double u0 = -std::log(2.0);
  double total = 0.0;
  double hi = u0;
  const int panels = refine;
  for (int shell = 0; shell < 80; ++shell) {
    const double lo = hi * 2.0;
    double contrib = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double l = hi + (lo - hi) * (p + 1.0) / panels;
      const double h = hi + (lo - hi) * p / panels;
      contrib += gauss_legendre_8(f, l, h);
    }
    total += contrib;
    hi = lo;
    if (std::fabs(contrib) < 1e-14 * std::fabs(total) || -hi > 1e7) break;
  }
  return total;
}

CurveFamily nonrectifiable_family(Alpha alpha, int count, int leaves_per_band) {
  if (count < 2) throw std::invalid_argument("family needs at least 2 curves");
  CurveFamily fam;
  fam.label = "section5";
  fam.members.reserve(count);
  const int leaves = std::max(1, leaves_per_band);
  const double band = 1.0 / (count - 1);
  for (int i = 0; i < count; ++i) {
    const double a_c = static_cast<double>(i) / (count - 1);
    FamilyMember member;
    for (int j = 0; j < leaves; ++j) {
      double a = a_c + band * ((j + 0.5) / leaves - 0.5);
      a = std::clamp(a, 0.0, 1.0);
      const ParametricCurve curve = nonrectifiable_image_curve(a, alpha);
      Polyline leaf = sample_curve(curve, 257, Grading::GeometricAtLeft);
      if (j == leaves / 2) member.curve = leaf;
      member.band_leaves.push_back(std::move(leaf));
    }
    fam.members.push_back(std::move(member));
  }
  return fam;
}

NonrectifiableFamilyBound nonrectifiable_family_bound(Alpha alpha, const NonrectifiableFamilyOptions& opts) {
  if (alpha.value() < 1.0)
    throw std::invalid_argument(
        "nonrectifiable_family_bound requires alpha >= 1");
  NonrectifiableFamilyBound out;
  out.upper_integral_coarse = certificate_integral(alpha, 1);
  out.upper_integral = certificate_integral(alpha, 2);
  out.modulus_lower_bound = 1.0 / out.upper_integral;

  const CurveFamily fam =
      nonrectifiable_family(alpha, opts.family_size, opts.leaves_per_band);
  GridSpec grid;
  grid.nx = opts.grid_n;
  grid.ny = opts.grid_n;
  ModulusOptions mo;
  mo.max_sweeps = opts.max_sweeps;
  out.modulus = solve_modulus(fam, grid, Metric::Euclidean, alpha, mo);
  out.family_modulus_estimate = out.modulus.value;
  return out;
}

}  // namespace grushin
