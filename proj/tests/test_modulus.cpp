#include <doctest.h>

#include <cmath>
#include <random>

#include "grushin/modulus.hpp"
#include "oracles.hpp"

using namespace grushin;

namespace {
const Alpha a1(1.0);
const Alpha a2(2.0);
const Alpha a05(0.5);
}  // namespace

TEST_CASE("grid weights") {
  const DensityGrid eu = DensityGrid::euclidean({0, 1, 0, 2}, 4, 8);
  CHECK(eu.weights[0] == doctest::Approx(0.25 * 0.25));

  const DensityGrid gr = DensityGrid::grushin({-1, 1, 0, 1}, 4, 4, a1);
  // the two central columns meet x1 = 0: pinned
  CHECK(gr.pinned(gr.index(1, 0)));
  CHECK(gr.pinned(gr.index(2, 2)));
  CHECK(!gr.pinned(gr.index(0, 0)));
  // outer column weight: int_{1/2}^{1} dx/x * (1/4)
  CHECK(gr.weights[gr.index(3, 1)] ==
        doctest::Approx(std::log(2.0) * 0.25).epsilon(1e-12));

  // alpha < 1: the singular column is integrable, nothing pinned
  const DensityGrid gh = DensityGrid::grushin({-1, 1, 0, 1}, 4, 4, a05);
  CHECK(!gh.pinned(gh.index(1, 0)));
  CHECK(gh.energy() == 0.0);
}

TEST_CASE("grid energy rejects density on pinned cells") {
  DensityGrid gr = DensityGrid::grushin({-1, 1, 0, 1}, 4, 4, a1);
  gr.values[gr.index(1, 1)] = 1.0;
  CHECK_THROWS_AS(gr.energy(), std::invalid_argument);
  gr.values[gr.index(1, 1)] = 0.0;
  gr.values[gr.index(0, 1)] = 2.0;
  CHECK(gr.energy() == doctest::Approx(4.0 * gr.weights[gr.index(0, 1)]));
}

TEST_CASE("bilinear sampling reproduces linear fields") {
  DensityGrid g = DensityGrid::euclidean({0, 1, 0, 1}, 32, 32);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Point c = g.cell_center(i, j);
      g.values[g.index(i, j)] = 2.0 * c.x1 + 3.0 * c.x2;
    }
  CHECK(g.sample({0.4, 0.7}) == doctest::Approx(0.8 + 2.1).epsilon(1e-12));
}

TEST_CASE("density transport: zero maps to zero, energy is preserved") {
  DensityGrid zero = DensityGrid::grushin({1, 2, 0, 1}, 64, 64, a1);
  const DensityGrid zt = density_transport(zero, a1);
  CHECK(zt.energy() == 0.0);

  // rho = 1 on [1,2]x[0,1]: energy log 2 on both sides of the transport
  DensityGrid one = DensityGrid::grushin({1, 2, 0, 1}, 256, 256, a1);
  one.fill(1.0);
  CHECK(one.energy() == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  const DensityGrid moved = density_transport(one, a1);
  CHECK(moved.energy() == doctest::Approx(std::log(2.0)).epsilon(0.02));

  DensityGrid bad = DensityGrid::grushin({-1, 1, 0, 1}, 16, 16, a1);
  bad.values[bad.index(bad.nx / 2, 3)] = 1.0;
  CHECK_THROWS_AS(density_transport(bad, a1), std::invalid_argument);
}

TEST_CASE("density transport preserves line integrals") {
  // horizontal segment (1,0)->(2,0), rho = 1:
  // int rho ds_alpha = 1 and the image integral int_{1/2}^2 (2u)^{-1/2} du = 1
  DensityGrid one = DensityGrid::grushin({0.9, 2.1, -0.1, 0.1}, 256, 64, a1);
  one.fill(1.0);
  const Polyline seg = Polyline::through({{1, 0}, {2, 0}});
  CHECK(line_integral(one, seg, Metric::Grushin, a1) ==
        doctest::Approx(1.0).epsilon(1e-3));

  const DensityGrid moved = density_transport(one, a1);
  const Point u0 = canonical_phi({1, 0}, a1);
  const Point u1 = canonical_phi({2, 0}, a1);
  const Polyline img = Polyline::through({u0, u1});
  CHECK(line_integral(moved, img, Metric::Euclidean, a1) ==
        doctest::Approx(1.0).epsilon(0.02));

  // pushforward length identity for a tilted rectifiable curve off Y:
  // rho = 1 integrated in the plane metric equals rho-tilde along the image
  DensityGrid box = DensityGrid::grushin({0.9, 2.3, -0.1, 1.2}, 512, 512, a1);
  box.fill(1.0);
  const Polyline diag = Polyline::through({{1, 0}, {1.6, 0.5}, {2.1, 1.0}});
  const double src = line_integral(box, diag, Metric::Grushin, a1);
  const DensityGrid box_moved = density_transport(box, a1);
  std::vector<Point> img_verts;
  for (const Point& v : diag.vertices) img_verts.push_back(canonical_phi(v, a1));
  const double dst = line_integral(box_moved, Polyline::through(img_verts),
                                   Metric::Euclidean, a1);
  CHECK(dst == doctest::Approx(src).epsilon(0.01));
}

TEST_CASE("line integral basics") {
  DensityGrid one = DensityGrid::euclidean({0, 3, -1, 1}, 64, 64);
  one.fill(1.0);
  const Polyline seg = Polyline::through({{1, 0}, {2, 0}});
  CHECK(line_integral(one, seg, Metric::Euclidean, a1) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(line_integral(one, seg, Metric::Grushin, a1) ==
        doctest::Approx(1.0).epsilon(1e-6));

  const Polyline outside = Polyline::through({{1, 0}, {5, 0}});
  CHECK_THROWS_AS(line_integral(one, outside, Metric::Euclidean, a1),
                  std::invalid_argument);
}

TEST_CASE("line integral of the classical extremal annulus density") {
  // rho = 1/(|z| log 2) on 1 < |z| < 2: every radial segment integrates to 1
  DensityGrid g = DensityGrid::euclidean({-2.2, 2.2, -2.2, 2.2}, 512, 512);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Point c = g.cell_center(i, j);
      const double r = euclidean_norm(c);
      if (r >= 1.0 && r <= 2.0)
        g.values[g.index(i, j)] = 1.0 / (r * std::log(2.0));
    }
  for (double th : {0.3, 1.1, 2.0, 4.4}) {
    const Polyline ray = Polyline::through(
        {{std::cos(th), std::sin(th)}, {2 * std::cos(th), 2 * std::sin(th)}});
    CHECK(line_integral(g, ray, Metric::Euclidean, a1) ==
          doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("modulus of a single curve vanishes under refinement") {
  CurveFamily fam;
  fam.members.push_back({Polyline::through({{0, 0}, {1, 0}}), {}});
  GridSpec coarse;
  coarse.bbox = Rect{-0.2, 1.2, -0.6, 0.6};
  coarse.nx = 64;
  coarse.ny = 64;
  GridSpec fine = coarse;
  fine.nx = 256;
  fine.ny = 256;
  const double v_coarse =
      solve_modulus(fam, coarse, Metric::Euclidean, a1).value;
  const double v_fine = solve_modulus(fam, fine, Metric::Euclidean, a1).value;
  CHECK(v_fine < v_coarse);
  CHECK(v_fine < 0.1);
}

TEST_CASE("round annulus modulus matches the classical value") {
  for (double ratio : {2.0, 4.0, 8.0}) {
    const CurveFamily fam =
        ring_family({0, 0}, 1.0, ratio, 64, RingCoords::Euclidean, a1);
    CHECK(fam.size() == 64);
    GridSpec g;
    const ModulusResult r = solve_modulus(fam, g, Metric::Euclidean, a1);
    CHECK(r.converged);
    CHECK(r.residual <= 1e-6);
    const double classical = 2.0 * M_PI / std::log(ratio);
    CHECK(r.value == doctest::Approx(classical).epsilon(0.05));
    // the reported value is exactly the energy of the returned density,
    // and the half-resolution companion with its extrapolation note is filled
    CHECK(r.density.energy() == doctest::Approx(r.value).epsilon(1e-12));
    CHECK(r.coarse_value > 0.0);
    CHECK(r.richardson == doctest::Approx(2.0 * r.value - r.coarse_value));
  }
}

TEST_CASE("ring family geometry") {
  RingOptions one_leaf;
  one_leaf.leaves_per_band = 1;
  const CurveFamily fam =
      ring_family({0, 0}, 1.0, 2.0, 4, RingCoords::Euclidean, a1, one_leaf);
  REQUIRE(fam.size() == 4);
  for (const FamilyMember& m : fam.members)
    CHECK(m.curve.euclidean_length() == doctest::Approx(1.0));
  CHECK_THROWS_AS(ring_family({0, 0}, 2.0, 1.0, 16, RingCoords::Euclidean, a1),
                  std::invalid_argument);
}

TEST_CASE("pullback rays are horizontal Grushin segments on the axis") {
  // the ray along +u pulls back to x(u) = (2u)^{1/2} for alpha = 1
  RingOptions one_leaf;
  one_leaf.leaves_per_band = 1;
  const CurveFamily fam =
      ring_family({0, 0}, 1.0, 2.0, 4, RingCoords::GrushinPullback, a1, one_leaf);
  bool found_axis_like = false;
  for (const FamilyMember& m : fam.members) {
    for (const Point& v : m.curve.vertices) {
      CHECK(std::isfinite(v.x1));
      // no two consecutive vertices on the singular line
      ;
    }
    for (std::size_t i = 1; i < m.curve.vertices.size(); ++i)
      CHECK(!(m.curve.vertices[i].x1 == 0.0 &&
              m.curve.vertices[i - 1].x1 == 0.0));
    (void)found_axis_like;
  }
  // exact endpoints on a quarter-turned family member
  const Polyline axis = Polyline::through(
      {canonical_phi_inverse({1.0, 0.0}, a1), canonical_phi_inverse({2.0, 0.0}, a1)});
  CHECK(axis.vertices[0].x1 == doctest::Approx(std::sqrt(2.0)));
  CHECK(axis.vertices[1].x1 == doctest::Approx(2.0));
}

TEST_CASE("off-center pullback rings stay rectifiable") {
  // leaves of this ring straddle the singular column; the pullback must
  // cross it with a leveled jog or the family is rejected as nonrectifiable
  const CurveFamily fam = ring_family({0.5, 0.2}, 0.4, 1.1, 24,
                                      RingCoords::GrushinPullback, a1);
  GridSpec g;
  g.nx = 128;
  g.ny = 128;
  const ModulusResult r = solve_modulus(fam, g, Metric::Grushin, a1);
  CHECK(r.converged);
  CHECK(r.value > 0.0);
  CHECK(std::isfinite(r.value));
}

TEST_CASE("canonical map preserves the ring modulus") {
  for (const Alpha& a : {a1, a2}) {
    const CurveFamily eu =
        ring_family({0, 0}, 1.0, 2.0, 64, RingCoords::Euclidean, a);
    const CurveFamily gp =
        ring_family({0, 0}, 1.0, 2.0, 64, RingCoords::GrushinPullback, a);
    GridSpec g;
    const double ve = solve_modulus(eu, g, Metric::Euclidean, a).value;
    const double vg = solve_modulus(gp, g, Metric::Grushin, a).value;
    CHECK(vg == doctest::Approx(ve).epsilon(0.07));
  }
}

TEST_CASE("returned density is admissible") {
  RingOptions one_leaf;
  one_leaf.leaves_per_band = 1;  // thin rows: the constraint is the line integral
  const CurveFamily fam =
      ring_family({0, 0}, 1.0, 2.0, 24, RingCoords::Euclidean, a1, one_leaf);
  GridSpec g;
  g.nx = 128;
  g.ny = 128;
  const ModulusResult r = solve_modulus(fam, g, Metric::Euclidean, a1);
  CHECK(r.residual <= 1e-6);
  for (const FamilyMember& m : fam.members) {
    const double li = line_integral(r.density, m.curve, Metric::Euclidean, a1);
    CHECK(li >= 1.0 - 5e-3);  // row assembly vs line_integral sampling differ slightly
  }
}

TEST_CASE("modulus is monotone in the family and under subfamilies") {
  RingOptions one_leaf;
  one_leaf.leaves_per_band = 1;
  const CurveFamily big =
      ring_family({0, 0}, 1.0, 2.0, 32, RingCoords::Euclidean, a1, one_leaf);
  CurveFamily half;
  for (std::size_t i = 0; i < big.members.size(); i += 2)
    half.members.push_back(big.members[i]);
  GridSpec g;
  g.nx = 128;
  g.ny = 128;
  const double v_big = solve_modulus(big, g, Metric::Euclidean, a1).value;
  const double v_half = solve_modulus(half, g, Metric::Euclidean, a1).value;
  CHECK(v_half <= v_big * (1.0 + 1e-9));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    CurveFamily sub;
    for (const FamilyMember& m : big.members)
      if (rng() % 2) sub.members.push_back(m);
    if (sub.members.empty()) continue;
    const double v_sub = solve_modulus(sub, g, Metric::Euclidean, a1).value;
    CHECK(v_sub <= v_big * (1.0 + 1e-9));
  }
}

TEST_CASE("modulus scales linearly with the measure weights") {
  CurveFamily fam;
  fam.members.push_back(
      {Polyline::through({{0.2, 0.1}, {0.8, 0.4}}), {}});
  fam.members.push_back(
      {Polyline::through({{0.2, 0.6}, {0.8, 0.9}}), {}});
  GridSpec g;
  g.bbox = Rect{0, 1, 0, 1};
  g.nx = 64;
  g.ny = 64;
  g.weight_scale = 1.0;
  const double v1 = solve_modulus(fam, g, Metric::Euclidean, a1).value;
  g.weight_scale = 3.5;
  const double v2 = solve_modulus(fam, g, Metric::Euclidean, a1).value;
  CHECK(v2 == doctest::Approx(3.5 * v1).epsilon(1e-9));
}

TEST_CASE("solver input validation") {
  CurveFamily empty;
  CHECK_THROWS_AS(solve_modulus(empty, {}, Metric::Euclidean, a1),
                  std::invalid_argument);
  CurveFamily inf_family;
  inf_family.members.push_back(
      {Polyline::through({{0, 0}, {0.5, 1.0}}), {}});  // touches Y transversally
  GridSpec g;
  g.bbox = Rect{-1, 1, -1, 2};
  CHECK_THROWS_AS(solve_modulus(inf_family, g, Metric::Grushin, a1),
                  std::invalid_argument);
}

TEST_CASE("certificate integral: closed form, two grids, hypothesis guard") {
  const double closed = oracles::certificate_integral_alpha1();
  const double coarse = certificate_integral(a1, 1);
  const double fine = certificate_integral(a1, 2);
  CHECK(fine == doctest::Approx(closed).epsilon(1e-7));
  CHECK(std::fabs(fine - coarse) <= 1e-4 * fine);
  CHECK_THROWS_AS(certificate_integral(a05, 1), std::invalid_argument);
  CHECK_THROWS_AS(nonrectifiable_family_bound(a05), std::invalid_argument);
}

TEST_CASE("sampled nonrectifiable family keeps most of the certified modulus") {
  NonrectifiableFamilyOptions so;
  so.grid_n = 256;  // the acceptance suite runs the full 512 grid
  const NonrectifiableFamilyBound b = nonrectifiable_family_bound(a1, so);
  CHECK(b.modulus_lower_bound == doctest::Approx(1.0 / 4.6499909).epsilon(1e-6));
  CHECK(b.family_modulus_estimate >= 0.9 * b.modulus_lower_bound);
  CHECK(b.modulus.converged);
}
