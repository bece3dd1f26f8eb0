#include <doctest.h>

#include <cmath>
#include <random>

#include "grushin/curves.hpp"
#include "grushin/distance.hpp"

using namespace grushin;

namespace {
const Alpha a1(1.0);
const Alpha a2(2.0);
}  // namespace

TEST_CASE("sample_curve basics") {
  ParametricCurve line;
  line.t0 = 0.0;
  line.t1 = 1.0;
  line.eval = [](double t) -> Point { return {t, 2.0 * t}; };
  const Polyline two = sample_curve(line, 2, Grading::Uniform);
  CHECK(two.size() == 2);
  CHECK(two.vertices.back().x2 == doctest::Approx(2.0));
  CHECK_THROWS_AS(sample_curve(line, 1, Grading::Uniform), std::invalid_argument);
}

TEST_CASE("sample_curve matches the image-curve formula on a uniform grid") {
  ParametricCurve c = nonrectifiable_image_curve(0.0, a1);
  c.t0 = 0.1;
  c.t1 = 0.5;
  c.open_left = false;
  const Polyline p = sample_curve(c, 5, Grading::Uniform);
  REQUIRE(p.size() == 5);
  for (int i = 0; i < 5; ++i) {
    const double t = 0.1 + 0.1 * i;
    CHECK(p.vertices[i].x1 == doctest::Approx(t * t / 2.0).epsilon(1e-12));
    CHECK(p.vertices[i].x2 ==
          doctest::Approx(-t / std::log(t)).epsilon(1e-12));
  }
}

TEST_CASE("geometric grading clusters at the left endpoint") {
  ParametricCurve c = nonrectifiable_image_curve(0.0, a1);
  const Polyline uni = sample_curve(c, 33, Grading::Uniform);
  const Polyline geo = sample_curve(c, 33, Grading::GeometricAtLeft);
  const double uni_step = uni.params[1] - uni.params[0];
  const double geo_step = geo.params[1] - geo.params[0];
  CHECK(geo_step < uni_step);
  CHECK(geo.params.front() == doctest::Approx(0.5 * 0x1p-40));
}

TEST_CASE("the nonrectifiable family evaluates per formula") {
  const ParametricCurve g0 = nonrectifiable_curve(0.0, a1);
  const Point p = g0.eval(0.5);
  CHECK(p.x1 == doctest::Approx(0.5));
  CHECK(p.x2 == doctest::Approx(-0.5 / std::log(0.5)));
  CHECK(p.x2 == doctest::Approx(0.721347520444482).epsilon(1e-12));

  // vertical translation by a
  const ParametricCurve g1 = nonrectifiable_curve(1.0, a1);
  for (double t : {0.1, 0.25, 0.5}) {
    CHECK(g1.eval(t).x2 == doctest::Approx(g0.eval(t).x2 + 1.0));
    CHECK(g1.eval(t).x1 == doctest::Approx(g0.eval(t).x1));
  }
  CHECK_THROWS_AS(nonrectifiable_curve(0.0, Alpha(0.0)), std::invalid_argument);
}

TEST_CASE("the image family is the canonical image of the plane family") {
  for (const Alpha& a : {a1, a2}) {
    const ParametricCurve g = nonrectifiable_curve(0.3, a);
    const ParametricCurve gt = nonrectifiable_image_curve(0.3, a);
    for (int i = 1; i <= 20; ++i) {
      const double t = 0.5 * i / 20.0;
      const Point img = canonical_phi(g.eval(t), a);
      const Point expect = gt.eval(t);
      CHECK(img.x1 == doctest::Approx(expect.x1).epsilon(1e-13));
      CHECK(img.x2 == doctest::Approx(expect.x2).epsilon(1e-13));
    }
  }
}

TEST_CASE("rectifiability probe verdicts for the section-5 family") {
  for (double a : {0.0, 0.5, 1.0}) {
    const RectifiabilityReport g =
        rectifiability_probe(nonrectifiable_curve(a, a1), a1, Metric::Grushin);
    CHECK(g.verdict == RectifiabilityVerdict::Divergent);
    const RectifiabilityReport e = rectifiability_probe(
        nonrectifiable_image_curve(a, a1), a1, Metric::Euclidean);
    CHECK(e.verdict == RectifiabilityVerdict::Convergent);
    CHECK(e.length > 0.5);
    CHECK(e.length < 1.0);
  }
}

TEST_CASE("probe on a straight segment returns the endpoint formula") {
  ParametricCurve seg;
  seg.t0 = 0.0;
  seg.t1 = 1.0;
  seg.eval = [](double t) -> Point { return {1.0 + 2.0 * t, 0.5 * t}; };
  const RectifiabilityReport ge =
      rectifiability_probe(seg, a1, Metric::Euclidean);
  CHECK(ge.verdict == RectifiabilityVerdict::Convergent);
  CHECK(ge.length == doctest::Approx(std::sqrt(4.25)).epsilon(1e-9));
  const RectifiabilityReport gg = rectifiability_probe(seg, a1, Metric::Grushin);
  CHECK(gg.verdict == RectifiabilityVerdict::Convergent);
}

TEST_CASE("probe verdicts are stable under doubling the refinement ceiling") {
  RectifiabilityOptions big;
  big.k_max = 17;
  const RectifiabilityReport g = rectifiability_probe(
      nonrectifiable_curve(0.7, a1), a1, Metric::Grushin, big);
  CHECK(g.verdict == RectifiabilityVerdict::Divergent);
  const RectifiabilityReport e = rectifiability_probe(
      nonrectifiable_image_curve(0.7, a1), a1, Metric::Euclidean, big);
  CHECK(e.verdict == RectifiabilityVerdict::Convergent);
}

TEST_CASE("cantor construction: ratios, dimension record, verdicts") {
  CantorCurveSpec conv;
  conv.L = 0.2;
  conv.depth = 11;
  conv.alpha = 1.0;
  const CantorCurveResult r = cantor_curve(conv);
  CHECK(r.s == doctest::Approx(2.0 * std::log(2.0) / std::log(5.0)).epsilon(1e-12));
  CHECK(r.s == doctest::Approx(0.8614).epsilon(1e-3));
  CHECK(r.ratio_predicted == doctest::Approx(2.0 * std::sqrt(0.2)));
  CHECK(r.convergent);
  for (int lvl = 3; lvl <= 10; ++lvl) {
    const double ratio =
        r.levels[lvl].contribution / r.levels[lvl - 1].contribution;
    CHECK(ratio == doctest::Approx(r.ratio_predicted).epsilon(0.01));
  }
  // partial sums follow the closed geometric formula with the measured C
  const double C_arc = r.levels[0].arc_length / std::sqrt(0.6);
  double expect = 0.0;
  for (int lvl = 1; lvl <= conv.depth; ++lvl)
    expect += std::exp2(lvl - 1) *
              std::sqrt(std::pow(0.2, lvl - 1) * 0.6) * C_arc;
  CHECK(r.partial_sums.back() == doctest::Approx(expect).epsilon(1e-9));

  CantorCurveSpec div;
  div.L = 0.3;
  div.depth = 11;
  div.alpha = 1.0;
  const CantorCurveResult rd = cantor_curve(div);
  CHECK(!rd.convergent);
  CHECK(rd.ratio_predicted > 1.0);

  CHECK_THROWS_AS(cantor_curve({0.6, 5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(cantor_curve({0.2, 13, 1.0}), std::invalid_argument);
}

TEST_CASE("monotone rearrangement inequality on the singular line") {
  const double C = 2.5;
  // two points: both sides equal for any permutation
  CHECK(monotone_permutation_check({0.0, 1.0}, {0, 1}, a1, C));
  CHECK(monotone_permutation_check({0.0, 1.0}, {1, 0}, a1, C));
  // visiting order (0, 2, 1): C(sqrt2 + 1) >= 2C
  CHECK(monotone_permutation_check({0.0, 1.0, 2.0}, {0, 2, 1}, a1, C));
  CHECK_THROWS_AS(monotone_permutation_check({1.0, 0.0}, {0, 1}, a1, C),
                  std::invalid_argument);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-4, 4);
  for (const Alpha& a : {a1, a2}) {
    for (int trial = 0; trial < 7; ++trial) {
      std::vector<double> pts(6);
      for (double& v : pts) v = U(rng);
      std::sort(pts.begin(), pts.end());
      CHECK(monotone_permutation_exhaustive(pts, a, C));
    }
  }
  CHECK_THROWS_AS(
      monotone_permutation_exhaustive({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, a1, C),
      std::invalid_argument);

  // larger tuples fall back to randomized permutation sampling
  std::vector<double> big(12);
  for (int i = 0; i < 12; ++i) big[i] = 0.31 * i * i - 2.0;
  CHECK(monotone_permutation_sampled(big, a1, C, 300, 99));
}

TEST_CASE("box counting on the singular line sees dimension 1 + alpha") {
  const double C1 = snowflake_constant(a1);
  const double D1 = C1;  // diameter of {0} x [0,1]
  const double dim1 = snowflake_box_dimension(1.0, std::exp2(-10) * D1, a1, C1);
  CHECK(std::fabs(dim1 - 2.0) <= 0.05);

  const double C2 = snowflake_constant(a2);
  const double D2 = C2;
  const double dim2 = snowflake_box_dimension(1.0, std::exp2(-10) * D2, a2, C2);
  CHECK(std::fabs(dim2 - 3.0) <= 0.05);
}
