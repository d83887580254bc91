#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "morrlab/expr.hpp"
#include "morrlab/grid.hpp"
#include "morrlab/norms.hpp"

using namespace morrlab;

TEST_CASE("conjugate exponents") {
  CHECK(conjugate_exponent(2.0) == doctest::Approx(2.0));
  CHECK(conjugate_exponent(1.25) == doctest::Approx(5.0));
  CHECK(conjugate_exponent(4.0) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("parameter windows are enforced") {
  CHECK_NOTHROW(MorreyParams{2.0, -0.5}.validate(1));
  CHECK_NOTHROW(MorreyParams{2.0, -0.5}.validate(2));
  CHECK_NOTHROW(MorreyParams{2.0, -0.5}.validate(1));  // r = -n/p boundary
  CHECK_THROWS_AS(MorreyParams(1.0, -0.5).validate(1), std::invalid_argument);
  CHECK_THROWS_AS(MorreyParams(2.0, 0.0).validate(1), std::invalid_argument);
  CHECK_THROWS_AS(MorreyParams(2.0, -0.6).validate(1), std::invalid_argument);

  CHECK_NOTHROW(PredualParams{2.0, -0.75}.validate(1));
  CHECK_THROWS_AS(PredualParams(2.0, -0.5).validate(1), std::invalid_argument);
  CHECK_THROWS_AS(PredualParams(2.0, -1.0).validate(1), std::invalid_argument);
  CHECK_NOTHROW(PredualParams{2.0, -1.5}.validate(2));
  CHECK_THROWS_AS(PredualParams(2.0, -1.5).validate(1), std::invalid_argument);

  const MorreyParams paired = PredualParams{2.0, -0.75}.paired_morrey(1);
  CHECK(paired.p == doctest::Approx(2.0));
  CHECK(paired.r == doctest::Approx(-0.25));
}

TEST_CASE("default level range keeps cubes between domain and cell scale") {
  const JRange a = default_j_range(GridSpec(1, 1.0, 8));
  CHECK(a.j_min == -1);
  CHECK(a.j_max == 2);
  const JRange b = default_j_range(GridSpec(1, 4.0, 256));
  CHECK(b.j_min == -3);
  CHECK(b.j_max == 5);
  const JRange c = default_j_range(GridSpec(2, 2.0, 64));
  CHECK(c.j_min == -2);
  CHECK(c.j_max == 4);
}

TEST_CASE("lebesgue norms of aligned indicators are exact") {
  const GridSpec spec(1, 2.0, 64);
  const GridFunction f = sample(FunctionExpr::chi(0.0, 1.0), spec);
  CHECK(lp_norm(f, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lp_norm(f, 3.0) == doctest::Approx(1.0).epsilon(1e-14));
  const GridFunction wide = sample(FunctionExpr::chi(-1.5, 0.5), spec);
  CHECK(lp_norm(wide, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
}

TEST_CASE("lebesgue norm of a gaussian matches the integral") {
  const GridSpec spec(1, 4.0, 256);
  const GridFunction g = sample(FunctionExpr::gauss(1.0), spec);
  // ||e^{-x^2}||_2^2 = sqrt(pi/2); midpoint quadrature converges fast.
  CHECK(lp_norm(g, 2.0) ==
        doctest::Approx(std::pow(std::numbers::pi / 2.0, 0.25)).epsilon(1e-10));
  const GridSpec plane(2, 4.0, 128);
  const GridFunction g2 = sample(FunctionExpr::gauss(1.0), plane);
  CHECK(lp_norm(g2, 2.0) ==
        doctest::Approx(std::pow(std::numbers::pi / 2.0, 0.5)).epsilon(1e-10));
}

TEST_CASE("localized norms restrict to cube and ball") {
  const GridSpec spec(1, 2.0, 64);
  const GridFunction f = sample(FunctionExpr::chi(0.0, 1.0), spec);
  CHECK(lp_norm(f, 2.0, DyadicCube(1, 1, {1, 0})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lp_norm(f, 2.0, DyadicCube(1, 2, {1, 0})) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(lp_norm(f, 2.0, DyadicCube(1, 0, {-2, 0})) == 0.0);
  CHECK(lp_norm(f, 2.0, Ball{{0.5, 0.0}, 0.25}) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(lp_norm(f, 2.0, Ball{{-3.0, 0.0}, 1.0}) == 0.0);
}

TEST_CASE("dyadic local-growth norm of a cube indicator has a closed form") {
  // chi[-1/2, 1/2] equals the level-1 cube at the origin; the weighted sup
  // over cubes is 2^{1/p} 2^{j0 r} at j0 = 1.
  const GridSpec spec(1, 2.0, 64);
  const GridFunction f = sample(FunctionExpr::chi(-0.5, 0.5), spec);
  const MorreyParams params{2.0, -0.3};
  const DyadicNormResult result = morrey_norm_dyadic(f, params);
  const double oracle = std::pow(2.0, 1.0 / params.p) * std::pow(2.0, params.r);
  CHECK(result.value == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(result.argmax.level() == 1);
  CHECK(result.argmax.offset(0) == 0);

  // Another exponent pair on the same indicator.
  const MorreyParams steep{3.0, -1.0 / 3.0 + 0.05};
  const double oracle2 = std::pow(2.0, 1.0 / 3.0) * std::pow(2.0, steep.r);
  CHECK(morrey_norm_dyadic(f, steep).value == doctest::Approx(oracle2).epsilon(1e-12));
}

TEST_CASE("local-growth norm collapses to lebesgue at the endpoint exponent") {
  const GridSpec spec(1, 2.0, 128);
  const MorreyParams params{2.0, -0.5};
  for (const char* text : {"(bump 0 1)", "(chi -1 0.25)", "(gauss 0.7)"}) {
    const GridFunction f = sample(FunctionExpr::parse(text), spec);
    CHECK(morrey_norm_dyadic(f, params).value ==
          doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("dyadic norm is monotone under pointwise domination") {
  const GridSpec spec(1, 2.0, 64);
  const GridFunction small = sample(FunctionExpr::bump({0.3}, 0.8), spec);
  const GridFunction big = add(small, sample(FunctionExpr::gauss(1.0), spec));
  const MorreyParams params{2.5, -0.2};
  CHECK(morrey_norm_dyadic(small, params).value <= morrey_norm_dyadic(big, params).value);
  CHECK(morrey_norm_ball(small, params) <= morrey_norm_ball(big, params));
}

TEST_CASE("dilation rescales the dyadic norm by the growth exponent") {
  const GridSpec spec(1, 4.0, 512);
  const MorreyParams params{2.0, -0.35};
  const FunctionExpr base = FunctionExpr::parse("(bump 0 1)");
  const double norm0 = morrey_norm_dyadic(sample(base, spec), params).value;
  for (const int k : {-1, 1, 2}) {
    const FunctionExpr dilated = FunctionExpr::dilate(std::ldexp(1.0, k), base);
    const double measured = morrey_norm_dyadic(sample(dilated, spec), params).value;
    const double expected = std::pow(2.0, double(k) * params.r) * norm0;
    CHECK(measured == doctest::Approx(expected).epsilon(0.01));
  }
}

TEST_CASE("ball norm sits within a modest factor of the dyadic norm") {
  const GridSpec spec(1, 2.0, 128);
  const MorreyParams params{2.0, -0.25};
  for (const char* text : {"(bump 0 1)", "(chi -1 1)", "(gauss 0.5)", "(bump 0.7 0.4)"}) {
    const GridFunction f = sample(FunctionExpr::parse(text), spec);
    const double cube_norm = morrey_norm_dyadic(f, params).value;
    const double ball_norm = morrey_norm_ball(f, params);
    CHECK(ball_norm > 0.5 * cube_norm);
    CHECK(ball_norm < 2.0 * cube_norm);
  }
}

TEST_CASE("ball norm is exactly invariant under aligned lattice shifts") {
  const GridSpec spec(1, 4.0, 256);
  const MorreyParams params{2.0, -0.25};
  const GridFunction f = sample(FunctionExpr::parse("(bump -1 0.75)"), spec);
  const double shift = 8.0 * spec.spacing();  // multiple of the center stride
  const GridFunction g =
      sample(FunctionExpr::translate({shift}, FunctionExpr::parse("(bump -1 0.75)")), spec);
  CHECK(morrey_norm_ball(g, params) ==
        doctest::Approx(morrey_norm_ball(f, params)).epsilon(1e-12));
}

TEST_CASE("explicit ball candidates override the default family") {
  const GridSpec spec(1, 2.0, 64);
  const MorreyParams params{2.0, -0.25};
  const GridFunction f = sample(FunctionExpr::chi(-1.0, 1.0), spec);
  BallCandidates one;
  one.centers = {Point{0.0, 0.0}};
  one.radii = {1.0};
  // Single ball [-1, 1]: weight 1^{-(1/p+r)} times mass sqrt(2).
  CHECK(morrey_norm_ball(f, params, &one) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("vector norm reduces the sequence pointwise") {
  const GridSpec spec(1, 2.0, 64);
  const MorreyParams params{2.0, -0.25};
  const GridFunction f = sample(FunctionExpr::parse("(bump 0 1)"), spec);
  const GridFunction zero = GridFunction::zeros(spec);
  // A singleton and a padded sequence have the same reduction.
  const double single = morrey_norm_dyadic(f, params).value;
  CHECK(morrey_norm_vector(GridFunctionSeq({f, zero}), params, 2.0).value ==
        doctest::Approx(single).epsilon(1e-13));
  // Duplicating a member multiplies the l_q reduction by 2^{1/q}.
  CHECK(morrey_norm_vector(GridFunctionSeq({f, f}), params, 2.0).value ==
        doctest::Approx(std::sqrt(2.0) * single).epsilon(1e-13));
  // l_q reductions decrease in q.
  const GridFunction g = sample(FunctionExpr::parse("(gauss 0.8)"), spec);
  const double q_small = morrey_norm_vector(GridFunctionSeq({f, g}), params, 1.25).value;
  const double q_large = morrey_norm_vector(GridFunctionSeq({f, g}), params, 3.0).value;
  CHECK(q_large <= q_small * (1.0 + 1e-12));
}

TEST_CASE("weighted norm matches a direct sum") {
  const GridSpec spec(1, 1.0, 16);
  const GridFunction f = sample(FunctionExpr::parse("(gauss 0.6)"), spec);
  const WeightParams weight{-0.8};
  double direct = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Point x = spec.point(i);
    const double w = std::pow(1.0 + x[0] * x[0], weight.alpha / 2.0);
    direct += std::pow(std::abs(f[i]) * w, 2.0);
  }
  direct = std::sqrt(direct * spec.cell_volume());
  CHECK(weighted_norm(f, 2.0, weight) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("embedding chain holds on smooth and rough members") {
  const GridSpec spec(1, 4.0, 256);
  const MorreyParams params{2.0, -0.25};
  const double alpha = -0.375;  // alpha p = -0.75, inside (-n, -n - r p) = (-1, -0.5)
  for (const char* text : {"(bump 0 1)", "(chi -1 1)", "(gauss 1)"}) {
    const GridFunction f = sample(FunctionExpr::parse(text), spec);
    const EmbeddingReport report = check_embedding_chain(f, params, alpha);
    CHECK(!report.violation);
    CHECK(report.ratio_morrey_over_lebesgue <= report.holder_constant * report.slack);
    CHECK(report.ratio_weighted_over_morrey <= report.shell_constant * report.slack);
    CHECK(report.lebesgue_norm > 0.0);
    CHECK(report.u == doctest::Approx(4.0));  // -n/r
  }
  CHECK_THROWS_AS(check_embedding_chain(sample(FunctionExpr::parse("(bump 0 1)"), spec),
                                        params, -0.1),
                  std::invalid_argument);
}
