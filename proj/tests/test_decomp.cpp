#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "morrlab/decomp.hpp"
#include "morrlab/expr.hpp"
#include "morrlab/grid.hpp"
#include "morrlab/norms.hpp"
#include "morrlab/operators.hpp"

using namespace morrlab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("radial ramp: plateau, cutoff, smooth bridge") {
  CHECK(annulus_ramp(0.0) == 1.0);
  CHECK(annulus_ramp(1.0) == 1.0);
  CHECK(annulus_ramp(2.0) == 0.0);
  CHECK(annulus_ramp(3.0) == 0.0);
  CHECK(annulus_ramp(1.5) == doctest::Approx(0.5).epsilon(1e-15));
  double prev = 1.0;
  for (double t = 1.0; t <= 2.0; t += 0.05) {
    const double v = annulus_ramp(t);
    CHECK(v <= prev + 1e-15);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("annulus partition sums to one with localized rings") {
  const GridSpec spec(1, 2.0, 256);
  const Point center{0.25, 0.0};
  const double R = 0.125;
  const AnnulusPartition part = build_annulus_partition(spec, center, R);
  REQUIRE(part.count() >= 2);

  for (std::size_t k = 0; k < spec.size(); ++k) {
    double sum = 0.0;
    for (const GridFunction& phi : part.members) {
      const double v = phi.values()[k].real();
      CHECK(v >= -1e-15);
      CHECK(v <= 1.0 + 1e-15);
      CHECK(phi.values()[k].imag() == 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
  }

  // Ring 0: plateau of radius 2R, gone by 4R. Ring i >= 1 confined to
  // [2^i R, 2^{i+2} R].
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double t = std::abs(spec.node(k) - center[0]);
    if (t <= 2.0 * R) CHECK(part.members[0].values()[k].real() == doctest::Approx(1.0));
    if (t >= 4.0 * R) CHECK(part.members[0].values()[k].real() == 0.0);
    for (std::size_t i = 1; i + 1 < part.count(); ++i) {
      const double v = part.members[i].values()[k].real();
      if (t <= std::ldexp(R, int(i)) * (1.0 - 1e-12)) CHECK(v == 0.0);
      if (t >= std::ldexp(R, int(i) + 2) * (1.0 + 1e-12)) CHECK(v == 0.0);
    }
  }

  // Pieces re-assemble the function.
  const GridFunction f = sample(FunctionExpr::parse("(sum (bump 0 1) (chi -1.5 -0.5))"), spec);
  const std::vector<GridFunction> pieces = part.pieces(f);
  REQUIRE(pieces.size() == part.count());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    Complex sum{0.0, 0.0};
    for (const GridFunction& piece : pieces) sum += piece.values()[k];
    CHECK(std::abs(sum - f.values()[k]) <= 1e-13 * (1.0 + std::abs(f.values()[k])));
  }

  CHECK(build_annulus_partition(spec, center, R, 8).count() == 8);
  CHECK_THROWS_AS(build_annulus_partition(spec, center, R, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_annulus_partition(spec, center, 0.03125, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_annulus_partition(spec, center, 0.0), std::invalid_argument);
}

TEST_CASE("near/far split: ratios, normalizer, validation") {
  const GridSpec spec(1, 2.0, 128);
  const MorreyParams params{2.0, -0.25};
  const GridFunction f = sample(FunctionExpr::bump({0.0}, 1.0), spec);
  const Point center{0.0, 0.0};
  const double R = 0.5;

  const NearFarReport report = near_far_split(f, center, R, OperatorSpec::maximal(), params);
  CHECK(report.rings >= 2);
  CHECK(report.term_ratios.size() == report.rings - 1);
  CHECK(report.near_ratio > 0.0);
  CHECK(report.far_ratio >= 0.0);
  const double morrey = morrey_norm_dyadic(f, params).value;
  CHECK(report.normalizer ==
        doctest::Approx(std::pow(R, 0.25) * morrey).epsilon(1e-13));

  // The near piece agrees with f on B_R, so for the identity operator the
  // near ratio is exactly ||f||_{L_p(B_R)} over the normalizer.
  const NearFarReport ident = near_far_split(f, center, R, OperatorSpec::identity(), params);
  const double direct = lp_norm(f, params.p, Ball{center, R}) / report.normalizer;
  CHECK(ident.near_ratio == doctest::Approx(direct).epsilon(1e-13));

  CHECK_THROWS_AS(near_far_split(f, center, 3.0 * spec.spacing(), OperatorSpec::maximal(),
                                 params),
                  std::invalid_argument);
  const GridFunction zero(spec, std::vector<Complex>(spec.size(), Complex{0.0, 0.0}));
  CHECK_THROWS_AS(near_far_split(zero, center, R, OperatorSpec::maximal(), params),
                  std::invalid_argument);
}

TEST_CASE("far-field statistic recovers the tail constant of a singular integral") {
  const GridSpec spec(1, 4.0, 1024);
  const GridFunction f = sample(FunctionExpr::chi(-1.0, 1.0), spec);
  const GridFunction h = cz_truncated(f, HomogeneousKernelSpec::hilbert(0.5));
  const GridFunctionSeq seq(std::vector<GridFunction>{h});

  const FarFieldReport report = far_field_decay(seq, 1.0, 2.0);
  REQUIRE(report.shells.size() >= 2);
  for (const FarFieldShell& shell : report.shells) {
    // x H(x) with H(x) = (1/pi) log((x+1)/(x-1)) at the realizing node.
    const double expect = shell.radius * std::log((shell.radius + 1.0) / (shell.radius - 1.0)) / kPi;
    CHECK(shell.value == doctest::Approx(expect).epsilon(0.03));
  }
  // x H(x) = (2/pi)(1 + 1/(3x^2) + ...): the fitted limit is 2/pi.
  CHECK(report.extrapolated_statistic == doctest::Approx(2.0 / kPi).epsilon(0.03));
  CHECK(report.sup_statistic >= report.outer_statistic - 1e-15);
  CHECK(report.fit_residual < 0.05 * report.sup_statistic);

  CHECK_THROWS_AS(far_field_decay(seq, 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(far_field_decay(seq, 1.5, 2.0), std::invalid_argument);
}

TEST_CASE("mollifier profile: support, range, unit mass") {
  CHECK(MollifierSpec::profile({1.0, 0.0}, 1) == 0.0);
  CHECK(MollifierSpec::profile({-1.5, 0.0}, 1) == 0.0);
  const double peak = MollifierSpec::profile({0.0, 0.0}, 1);
  CHECK(peak > 0.5);
  CHECK(peak <= 1.0);
  CHECK(MollifierSpec::profile({0.5, 0.0}, 1) < peak);

  const GridSpec fine(1, 1.0, 1024);
  double mass = 0.0;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    mass += MollifierSpec::profile({fine.node(i), 0.0}, 1);
  }
  mass *= fine.cell_volume();
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));

  const MollifierSpec spec{4};
  CHECK(spec.scaled({0.1, 0.0}, 1) ==
        doctest::Approx(4.0 * MollifierSpec::profile({0.4, 0.0}, 1)).epsilon(1e-15));
  CHECK(spec.scaled({0.3, 0.0}, 1) == 0.0);
}

TEST_CASE("mollification reproduces constants and never grows norms") {
  const GridSpec spec(1, 2.0, 256);
  const double h = spec.spacing();
  const GridFunction ones(spec, std::vector<Complex>(spec.size(), Complex{1.0, 0.0}));

  for (const int l : {1, 2, 8}) {
    const GridFunction smooth = mollify(ones, MollifierSpec{l});
    const std::size_t halo = std::size_t(std::floor(1.0 / (double(l) * h) + 1e-9));
    for (std::size_t i = halo; i + halo < spec.size(); ++i) {
      CHECK(smooth.values()[i].real() == doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  const GridFunction f = sample(FunctionExpr::parse("(sum (chi -1 0) (bump 0.5 0.5))"), spec);
  for (const int l : {1, 2, 4, 16}) {
    const GridFunction g = mollify(f, MollifierSpec{l});
    CHECK(lp_norm(g, 2.0) <= lp_norm(f, 2.0) * (1.0 + 1e-12));
    CHECK(lp_norm(g, 1.0) <= lp_norm(f, 1.0) * (1.0 + 1e-12));
  }
  CHECK_THROWS_AS(mollify(f, MollifierSpec{0}), std::invalid_argument);

  // Sharper mollifiers track a smooth target better.
  const GridFunction target = sample(FunctionExpr::bump({0.0}, 1.0), spec);
  double prev = std::numeric_limits<double>::infinity();
  for (const int l : {2, 4, 8}) {
    const GridFunction g = mollify(target, MollifierSpec{l});
    const double err = lp_norm(subtract(g, target), 2.0);
    CHECK(err < prev);
    prev = err;
  }
}
