#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "morrlab/expr.hpp"
#include "morrlab/grid.hpp"

using namespace morrlab;

TEST_CASE("grid nodes are cell centers") {
  const GridSpec spec(1, 1.0, 8);
  CHECK(spec.spacing() == doctest::Approx(0.25));
  CHECK(spec.cell_volume() == doctest::Approx(0.25));
  CHECK(spec.node(0) == doctest::Approx(-0.875));
  CHECK(spec.node(4) == doctest::Approx(0.125));
  CHECK(spec.node(7) == doctest::Approx(0.875));
  CHECK(spec.size() == 8);

  const GridSpec plane(2, 2.0, 16);
  CHECK(plane.size() == 256);
  CHECK(plane.cell_volume() == doctest::Approx(0.0625));
  const Point p = plane.point(plane.flat(3, 5));
  CHECK(p[0] == doctest::Approx(-2.0 + 3.5 * 0.25));
  CHECK(p[1] == doctest::Approx(-2.0 + 5.5 * 0.25));
  const auto idx = plane.unflat(plane.flat(3, 5));
  CHECK(idx[0] == 3);
  CHECK(idx[1] == 5);
}

TEST_CASE("grid constructor validates its arguments") {
  CHECK_THROWS_AS(GridSpec(3, 1.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(1, 0.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(1, 1.0, 12), std::invalid_argument);  // not a power of two
  CHECK_THROWS_AS(GridSpec(1, 1.0, 0), std::invalid_argument);
}

TEST_CASE("refinement doubles the point count on the same domain") {
  const GridSpec spec(1, 4.0, 64);
  const GridSpec fine = spec.refined();
  CHECK(fine.points_per_axis() == 128);
  CHECK(fine.half_width() == spec.half_width());
  CHECK(fine.spacing() == doctest::Approx(spec.spacing() / 2.0));
}

TEST_CASE("cell ranges use closed intervals with boundary ties inside") {
  const GridSpec spec(1, 1.0, 8);
  // Centers: -0.875, -0.625, -0.375, -0.125, 0.125, 0.375, 0.625, 0.875.
  const CellRange all = cell_range(spec, -1.0, 1.0);
  CHECK(all.first == 0);
  CHECK(all.last == 7);
  const CellRange single = cell_range(spec, 0.0, 0.25);
  CHECK(single.first == 4);
  CHECK(single.last == 4);
  const CellRange ties = cell_range(spec, -0.125, 0.375);
  CHECK(ties.first == 3);
  CHECK(ties.last == 5);
  const CellRange none = cell_range(spec, 0.13, 0.14);
  CHECK(none.empty());
  const CellRange outside = cell_range(spec, 2.0, 3.0);
  CHECK(outside.empty());
}

TEST_CASE("dyadic cube geometry") {
  const DyadicCube q(1, 2, {3, 0});
  CHECK(q.center(0) == doctest::Approx(0.75));
  CHECK(q.half_side() == doctest::Approx(0.25));
  CHECK(q.lower(0) == doctest::Approx(0.5));
  CHECK(q.upper(0) == doctest::Approx(1.0));
  CHECK(q.volume() == doctest::Approx(0.5));  // 2^{1-2}

  const DyadicCube square(2, -1, {1, -1});
  CHECK(square.center(0) == doctest::Approx(2.0));
  CHECK(square.center(1) == doctest::Approx(-2.0));
  CHECK(square.half_side() == doctest::Approx(2.0));
  CHECK(square.volume() == doctest::Approx(16.0));  // (2*2)^2

  CHECK(q.contains(Point{0.5, 0.0}));   // closed boundary
  CHECK(q.contains(Point{1.0, 0.0}));
  CHECK(!q.contains(Point{1.0001, 0.0}));
}

TEST_CASE("mu weight matches 2^{J(n + p r)}") {
  const DyadicCube q(1, 3, {-5, 0});
  const double p = 2.0;
  const double r = -0.25;
  CHECK(q.mu_weight(p, r) == doctest::Approx(std::pow(2.0, 3.0 * (1.0 + p * r))));
}

TEST_CASE("children tile the parent with half-side halved") {
  const DyadicCube parent(1, 0, {0, 0});
  const DyadicCube left = parent.child(0);
  const DyadicCube right = parent.child(1);
  CHECK(left.level() == 1);
  CHECK(left.offset(0) == -1);
  CHECK(right.offset(0) == 1);
  CHECK(left.upper(0) == doctest::Approx(right.lower(0)));
  CHECK(left.lower(0) == doctest::Approx(parent.lower(0)));
  CHECK(right.upper(0) == doctest::Approx(parent.upper(0)));

  const DyadicCube cube2(2, 1, {1, -1});
  std::set<std::pair<std::int64_t, std::int64_t>> corners;
  for (unsigned c = 0; c < 4; ++c) {
    const DyadicCube child = cube2.child(c);
    CHECK(child.level() == 2);
    corners.insert({child.offset(0), child.offset(1)});
  }
  CHECK(corners.size() == 4);
  CHECK(corners.count({1, -3}) == 1);
  CHECK(corners.count({3, -1}) == 1);
}

TEST_CASE("cube enumeration matches the hand count in one dimension") {
  const GridSpec spec(1, 1.0, 8);
  // Level 0: cubes [M-1, M+1] meeting [-1,1] are M in {-2,...,2}.
  const auto level0 = cubes_touching(spec, 0, 0);
  CHECK(level0.size() == 5);
  std::set<std::int64_t> offsets;
  for (const DyadicCube& q : level0) {
    CHECK(q.level() == 0);
    offsets.insert(q.offset(0));
  }
  CHECK(offsets == std::set<std::int64_t>{-2, -1, 0, 1, 2});
  // Level 1: [(M-1)/2, (M+1)/2] meeting [-1,1] are M in {-3,...,3}.
  const auto level1 = cubes_touching(spec, 1, 1);
  CHECK(level1.size() == 7);
  CHECK(cubes_touching(spec, 0, 1).size() == 12);
  CHECK(cubes_touching_count(spec, 0, 1) == 12);
  CHECK_THROWS_AS(cubes_touching(spec, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(cubes_touching(spec, 0, 12, 10), std::runtime_error);  // cap
}

TEST_CASE("cube enumeration counts squares in two dimensions") {
  const GridSpec spec(2, 1.0, 8);
  // Per-axis offsets at level 0 are {-2..2}; squares are the product.
  CHECK(cubes_touching(spec, 0, 0).size() == 25);
  CHECK(cubes_touching_count(spec, 1, 1) == 49);
}

TEST_CASE("grid function arithmetic is pointwise") {
  const GridSpec spec(1, 1.0, 4);
  const GridFunction f(spec, {{1.0, 0.0}, {2.0, 0.0}, {-3.0, 0.0}, {0.0, 4.0}});
  const GridFunction g(spec, {{0.5, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {2.0, 0.0}});
  const GridFunction s = add(f, g);
  CHECK(s[0] == Complex{1.5, 0.0});
  CHECK(s[1] == Complex{2.0, 1.0});
  const GridFunction d = subtract(f, g);
  CHECK(d[2] == Complex{-4.0, 0.0});
  const GridFunction m = multiply(f, g);
  CHECK(m[3] == Complex{0.0, 8.0});
  const GridFunction sc = scale(f, Complex{0.0, 1.0});
  CHECK(sc[0] == Complex{0.0, 1.0});
  const GridFunction a = abs(f);
  CHECK(a[2] == Complex{3.0, 0.0});
  CHECK(a[3] == Complex{4.0, 0.0});
}

TEST_CASE("grid functions reject non-finite samples and size mismatches") {
  const GridSpec spec(1, 1.0, 4);
  std::vector<Complex> bad(4, Complex{0.0, 0.0});
  bad[2] = Complex{std::nan(""), 0.0};
  CHECK_THROWS_AS(GridFunction(spec, bad), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(spec, std::vector<Complex>(3)), std::invalid_argument);
  const GridSpec other(1, 1.0, 8);
  CHECK_THROWS_AS(add(GridFunction::zeros(spec), GridFunction::zeros(other)),
                  std::invalid_argument);
}

TEST_CASE("pointwise lq reduction agrees with hand values") {
  const GridSpec spec(1, 1.0, 2);
  const GridFunction f(spec, {{3.0, 0.0}, {1.0, 0.0}});
  const GridFunction g(spec, {{4.0, 0.0}, {-1.0, 0.0}});
  const GridFunctionSeq seq({f, g});
  const GridFunction l2 = pointwise_lq(seq, 2.0);
  CHECK(l2[0].real() == doctest::Approx(5.0));
  CHECK(l2[1].real() == doctest::Approx(std::sqrt(2.0)));
  const GridFunction linf = pointwise_lq(seq, std::numeric_limits<double>::infinity());
  CHECK(linf[0].real() == doctest::Approx(4.0));
  CHECK(linf[1].real() == doctest::Approx(1.0));
  const GridFunction l1 = pointwise_lq(seq, 1.0);
  CHECK(l1[0].real() == doctest::Approx(7.0));
}

TEST_CASE("expressions evaluate their closed forms") {
  const FunctionExpr b = FunctionExpr::bump({0.0}, 1.0);
  CHECK(b(Point{0.0, 0.0}, 1) == doctest::Approx(1.0));
  CHECK(b(Point{1.0, 0.0}, 1) == 0.0);
  CHECK(b(Point{1.5, 0.0}, 1) == 0.0);
  CHECK(b(Point{0.5, 0.0}, 1) == doctest::Approx(std::exp(1.0 - 1.0 / 0.75)));

  const FunctionExpr g = FunctionExpr::gauss(0.5);
  CHECK(g(Point{0.0, 0.0}, 1) == doctest::Approx(1.0));
  CHECK(g(Point{1.0, 0.0}, 1) == doctest::Approx(std::exp(-4.0)));

  const FunctionExpr c = FunctionExpr::chi(-1.0, 0.5);
  CHECK(c(Point{-1.0, 0.0}, 1) == 1.0);
  CHECK(c(Point{0.5, 0.0}, 1) == 1.0);
  CHECK(c(Point{0.6, 0.0}, 1) == 0.0);
  // Tensorized in two dimensions.
  CHECK(c(Point{0.0, 2.0}, 2) == 0.0);
  CHECK(c(Point{0.0, 0.0}, 2) == 1.0);

  const FunctionExpr pw = FunctionExpr::pow(-0.5, 0.1);
  CHECK(pw(Point{4.0, 0.0}, 1) == doctest::Approx(0.5));
  CHECK(pw(Point{0.05, 0.0}, 1) == 0.0);

  const FunctionExpr dil = FunctionExpr::dilate(2.0, FunctionExpr::gauss(1.0));
  CHECK(dil(Point{0.5, 0.0}, 1) == doctest::Approx(std::exp(-1.0)));

  const FunctionExpr tr = FunctionExpr::translate({1.0}, FunctionExpr::gauss(1.0));
  CHECK(tr(Point{1.0, 0.0}, 1) == doctest::Approx(1.0));

  const FunctionExpr s = FunctionExpr::sum(FunctionExpr::chi(0.0, 1.0),
                                           FunctionExpr::chi(0.5, 2.0));
  CHECK(s(Point{0.75, 0.0}, 1) == doctest::Approx(2.0));
}

TEST_CASE("expression parsing round-trips through the canonical form") {
  const char* texts[] = {
      "(bump 0 1)",
      "(chi -1 1)",
      "(gauss 0.5)",
      "(pow -0.25 0.05)",
      "(dilate 2 (bump 0 1))",
      "(translate 1.5 (bump 0 0.5))",
      "(translate 0.5,0.25 (bump 0,0 1))",
      "(sum (bump 0 1) (translate 1.5 (bump 0 0.5)))",
      "zero",
  };
  for (const char* text : texts) {
    const FunctionExpr e = FunctionExpr::parse(text);
    const FunctionExpr again = FunctionExpr::parse(e.to_string());
    CHECK(e.to_string() == again.to_string());
    for (const double x : {-1.3, -0.4, 0.0, 0.7, 1.9}) {
      CHECK(e(Point{x, 0.2}, 1) == doctest::Approx(again(Point{x, 0.2}, 1)));
    }
  }
  CHECK(FunctionExpr::parse("( bump 0 1 )").to_string() == "(bump 0 1)");
}

TEST_CASE("expression parsing rejects malformed input") {
  CHECK_THROWS_AS(FunctionExpr::parse("(bump 0)"), std::invalid_argument);
  CHECK_THROWS_AS(FunctionExpr::parse("(wobble 1 2)"), std::invalid_argument);
  CHECK_THROWS_AS(FunctionExpr::parse("(bump 0 1) extra"), std::invalid_argument);
  CHECK_THROWS_AS(FunctionExpr::parse("(chi 1 -1)"), std::invalid_argument);
  CHECK_THROWS_AS(FunctionExpr::parse("(gauss 0)"), std::invalid_argument);
  CHECK_THROWS_AS(FunctionExpr::parse("(pow -1 0)"), std::invalid_argument);
  CHECK_THROWS_AS(FunctionExpr::parse("(dilate 0 (bump 0 1))"), std::invalid_argument);
}

TEST_CASE("sampling evaluates at every node and rejects singularities") {
  const GridSpec spec(1, 1.0, 8);
  const GridFunction f = sample(FunctionExpr::chi(0.0, 1.0), spec);
  // Centers 0.125, 0.375, 0.625, 0.875 fall inside [0, 1].
  for (std::size_t i = 0; i < 4; ++i) CHECK(f[i] == Complex{0.0, 0.0});
  for (std::size_t i = 4; i < 8; ++i) CHECK(f[i] == Complex{1.0, 0.0});
  // pow with eps = 0 and positive exponent is finite everywhere off zero,
  // and cell centers never hit zero.
  CHECK_NOTHROW(sample(FunctionExpr::pow(0.5, 0.0), spec));
}
