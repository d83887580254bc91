#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "morrlab/expr.hpp"
#include "morrlab/fft.hpp"
#include "morrlab/grid.hpp"

using namespace morrlab;

namespace {

GridFunction random_function(const GridSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Complex> values(spec.size());
  for (Complex& v : values) {
    const double re = double(rng() >> 11) * 0x1p-52 - 1.0;
    const double im = double(rng() >> 11) * 0x1p-52 - 1.0;
    v = Complex{re, im};
  }
  return GridFunction(spec, std::move(values));
}

// O(N^2) reference transform F(xi_k) = h^n sum_j f(x_j) e^{-2 pi i x_j . xi_k}.
std::vector<Complex> direct_forward(const GridFunction& f) {
  const GridSpec& spec = f.spec();
  std::vector<Complex> out(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const auto kb = spec.unflat(k);
    Point xi{fft::bin_frequency(spec, kb[0]), 0.0};
    if (spec.dim() == 2) xi[1] = fft::bin_frequency(spec, kb[1]);
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < spec.size(); ++j) {
      const Point x = spec.point(j);
      double dot = x[0] * xi[0];
      if (spec.dim() == 2) dot += x[1] * xi[1];
      const double ang = -2.0 * std::numbers::pi * dot;
      acc += f[j] * Complex{std::cos(ang), std::sin(ang)};
    }
    out[k] = acc * spec.cell_volume();
  }
  return out;
}

}  // namespace

TEST_CASE("bin frequencies cover [-N/2, N/2) over 2L") {
  const GridSpec spec(1, 4.0, 16);
  CHECK(fft::bin_frequency(spec, 0) == 0.0);
  CHECK(fft::bin_frequency(spec, 1) == doctest::Approx(1.0 / 8.0));
  CHECK(fft::bin_frequency(spec, 15) == doctest::Approx(-1.0 / 8.0));
  CHECK(fft::bin_frequency(spec, 8) == doctest::Approx(-1.0));
}

TEST_CASE("forward transform matches the direct sum") {
  for (const GridSpec spec : {GridSpec(1, 2.0, 32), GridSpec(2, 1.0, 8)}) {
    const GridFunction f = random_function(spec, 17);
    const std::vector<Complex> fast = fft::forward(f);
    const std::vector<Complex> slow = direct_forward(f);
    double worst = 0.0;
    for (std::size_t k = 0; k < fast.size(); ++k) worst = std::max(worst, std::abs(fast[k] - slow[k]));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("inverse undoes forward") {
  for (const GridSpec spec : {GridSpec(1, 4.0, 64), GridSpec(2, 2.0, 16)}) {
    const GridFunction f = random_function(spec, 3);
    const GridFunction back = fft::inverse(spec, fft::forward(f));
    double worst = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) worst = std::max(worst, std::abs(back[k] - f[k]));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("unit symbol is the identity and symbols compose multiplicatively") {
  const GridSpec spec(1, 4.0, 64);
  const GridFunction f = sample(FunctionExpr::bump({0.5}, 1.0), spec);
  const GridFunction same = fft::apply_symbol(f, [](const Point&) { return Complex{1.0, 0.0}; });
  double worst = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) worst = std::max(worst, std::abs(same[k] - f[k]));
  CHECK(worst < 1e-13);

  const auto m = [](const Point& xi) { return Complex{std::exp(-xi[0] * xi[0]), 0.0}; };
  const GridFunction once = fft::apply_symbol(f, m);
  const GridFunction twice = fft::apply_symbol(once, m);
  const GridFunction squared = fft::apply_symbol(
      f, [&](const Point& xi) { return m(xi) * m(xi); });
  worst = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    worst = std::max(worst, std::abs(twice[k] - squared[k]));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("modulation symbol shifts samples by whole cells") {
  // e^{-2 pi i xi v} with v a lattice vector translates on the torus; a
  // compactly supported f far from the boundary translates exactly.
  const GridSpec spec(1, 4.0, 128);
  const GridFunction f = sample(FunctionExpr::bump({-1.0}, 0.75), spec);
  const double v = 16.0 * spec.spacing();
  const GridFunction shifted = fft::apply_symbol(f, [&](const Point& xi) {
    const double ang = -2.0 * std::numbers::pi * xi[0] * v;
    return Complex{std::cos(ang), std::sin(ang)};
  });
  double worst = 0.0;
  for (std::size_t k = 16; k < spec.size(); ++k) {
    worst = std::max(worst, std::abs(shifted[k] - f[k - 16]));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("parseval ties kernel synthesis to its symbol") {
  for (const GridSpec spec : {GridSpec(1, 2.0, 64), GridSpec(2, 2.0, 16)}) {
    const auto m = [&](const Point& xi) {
      return Complex{std::exp(-squared_norm(xi, spec.dim())), 0.0};
    };
    const GridFunction kernel = fft::synthesize_kernel(spec, m);
    double space_energy = 0.0;
    for (std::size_t j = 0; j < kernel.size(); ++j) space_energy += std::norm(kernel[j]);
    space_energy *= spec.cell_volume();
    double symbol_energy = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const auto kb = spec.unflat(k);
      Point xi{fft::bin_frequency(spec, kb[0]), 0.0};
      if (spec.dim() == 2) xi[1] = fft::bin_frequency(spec, kb[1]);
      symbol_energy += std::norm(m(xi));
    }
    for (int a = 0; a < spec.dim(); ++a) symbol_energy /= 2.0 * spec.half_width();
    CHECK(space_energy == doctest::Approx(symbol_energy).epsilon(1e-12));
  }
}

TEST_CASE("padded convolution matches the direct aperiodic sum") {
  for (const GridSpec spec : {GridSpec(1, 1.0, 32), GridSpec(2, 1.0, 8)}) {
    const GridFunction f = random_function(spec, 29);
    const auto kernel = [&](const Point& z) {
      return Complex{std::exp(-squared_norm(z, spec.dim())), 0.1 * z[0]};
    };
    const GridFunction fast = fft::convolve(f, kernel);
    double worst = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const Point x = spec.point(i);
      Complex acc{0.0, 0.0};
      for (std::size_t j = 0; j < spec.size(); ++j) {
        const Point y = spec.point(j);
        acc += kernel(Point{x[0] - y[0], x[1] - y[1]}) * f[j];
      }
      acc *= spec.cell_volume();
      worst = std::max(worst, std::abs(fast[i] - acc));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("convolution is aperiodic, not cyclic") {
  // A kernel with long reach must not wrap mass around the domain edge:
  // convolving a one-sided spike with a right-decaying kernel leaves the
  // far-left samples at exactly the direct-sum value, not the cyclic one.
  const GridSpec spec(1, 1.0, 16);
  std::vector<Complex> values(16, Complex{0.0, 0.0});
  values[15] = Complex{1.0, 0.0};
  const GridFunction f(spec, std::move(values));
  const auto kernel = [](const Point& z) {
    return Complex{z[0] > 0.0 ? 1.0 : 0.0, 0.0};
  };
  const GridFunction out = fft::convolve(f, kernel);
  // x_0 - x_15 < 0, so the direct sum at the left edge is zero.
  CHECK(std::abs(out[0]) < 1e-12);
  CHECK(std::abs(out[15]) < 1e-12);  // z = 0 also excluded
  CHECK(out[5].real() == doctest::Approx(0.0).epsilon(1e-12));
}
