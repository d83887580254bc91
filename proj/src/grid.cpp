#include "morrlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace morrlab {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void check_same_spec(const GridFunction& f, const GridFunction& g) {
  if (!(f.spec() == g.spec())) {
    throw std::invalid_argument("grid functions live on different grids");
  }
}

}  // namespace

double squared_norm(const Point& x, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += x[std::size_t(a)] * x[std::size_t(a)];
  return s;
}

double euclidean_norm(const Point& x, int dim) { return std::sqrt(squared_norm(x, dim)); }

GridSpec::GridSpec(int dim, double half_width, std::size_t points_per_axis)
    : dim_(dim), half_width_(half_width), points_(points_per_axis) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("half_width must be positive and finite");
  }
  if (!is_power_of_two(points_per_axis) || points_per_axis < 2) {
    throw std::invalid_argument("points_per_axis must be a power of two >= 2");
  }
}

double GridSpec::cell_volume() const noexcept {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= spacing();
  return v;
}

std::size_t GridSpec::size() const noexcept {
  std::size_t s = 1;
  for (int a = 0; a < dim_; ++a) s *= points_;
  return s;
}

double GridSpec::node(std::size_t axis_index) const noexcept {
  return -half_width_ + (double(axis_index) + 0.5) * spacing();
}

Point GridSpec::point(std::size_t flat) const noexcept {
  auto idx = unflat(flat);
  Point x{0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[std::size_t(a)] = node(idx[std::size_t(a)]);
  return x;
}

std::size_t GridSpec::flat(std::size_t i0, std::size_t i1) const noexcept {
  return dim_ == 1 ? i0 : i0 * points_ + i1;
}

std::array<std::size_t, 2> GridSpec::unflat(std::size_t flat) const noexcept {
  if (dim_ == 1) return {flat, 0};
  return {flat / points_, flat % points_};
}

GridSpec GridSpec::refined() const { return GridSpec(dim_, half_width_, points_ * 2); }

CellRange cell_range(const GridSpec& spec, double lo, double hi) {
  const double h = spec.spacing();
  const double L = spec.half_width();
  const double v_lo = (lo + L) / h - 0.5;
  const double v_hi = (hi + L) / h - 0.5;
  CellRange r;
  r.first = std::max<std::int64_t>(0, std::int64_t(std::ceil(v_lo - 1e-9)));
  r.last = std::min<std::int64_t>(std::int64_t(spec.points_per_axis()) - 1,
                                  std::int64_t(std::floor(v_hi + 1e-9)));
  return r;
}

GridFunction::GridFunction(GridSpec spec, std::vector<Complex> values)
    : spec_(spec), values_(std::move(values)) {
  if (values_.size() != spec_.size()) {
    throw std::invalid_argument("sample count does not match grid size");
  }
  for (const Complex& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("grid function samples must be finite");
    }
  }
}

GridFunction GridFunction::zeros(const GridSpec& spec) {
  return GridFunction(spec, std::vector<Complex>(spec.size(), Complex{0.0, 0.0}));
}

GridFunction add(const GridFunction& f, const GridFunction& g) {
  check_same_spec(f, g);
  std::vector<Complex> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i] + g[i];
  return GridFunction(f.spec(), std::move(out));
}

GridFunction subtract(const GridFunction& f, const GridFunction& g) {
  check_same_spec(f, g);
  std::vector<Complex> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i] - g[i];
  return GridFunction(f.spec(), std::move(out));
}

GridFunction scale(const GridFunction& f, Complex c) {
  std::vector<Complex> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * f[i];
  return GridFunction(f.spec(), std::move(out));
}

GridFunction abs(const GridFunction& f) {
  std::vector<Complex> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(f[i]);
  return GridFunction(f.spec(), std::move(out));
}

GridFunction multiply(const GridFunction& f, const GridFunction& g) {
  check_same_spec(f, g);
  std::vector<Complex> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i] * g[i];
  return GridFunction(f.spec(), std::move(out));
}

GridFunctionSeq::GridFunctionSeq(std::vector<GridFunction> members)
    : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("sequence must be non-empty");
  for (const GridFunction& f : members_) {
    if (!(f.spec() == members_.front().spec())) {
      throw std::invalid_argument("sequence members must share one grid");
    }
  }
}

GridFunction pointwise_lq(const GridFunctionSeq& seq, double q) {
  if (std::isinf(q)) {
    std::vector<Complex> out(seq.spec().size(), Complex{0.0, 0.0});
    for (std::size_t j = 0; j < seq.count(); ++j) {
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::max(out[i].real(), std::abs(seq[j][i]));
      }
    }
    return GridFunction(seq.spec(), std::move(out));
  }
  if (!(q >= 1.0)) throw std::invalid_argument("lq exponent must satisfy q >= 1");
  std::vector<double> acc(seq.spec().size(), 0.0);
  for (std::size_t j = 0; j < seq.count(); ++j) {
    for (std::size_t i = 0; i < acc.size(); ++i) {
      acc[i] += std::pow(std::abs(seq[j][i]), q);
    }
  }
  std::vector<Complex> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = std::pow(acc[i], 1.0 / q);
  return GridFunction(seq.spec(), std::move(out));
}

DyadicCube::DyadicCube(int dim, int level, std::array<std::int64_t, 2> offset)
    : dim_(dim), level_(level), offset_(offset) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
  if (level < -62 || level > 62) throw std::invalid_argument("cube level out of range");
}

double DyadicCube::center(int axis) const noexcept {
  return std::ldexp(double(offset_[std::size_t(axis)]), -level_);
}

double DyadicCube::half_side() const noexcept { return std::ldexp(1.0, -level_); }

double DyadicCube::lower(int axis) const noexcept { return center(axis) - half_side(); }

double DyadicCube::upper(int axis) const noexcept { return center(axis) + half_side(); }

double DyadicCube::volume() const noexcept { return std::ldexp(1.0, dim_ * (1 - level_)); }

double DyadicCube::mu_weight(double p, double r) const noexcept {
  return std::pow(2.0, double(level_) * (double(dim_) + p * r));
}

bool DyadicCube::contains(const Point& x) const noexcept {
  for (int a = 0; a < dim_; ++a) {
    if (x[std::size_t(a)] < lower(a) || x[std::size_t(a)] > upper(a)) return false;
  }
  return true;
}

DyadicCube DyadicCube::child(unsigned corner) const {
  std::array<std::int64_t, 2> off{0, 0};
  for (int a = 0; a < dim_; ++a) {
    const std::int64_t e = (corner >> unsigned(a)) & 1u ? 1 : -1;
    off[std::size_t(a)] = 2 * offset_[std::size_t(a)] + e;
  }
  return DyadicCube(dim_, level_ + 1, off);
}

std::string DyadicCube::to_string() const {
  std::ostringstream os;
  os << "Q[J=" << level_ << ",M=(" << offset_[0];
  if (dim_ == 2) os << "," << offset_[1];
  os << ")]";
  return os.str();
}

namespace {

// Offsets M with 2^{-J}(M-1) <= L and 2^{-J}(M+1) >= -L, i.e. the cube
// closure meets [-L, L].
std::pair<std::int64_t, std::int64_t> axis_offsets(double L, int j) {
  const double scale = std::ldexp(L, j);
  const auto lo = std::int64_t(std::ceil(-scale - 1.0 - 1e-9));
  const auto hi = std::int64_t(std::floor(scale + 1.0 + 1e-9));
  return {lo, hi};
}

}  // namespace

std::size_t cubes_touching_count(const GridSpec& spec, int j_min, int j_max) {
  if (j_min > j_max) throw std::invalid_argument("empty level range");
  std::size_t total = 0;
  for (int j = j_min; j <= j_max; ++j) {
    auto [lo, hi] = axis_offsets(spec.half_width(), j);
    const auto per_axis = std::size_t(hi - lo + 1);
    std::size_t level_count = 1;
    for (int a = 0; a < spec.dim(); ++a) level_count *= per_axis;
    total += level_count;
  }
  return total;
}

std::vector<DyadicCube> cubes_touching(const GridSpec& spec, int j_min, int j_max,
                                       std::size_t cap) {
  const std::size_t total = cubes_touching_count(spec, j_min, j_max);
  if (total > cap) {
    throw std::runtime_error("cube enumeration exceeds cap: " + std::to_string(total) +
                             " > " + std::to_string(cap));
  }
  std::vector<DyadicCube> cubes;
  cubes.reserve(total);
  for (int j = j_min; j <= j_max; ++j) {
    auto [lo, hi] = axis_offsets(spec.half_width(), j);
    if (spec.dim() == 1) {
      for (std::int64_t m = lo; m <= hi; ++m) {
        cubes.emplace_back(1, j, std::array<std::int64_t, 2>{m, 0});
      }
    } else {
      for (std::int64_t m0 = lo; m0 <= hi; ++m0) {
        for (std::int64_t m1 = lo; m1 <= hi; ++m1) {
          cubes.emplace_back(2, j, std::array<std::int64_t, 2>{m0, m1});
        }
      }
    }
  }
  return cubes;
}

}  // namespace morrlab
