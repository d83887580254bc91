#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace morrlab {

using Complex = std::complex<double>;

/// Point in R^n with n <= 2; components beyond the active dimension stay zero.
using Point = std::array<double, 2>;

double squared_norm(const Point& x, int dim);
double euclidean_norm(const Point& x, int dim);

/**
 * Uniform cell-centered grid on [-L, L]^n for n in {1, 2}.
 *
 * Nodes sit at cell centers x_i = -L + (i + 1/2) h per axis, h = 2L/N,
 * so midpoint quadrature is a plain node sum times cell_volume().
 * N must be a power of two; transform-based operators rely on it.
 */
class GridSpec {
public:
  GridSpec(int dim, double half_width, std::size_t points_per_axis);

  int dim() const noexcept { return dim_; }
  double half_width() const noexcept { return half_width_; }
  std::size_t points_per_axis() const noexcept { return points_; }

  double spacing() const noexcept { return 2.0 * half_width_ / double(points_); }
  double cell_volume() const noexcept;
  /// Total node count N^n.
  std::size_t size() const noexcept;

  /// Axis coordinate of cell center i, i in [0, N).
  double node(std::size_t axis_index) const noexcept;
  Point point(std::size_t flat) const noexcept;
  std::size_t flat(std::size_t i0, std::size_t i1 = 0) const noexcept;
  std::array<std::size_t, 2> unflat(std::size_t flat) const noexcept;

  /// Same domain with 2N points per axis.
  GridSpec refined() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
  int dim_;
  double half_width_;
  std::size_t points_;
};

/// Closed index range [first, last] of cells whose centers fall in [lo, hi].
struct CellRange {
  std::int64_t first = 0;
  std::int64_t last = -1;
  bool empty() const noexcept { return last < first; }
  std::size_t count() const noexcept {
    return empty() ? 0 : std::size_t(last - first + 1);
  }
};

/// Cells of one axis whose centers lie in the closed interval [lo, hi].
/// Boundary ties count as inside; a 1e-9 guard in index units absorbs
/// float noise on interval ends that are exact node coordinates.
CellRange cell_range(const GridSpec& spec, double lo, double hi);

/**
 * Complex samples on a grid, indexed lexicographically by axis indices
 * (flat = i0 * N + i1 for n = 2). All samples are finite; construction
 * rejects NaN and infinities.
 */
class GridFunction {
public:
  GridFunction(GridSpec spec, std::vector<Complex> values);
  static GridFunction zeros(const GridSpec& spec);

  const GridSpec& spec() const noexcept { return spec_; }
  std::span<const Complex> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  Complex operator[](std::size_t flat) const noexcept { return values_[flat]; }

  friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
  GridSpec spec_;
  std::vector<Complex> values_;
};

GridFunction add(const GridFunction& f, const GridFunction& g);
GridFunction subtract(const GridFunction& f, const GridFunction& g);
GridFunction scale(const GridFunction& f, Complex c);
/// Pointwise |f|, real-valued.
GridFunction abs(const GridFunction& f);
GridFunction multiply(const GridFunction& f, const GridFunction& g);

/// Finite family of samples sharing one GridSpec. Non-empty.
class GridFunctionSeq {
public:
  explicit GridFunctionSeq(std::vector<GridFunction> members);

  const GridSpec& spec() const noexcept { return members_.front().spec(); }
  std::size_t count() const noexcept { return members_.size(); }
  const GridFunction& operator[](std::size_t j) const noexcept { return members_[j]; }
  std::span<const GridFunction> members() const noexcept { return members_; }

private:
  std::vector<GridFunction> members_;
};

/// Pointwise (sum_j |f_j(x)|^q)^{1/q}; q = infinity takes the pointwise max.
GridFunction pointwise_lq(const GridFunctionSeq& seq, double q);

/**
 * Dyadic cube Q_{J,M} = 2^{-J}(M + [-1,1]^n): center 2^{-J} M per axis,
 * half-side 2^{-J}. Cubes of one level overlap their neighbours halfway;
 * the sub-family with a fixed offset parity tiles space.
 */
class DyadicCube {
public:
  DyadicCube(int dim, int level, std::array<std::int64_t, 2> offset);

  int dim() const noexcept { return dim_; }
  int level() const noexcept { return level_; }
  std::int64_t offset(int axis) const noexcept { return offset_[std::size_t(axis)]; }

  double center(int axis) const noexcept;
  double half_side() const noexcept;
  double lower(int axis) const noexcept;
  double upper(int axis) const noexcept;
  /// 2^{n(1-J)}, exact.
  double volume() const noexcept;
  /// mu weight 2^{J(n + p r)}.
  double mu_weight(double p, double r) const noexcept;

  /// Closed-cube membership.
  bool contains(const Point& x) const noexcept;

  /// Child `corner` in [0, 2^n): offsets 2M + e, e in {-1,+1}^n. The 2^n
  /// children tile the cube with disjoint interiors.
  DyadicCube child(unsigned corner) const;

  std::string to_string() const;

  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;

private:
  int dim_;
  int level_;
  std::array<std::int64_t, 2> offset_;
};

inline constexpr std::size_t kDefaultCubeCap = 4'000'000;

/**
 * Every cube with level in [j_min, j_max] whose closure intersects the
 * closed domain [-L, L]^n. Throws when j_min > j_max or when the count
 * would exceed `cap`.
 */
std::vector<DyadicCube> cubes_touching(const GridSpec& spec, int j_min, int j_max,
                                       std::size_t cap = kDefaultCubeCap);

/// Number of cubes cubes_touching would return, without materializing them.
std::size_t cubes_touching_count(const GridSpec& spec, int j_min, int j_max);

}  // namespace morrlab
