#pragma once

#include <cmath>
#include <vector>

#include "morrlab/grid.hpp"
#include "morrlab/norms.hpp"

namespace morrlab::detail {

// Summed-area table of |f|^p over cells; box and disc sums in O(1) resp.
// O(rows). Sums exclude the h^n quadrature factor; callers append it.
class PowerTable {
public:
  PowerTable(const GridFunction& f, double p)
      : spec_(f.spec()), n_(f.spec().points_per_axis()) {
    if (spec_.dim() == 1) {
      sat_.assign(n_ + 1, 0.0);
      for (std::size_t i = 0; i < n_; ++i) {
        sat_[i + 1] = sat_[i] + std::pow(std::abs(f[i]), p);
      }
    } else {
      sat_.assign((n_ + 1) * (n_ + 1), 0.0);
      for (std::size_t i0 = 0; i0 < n_; ++i0) {
        for (std::size_t i1 = 0; i1 < n_; ++i1) {
          const double w = std::pow(std::abs(f[spec_.flat(i0, i1)]), p);
          at(i0 + 1, i1 + 1) = w + at(i0, i1 + 1) + at(i0 + 1, i1) - at(i0, i1);
        }
      }
    }
  }

  double box_sum(const CellRange& r0, const CellRange& r1) const {
    if (r0.empty()) return 0.0;
    if (spec_.dim() == 1) {
      return sat_[std::size_t(r0.last + 1)] - sat_[std::size_t(r0.first)];
    }
    if (r1.empty()) return 0.0;
    const auto a0 = std::size_t(r0.first), b0 = std::size_t(r0.last + 1);
    const auto a1 = std::size_t(r1.first), b1 = std::size_t(r1.last + 1);
    return at(b0, b1) - at(a0, b1) - at(b0, a1) + at(a0, a1);
  }

  double ball_sum(const Ball& ball) const {
    const CellRange rows =
        cell_range(spec_, ball.center[0] - ball.radius, ball.center[0] + ball.radius);
    if (spec_.dim() == 1) return box_sum(rows, CellRange{});
    double total = 0.0;
    for (std::int64_t i0 = rows.first; i0 <= rows.last; ++i0) {
      const double dy = spec_.node(std::size_t(i0)) - ball.center[0];
      const double rem = ball.radius * ball.radius - dy * dy;
      if (rem < 0.0) continue;
      const double w = std::sqrt(rem);
      total += box_sum(CellRange{i0, i0},
                       cell_range(spec_, ball.center[1] - w, ball.center[1] + w));
    }
    return total;
  }

private:
  double& at(std::size_t i0, std::size_t i1) { return sat_[i0 * (n_ + 1) + i1]; }
  double at(std::size_t i0, std::size_t i1) const { return sat_[i0 * (n_ + 1) + i1]; }

  GridSpec spec_;
  std::size_t n_;
  std::vector<double> sat_;
};

}  // namespace morrlab::detail
