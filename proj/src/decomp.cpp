#include "morrlab/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace morrlab {

namespace {

double distance(const Point& a, const Point& b, int dim) {
  Point d{a[0] - b[0], a[1] - b[1]};
  return euclidean_norm(d, dim);
}

double corner_distance(const GridSpec& spec, const Point& center) {
  double d2 = 0.0;
  for (int a = 0; a < spec.dim(); ++a) {
    const double c = center[std::size_t(a)];
    const double reach = std::max(std::abs(c - spec.half_width()), std::abs(c + spec.half_width()));
    d2 += reach * reach;
  }
  return std::sqrt(d2);
}

// Unit-normalized bump mass, one radial quadrature per dimension.
double bump_mass(int dim) {
  static double cache[3] = {0.0, 0.0, 0.0};
  if (cache[dim] != 0.0) return cache[dim];
  const int cells = 400000;
  const double dr = 1.0 / double(cells);
  double sum = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double r = (double(i) + 0.5) * dr;
    const double value = std::exp(1.0 - 1.0 / (1.0 - r * r));
    sum += dim == 1 ? 2.0 * value : 2.0 * std::numbers::pi * r * value;
  }
  cache[dim] = sum * dr;
  return cache[dim];
}

}  // namespace

double annulus_ramp(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double u = 2.0 - t;
  return u * u * (3.0 - 2.0 * u);
}

std::vector<GridFunction> AnnulusPartition::pieces(const GridFunction& f) const {
  std::vector<GridFunction> out;
  out.reserve(members.size());
  for (const GridFunction& phi : members) out.push_back(multiply(phi, f));
  return out;
}

AnnulusPartition build_annulus_partition(const GridSpec& spec, const Point& center,
                                         double base_radius, std::optional<int> ring_count) {
  if (!(base_radius > 0.0)) throw std::invalid_argument("base radius must be positive");
  const double reach = corner_distance(spec, center);
  int rings;
  if (ring_count) {
    rings = *ring_count;
    if (rings < 1) throw std::invalid_argument("partition needs at least one ring");
    // Outermost plateau must engulf the whole domain for the sum to close.
    if (std::ldexp(base_radius, rings + 1) < reach) {
      throw std::invalid_argument("too few rings to cover the domain");
    }
  } else {
    const double diameter = 2.0 * spec.half_width() * std::sqrt(double(spec.dim()));
    rings = 1;
    while (std::ldexp(base_radius, rings + 1) < diameter) ++rings;
  }

  AnnulusPartition partition;
  partition.center = center;
  partition.base_radius = base_radius;
  // Ramp i is 1 inside radius 2^{i+1} R and gone beyond 2^{i+2} R; ring i
  // is the difference of consecutive ramps, the last ring the remainder.
  std::vector<std::vector<double>> ramps;
  for (int i = 0; i + 1 < rings; ++i) {
    std::vector<double> ramp(spec.size());
    const double scale = std::ldexp(base_radius, i + 1);
    for (std::size_t k = 0; k < spec.size(); ++k) {
      ramp[k] = annulus_ramp(distance(spec.point(k), center, spec.dim()) / scale);
    }
    ramps.push_back(std::move(ramp));
  }
  for (int i = 0; i < rings; ++i) {
    std::vector<Complex> values(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const double outer = i + 1 < rings ? ramps[std::size_t(i)][k] : 1.0;
      const double inner = i > 0 ? ramps[std::size_t(i - 1)][k] : 0.0;
      values[k] = Complex{outer - inner, 0.0};
    }
    partition.members.emplace_back(spec, std::move(values));
  }
  return partition;
}

NearFarReport near_far_split(const GridFunction& f, const Point& center, double radius,
                             const OperatorSpec& op, const MorreyParams& params) {
  const GridSpec& spec = f.spec();
  params.validate(spec.dim());
  if (!(radius >= 4.0 * spec.spacing())) {
    throw std::invalid_argument("split radius must span at least four cells");
  }
  const double morrey = morrey_norm_dyadic(f, params).value;
  if (!(morrey > 0.0)) throw std::invalid_argument("split needs a non-zero function");

  const AnnulusPartition partition = build_annulus_partition(spec, center, radius);
  const std::vector<GridFunction> pieces = partition.pieces(f);
  const Ball ball{center, radius};

  NearFarReport report;
  report.rings = partition.count();
  report.normalizer =
      std::pow(radius, params.weight_exponent(spec.dim())) * morrey;
  report.near_ratio = lp_norm(op.apply(pieces[0]), params.p, ball) / report.normalizer;
  GridFunction far = subtract(f, pieces[0]);
  report.far_ratio = lp_norm(op.apply(far), params.p, ball) / report.normalizer;
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    report.term_ratios.push_back(lp_norm(op.apply(pieces[i]), params.p, ball) /
                                 report.normalizer);
  }
  return report;
}

FarFieldReport far_field_decay(const GridFunctionSeq& seq, double support_radius, double q) {
  const GridSpec& spec = seq.spec();
  if (!(support_radius > 0.0)) throw std::invalid_argument("support radius must be positive");
  if (spec.half_width() < 4.0 * support_radius) {
    throw std::invalid_argument("domain too small beyond the support");
  }

  const GridFunction amplitude = pointwise_lq(seq, q);
  const double inner = 2.0 * support_radius;
  const double outer = spec.half_width();
  // Quarter-octave shells over [2 R, L].
  std::vector<double> edges{inner};
  while (edges.back() < outer) {
    edges.push_back(std::min(outer, edges.back() * std::pow(2.0, 0.25)));
  }

  FarFieldReport report;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    FarFieldShell shell;
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const double t = euclidean_norm(spec.point(k), spec.dim());
      if (t < edges[s] || t >= edges[s + 1]) continue;
      const double value = std::abs(amplitude[k]) * std::pow(t, double(spec.dim()));
      if (value > shell.value) {
        shell.value = value;
        shell.radius = t;
      }
    }
    if (shell.radius > 0.0) report.shells.push_back(shell);
  }
  if (report.shells.size() < 2) throw std::invalid_argument("too few populated shells");

  for (const FarFieldShell& shell : report.shells) {
    report.sup_statistic = std::max(report.sup_statistic, shell.value);
  }
  report.outer_statistic = report.shells.back().value;

  // Least squares for value ~ a + b / t^2; the constant term is the limit.
  double s11 = 0.0, s1u = 0.0, suu = 0.0, s1v = 0.0, suv = 0.0;
  for (const FarFieldShell& shell : report.shells) {
    const double u = 1.0 / (shell.radius * shell.radius);
    s11 += 1.0;
    s1u += u;
    suu += u * u;
    s1v += shell.value;
    suv += u * shell.value;
  }
  const double det = s11 * suu - s1u * s1u;
  double a = 0.0, b = 0.0;
  if (std::abs(det) > 1e-30) {
    a = (suu * s1v - s1u * suv) / det;
    b = (s11 * suv - s1u * s1v) / det;
  } else {
    a = s1v / s11;
  }
  report.extrapolated_statistic = a;
  double misfit = 0.0;
  for (const FarFieldShell& shell : report.shells) {
    const double fit = a + b / (shell.radius * shell.radius);
    misfit += (shell.value - fit) * (shell.value - fit);
  }
  report.fit_residual = std::sqrt(misfit / double(report.shells.size()));
  return report;
}

double MollifierSpec::profile(const Point& x, int dim) {
  const double s2 = squared_norm(x, dim);
  if (s2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s2)) / bump_mass(dim);
}

double MollifierSpec::scaled(const Point& x, int dim) const {
  Point y{x[0] * double(scale), x[1] * double(scale)};
  return std::pow(double(scale), double(dim)) * profile(y, dim);
}

GridFunction mollify(const GridFunction& f, const MollifierSpec& m) {
  if (m.scale < 1) throw std::invalid_argument("mollifier scale must be at least 1");
  const GridSpec& spec = f.spec();
  const double h = spec.spacing();
  const double reach = 1.0 / double(m.scale);
  const std::int64_t halo = std::int64_t(std::floor(reach / h + 1e-9));

  // Stencil over lattice offsets inside the support ball, normalized to unit
  // discrete mass so convolution with a constant reproduces it exactly.
  struct Tap {
    std::int64_t d0, d1;
    double w;
  };
  std::vector<Tap> taps;
  double mass = 0.0;
  const std::int64_t halo1 = spec.dim() == 2 ? halo : 0;
  for (std::int64_t d0 = -halo; d0 <= halo; ++d0) {
    for (std::int64_t d1 = -halo1; d1 <= halo1; ++d1) {
      const Point z{double(d0) * h, double(d1) * h};
      const double w = m.scaled(z, spec.dim());
      if (w <= 0.0) continue;
      taps.push_back(Tap{d0, d1, w});
      mass += w;
    }
  }
  mass *= spec.cell_volume();
  if (mass <= 0.0) throw std::runtime_error("mollifier unresolved at this grid spacing");

  const std::int64_t n = std::int64_t(spec.points_per_axis());
  std::vector<Complex> out(spec.size(), Complex{0.0, 0.0});
  for (const Tap& tap : taps) {
    const double w = tap.w * spec.cell_volume() / mass;
    if (spec.dim() == 1) {
      const std::int64_t lo = std::max<std::int64_t>(0, tap.d0);
      const std::int64_t hi = std::min(n - 1, n - 1 + tap.d0);
      for (std::int64_t i = lo; i <= hi; ++i) {
        out[std::size_t(i)] += w * f[std::size_t(i - tap.d0)];
      }
    } else {
      const std::int64_t lo0 = std::max<std::int64_t>(0, tap.d0);
      const std::int64_t hi0 = std::min(n - 1, n - 1 + tap.d0);
      const std::int64_t lo1 = std::max<std::int64_t>(0, tap.d1);
      const std::int64_t hi1 = std::min(n - 1, n - 1 + tap.d1);
      for (std::int64_t i0 = lo0; i0 <= hi0; ++i0) {
        for (std::int64_t i1 = lo1; i1 <= hi1; ++i1) {
          out[spec.flat(std::size_t(i0), std::size_t(i1))] +=
              w * f[spec.flat(std::size_t(i0 - tap.d0), std::size_t(i1 - tap.d1))];
        }
      }
    }
  }
  return GridFunction(spec, std::move(out));
}

}  // namespace morrlab
