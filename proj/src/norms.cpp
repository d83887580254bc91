#include "morrlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "power_table.hpp"

namespace morrlab {

namespace {

using detail::PowerTable;

void validate_lp_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("Lp exponent must be finite and >= 1");
  }
}

double cube_power_sum(const GridFunction& f, const PowerTable& table,
                      const DyadicCube& cube) {
  const CellRange r0 = cell_range(f.spec(), cube.lower(0), cube.upper(0));
  const CellRange r1 = f.spec().dim() == 2
                           ? cell_range(f.spec(), cube.lower(1), cube.upper(1))
                           : CellRange{};
  return table.box_sum(r0, r1);
}

DyadicNormResult morrey_from_table(const GridFunction& f, const PowerTable& table,
                                   const MorreyParams& params,
                                   std::optional<JRange> range) {
  const GridSpec& spec = f.spec();
  params.validate(spec.dim());
  const JRange jr = range.value_or(default_j_range(spec));
  const auto cubes = cubes_touching(spec, jr.j_min, jr.j_max);
  const double exponent = params.weight_exponent(spec.dim());
  DyadicNormResult best;
  best.argmax = cubes.front();
  for (const DyadicCube& cube : cubes) {
    const double sum = cube_power_sum(f, table, cube);
    if (sum <= 0.0) continue;
    const double local = std::pow(spec.cell_volume() * sum, 1.0 / params.p);
    const double value = std::pow(2.0, double(cube.level()) * exponent) * local;
    if (value > best.value) {
      best.value = value;
      best.argmax = cube;
    }
  }
  return best;
}

}  // namespace

double conjugate_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("conjugate exponent needs 1 < p < inf");
  }
  return p / (p - 1.0);
}

void MorreyParams::validate(int dim) const {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("Morrey exponent needs 1 < p < inf");
  }
  const double lo = -double(dim) / p;
  if (!(r >= lo) || !(r < 0.0)) {
    throw std::invalid_argument("Morrey shape needs -n/p <= r < 0");
  }
}

void PredualParams::validate(int dim) const {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("predual exponent needs 1 < p < inf");
  }
  if (!(rho > -double(dim)) || !(rho < -double(dim) / p)) {
    throw std::invalid_argument("predual shape needs -n < rho < -n/p");
  }
}

MorreyParams PredualParams::paired_morrey(int dim) const {
  MorreyParams m{conjugate_p(), -double(dim) - rho};
  m.validate(dim);
  return m;
}

double WeightParams::value(const Point& x, int dim) const {
  return std::pow(1.0 + squared_norm(x, dim), alpha / 2.0);
}

JRange default_j_range(const GridSpec& spec) {
  const double log_l = std::log2(spec.half_width());
  const double log_n = std::log2(double(spec.points_per_axis()));
  JRange jr;
  jr.j_min = -int(std::ceil(log_l)) - 1;
  jr.j_max = int(std::floor(log_n - 1.0 - log_l + 1e-9));
  if (jr.j_max < jr.j_min) jr.j_max = jr.j_min;
  return jr;
}

double lp_norm(const GridFunction& f, double p) {
  validate_lp_exponent(p);
  double sum = 0.0;
  for (const Complex& v : f.values()) sum += std::pow(std::abs(v), p);
  return std::pow(f.spec().cell_volume() * sum, 1.0 / p);
}

double lp_norm(const GridFunction& f, double p, const DyadicCube& cube) {
  validate_lp_exponent(p);
  if (cube.dim() != f.spec().dim()) throw std::invalid_argument("cube dim mismatch");
  const PowerTable table(f, p);
  return std::pow(f.spec().cell_volume() * cube_power_sum(f, table, cube), 1.0 / p);
}

double lp_norm(const GridFunction& f, double p, const Ball& ball) {
  validate_lp_exponent(p);
  if (!(ball.radius >= 0.0)) throw std::invalid_argument("ball radius must be >= 0");
  const PowerTable table(f, p);
  return std::pow(f.spec().cell_volume() * table.ball_sum(ball), 1.0 / p);
}

DyadicNormResult morrey_norm_dyadic(const GridFunction& f, const MorreyParams& params,
                                    std::optional<JRange> range) {
  const PowerTable table(f, params.p);
  return morrey_from_table(f, table, params, range);
}

BallCandidates default_ball_candidates(const GridSpec& spec) {
  BallCandidates c;
  const std::size_t n = spec.points_per_axis();
  const std::size_t stride = 4;
  if (spec.dim() == 1) {
    for (std::size_t i = 0; i < n; i += stride) c.centers.push_back(spec.point(i));
  } else {
    for (std::size_t i0 = 0; i0 < n; i0 += stride) {
      for (std::size_t i1 = 0; i1 < n; i1 += stride) {
        c.centers.push_back(spec.point(spec.flat(i0, i1)));
      }
    }
  }
  const double top = 2.0 * spec.half_width();
  double radius = spec.spacing();
  while (radius < top * (1.0 - 1e-12)) {
    c.radii.push_back(radius);
    radius *= std::sqrt(2.0);
  }
  c.radii.push_back(top);
  return c;
}

double morrey_norm_ball(const GridFunction& f, const MorreyParams& params,
                        const BallCandidates* candidates) {
  const GridSpec& spec = f.spec();
  params.validate(spec.dim());
  const BallCandidates defaults =
      candidates == nullptr ? default_ball_candidates(spec) : BallCandidates{};
  const BallCandidates& cand = candidates == nullptr ? defaults : *candidates;
  if (cand.centers.empty() || cand.radii.empty()) {
    throw std::invalid_argument("ball norm needs candidate centers and radii");
  }
  const PowerTable table(f, params.p);
  const double exponent = params.weight_exponent(spec.dim());
  double best = 0.0;
  for (const double radius : cand.radii) {
    const double weight = std::pow(radius, -exponent);
    for (const Point& center : cand.centers) {
      const double sum = table.ball_sum(Ball{center, radius});
      if (sum <= 0.0) continue;
      const double local = std::pow(spec.cell_volume() * sum, 1.0 / params.p);
      best = std::max(best, weight * local);
    }
  }
  return best;
}

DyadicNormResult morrey_norm_vector(const GridFunctionSeq& seq, const MorreyParams& params,
                                    double q, std::optional<JRange> range) {
  return morrey_norm_dyadic(pointwise_lq(seq, q), params, range);
}

double weighted_norm(const GridFunction& f, double p, const WeightParams& weight) {
  validate_lp_exponent(p);
  const GridSpec& spec = f.spec();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = weight.value(spec.point(i), spec.dim());
    sum += std::pow(w * std::abs(f[i]), p);
  }
  return std::pow(spec.cell_volume() * sum, 1.0 / p);
}

EmbeddingReport check_embedding_chain(const GridFunction& f, const MorreyParams& params,
                                      double alpha, double slack) {
  const int n = f.spec().dim();
  params.validate(n);
  const double window = alpha * params.p;
  if (!(window > -double(n)) || !(window < -double(n) - params.r * params.p)) {
    throw std::invalid_argument("weight exponent outside -n < alpha p < -n - r p");
  }

  EmbeddingReport rep;
  rep.slack = slack;
  rep.u = -double(n) / params.r;
  rep.lebesgue_norm = lp_norm(f, rep.u);
  rep.morrey_norm = morrey_norm_dyadic(f, params).value;
  rep.weighted_norm = morrlab::weighted_norm(f, params.p, WeightParams{alpha});

  rep.holder_constant = std::pow(2.0, params.weight_exponent(n));
  // Shell sum: ||f||_w^p <= 2^{-alpha p} (1 - 2^{alpha p + n + r p})^{-1} ||f||_M^p.
  const double decay = window + double(n) + params.r * params.p;
  rep.shell_constant =
      std::pow(std::pow(2.0, -window) / (1.0 - std::pow(2.0, decay)), 1.0 / params.p);

  rep.ratio_morrey_over_lebesgue =
      rep.lebesgue_norm > 0.0 ? rep.morrey_norm / rep.lebesgue_norm : 0.0;
  rep.ratio_weighted_over_morrey =
      rep.morrey_norm > 0.0 ? rep.weighted_norm / rep.morrey_norm : 0.0;
  rep.violation = rep.morrey_norm > slack * rep.holder_constant * rep.lebesgue_norm ||
                  rep.weighted_norm > slack * rep.shell_constant * rep.morrey_norm;
  return rep;
}

}  // namespace morrlab
