#include "morrlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "morrlab/expr.hpp"
#include "morrlab/fft.hpp"
#include "power_table.hpp"

namespace morrlab {

namespace {

constexpr double kPi = std::numbers::pi;

double quintic_step(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * u * (u * (6.0 * u - 15.0) + 10.0);
}

// 1 on t <= 1, 0 on t >= 2, smooth monotone bridge.
double lowpass_profile(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  return quintic_step(2.0 - t);
}

double domain_diameter(const GridSpec& spec) {
  return 2.0 * spec.half_width() * std::sqrt(double(spec.dim()));
}

GridFunction ones(const GridSpec& spec) {
  return GridFunction(spec, std::vector<Complex>(spec.size(), Complex{1.0, 0.0}));
}

}  // namespace

HomogeneousKernelSpec::HomogeneousKernelSpec(int dim,
                                             std::function<double(const Point&)> omega,
                                             double epsilon, bool c1_smooth)
    : dim_(dim), omega_(std::move(omega)), epsilon_(epsilon), c1_smooth_(c1_smooth) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("truncation radius must be positive");
  // Zero mean and boundedness over the sphere, by direction sampling.
  const std::size_t samples = dim_ == 1 ? 2 : 512;
  double mean = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    Point u{0.0, 0.0};
    if (dim_ == 1) {
      u[0] = k == 0 ? 1.0 : -1.0;
    } else {
      const double theta = 2.0 * kPi * (double(k) + 0.5) / double(samples);
      u = Point{std::cos(theta), std::sin(theta)};
    }
    const double value = omega_(u);
    if (!std::isfinite(value)) throw std::invalid_argument("direction profile not finite");
    direction_bound_ = std::max(direction_bound_, std::abs(value));
    mean += value;
  }
  mean /= double(samples);
  if (std::abs(mean) > 1e-10 * (1.0 + direction_bound_)) {
    throw std::invalid_argument("direction profile must have zero mean");
  }
}

HomogeneousKernelSpec HomogeneousKernelSpec::from_values(double omega_plus,
                                                         double omega_minus, double epsilon,
                                                         bool c1_smooth) {
  return HomogeneousKernelSpec(
      1, [omega_plus, omega_minus](const Point& u) { return u[0] > 0.0 ? omega_plus : omega_minus; },
      epsilon, c1_smooth);
}

HomogeneousKernelSpec HomogeneousKernelSpec::hilbert(double epsilon) {
  HomogeneousKernelSpec spec = from_values(1.0 / kPi, -1.0 / kPi, epsilon);
  spec.label_ = "hilbert";
  return spec;
}

HomogeneousKernelSpec HomogeneousKernelSpec::from_angle(std::function<double(double)> omega,
                                                        double epsilon, bool c1_smooth) {
  return HomogeneousKernelSpec(
      2, [omega = std::move(omega)](const Point& u) { return omega(std::atan2(u[1], u[0])); },
      epsilon, c1_smooth);
}

HomogeneousKernelSpec HomogeneousKernelSpec::riesz(int axis, double epsilon) {
  if (axis != 0 && axis != 1) throw std::invalid_argument("riesz axis must be 0 or 1");
  HomogeneousKernelSpec spec = from_angle(
      [axis](double theta) { return axis == 0 ? std::cos(theta) : std::sin(theta); },
      epsilon, true);
  spec.label_ = axis == 0 ? "riesz0" : "riesz1";
  return spec;
}

double HomogeneousKernelSpec::direction(const Point& unit) const { return omega_(unit); }

double HomogeneousKernelSpec::kernel(const Point& z) const {
  const double t = euclidean_norm(z, dim_);
  if (t < epsilon_ || t == 0.0) return 0.0;
  Point u{z[0] / t, dim_ == 2 ? z[1] / t : 0.0};
  return omega_(u) / std::pow(t, double(dim_));
}

HomogeneousKernelSpec HomogeneousKernelSpec::with_epsilon(double epsilon) const {
  HomogeneousKernelSpec copy = *this;
  if (!(epsilon > 0.0)) throw std::invalid_argument("truncation radius must be positive");
  copy.epsilon_ = epsilon;
  return copy;
}

void StandardKernelSpec::validate() const {
  if (!(c2 > 0.0)) throw std::invalid_argument("kernel size constant must be positive");
  if (!(delta > 0.0) || !(delta <= 1.0)) {
    throw std::invalid_argument("Hoelder order must lie in (0, 1]");
  }
}

double standard_estimate_excess(
    const std::function<double(const Point&, const Point&)>& kernel,
    const StandardKernelSpec& spec, int dim) {
  spec.validate();
  std::vector<Point> pts;
  if (dim == 1) {
    for (int i = -11; i <= 11; ++i) pts.push_back(Point{0.27 * double(i) + 0.05, 0.0});
  } else {
    for (int i = -2; i <= 2; ++i) {
      for (int j = -2; j <= 2; ++j) pts.push_back(Point{0.61 * i + 0.07, 0.61 * j - 0.03});
    }
  }
  auto dist = [dim](const Point& a, const Point& b) {
    Point d{a[0] - b[0], a[1] - b[1]};
    return euclidean_norm(d, dim);
  };
  double excess = 0.0;
  for (const Point& x : pts) {
    for (const Point& y : pts) {
      const double dxy = dist(x, y);
      if (dxy < 1e-9) continue;
      excess = std::max(excess,
                        std::abs(kernel(x, y)) * std::pow(dxy, double(dim)) / spec.c2);
      for (const Point& xp : pts) {
        const double dxxp = dist(x, xp);
        const double dxpy = dist(xp, y);
        if (dxxp < 1e-9 || dxpy < 1e-9) continue;
        if (2.0 * dxxp > std::max(dxy, dxpy)) continue;
        const double lhs = std::abs(kernel(x, y) - kernel(xp, y)) *
                           std::pow(dxy + dxpy, double(dim) + spec.delta);
        const double rhs = spec.c2 * std::pow(dxxp, spec.delta);
        excess = std::max(excess, lhs / rhs);
        // Transposed estimate, reusing the triple with the roles swapped.
        const double lhs_t = std::abs(kernel(y, x) - kernel(y, xp)) *
                             std::pow(dxy + dxpy, double(dim) + spec.delta);
        excess = std::max(excess, lhs_t / rhs);
      }
    }
  }
  return excess;
}

MultiplierSpec MultiplierSpec::interval(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("interval needs a < b");
  MultiplierSpec m;
  m.kind_ = Kind::interval;
  m.a_ = a;
  m.b_ = b;
  return m;
}

MultiplierSpec MultiplierSpec::dyadic_smooth(int level) {
  MultiplierSpec m;
  m.kind_ = Kind::dyadic_smooth;
  m.level_ = level;
  return m;
}

MultiplierSpec MultiplierSpec::strongly_singular(double b) {
  if (!(b > 0.0) || !(b < 1.0)) throw std::invalid_argument("singularity order needs 0 < b < 1");
  MultiplierSpec m;
  m.kind_ = Kind::strongly_singular;
  m.b_ = b;
  return m;
}

MultiplierSpec MultiplierSpec::bochner_riesz(double lambda, int dim) {
  if (!(lambda > 0.0)) throw std::invalid_argument("smoothing order must be positive");
  MultiplierSpec m;
  m.kind_ = Kind::bochner_riesz;
  m.a_ = lambda;
  m.below_critical_ = lambda < (double(dim) - 1.0) / 2.0 - 1e-12;
  return m;
}

double annulus_profile(double t) {
  const double d = lowpass_profile(t) - lowpass_profile(2.0 * t);
  return d <= 0.0 ? 0.0 : std::sqrt(d);
}

Complex MultiplierSpec::symbol(const Point& xi, int dim) const {
  switch (kind_) {
    case Kind::interval: {
      if (dim != 1) throw std::invalid_argument("interval multiplier is one-dimensional");
      const double t = xi[0];
      const double tol = 1e-12 * std::max({1.0, std::isfinite(a_) ? std::abs(a_) : 0.0,
                                           std::isfinite(b_) ? std::abs(b_) : 0.0});
      if (std::isfinite(a_) && std::abs(t - a_) <= tol) return Complex{0.5, 0.0};
      if (std::isfinite(b_) && std::abs(t - b_) <= tol) return Complex{0.5, 0.0};
      return (t > a_ && t < b_) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    }
    case Kind::dyadic_smooth:
      return Complex{annulus_profile(std::ldexp(euclidean_norm(xi, dim), -level_)), 0.0};
    case Kind::strongly_singular: {
      const double t = euclidean_norm(xi, dim);
      if (t <= 0.5) return Complex{0.0, 0.0};
      const double cutoff = t >= 1.0 ? 1.0 : quintic_step((t - 0.5) * 2.0);
      const double mag = cutoff * std::pow(t, -double(dim) * b_ / 2.0);
      const double phase = std::pow(t, b_);
      return mag * Complex{std::cos(phase), std::sin(phase)};
    }
    case Kind::bochner_riesz: {
      const double t2 = squared_norm(xi, dim);
      if (t2 >= 1.0) return Complex{0.0, 0.0};
      return Complex{std::pow(1.0 - t2, a_), 0.0};
    }
  }
  return Complex{0.0, 0.0};
}

std::string MultiplierSpec::name() const {
  switch (kind_) {
    case Kind::interval:
      return "interval(" + std::to_string(a_) + "," + std::to_string(b_) + ")";
    case Kind::dyadic_smooth:
      return "dyadic_smooth(" + std::to_string(level_) + ")";
    case Kind::strongly_singular:
      return "strongly_singular(" + std::to_string(b_) + ")";
    case Kind::bochner_riesz:
      return "bochner_riesz(" + std::to_string(a_) + ")";
  }
  return "multiplier";
}

std::vector<double> default_radius_ladder(const GridSpec& spec) {
  std::vector<double> radii{spec.spacing() / 2.0};
  const double top = domain_diameter(spec);
  double r = spec.spacing();
  while (r < top) {
    radii.push_back(r);
    r *= std::sqrt(2.0);
  }
  radii.push_back(top);
  return radii;
}

std::vector<double> default_eps_ladder(const GridSpec& spec) {
  std::vector<double> ladder;
  const double top = domain_diameter(spec);
  double e = spec.spacing();
  while (e < top) {
    ladder.push_back(e);
    e *= std::sqrt(2.0);
  }
  return ladder;
}

GridFunction maximal_hl(const GridFunction& f, std::span<const double> radii) {
  const GridSpec& spec = f.spec();
  const std::vector<double> defaults = radii.empty()
                                           ? default_radius_ladder(spec)
                                           : std::vector<double>(radii.begin(), radii.end());
  const GridFunction magnitude = abs(f);
  const detail::PowerTable weight(magnitude, 1.0);
  const detail::PowerTable count(ones(spec), 1.0);

  std::vector<Complex> out(spec.size(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Point x = spec.point(i);
    double best = 0.0;
    for (const double radius : defaults) {
      const Ball ball{x, radius};
      const double cells = count.ball_sum(ball);
      if (cells <= 0.0) continue;
      best = std::max(best, weight.ball_sum(ball) / cells);
    }
    out[i] = best;
  }
  return GridFunction(spec, std::move(out));
}

GridFunction cz_truncated(const GridFunction& f, const HomogeneousKernelSpec& kernel) {
  const GridSpec& spec = f.spec();
  if (kernel.dim() != spec.dim()) throw std::invalid_argument("kernel dim mismatch");
  if (kernel.epsilon() < spec.spacing() * (1.0 - 1e-12)) {
    throw std::invalid_argument("truncation radius below grid spacing");
  }
  return fft::convolve(f, [&kernel](const Point& z) { return Complex{kernel.kernel(z), 0.0}; });
}

GridFunction cz_maximal(const GridFunction& f, const HomogeneousKernelSpec& kernel,
                        std::span<const double> eps_ladder) {
  const GridSpec& spec = f.spec();
  const std::vector<double> defaults =
      eps_ladder.empty() ? default_eps_ladder(spec)
                         : std::vector<double>(eps_ladder.begin(), eps_ladder.end());
  std::vector<Complex> out(spec.size(), Complex{0.0, 0.0});
  for (const double eps : defaults) {
    const GridFunction truncated = cz_truncated(f, kernel.with_epsilon(eps));
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = std::max(out[i].real(), std::abs(truncated[i]));
    }
  }
  return GridFunction(spec, std::move(out));
}

GridFunction apply_multiplier(const GridFunction& f, const MultiplierSpec& spec) {
  const int dim = f.spec().dim();
  return fft::apply_symbol(f, [&spec, dim](const Point& xi) { return spec.symbol(xi, dim); });
}

namespace {

double bessel_kernel_raw(double nu, const Point& z, int dim, double eps) {
  const double t = euclidean_norm(z, dim);
  if (t < eps || t == 0.0) return 0.0;
  return std::cyl_bessel_j(nu, 2.0 * kPi * t) / std::pow(t, nu);
}

}  // namespace

double bochner_riesz_constant(int dim, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("smoothing order must be positive");
  static std::map<std::pair<int, long long>, double> cache;
  const auto key = std::make_pair(dim, llround(lambda * 1e9));
  if (const auto it = cache.find(key); it != cache.end()) return it->second;

  const GridSpec ref(dim, 4.0, dim == 1 ? 512 : 128);
  const GridFunction g = sample(FunctionExpr::gauss(1.0), ref);
  const GridFunction via_symbol = apply_multiplier(g, MultiplierSpec::bochner_riesz(lambda, dim));
  const double nu = double(dim) / 2.0 + lambda;
  const double eps = ref.spacing();
  const GridFunction via_kernel = fft::convolve(g, [&](const Point& z) {
    return Complex{bessel_kernel_raw(nu, z, dim, eps), 0.0};
  });

  std::size_t argmax = 0;
  for (std::size_t i = 1; i < via_symbol.size(); ++i) {
    if (std::abs(via_symbol[i]) > std::abs(via_symbol[argmax])) argmax = i;
  }
  const Complex denom = via_kernel[argmax];
  if (std::abs(denom) == 0.0) throw std::runtime_error("calibration point degenerate");
  const double c = (via_symbol[argmax] / denom).real();
  cache[key] = c;
  return c;
}

GridFunction bochner_riesz_kernel_apply(const GridFunction& f, double lambda,
                                        std::optional<double> eps) {
  if (!(lambda > 0.0)) throw std::invalid_argument("smoothing order must be positive");
  const GridSpec& spec = f.spec();
  const double cutoff = eps.value_or(spec.spacing());
  if (!(cutoff > 0.0)) throw std::invalid_argument("truncation radius must be positive");
  const double nu = double(spec.dim()) / 2.0 + lambda;
  const double c = bochner_riesz_constant(spec.dim(), lambda);
  return fft::convolve(f, [&](const Point& z) {
    return Complex{c * bessel_kernel_raw(nu, z, spec.dim(), cutoff), 0.0};
  });
}

OperatorSpec OperatorSpec::identity() { return OperatorSpec{}; }

OperatorSpec OperatorSpec::maximal() {
  OperatorSpec op;
  op.kind = Kind::maximal;
  return op;
}

OperatorSpec OperatorSpec::cz(HomogeneousKernelSpec kernel) {
  OperatorSpec op;
  op.kind = Kind::cz;
  op.kernel = std::move(kernel);
  return op;
}

OperatorSpec OperatorSpec::cz_max(HomogeneousKernelSpec kernel) {
  OperatorSpec op;
  op.kind = Kind::cz_maximal;
  op.kernel = std::move(kernel);
  return op;
}

OperatorSpec OperatorSpec::multiplier(MultiplierSpec spec) {
  OperatorSpec op;
  op.kind = Kind::multiplier;
  op.mult = std::move(spec);
  return op;
}

OperatorSpec OperatorSpec::bochner_riesz_kernel(double lambda, std::optional<double> eps) {
  OperatorSpec op;
  op.kind = Kind::bochner_riesz_kernel;
  op.lambda = lambda;
  op.eps = eps;
  return op;
}

GridFunction OperatorSpec::apply(const GridFunction& f) const {
  switch (kind) {
    case Kind::identity:
      return f;
    case Kind::maximal:
      return maximal_hl(f);
    case Kind::cz: {
      // eps, when present, overrides the kernel's radius; zero means "one cell".
      if (!eps) return cz_truncated(f, kernel.value());
      const double e = *eps > 0.0 ? *eps : f.spec().spacing();
      return cz_truncated(f, kernel->with_epsilon(e));
    }
    case Kind::cz_maximal:
      return cz_maximal(f, kernel.value());
    case Kind::multiplier:
      return apply_multiplier(f, mult.value());
    case Kind::bochner_riesz_kernel:
      return bochner_riesz_kernel_apply(f, lambda, eps);
  }
  return f;
}

std::string OperatorSpec::name() const {
  switch (kind) {
    case Kind::identity:
      return "identity";
    case Kind::maximal:
      return "maximal";
    case Kind::cz:
      return "cz(" + (kernel ? kernel->label() : std::string("none")) + ")";
    case Kind::cz_maximal:
      return "cz_maximal(" + (kernel ? kernel->label() : std::string("none")) + ")";
    case Kind::multiplier:
      return mult ? mult->name() : "multiplier";
    case Kind::bochner_riesz_kernel:
      return "bochner_riesz_kernel(" + std::to_string(lambda) + ")";
  }
  return "operator";
}

GridFunctionSeq apply_vector(std::span<const OperatorSpec> ops, const GridFunctionSeq& seq) {
  if (ops.size() != seq.count()) {
    throw std::invalid_argument("operator and member counts must match");
  }
  std::vector<GridFunction> out;
  out.reserve(ops.size());
  for (std::size_t j = 0; j < ops.size(); ++j) out.push_back(ops[j].apply(seq[j]));
  return GridFunctionSeq(std::move(out));
}

DominationReport kernel_domination_constant(const OperatorSpec& op, const GridFunction& f,
                                            std::optional<double> min_distance) {
  const GridSpec& spec = f.spec();
  const double gap = min_distance.value_or(2.0 * spec.spacing());

  Point lo{0.0, 0.0}, hi{0.0, 0.0};
  bool any = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == Complex{0.0, 0.0}) continue;
    const Point x = spec.point(i);
    if (!any) {
      lo = x;
      hi = x;
      any = true;
      continue;
    }
    for (int a = 0; a < spec.dim(); ++a) {
      lo[std::size_t(a)] = std::min(lo[std::size_t(a)], x[std::size_t(a)]);
      hi[std::size_t(a)] = std::max(hi[std::size_t(a)], x[std::size_t(a)]);
    }
  }
  if (!any) throw std::invalid_argument("domination constant needs a non-zero function");

  const GridFunction applied = op.apply(f);
  const GridFunction magnitude = abs(f);
  const GridFunction envelope = fft::convolve(magnitude, [&spec](const Point& z) {
    const double t = euclidean_norm(z, spec.dim());
    return Complex{t == 0.0 ? 0.0 : std::pow(t, -double(spec.dim())), 0.0};
  });

  DominationReport report;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Point y = spec.point(i);
    double d2 = 0.0;
    for (int a = 0; a < spec.dim(); ++a) {
      const double below = lo[std::size_t(a)] - y[std::size_t(a)];
      const double above = y[std::size_t(a)] - hi[std::size_t(a)];
      const double d = std::max({below, above, 0.0});
      d2 += d * d;
    }
    if (d2 < gap * gap) continue;
    ++report.admissible_nodes;
    const double denom = envelope[i].real();
    if (denom <= 0.0) continue;
    const double ratio = std::abs(applied[i]) / denom;
    if (ratio > report.constant) {
      report.constant = ratio;
      report.argmax = y;
    }
  }
  if (report.admissible_nodes == 0) {
    throw std::runtime_error("support leaves no admissible evaluation nodes");
  }
  return report;
}

SquareFunctionKernelStat littlewood_paley_kernel_stat(const GridSpec& spec, double r0) {
  if (!(r0 > 0.0)) throw std::invalid_argument("admissible radius must be positive");
  const double xi_min = 1.0 / (2.0 * spec.half_width());
  const double xi_max =
      std::sqrt(double(spec.dim())) * double(spec.points_per_axis()) / (4.0 * spec.half_width());
  const int j_lo = int(std::floor(std::log2(xi_min))) - 1;
  const int j_hi = int(std::ceil(std::log2(xi_max))) + 1;

  std::vector<double> level_sq(spec.size(), 0.0);
  std::vector<double> grad_sq(spec.size(), 0.0);
  for (int j = j_lo; j <= j_hi; ++j) {
    const MultiplierSpec band = MultiplierSpec::dyadic_smooth(j);
    const GridFunction psi = fft::synthesize_kernel(
        spec, [&](const Point& xi) { return band.symbol(xi, spec.dim()); });
    for (std::size_t i = 0; i < spec.size(); ++i) level_sq[i] += std::norm(psi[i]);
    for (int axis = 0; axis < spec.dim(); ++axis) {
      const GridFunction dpsi = fft::synthesize_kernel(spec, [&](const Point& xi) {
        return Complex{0.0, 2.0 * kPi * xi[std::size_t(axis)]} * band.symbol(xi, spec.dim());
      });
      for (std::size_t i = 0; i < spec.size(); ++i) grad_sq[i] += std::norm(dpsi[i]);
    }
  }

  SquareFunctionKernelStat stat;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double t = euclidean_norm(spec.point(i), spec.dim());
    if (t < r0) continue;
    stat.level_l2_constant = std::max(
        stat.level_l2_constant, std::sqrt(level_sq[i]) * std::pow(t, double(spec.dim())));
    stat.gradient_l2_constant =
        std::max(stat.gradient_l2_constant,
                 std::sqrt(grad_sq[i]) * std::pow(t, double(spec.dim()) + 1.0));
  }
  return stat;
}

}  // namespace morrlab
