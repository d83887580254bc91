#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "morrlab/grid.hpp"

namespace morrlab {

/**
 * Direction profile Omega on the unit sphere for kernels Omega(z/|z|)/|z|^n,
 * truncated at |z| >= epsilon. Omega must be bounded with zero mean; both
 * are checked at construction (by quadrature for n = 2).
 */
class HomogeneousKernelSpec {
public:
  /// n = 1 profile from the two direction values.
  static HomogeneousKernelSpec from_values(double omega_plus, double omega_minus,
                                           double epsilon, bool c1_smooth = true);
  /// Hilbert kernel 1/(pi z): Omega(+-1) = +-1/pi.
  static HomogeneousKernelSpec hilbert(double epsilon);
  /// n = 2 profile as a function of the polar angle.
  static HomogeneousKernelSpec from_angle(std::function<double(double)> omega,
                                          double epsilon, bool c1_smooth);
  /// Riesz-style direction z_axis/|z| for n = 2.
  static HomogeneousKernelSpec riesz(int axis, double epsilon);

  int dim() const noexcept { return dim_; }
  double epsilon() const noexcept { return epsilon_; }
  bool c1_smooth() const noexcept { return c1_smooth_; }
  double direction_bound() const noexcept { return direction_bound_; }
  /// Factory name ("hilbert", "riesz0", "riesz1", or "custom").
  const std::string& label() const noexcept { return label_; }

  /// Omega at a unit vector.
  double direction(const Point& unit) const;
  /// Omega(z/|z|)/|z|^n outside the truncation radius, 0 inside.
  double kernel(const Point& z) const;

  /// Copy with another truncation radius.
  HomogeneousKernelSpec with_epsilon(double epsilon) const;

private:
  HomogeneousKernelSpec(int dim, std::function<double(const Point&)> omega,
                        double epsilon, bool c1_smooth);

  int dim_;
  std::function<double(const Point&)> omega_;
  double epsilon_;
  bool c1_smooth_;
  double direction_bound_ = 0.0;
  std::string label_ = "custom";
};

/// Size and Hoelder-regularity budget of a standard-estimates kernel.
struct StandardKernelSpec {
  double c2 = 1.0;
  double delta = 1.0;

  void validate() const;
};

/**
 * Max over sampled admissible pairs/triples of the standard-estimate ratios
 *   |K(x,y)| |x-y|^n / c2   and
 *   |K(x,y)-K(x',y)| (|x-y|+|x'-y|)^{n+delta} / (c2 |x-x'|^delta)
 * (and its transpose), the difference ratios gated by 2|x-x'| <= max(|x-y|, |x'-y|).
 * A kernel satisfying the estimates scores <= 1.
 */
double standard_estimate_excess(const std::function<double(const Point&, const Point&)>& kernel,
                                const StandardKernelSpec& spec, int dim);

/**
 * Fourier symbol families applied on the dual lattice.
 *
 *   interval(a, b)        chi_{[a,b]}(xi), n = 1; half value at an endpoint
 *                         hit exactly by a lattice frequency
 *   dyadic_smooth(j)      psi(2^{-j}|xi|) for the canonical annulus profile,
 *                         psi(0) = 0
 *   strongly_singular(b)  e^{i|xi|^b} |xi|^{-nb/2} phi(|xi|), 0 < b < 1,
 *                         phi = 0 on |xi| <= 1/2, 1 on |xi| >= 1
 *   bochner_riesz(lambda) (1 - |xi|^2)^lambda on |xi| <= 1, lambda > 0;
 *                         below_critical() flags lambda < (n-1)/2
 */
class MultiplierSpec {
public:
  enum class Kind { interval, dyadic_smooth, strongly_singular, bochner_riesz };

  static MultiplierSpec interval(double a, double b);
  static MultiplierSpec dyadic_smooth(int level);
  static MultiplierSpec strongly_singular(double b);
  static MultiplierSpec bochner_riesz(double lambda, int dim);

  Kind kind() const noexcept { return kind_; }
  double lower() const noexcept { return a_; }
  double upper() const noexcept { return b_; }
  int level() const noexcept { return level_; }
  double singularity() const noexcept { return b_; }
  double lambda() const noexcept { return a_; }
  bool below_critical() const noexcept { return below_critical_; }

  Complex symbol(const Point& xi, int dim) const;
  std::string name() const;

private:
  MultiplierSpec() = default;
  Kind kind_ = Kind::interval;
  double a_ = 0.0;
  double b_ = 0.0;
  int level_ = 0;
  bool below_critical_ = false;
};

/// Canonical radial annulus profile: psi(t)^2 telescopes to 1 over dyadic
/// dilations, supp psi in [1/2, 2].
double annulus_profile(double t);

/// Geometric half-octave radius ladder {h/2, h, h sqrt 2, ...} up to the
/// domain diameter.
std::vector<double> default_radius_ladder(const GridSpec& spec);
/// Truncation ladder {h, h sqrt 2, ...} up to the domain diameter.
std::vector<double> default_eps_ladder(const GridSpec& spec);

/// Centered maximal average sup_R |B_R(x)|^{-1} int_{B_R(x)} |f|, discrete
/// ball measure, over the given (or default) radius ladder.
GridFunction maximal_hl(const GridFunction& f, std::span<const double> radii = {});

/// Truncated convolution int_{|z| >= eps} Omega(z/|z|) |z|^{-n} f(y-z) dz.
/// Throws when eps < grid spacing.
GridFunction cz_truncated(const GridFunction& f, const HomogeneousKernelSpec& kernel);

/// Pointwise sup of |cz_truncated| over the truncation ladder.
GridFunction cz_maximal(const GridFunction& f, const HomogeneousKernelSpec& kernel,
                        std::span<const double> eps_ladder = {});

GridFunction apply_multiplier(const GridFunction& f, const MultiplierSpec& spec);

/// Calibration constant matching the spatial Bessel kernel to the multiplier
/// form on a reference Gaussian; cached per (dim, lambda).
double bochner_riesz_constant(int dim, double lambda);

/// Spatial form: convolution with c J_{n/2+lambda}(2 pi |z|) / |z|^{n/2+lambda},
/// truncated at |z| >= eps (default: grid spacing). Throws when lambda <= 0.
GridFunction bochner_riesz_kernel_apply(const GridFunction& f, double lambda,
                                        std::optional<double> eps = std::nullopt);

/**
 * Uniform operator description, JSON-codable by the harness; apply()
 * dispatches to the implementations above.
 */
struct OperatorSpec {
  enum class Kind { identity, maximal, cz, cz_maximal, multiplier, bochner_riesz_kernel };

  static OperatorSpec identity();
  static OperatorSpec maximal();
  static OperatorSpec cz(HomogeneousKernelSpec kernel);
  static OperatorSpec cz_max(HomogeneousKernelSpec kernel);
  static OperatorSpec multiplier(MultiplierSpec spec);
  static OperatorSpec bochner_riesz_kernel(double lambda,
                                           std::optional<double> eps = std::nullopt);

  GridFunction apply(const GridFunction& f) const;
  std::string name() const;

  Kind kind = Kind::identity;
  std::optional<HomogeneousKernelSpec> kernel;
  std::optional<MultiplierSpec> mult;
  double lambda = 0.0;
  std::optional<double> eps;
};

/// Member-wise application; throws when the lengths differ.
GridFunctionSeq apply_vector(std::span<const OperatorSpec> ops, const GridFunctionSeq& seq);

/// Empirical constant in |Tf(y)| <= c int |f(z)| |y-z|^{-n} dz over nodes y
/// at least `min_distance` (default 2h) away from the support box of f.
struct DominationReport {
  double constant = 0.0;
  Point argmax{0.0, 0.0};
  std::size_t admissible_nodes = 0;
};

DominationReport kernel_domination_constant(const OperatorSpec& op, const GridFunction& f,
                                            std::optional<double> min_distance = std::nullopt);

/// Measured square-function kernel constants: sup over |x| >= r0 of
/// ||{Psi_j(x)}||_{l2} |x|^n and of the gradient form with |x|^{n+1}.
struct SquareFunctionKernelStat {
  double level_l2_constant = 0.0;
  double gradient_l2_constant = 0.0;
};

SquareFunctionKernelStat littlewood_paley_kernel_stat(const GridSpec& spec, double r0);

}  // namespace morrlab
