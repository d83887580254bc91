#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "morrlab/grid.hpp"
#include "morrlab/norms.hpp"
#include "morrlab/operators.hpp"

namespace morrlab {

/**
 * Radial partition of unity around a center: ring 0 is a plateau of radius 2R
 * tapering off by 4R, ring i >= 1 lives in the annulus between radii 2^i R and
 * 2^{i+2} R, and the outermost ring absorbs everything beyond its inner edge so
 * the family sums to one exactly at every node.
 */
struct AnnulusPartition {
  Point center{0.0, 0.0};
  double base_radius = 1.0;
  /// Rings phi_0 .. phi_I, sampled on the grid.
  std::vector<GridFunction> members;

  std::size_t count() const { return members.size(); }
  /// Pointwise products {phi_i * f}, which sum back to f bitwise per node.
  std::vector<GridFunction> pieces(const GridFunction& f) const;
};

/// C1 radial ramp: 1 for t <= 1, 0 for t >= 2, cubic smoothstep in between.
double annulus_ramp(double t);

/**
 * Builds the partition on the grid. ring_count, when given, is I+1; the
 * default uses the smallest I whose outer plateau radius 2^{I+2} R reaches the
 * far corner of the domain. Throws when the requested family is too short to
 * cover the domain.
 */
AnnulusPartition build_annulus_partition(const GridSpec& spec, const Point& center,
                                         double base_radius,
                                         std::optional<int> ring_count = std::nullopt);

/**
 * Near/far decomposition report: f is split by the annulus partition at (x, R),
 * the operator is applied to the near piece phi_0 f and to the far remainder
 * f - phi_0 f, and both are measured in L_p on the ball B_R(x), normalized by
 * R^{n/p + r} times the Morrey norm of f. term_ratios holds the same statistic
 * for each far ring separately.
 */
struct NearFarReport {
  double near_ratio = 0.0;
  double far_ratio = 0.0;
  std::vector<double> term_ratios;
  /// R^{n/p+r} * ||f||, the common denominator of the ratios.
  double normalizer = 0.0;
  std::size_t rings = 0;
};

NearFarReport near_far_split(const GridFunction& f, const Point& center, double radius,
                             const OperatorSpec& op, const MorreyParams& params);

/**
 * Decay-rate statistic for operator outputs whose inputs were supported in the
 * centered ball of radius support_radius: shells between radii 2 * support_radius
 * and the domain half-width collect max |x|^n * l_q-amplitude, and a least-squares
 * fit of a + b / t^2 over the shells extrapolates the large-|x| limit.
 */
struct FarFieldShell {
  /// Radius of the node realizing the shell maximum.
  double radius = 0.0;
  double value = 0.0;
};

struct FarFieldReport {
  std::vector<FarFieldShell> shells;
  double sup_statistic = 0.0;
  /// Value in the outermost shell.
  double outer_statistic = 0.0;
  /// Fitted limit of the shell statistic as |x| grows.
  double extrapolated_statistic = 0.0;
  /// Root-mean-square misfit of the shell values against the fitted decay law.
  double fit_residual = 0.0;
};

FarFieldReport far_field_decay(const GridFunctionSeq& seq, double support_radius, double q);

/**
 * Mollifier: a fixed smooth radial bump supported in the unit ball with unit
 * integral and values in [0, 1], rescaled as psi_l = l^n psi(l .). Convolution
 * uses the sampled stencil normalized to exact unit discrete mass, so constants
 * are reproduced exactly and L_p norms never grow.
 */
struct MollifierSpec {
  /// Contraction factor l >= 1; the stencil support has radius 1/l.
  int scale = 1;

  /// Normalized profile value at x.
  static double profile(const Point& x, int dim);
  /// Scaled profile l^n psi(l x).
  double scaled(const Point& x, int dim) const;
};

GridFunction mollify(const GridFunction& f, const MollifierSpec& m);

}  // namespace morrlab
