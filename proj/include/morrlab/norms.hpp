#pragma once

#include <optional>
#include <vector>

#include "morrlab/grid.hpp"

namespace morrlab {

/// Euclidean ball (interval for n = 1); closed membership.
struct Ball {
  Point center{0.0, 0.0};
  double radius = 0.0;
};

/// Conjugate exponent p' = p/(p-1).
double conjugate_exponent(double p);

/**
 * Shape parameters of the local-growth norm
 * sup_{J,M} 2^{J(n/p + r)} ||f||_{L_p(Q_{J,M})}, 1 < p < inf, -n/p <= r < 0.
 */
struct MorreyParams {
  double p = 2.0;
  double r = -0.5;

  void validate(int dim) const;
  double conjugate_p() const { return conjugate_exponent(p); }
  /// Cube weight exponent n/p + r.
  double weight_exponent(int dim) const { return double(dim) / p + r; }
};

/**
 * Shape parameters of the atomic-decomposition norm with atoms of size
 * ||a_{J,M}||_{L_p} <= 2^{-J(n/p + rho)}, 1 < p < inf, -n < rho < -n/p.
 */
struct PredualParams {
  double p = 2.0;
  double rho = -0.75;

  void validate(int dim) const;
  double conjugate_p() const { return conjugate_exponent(p); }
  /// Exponents of the space this one pairs against: (p', -n - rho).
  MorreyParams paired_morrey(int dim) const;
  /// Atom cost exponent n/p + rho.
  double cost_exponent(int dim) const { return double(dim) / p + rho; }
};

/// Weight w_alpha(x) = (1 + |x|^2)^{alpha/2}.
struct WeightParams {
  double alpha = 0.0;
  double value(const Point& x, int dim) const;
};

/// Inclusive level range for dyadic cube enumeration.
struct JRange {
  int j_min = 0;
  int j_max = 0;
};

/// Coarsest level: one cube covers the domain. Finest: cube side >= 2h.
JRange default_j_range(const GridSpec& spec);

double lp_norm(const GridFunction& f, double p);
double lp_norm(const GridFunction& f, double p, const DyadicCube& cube);
double lp_norm(const GridFunction& f, double p, const Ball& ball);

struct DyadicNormResult {
  double value = 0.0;
  DyadicCube argmax{1, 0, {0, 0}};
};

DyadicNormResult morrey_norm_dyadic(const GridFunction& f, const MorreyParams& params,
                                    std::optional<JRange> range = std::nullopt);

/// Candidate centers and radii for the ball-form norm.
struct BallCandidates {
  std::vector<Point> centers;
  std::vector<double> radii;
};

/// Centers on every 4th node per axis, radii on the half-octave ladder
/// {h 2^{k/2}} up to 2L.
BallCandidates default_ball_candidates(const GridSpec& spec);

double morrey_norm_ball(const GridFunction& f, const MorreyParams& params,
                        const BallCandidates* candidates = nullptr);

DyadicNormResult morrey_norm_vector(const GridFunctionSeq& seq, const MorreyParams& params,
                                    double q, std::optional<JRange> range = std::nullopt);

double weighted_norm(const GridFunction& f, double p, const WeightParams& weight);

struct EmbeddingReport {
  double u = 0.0;            ///< Lebesgue exponent -n/r of the upstream space.
  double lebesgue_norm = 0.0;
  double morrey_norm = 0.0;
  double weighted_norm = 0.0;
  /// Cube-Hoelder constant 2^{n/p + r} bounding morrey/lebesgue.
  double holder_constant = 0.0;
  /// Shell-sum constant bounding weighted/morrey inside the weight window.
  double shell_constant = 0.0;
  double ratio_morrey_over_lebesgue = 0.0;
  double ratio_weighted_over_morrey = 0.0;
  double slack = 0.0;
  bool violation = false;
};

/**
 * Norms along the chain L_u -> local-growth -> weighted L_p for u = -n/r,
 * requiring -n < alpha p < -n - r p. Flags a violation when a downstream
 * norm exceeds its derived constant times the upstream norm by more than
 * `slack`.
 */
EmbeddingReport check_embedding_chain(const GridFunction& f, const MorreyParams& params,
                                      double alpha, double slack = 1.05);

}  // namespace morrlab
