#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "morrlab/expr.hpp"
#include "morrlab/grid.hpp"
#include "morrlab/norms.hpp"

namespace morrlab {

/**
 * One piece of an atomic decomposition: samples supported inside `cube`,
 * with cost 2^{J(n/p + rho)} ||piece||_{L_p}.
 */
struct Atom {
  Atom(DyadicCube cube, GridFunction piece, const PredualParams& params);

  DyadicCube cube;
  GridFunction piece;
  double cost = 0.0;
};

/**
 * Finite decomposition of a target into atoms on a dyadic partition.
 * The pieces sum back to the target sample-for-sample: every sample of
 * the target belongs to exactly one piece.
 */
struct AtomicDecomposition {
  std::vector<Atom> atoms;
  double total_cost = 0.0;

  GridFunction reconstruct(const GridSpec& spec) const;
};

/// Bilinear pairing h^n sum_x g(x) f(x); no conjugation.
Complex pairing(const GridFunction& g, const GridFunction& f);
/// h^n sum_x sum_j g_j(x) f_j(x) for sequences of equal length.
Complex pairing(const GridFunctionSeq& g, const GridFunctionSeq& f);

/**
 * Optimal-cost decomposition over dyadic partition trees: the root is the
 * smallest enumerable cube containing supp f, each node either stays one
 * atom or splits into its 2^n tiling children, down to range.j_max.
 * cost(node) = min(atom cost, sum of children costs). Returns an upper
 * bound for the atomic norm together with the realizing decomposition.
 */
AtomicDecomposition predual_upper_bound(const GridFunction& f, const PredualParams& params,
                                        std::optional<JRange> range = std::nullopt);

/// Witness-based lower bound: |pairing(g, f)| / ||g|| over candidate g.
struct DualityCertificate {
  std::string witness;
  double witness_morrey_norm = 0.0;
  double pairing_value = 0.0;  ///< |pairing(witness, f)|.
  double lower_bound = 0.0;
};

/// Dilations and translations of bump, chi and pow profiles.
std::vector<FunctionExpr> default_witness_dictionary();

/**
 * Best certificate over the dictionary plus automatic sign-pattern
 * witnesses |f|^{p-1} sign(conj f), globally and restricted to the
 * highest-cost atom cubes. Witness norms are taken in the paired space
 * (p', -n - rho). Throws on a dictionary member with zero norm.
 */
DualityCertificate predual_lower_bound(const GridFunction& f, const PredualParams& params,
                                       std::span<const FunctionExpr> dictionary = {},
                                       std::optional<JRange> range = std::nullopt);

struct PredualBracket {
  double lower = 0.0;
  double upper = 0.0;
  DualityCertificate certificate;
  double gap() const { return upper - lower; }
};

/// Bracket for the ell_q reduction of a sequence.
PredualBracket predual_norm_vector(const GridFunctionSeq& seq, const PredualParams& params,
                                   double q,
                                   std::span<const FunctionExpr> dictionary = {},
                                   std::optional<JRange> range = std::nullopt);

}  // namespace morrlab
