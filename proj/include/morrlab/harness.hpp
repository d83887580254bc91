#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "morrlab/grid.hpp"
#include "morrlab/norms.hpp"
#include "morrlab/operators.hpp"

namespace morrlab::harness {

using Json = nlohmann::ordered_json;

/// Target space of a boundedness table: Lebesgue L_p, or Morrey when r is set.
struct SpaceSpec {
  double p = 2.0;
  std::optional<double> r;
  double q = 2.0;

  std::string name() const;
};

/**
 * One experiment: a grid, space parameters, a corpus of expressions, a set of
 * operators, and the list of named checks to run. Serializes to a single JSON
 * document; reports derived from equal configs and seeds are byte-identical
 * apart from the timestamp.
 */
struct ExperimentConfig {
  GridSpec grid{1, 4.0, 256};
  double p = 2.0;
  /// Morrey exponent; default is the mid-window value -n/(2p).
  std::optional<double> r;
  /// Predual exponent; default is the mid-window value -(n + n/p)/2.
  std::optional<double> rho;
  double q = 2.0;
  std::vector<std::string> corpus;
  std::vector<OperatorSpec> operators;
  /// Empty means every registered check.
  std::vector<std::string> checks;
  std::uint64_t seed = 2026;
  /// Output stem; "<stem>.json" and "<stem>.csv" are written when non-empty.
  std::string output_path;

  MorreyParams morrey() const;
  PredualParams predual() const;
};

/// Expressions exercised when a config lists no corpus.
std::vector<std::string> default_corpus();
/// One representative operator per implemented kind for the given dimension.
std::vector<OperatorSpec> default_operator_set(int dim);

Json operator_to_json(const OperatorSpec& op);
OperatorSpec operator_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const Json& j);

/// One measured line of a report; `resolution` is "N" or "N/2N" when the
/// check asserts refinement stability.
struct CheckRecord {
  std::string check;
  std::string function;
  std::string op = "-";
  double value = 0.0;
  double tolerance = 0.0;
  std::string resolution;
  bool pass = true;
  std::string note;
};

struct ExperimentReport {
  Json config;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> records;

  bool all_pass() const;
  Json to_json(bool with_timestamp = true) const;
  /// Columns: check,function,operator,value,resolution,pass.
  std::string to_csv() const;
};

/// Registered check names, in canonical execution order.
std::vector<std::string> check_names();

/// Runs the configured checks and writes the JSON/CSV files when requested.
ExperimentReport run(const ExperimentConfig& config);

/// Operator-norm surrogate table: ||T f|| / ||f|| per function and resolution.
struct BoundRatioRow {
  std::string function;
  std::size_t resolution = 0;
  double ratio = 0.0;
};

struct BoundRatioTable {
  std::string op;
  std::string space;
  std::vector<BoundRatioRow> rows;
  double max_ratio = 0.0;
  /// Largest per-function drift factor between consecutive resolutions.
  double stability_quotient = 1.0;

  Json to_json() const;
};

BoundRatioTable bound_ratio(const OperatorSpec& op, const SpaceSpec& space,
                            std::span<const std::string> corpus, const GridSpec& base,
                            int refinements = 1);

}  // namespace morrlab::harness
