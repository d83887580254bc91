#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "morrlab/decomp.hpp"
#include "morrlab/expr.hpp"
#include "morrlab/harness.hpp"
#include "morrlab/norms.hpp"
#include "morrlab/operators.hpp"
#include "morrlab/predual.hpp"

namespace {

using morrlab::GridFunction;
using morrlab::GridSpec;
using Json = nlohmann::ordered_json;

std::vector<double> split_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(part, &used));
    if (used != part.size()) throw CLI::ValidationError("expected a number, got '" + part + "'");
  }
  return out;
}

GridSpec parse_grid(const std::string& text) {
  const std::vector<double> v = split_numbers(text);
  if (v.size() != 3) throw CLI::ValidationError("--grid expects dim,half_width,points");
  return GridSpec(int(v[0]), v[1], std::size_t(v[2]));
}

/// Operator argument: a JSON object literal, a path to a JSON file, or one of
/// the shorthand names "identity", "maximal", "hilbert", "riesz0", "riesz1".
morrlab::OperatorSpec parse_operator(const std::string& text) {
  if (text == "identity") return morrlab::OperatorSpec::identity();
  if (text == "maximal") return morrlab::OperatorSpec::maximal();
  if (text == "hilbert" || text == "riesz0" || text == "riesz1") {
    Json j{{"kind", "cz"}, {"kernel", text}};
    return morrlab::harness::operator_from_json(j);
  }
  if (!text.empty() && text.front() == '{') {
    return morrlab::harness::operator_from_json(Json::parse(text));
  }
  std::ifstream in(text);
  if (!in) throw CLI::ValidationError("operator file not found: " + text);
  Json j;
  in >> j;
  return morrlab::harness::operator_from_json(j);
}

void print_function_stats(const GridFunction& f) {
  double sup = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) sup = std::max(sup, std::abs(f[k]));
  std::printf("  l1 norm   %.12g\n", morrlab::lp_norm(f, 1.0));
  std::printf("  l2 norm   %.12g\n", morrlab::lp_norm(f, 2.0));
  std::printf("  sup       %.12g\n", sup);
}

void write_samples(const GridFunction& f, const std::string& path) {
  Json j;
  j["grid"] = Json{{"dim", f.spec().dim()},
                   {"half_width", f.spec().half_width()},
                   {"points_per_axis", f.spec().points_per_axis()}};
  Json re = Json::array();
  Json im = Json::array();
  for (std::size_t k = 0; k < f.size(); ++k) {
    re.push_back(f[k].real());
    im.push_back(f[k].imag());
  }
  j["real"] = re;
  j["imag"] = im;
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale laboratory for local-growth norms, atomic-decomposition "
               "bounds, and operator boundedness experiments"};
  app.require_subcommand(1);

  std::string grid_text = "1,4,256";
  app.add_option("--grid", grid_text, "Grid as dim,half_width,points (default 1,4,256)")
      ->capture_default_str();

  // norm: dyadic (default) or ball-based local-growth norm of an expression.
  auto* norm_cmd = app.add_subcommand("norm", "Local-growth norm of an expression");
  std::string norm_expr;
  std::string norm_space = "2,-0.25";
  bool norm_ball = false;
  norm_cmd->add_option("expr", norm_expr, "Expression, e.g. \"(bump 0 1)\"")->required();
  norm_cmd->add_option("--space", norm_space, "Exponents p,r")->capture_default_str();
  norm_cmd->add_flag("--ball", norm_ball, "Use ball candidates instead of dyadic cubes");

  auto* predual_cmd =
      app.add_subcommand("predual", "Atomic-decomposition norm bracket of an expression");
  std::string predual_expr;
  std::string predual_space = "2,-0.75";
  predual_cmd->add_option("expr", predual_expr, "Expression")->required();
  predual_cmd->add_option("--space", predual_space, "Exponents p,rho")->capture_default_str();

  auto* apply_cmd = app.add_subcommand("apply", "Apply an operator to an expression");
  std::string apply_op;
  std::string apply_expr;
  std::string apply_out;
  apply_cmd->add_option("operator", apply_op, "Operator JSON, file, or shorthand name")
      ->required();
  apply_cmd->add_option("expr", apply_expr, "Expression")->required();
  apply_cmd->add_option("--out", apply_out, "Write the samples to this JSON file");

  auto* ratio_cmd = app.add_subcommand(
      "bound-ratio", "Operator-norm surrogate ratios over a corpus of expressions");
  std::string ratio_op;
  std::string ratio_space = "2";
  std::vector<std::string> ratio_corpus;
  int ratio_refinements = 1;
  std::string ratio_out;
  ratio_cmd->add_option("--op", ratio_op, "Operator JSON, file, or shorthand name")->required();
  ratio_cmd->add_option("--space", ratio_space, "Exponents p (Lebesgue) or p,r (local-growth)")
      ->capture_default_str();
  ratio_cmd->add_option("--corpus", ratio_corpus, "Expressions (default: built-in corpus)");
  ratio_cmd->add_option("--refinements", ratio_refinements, "Grid doublings to sweep")
      ->capture_default_str();
  ratio_cmd->add_option("--out", ratio_out, "Write the table to this JSON file");

  auto* check_cmd = app.add_subcommand("check", "Run the checks of a JSON experiment config");
  std::string check_config;
  std::string check_output;
  check_cmd->add_option("config", check_config, "Experiment config JSON file")->required();
  check_cmd->add_option("--output", check_output, "Output stem for <stem>.json and <stem>.csv");

  auto* report_cmd =
      app.add_subcommand("report", "Run an experiment and emit its records as CSV");
  std::string report_config;
  bool report_csv = false;
  std::string report_out;
  report_cmd->add_option("config", report_config, "Experiment config JSON file")->required();
  report_cmd->add_flag("--csv", report_csv, "Print CSV records to stdout");
  report_cmd->add_option("--out", report_out, "Write the CSV records to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    const GridSpec grid = parse_grid(grid_text);

    if (norm_cmd->parsed()) {
      const std::vector<double> s = split_numbers(norm_space);
      if (s.size() != 2) throw CLI::ValidationError("--space expects p,r");
      const morrlab::MorreyParams params{s[0], s[1]};
      params.validate(grid.dim());
      const GridFunction f = sample(morrlab::FunctionExpr::parse(norm_expr), grid);
      if (norm_ball) {
        std::printf("%.12g\n", morrlab::morrey_norm_ball(f, params));
      } else {
        const morrlab::DyadicNormResult result = morrlab::morrey_norm_dyadic(f, params);
        std::printf("%.12g\n", result.value);
        std::printf("argmax %s\n", result.argmax.to_string().c_str());
      }
      return 0;
    }

    if (predual_cmd->parsed()) {
      const std::vector<double> s = split_numbers(predual_space);
      if (s.size() != 2) throw CLI::ValidationError("--space expects p,rho");
      const morrlab::PredualParams params{s[0], s[1]};
      params.validate(grid.dim());
      const GridFunction f = sample(morrlab::FunctionExpr::parse(predual_expr), grid);
      const morrlab::AtomicDecomposition upper = morrlab::predual_upper_bound(f, params);
      const morrlab::DualityCertificate cert = morrlab::predual_lower_bound(f, params);
      std::printf("upper  %.12g  (%zu atoms)\n", upper.total_cost, upper.atoms.size());
      std::printf("lower  %.12g  (witness %s)\n", cert.lower_bound, cert.witness.c_str());
      return 0;
    }

    if (apply_cmd->parsed()) {
      const morrlab::OperatorSpec op = parse_operator(apply_op);
      const GridFunction f = sample(morrlab::FunctionExpr::parse(apply_expr), grid);
      const GridFunction g = op.apply(f);
      std::printf("%s applied on %zu^%d nodes\n", op.name().c_str(), grid.points_per_axis(),
                  grid.dim());
      print_function_stats(g);
      if (!apply_out.empty()) write_samples(g, apply_out);
      return 0;
    }

    if (ratio_cmd->parsed()) {
      const morrlab::OperatorSpec op = parse_operator(ratio_op);
      const std::vector<double> s = split_numbers(ratio_space);
      if (s.empty() || s.size() > 2) throw CLI::ValidationError("--space expects p or p,r");
      morrlab::harness::SpaceSpec space;
      space.p = s[0];
      if (s.size() == 2) space.r = s[1];
      const std::vector<std::string> corpus =
          ratio_corpus.empty() ? morrlab::harness::default_corpus() : ratio_corpus;
      const morrlab::harness::BoundRatioTable table =
          morrlab::harness::bound_ratio(op, space, corpus, grid, ratio_refinements);
      std::printf("%-44s %10s %14s\n", "function", "points", "ratio");
      for (const morrlab::harness::BoundRatioRow& row : table.rows) {
        std::printf("%-44s %10zu %14.6g\n", row.function.c_str(), row.resolution, row.ratio);
      }
      std::printf("max ratio            %.12g\n", table.max_ratio);
      std::printf("stability quotient   %.12g\n", table.stability_quotient);
      if (!ratio_out.empty()) {
        std::ofstream out(ratio_out);
        out << table.to_json().dump(2) << '\n';
      }
      return 0;
    }

    const bool checking = check_cmd->parsed();
    const std::string config_path = checking ? check_config : report_config;
    std::ifstream in(config_path);
    if (!in) {
      std::fprintf(stderr, "config file not found: %s\n", config_path.c_str());
      return 2;
    }
    Json config_json;
    in >> config_json;
    morrlab::harness::ExperimentConfig config =
        morrlab::harness::config_from_json(config_json);
    if (checking && !check_output.empty()) config.output_path = check_output;

    const morrlab::harness::ExperimentReport report = morrlab::harness::run(config);
    if (checking) {
      for (const morrlab::harness::CheckRecord& r : report.records) {
        std::printf("%-28s %-44s %-28s %12.5g %s\n", r.check.c_str(), r.function.c_str(),
                    r.op.c_str(), r.value, r.pass ? "pass" : "FAIL");
      }
      std::size_t failures = 0;
      for (const morrlab::harness::CheckRecord& r : report.records) failures += !r.pass;
      std::printf("%zu records, %zu failures\n", report.records.size(), failures);
      return report.all_pass() ? 0 : 1;
    }
    const std::string csv = report.to_csv();
    if (report_csv || report_out.empty()) std::fputs(csv.c_str(), stdout);
    if (!report_out.empty()) {
      std::ofstream out(report_out);
      out << csv;
    }
    return report.all_pass() ? 0 : 1;
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
