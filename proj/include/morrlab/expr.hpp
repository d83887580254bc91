#pragma once

#include <memory>
#include <string>
#include <vector>

#include "morrlab/grid.hpp"

namespace morrlab {

/**
 * Closed-form test functions over R^n, written as a parenthesized prefix
 * language:
 *
 *   zero
 *   chi a b            indicator of [a, b], tensorized per axis
 *   gauss sigma        exp(-|x|^2 / sigma^2)
 *   bump c rho         exp(1 - 1/(1 - |x-c|^2/rho^2)) inside B_rho(c), 0 outside
 *   pow a eps          |x|^a on |x| >= eps, 0 inside; a < 0 requires eps > 0
 *   dilate lambda E    x -> E(lambda x), lambda > 0
 *   translate v E      x -> E(x - v)
 *   sum E F            E + F
 *
 * Vector arguments (bump center, translate shift) are comma-separated
 * per-axis values; a single value broadcasts to all axes. Example:
 * "(sum (chi -1 1) (translate 0.5,0.25 (bump 0 1)))".
 */
class FunctionExpr {
public:
  static FunctionExpr parse(const std::string& text);

  static FunctionExpr zero();
  static FunctionExpr chi(double a, double b);
  static FunctionExpr gauss(double sigma);
  static FunctionExpr bump(std::vector<double> center, double radius);
  static FunctionExpr pow(double a, double eps);
  static FunctionExpr dilate(double lambda, FunctionExpr inner);
  static FunctionExpr translate(std::vector<double> v, FunctionExpr inner);
  static FunctionExpr sum(FunctionExpr a, FunctionExpr b);

  double operator()(const Point& x, int dim) const;
  std::string to_string() const;

private:
  struct Node;
  explicit FunctionExpr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

/// Evaluate an expression at every node. Throws if any sample is not finite.
GridFunction sample(const FunctionExpr& expr, const GridSpec& spec);

}  // namespace morrlab
