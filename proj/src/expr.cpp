#include "morrlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace morrlab {

namespace {

double axis_value(const std::vector<double>& v, int axis) {
  // Single entry broadcasts to all axes.
  return v.size() == 1 ? v[0] : v[std::size_t(axis)];
}

void check_vector_arity(const std::vector<double>& v, const char* what) {
  if (v.empty() || v.size() > 2) {
    throw std::invalid_argument(std::string(what) + " needs 1 or 2 components");
  }
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string format_vector(const std::vector<double>& v) {
  std::string s = format_number(v[0]);
  for (std::size_t i = 1; i < v.size(); ++i) s += "," + format_number(v[i]);
  return s;
}

}  // namespace

struct FunctionExpr::Node {
  enum class Kind { zero, chi, gauss, bump, pow, dilate, translate, sum };
  Kind kind;
  double a = 0.0;
  double b = 0.0;
  std::vector<double> vec;
  std::shared_ptr<const Node> left;
  std::shared_ptr<const Node> right;

  double eval(const Point& x, int dim) const {
    switch (kind) {
      case Kind::zero:
        return 0.0;
      case Kind::chi: {
        for (int ax = 0; ax < dim; ++ax) {
          const double t = x[std::size_t(ax)];
          if (t < a || t > b) return 0.0;
        }
        return 1.0;
      }
      case Kind::gauss:
        return std::exp(-squared_norm(x, dim) / (a * a));
      case Kind::bump: {
        double s = 0.0;
        for (int ax = 0; ax < dim; ++ax) {
          const double d = x[std::size_t(ax)] - axis_value(vec, ax);
          s += d * d;
        }
        s /= b * b;
        if (s >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - s));
      }
      case Kind::pow: {
        const double t = euclidean_norm(x, dim);
        if (t < b) return 0.0;
        return std::pow(t, a);
      }
      case Kind::dilate: {
        Point y{0.0, 0.0};
        for (int ax = 0; ax < dim; ++ax) y[std::size_t(ax)] = a * x[std::size_t(ax)];
        return left->eval(y, dim);
      }
      case Kind::translate: {
        Point y{0.0, 0.0};
        for (int ax = 0; ax < dim; ++ax) {
          y[std::size_t(ax)] = x[std::size_t(ax)] - axis_value(vec, ax);
        }
        return left->eval(y, dim);
      }
      case Kind::sum:
        return left->eval(x, dim) + right->eval(x, dim);
    }
    return 0.0;
  }

  std::string print() const {
    switch (kind) {
      case Kind::zero:
        return "zero";
      case Kind::chi:
        return "(chi " + format_number(a) + " " + format_number(b) + ")";
      case Kind::gauss:
        return "(gauss " + format_number(a) + ")";
      case Kind::bump:
        return "(bump " + format_vector(vec) + " " + format_number(b) + ")";
      case Kind::pow:
        return "(pow " + format_number(a) + " " + format_number(b) + ")";
      case Kind::dilate:
        return "(dilate " + format_number(a) + " " + left->print() + ")";
      case Kind::translate:
        return "(translate " + format_vector(vec) + " " + left->print() + ")";
      case Kind::sum:
        return "(sum " + left->print() + " " + right->print() + ")";
    }
    return "zero";
  }
};

FunctionExpr FunctionExpr::zero() {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::zero;
  return FunctionExpr(std::move(n));
}

FunctionExpr FunctionExpr::chi(double a, double b) {
  if (!(a <= b)) throw std::invalid_argument("chi needs a <= b");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::chi;
  n->a = a;
  n->b = b;
  return FunctionExpr(std::move(n));
}

FunctionExpr FunctionExpr::gauss(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gauss needs sigma > 0");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::gauss;
  n->a = sigma;
  return FunctionExpr(std::move(n));
}

FunctionExpr FunctionExpr::bump(std::vector<double> center, double radius) {
  check_vector_arity(center, "bump center");
  if (!(radius > 0.0)) throw std::invalid_argument("bump needs radius > 0");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::bump;
  n->vec = std::move(center);
  n->b = radius;
  return FunctionExpr(std::move(n));
}

FunctionExpr FunctionExpr::pow(double a, double eps) {
  if (eps < 0.0) throw std::invalid_argument("pow needs eps >= 0");
  if (a < 0.0 && eps == 0.0) {
    throw std::invalid_argument("pow with negative exponent needs a truncation radius");
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::pow;
  n->a = a;
  n->b = eps;
  return FunctionExpr(std::move(n));
}

FunctionExpr FunctionExpr::dilate(double lambda, FunctionExpr inner) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilate needs lambda > 0");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::dilate;
  n->a = lambda;
  n->left = std::move(inner.root_);
  return FunctionExpr(std::move(n));
}

FunctionExpr FunctionExpr::translate(std::vector<double> v, FunctionExpr inner) {
  check_vector_arity(v, "translate shift");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::translate;
  n->vec = std::move(v);
  n->left = std::move(inner.root_);
  return FunctionExpr(std::move(n));
}

FunctionExpr FunctionExpr::sum(FunctionExpr a, FunctionExpr b) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::sum;
  n->left = std::move(a.root_);
  n->right = std::move(b.root_);
  return FunctionExpr(std::move(n));
}

double FunctionExpr::operator()(const Point& x, int dim) const { return root_->eval(x, dim); }

std::string FunctionExpr::to_string() const { return root_->print(); }

namespace {

struct Tokenizer {
  std::vector<std::string> tokens;
  std::size_t pos = 0;

  explicit Tokenizer(const std::string& text) {
    std::string cur;
    for (char c : text) {
      if (c == '(' || c == ')') {
        if (!cur.empty()) tokens.push_back(std::exchange(cur, std::string()));
        tokens.push_back(std::string(1, c));
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (!cur.empty()) tokens.push_back(std::exchange(cur, std::string()));
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) tokens.push_back(cur);
  }

  bool done() const { return pos >= tokens.size(); }
  const std::string& peek() const {
    if (done()) throw std::invalid_argument("unexpected end of expression");
    return tokens[pos];
  }
  std::string next() {
    if (done()) throw std::invalid_argument("unexpected end of expression");
    return tokens[pos++];
  }
};

double parse_number(const std::string& tok) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("expected a number, got '" + tok + "'");
  }
  if (used != tok.size()) throw std::invalid_argument("expected a number, got '" + tok + "'");
  return v;
}

std::vector<double> parse_vector(const std::string& tok) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= tok.size()) {
    const std::size_t comma = tok.find(',', start);
    const std::string part =
        tok.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(parse_number(part));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

FunctionExpr parse_expr(Tokenizer& tz) {
  bool wrapped = false;
  if (tz.peek() == "(") {
    tz.next();
    wrapped = true;
  }
  const std::string head = tz.next();
  FunctionExpr result = FunctionExpr::zero();
  if (head == "zero") {
    result = FunctionExpr::zero();
  } else if (head == "chi") {
    const double a = parse_number(tz.next());
    const double b = parse_number(tz.next());
    result = FunctionExpr::chi(a, b);
  } else if (head == "gauss") {
    result = FunctionExpr::gauss(parse_number(tz.next()));
  } else if (head == "bump") {
    auto center = parse_vector(tz.next());
    const double radius = parse_number(tz.next());
    result = FunctionExpr::bump(std::move(center), radius);
  } else if (head == "pow") {
    const double a = parse_number(tz.next());
    const double eps = parse_number(tz.next());
    result = FunctionExpr::pow(a, eps);
  } else if (head == "dilate") {
    const double lambda = parse_number(tz.next());
    result = FunctionExpr::dilate(lambda, parse_expr(tz));
  } else if (head == "translate") {
    auto v = parse_vector(tz.next());
    result = FunctionExpr::translate(std::move(v), parse_expr(tz));
  } else if (head == "sum") {
    FunctionExpr a = parse_expr(tz);
    FunctionExpr b = parse_expr(tz);
    result = FunctionExpr::sum(std::move(a), std::move(b));
  } else {
    throw std::invalid_argument("unknown expression head '" + head + "'");
  }
  if (wrapped) {
    if (tz.next() != ")") throw std::invalid_argument("expected ')'");
  }
  return result;
}

}  // namespace

FunctionExpr FunctionExpr::parse(const std::string& text) {
  Tokenizer tz(text);
  FunctionExpr e = parse_expr(tz);
  if (!tz.done()) throw std::invalid_argument("trailing tokens after expression");
  return e;
}

GridFunction sample(const FunctionExpr& expr, const GridSpec& spec) {
  std::vector<Complex> values(spec.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = expr(spec.point(i), spec.dim());
    if (!std::isfinite(v)) {
      throw std::runtime_error("expression is singular at a grid node");
    }
    values[i] = v;
  }
  return GridFunction(spec, std::move(values));
}

}  // namespace morrlab
