#include "morrlab/predual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "power_table.hpp"

namespace morrlab {

namespace {

using detail::PowerTable;

struct Box {
  CellRange r0;
  CellRange r1;  // ignored for n = 1
  bool empty(int dim) const { return r0.empty() || (dim == 2 && r1.empty()); }
};

// Split one axis range at the cube center: cells strictly below go to the
// low child, the rest to the high child. Keeps children disjoint even when
// a cell center lands exactly on the shared boundary.
std::pair<CellRange, CellRange> split_range(const GridSpec& spec, const CellRange& r,
                                            double center) {
  CellRange lo = r, hi = r;
  if (r.empty()) return {lo, hi};
  std::int64_t first_high = r.first;
  while (first_high <= r.last && spec.node(std::size_t(first_high)) < center) ++first_high;
  lo.last = first_high - 1;
  hi.first = first_high;
  return {lo, hi};
}

struct DpNode {
  DyadicCube cube;
  Box box;
  double atom_cost = 0.0;
  double best_cost = 0.0;
  bool split = false;
  std::vector<std::size_t> children;
};

class DpTree {
public:
  DpTree(const GridFunction& f, const PredualParams& params, int j_max)
      : f_(f),
        spec_(f.spec()),
        table_(f, params.p),
        params_(params),
        j_max_(j_max),
        exponent_(params.cost_exponent(f.spec().dim())) {}

  std::size_t build(const DyadicCube& cube, const Box& box) {
    const std::size_t id = nodes_.size();
    nodes_.push_back(DpNode{cube, box, 0.0, 0.0, false, {}});
    const double sum = table_.box_sum(box.r0, spec_.dim() == 2 ? box.r1 : CellRange{});
    const double local = std::pow(spec_.cell_volume() * sum, 1.0 / params_.p);
    nodes_[id].atom_cost =
        std::pow(2.0, double(cube.level()) * exponent_) * local;
    nodes_[id].best_cost = nodes_[id].atom_cost;
    if (sum <= 0.0) {
      nodes_[id].best_cost = 0.0;
      nodes_[id].atom_cost = 0.0;
      return id;
    }
    if (cube.level() >= j_max_) return id;

    const auto [lo0, hi0] = split_range(spec_, box.r0, cube.center(0));
    std::vector<std::size_t> children;
    double split_cost = 0.0;
    for (unsigned corner = 0; corner < (1u << unsigned(spec_.dim())); ++corner) {
      Box child_box;
      child_box.r0 = (corner & 1u) ? hi0 : lo0;
      if (spec_.dim() == 2) {
        const auto [lo1, hi1] = split_range(spec_, box.r1, cube.center(1));
        child_box.r1 = (corner & 2u) ? hi1 : lo1;
      }
      if (child_box.empty(spec_.dim())) continue;
      const std::size_t child_id = build(cube.child(corner), child_box);
      split_cost += nodes_[child_id].best_cost;
      children.push_back(child_id);
    }
    if (split_cost < nodes_[id].atom_cost) {
      nodes_[id].best_cost = split_cost;
      nodes_[id].split = true;
      nodes_[id].children = std::move(children);
    }
    return id;
  }

  void collect_leaves(std::size_t id, std::vector<std::size_t>& out) const {
    const DpNode& node = nodes_[id];
    if (node.best_cost <= 0.0) return;
    if (!node.split) {
      out.push_back(id);
      return;
    }
    for (std::size_t child : node.children) collect_leaves(child, out);
  }

  const DpNode& node(std::size_t id) const { return nodes_[id]; }

private:
  const GridFunction& f_;
  GridSpec spec_;
  PowerTable table_;
  PredualParams params_;
  int j_max_;
  double exponent_;
  std::vector<DpNode> nodes_;
};

// Support bounding box in node coordinates; nullopt for the zero function.
struct SupportBox {
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};
};

std::optional<SupportBox> support_box(const GridFunction& f) {
  const GridSpec& spec = f.spec();
  SupportBox box;
  bool any = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == Complex{0.0, 0.0}) continue;
    const Point x = spec.point(i);
    if (!any) {
      box.lo = x;
      box.hi = x;
      any = true;
      continue;
    }
    for (int a = 0; a < spec.dim(); ++a) {
      box.lo[std::size_t(a)] = std::min(box.lo[std::size_t(a)], x[std::size_t(a)]);
      box.hi[std::size_t(a)] = std::max(box.hi[std::size_t(a)], x[std::size_t(a)]);
    }
  }
  if (!any) return std::nullopt;
  return box;
}

// Smallest cube with level in [j_min, j_max] containing the box, preferring
// deeper levels; offsets picked nearest to the box center.
std::optional<DyadicCube> covering_cube(const SupportBox& box, int dim, int j_min,
                                        int j_max) {
  for (int j = j_max; j >= j_min; --j) {
    std::array<std::int64_t, 2> offset{0, 0};
    bool ok = true;
    for (int a = 0; a < dim && ok; ++a) {
      const double lo = box.lo[std::size_t(a)];
      const double hi = box.hi[std::size_t(a)];
      const auto m_lo = std::int64_t(std::ceil(std::ldexp(hi, j) - 1.0 - 1e-9));
      const auto m_hi = std::int64_t(std::floor(std::ldexp(lo, j) + 1.0 + 1e-9));
      if (m_lo > m_hi) {
        ok = false;
        break;
      }
      const auto m_mid = std::int64_t(std::llround(std::ldexp((lo + hi) / 2.0, j)));
      offset[std::size_t(a)] = std::clamp(m_mid, m_lo, m_hi);
    }
    if (ok) return DyadicCube(dim, j, offset);
  }
  return std::nullopt;
}

GridFunction restrict_to_box(const GridFunction& f, const Box& box) {
  const GridSpec& spec = f.spec();
  std::vector<Complex> values(spec.size(), Complex{0.0, 0.0});
  if (spec.dim() == 1) {
    for (std::int64_t i = box.r0.first; i <= box.r0.last; ++i) {
      values[std::size_t(i)] = f[std::size_t(i)];
    }
  } else {
    for (std::int64_t i0 = box.r0.first; i0 <= box.r0.last; ++i0) {
      for (std::int64_t i1 = box.r1.first; i1 <= box.r1.last; ++i1) {
        const std::size_t flat = spec.flat(std::size_t(i0), std::size_t(i1));
        values[flat] = f[flat];
      }
    }
  }
  return GridFunction(spec, std::move(values));
}

// Sign-pattern witness |f|^{p-1} sign(conj f), optionally restricted.
GridFunction sign_pattern(const GridFunction& f, double p, const DyadicCube* cube) {
  const GridSpec& spec = f.spec();
  std::vector<Complex> values(spec.size(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double mag = std::abs(f[i]);
    if (mag == 0.0) continue;
    if (cube != nullptr && !cube->contains(spec.point(i))) continue;
    values[i] = std::pow(mag, p - 2.0) * std::conj(f[i]);
  }
  return GridFunction(spec, std::move(values));
}

}  // namespace

Atom::Atom(DyadicCube cube_in, GridFunction piece_in, const PredualParams& params)
    : cube(cube_in), piece(std::move(piece_in)) {
  const GridSpec& spec = piece.spec();
  params.validate(spec.dim());
  for (std::size_t i = 0; i < piece.size(); ++i) {
    if (piece[i] != Complex{0.0, 0.0} && !cube.contains(spec.point(i))) {
      throw std::invalid_argument("atom samples must vanish outside its cube");
    }
  }
  cost = std::pow(2.0, double(cube.level()) * params.cost_exponent(spec.dim())) *
         lp_norm(piece, params.p);
}

GridFunction AtomicDecomposition::reconstruct(const GridSpec& spec) const {
  GridFunction sum = GridFunction::zeros(spec);
  for (const Atom& atom : atoms) sum = add(sum, atom.piece);
  return sum;
}

Complex pairing(const GridFunction& g, const GridFunction& f) {
  if (!(g.spec() == f.spec())) throw std::invalid_argument("pairing needs one grid");
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < f.size(); ++i) sum += g[i] * f[i];
  return sum * f.spec().cell_volume();
}

Complex pairing(const GridFunctionSeq& g, const GridFunctionSeq& f) {
  if (g.count() != f.count()) throw std::invalid_argument("pairing needs equal lengths");
  Complex sum{0.0, 0.0};
  for (std::size_t j = 0; j < g.count(); ++j) sum += pairing(g[j], f[j]);
  return sum;
}

AtomicDecomposition predual_upper_bound(const GridFunction& f, const PredualParams& params,
                                        std::optional<JRange> range) {
  const GridSpec& spec = f.spec();
  params.validate(spec.dim());
  const JRange jr = range.value_or(default_j_range(spec));
  if (jr.j_min > jr.j_max) throw std::invalid_argument("empty level range");

  const auto box = support_box(f);
  if (!box.has_value()) return AtomicDecomposition{};

  const auto root = covering_cube(*box, spec.dim(), jr.j_min, jr.j_max);
  if (!root.has_value()) {
    throw std::runtime_error("level range too shallow to cover the support");
  }

  Box root_box;
  root_box.r0 = cell_range(spec, root->lower(0), root->upper(0));
  if (spec.dim() == 2) root_box.r1 = cell_range(spec, root->lower(1), root->upper(1));

  DpTree tree(f, params, jr.j_max);
  const std::size_t root_id = tree.build(*root, root_box);

  std::vector<std::size_t> leaf_ids;
  tree.collect_leaves(root_id, leaf_ids);
  std::sort(leaf_ids.begin(), leaf_ids.end(), [&](std::size_t a, std::size_t b) {
    const DyadicCube& ca = tree.node(a).cube;
    const DyadicCube& cb = tree.node(b).cube;
    if (ca.level() != cb.level()) return ca.level() < cb.level();
    if (ca.offset(0) != cb.offset(0)) return ca.offset(0) < cb.offset(0);
    return ca.offset(1) < cb.offset(1);
  });

  AtomicDecomposition result;
  for (std::size_t id : leaf_ids) {
    const DpNode& node = tree.node(id);
    result.atoms.emplace_back(node.cube, restrict_to_box(f, node.box), params);
  }
  // Canonical summation order keeps the total reproducible.
  result.total_cost = 0.0;
  for (const Atom& atom : result.atoms) result.total_cost += atom.cost;
  return result;
}

std::vector<FunctionExpr> default_witness_dictionary() {
  std::vector<FunctionExpr> dict;
  for (const double rho : {0.5, 1.0, 2.0}) {
    dict.push_back(FunctionExpr::bump({0.0}, rho));
    dict.push_back(FunctionExpr::chi(-rho, rho));
  }
  for (const double shift : {-2.0, -1.0, 1.0, 2.0}) {
    dict.push_back(FunctionExpr::translate({shift}, FunctionExpr::bump({0.0}, 1.0)));
  }
  dict.push_back(FunctionExpr::pow(-0.25, 0.05));
  return dict;
}

DualityCertificate predual_lower_bound(const GridFunction& f, const PredualParams& params,
                                       std::span<const FunctionExpr> dictionary,
                                       std::optional<JRange> range) {
  const GridSpec& spec = f.spec();
  params.validate(spec.dim());
  const MorreyParams paired = params.paired_morrey(spec.dim());

  DualityCertificate best;
  auto consider = [&](const GridFunction& g, const std::string& label, bool from_dict) {
    const double norm = morrey_norm_dyadic(g, paired, range).value;
    if (norm <= 0.0) {
      if (from_dict) {
        throw std::runtime_error("dictionary witness has zero norm: " + label);
      }
      return;
    }
    const double pair = std::abs(pairing(g, f));
    const double bound = pair / norm;
    if (bound > best.lower_bound) {
      best = DualityCertificate{label, norm, pair, bound};
    }
  };

  const std::vector<FunctionExpr> defaults =
      dictionary.empty() ? default_witness_dictionary() : std::vector<FunctionExpr>{};
  const std::span<const FunctionExpr> dict =
      dictionary.empty() ? std::span<const FunctionExpr>(defaults) : dictionary;
  for (const FunctionExpr& expr : dict) {
    consider(sample(expr, spec), expr.to_string(), true);
  }

  consider(sign_pattern(f, params.p, nullptr), "(signpattern global)", false);

  AtomicDecomposition decomposition = predual_upper_bound(f, params, range);
  std::sort(decomposition.atoms.begin(), decomposition.atoms.end(),
            [](const Atom& a, const Atom& b) { return a.cost > b.cost; });
  const std::size_t top = std::min<std::size_t>(4, decomposition.atoms.size());
  for (std::size_t i = 0; i < top; ++i) {
    const DyadicCube& cube = decomposition.atoms[i].cube;
    consider(sign_pattern(f, params.p, &cube), "(signpattern " + cube.to_string() + ")",
             false);
  }
  return best;
}

PredualBracket predual_norm_vector(const GridFunctionSeq& seq, const PredualParams& params,
                                   double q, std::span<const FunctionExpr> dictionary,
                                   std::optional<JRange> range) {
  const GridFunction reduced = pointwise_lq(seq, q);
  PredualBracket bracket;
  bracket.upper = predual_upper_bound(reduced, params, range).total_cost;
  bracket.certificate = predual_lower_bound(reduced, params, dictionary, range);
  bracket.lower = bracket.certificate.lower_bound;
  return bracket;
}

}  // namespace morrlab
