#include "scw/shapedp.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <future>
#include <stdexcept>
#include <utility>

namespace scw {

CutFamilies cut_families(const CnfFormula& f, const NodeContext& z) {
  CutFamilies fam;
  bool top_disjoint = false, bot_disjoint = false;
  z.outside_clauses.for_each([&](int c) {
    if (f.clause_vars(c + 1).is_subset_of(z.outside_vars))
      top_disjoint = true;
    else
      fam.top.push_back(f.clause_vars(c + 1) & z.vars);
  });
  z.clauses.for_each([&](int c) {
    if (f.clause_vars(c + 1).is_subset_of(z.vars))
      bot_disjoint = true;
    else
      fam.bot.push_back(f.clause_vars(c + 1) & z.outside_vars);
  });
  if (top_disjoint) fam.top.push_back(f.no_vars());
  if (bot_disjoint) fam.bot.push_back(f.no_vars());
  std::sort(fam.top.begin(), fam.top.end());
  fam.top.erase(std::unique(fam.top.begin(), fam.top.end()), fam.top.end());
  std::sort(fam.bot.begin(), fam.bot.end());
  fam.bot.erase(std::unique(fam.bot.begin(), fam.bot.end()), fam.bot.end());
  return fam;
}

namespace {

// All unions of one projection choice per family member. Deduplicating after
// every member keeps the intermediate set no larger than the final one.
std::vector<Bitset> union_choices(const CnfFormula& f, const std::vector<Bitset>& family,
                                  const Bitset& side_clauses) {
  std::vector<Bitset> acc{f.no_clauses()};
  for (const Bitset& x : family) {
    if (x.none()) continue;  // its only projection is the empty set
    const Bitset group = clauses_with_vars(f, x) & side_clauses;
    const std::vector<Bitset> choices = projection_set(f, group, x);
    std::vector<Bitset> next;
    next.reserve(acc.size() * choices.size());
    for (const Bitset& u : acc)
      for (const Bitset& c : choices) next.push_back(u | c);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

std::vector<Shape> restricted_shapes(const CnfFormula& f, const NodeContext& z) {
  const CutFamilies fam = cut_families(f, z);
  const std::vector<Bitset> outs = union_choices(f, fam.top, z.outside_clauses);
  const std::vector<Bitset> ins = union_choices(f, fam.bot, z.clauses);
  std::vector<Shape> shapes;
  shapes.reserve(outs.size() * ins.size());
  for (const Bitset& o : outs)
    for (const Bitset& i : ins) shapes.push_back(Shape{o, i});
  return shapes;
}

bool generates(const Shape& sx, const Shape& sy, const Shape& sz,
               const NodeContext& x, const NodeContext& y, const NodeContext& z) {
  return ((sx.out | sy.out) & z.outside_clauses) == sz.out &&
         ((sz.in | sy.out) & x.clauses) == sx.in &&
         ((sz.in | sx.out) & y.clauses) == sy.in;
}

ShapeTable leaf_table(const AnnotatedTree& at, int node) {
  const CnfFormula& f = *at.formula;
  const IncidenceGraph& g = *at.graph;
  const auto& nd = at.tree.nodes[static_cast<std::size_t>(node)];
  if (!nd.is_leaf()) throw std::invalid_argument("leaf_table: not a leaf");
  ShapeTable t;
  t.node = node;
  if (g.is_variable_vertex(nd.vertex)) {
    const int vi = g.variable_index_of(nd.vertex);
    Shape pos{f.positive_occurrences(vi), f.no_clauses()};
    Shape neg{f.negative_occurrences(vi), f.no_clauses()};
    if (pos == neg) {
      t.entries.emplace(std::move(pos), 2);
    } else {
      t.entries.emplace(std::move(pos), 1);
      t.entries.emplace(std::move(neg), 1);
    }
  } else {
    Bitset in = f.no_clauses();
    in.set(static_cast<std::size_t>(g.clause_of(nd.vertex) - 1));
    t.entries.emplace(Shape{f.no_clauses(), f.no_clauses()}, 0);
    t.entries.emplace(Shape{f.no_clauses(), std::move(in)}, 1);
  }
  return t;
}

ShapeTable combine_tables(const AnnotatedTree& at, int node, const ShapeTable& left,
                          const ShapeTable& right, CombineMode mode) {
  const CnfFormula& f = *at.formula;
  const auto& nd = at.tree.nodes[static_cast<std::size_t>(node)];
  if (nd.is_leaf()) throw std::invalid_argument("combine_tables: not an inner node");
  const NodeContext& xc = at.contexts[static_cast<std::size_t>(nd.left)];
  const NodeContext& yc = at.contexts[static_cast<std::size_t>(nd.right)];
  const NodeContext& zc = at.contexts[static_cast<std::size_t>(node)];

  ShapeTable t;
  t.node = node;
  for (Shape& s : restricted_shapes(f, zc)) t.entries.emplace(std::move(s), 0);

  if (mode == CombineMode::kFullScan) {
    for (const auto& [sx, vx] : left.entries) {
      if (vx == 0) continue;
      for (const auto& [sy, vy] : right.entries) {
        if (vy == 0) continue;
        const Count prod = vx * vy;
        for (auto& [sz, val] : t.entries)
          if (generates(sx, sy, sz, xc, yc, zc)) val += prod;
      }
    }
    return t;
  }

  // Condition on the parent's `out` is a function of (sx, sy); bucketing by
  // it prunes the inner scan without changing any value.
  std::unordered_map<Bitset, std::vector<std::pair<const Shape*, Count*>>, BitsetHash> by_out;
  for (auto& [sz, val] : t.entries) by_out[sz.out].push_back({&sz, &val});
  for (const auto& [sx, vx] : left.entries) {
    if (vx == 0) continue;
    for (const auto& [sy, vy] : right.entries) {
      if (vy == 0) continue;
      const Bitset out = (sx.out | sy.out) & zc.outside_clauses;
      const auto it = by_out.find(out);
      if (it == by_out.end()) continue;
      const Count prod = vx * vy;
      for (auto& [sz, val] : it->second)
        if (generates(sx, sy, *sz, xc, yc, zc)) *val += prod;
    }
  }
  return t;
}

Count count_models(const AnnotatedTree& at, CombineMode mode, int threads, CountStats* stats) {
  if (!at.formula || !at.graph) throw std::invalid_argument("count_models: tree is not annotated");
  const CnfFormula& f = *at.formula;
  if (f.clause_count() < 1 || f.variable_count() < 1)
    throw std::invalid_argument("count_models: needs at least one clause and one variable");

  std::atomic<long long> nodes{0};
  std::atomic<std::size_t> max_table{0};
  std::atomic<int> budget{std::max(0, threads - 1)};

  std::function<ShapeTable(int)> compute = [&](int u) -> ShapeTable {
    const auto& nd = at.tree.nodes[static_cast<std::size_t>(u)];
    ShapeTable t;
    if (nd.is_leaf()) {
      t = leaf_table(at, u);
    } else if (budget.fetch_sub(1) > 0) {
      auto other = std::async(std::launch::async, compute, nd.left);
      ShapeTable rt = compute(nd.right);
      ShapeTable lt = other.get();
      budget.fetch_add(1);
      t = combine_tables(at, u, lt, rt, mode);
    } else {
      budget.fetch_add(1);
      ShapeTable lt = compute(nd.left);
      ShapeTable rt = compute(nd.right);
      t = combine_tables(at, u, lt, rt, mode);
    }
    nodes.fetch_add(1);
    std::size_t cur = max_table.load();
    while (cur < t.entries.size() && !max_table.compare_exchange_weak(cur, t.entries.size())) {
    }
    return t;
  };

  const ShapeTable root = compute(at.tree.root);
  if (stats) {
    stats->max_table = max_table.load();
    stats->nodes = nodes.load();
  }
  const auto it = root.entries.find(Shape{f.no_clauses(), f.no_clauses()});
  return it == root.entries.end() ? Count(0) : it->second;
}

}  // namespace scw
