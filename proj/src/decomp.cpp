#include "scw/decomp.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace scw {

int DecompositionTree::leaf_count() const {
  int n = 0;
  for (const auto& nd : nodes)
    if (nd.is_leaf()) ++n;
  return n;
}

std::vector<int> DecompositionTree::postorder() const {
  std::vector<int> out;
  if (root < 0) return out;
  std::vector<std::pair<int, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto [u, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      out.push_back(u);
      continue;
    }
    stack.push_back({u, true});
    const Node& nd = nodes[static_cast<std::size_t>(u)];
    if (!nd.is_leaf()) {
      stack.push_back({nd.right, false});
      stack.push_back({nd.left, false});
    }
  }
  return out;
}

std::vector<int> DecompositionTree::canonical_encoding() const {
  if (root < 0) return {};
  std::vector<std::vector<int>> enc(nodes.size());
  for (int u : postorder()) {
    const Node& nd = nodes[static_cast<std::size_t>(u)];
    auto& e = enc[static_cast<std::size_t>(u)];
    if (nd.is_leaf()) {
      e = {0, nd.vertex};
      continue;
    }
    auto& a = enc[static_cast<std::size_t>(nd.left)];
    auto& b = enc[static_cast<std::size_t>(nd.right)];
    if (b < a) a.swap(b);
    e.reserve(1 + a.size() + b.size());
    e.push_back(1);
    e.insert(e.end(), a.begin(), a.end());
    e.insert(e.end(), b.begin(), b.end());
  }
  return enc[static_cast<std::size_t>(root)];
}

namespace {

// Leaf vertex sets per node, in postorder storage.
std::vector<Bitset> leaf_sets(const DecompositionTree& t, const IncidenceGraph& g) {
  std::vector<Bitset> leaves(t.nodes.size());
  for (int u : t.postorder()) {
    const auto& nd = t.nodes[static_cast<std::size_t>(u)];
    Bitset s = g.no_vertices();
    if (nd.is_leaf()) {
      s.set(static_cast<std::size_t>(nd.vertex));
    } else {
      s = leaves[static_cast<std::size_t>(nd.left)];
      s |= leaves[static_cast<std::size_t>(nd.right)];
    }
    leaves[static_cast<std::size_t>(u)] = std::move(s);
  }
  return leaves;
}

}  // namespace

int f_width(const DecompositionTree& t, const IncidenceGraph& g, CutFunction f) {
  if (g.vertex_count() < 2 || t.root < 0) return 0;
  auto leaves = leaf_sets(t, g);
  int w = 0;
  for (int u : t.postorder()) {
    if (u == t.root) continue;
    const Bitset& s = leaves[static_cast<std::size_t>(u)];
    w = std::max(w, f == CutFunction::kCutRank ? cut_rank(g, s) : iota(g, s));
  }
  return w;
}

DecompositionTree exact_min_index_tree(const IncidenceGraph& g, int max_vertices) {
  const int n = g.vertex_count();
  if (n > max_vertices)
    throw ExactSearchLimitError("graph has " + std::to_string(n) +
                                " vertices, exact search is limited to " +
                                std::to_string(max_vertices) +
                                "; use the heuristic or supply a decomposition file");
  if (n > 16)
    throw ExactSearchLimitError("exact search handles at most 16 vertices");

  DecompositionTree t;
  if (n == 0) return t;
  if (n == 1) {
    t.root = t.add_leaf(0);
    return t;
  }

  std::vector<uint32_t> adj(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v)
    g.adjacency(v).for_each([&](int u) { adj[static_cast<std::size_t>(v)] |= uint32_t{1} << u; });

  const uint32_t full = (uint32_t{1} << n) - 1;

  // iota of the bipartition (mask, rest), for every nonempty proper mask
  std::vector<int> f(full + 1, 0);
  std::vector<uint32_t> rows;
  rows.reserve(static_cast<std::size_t>(n));
  auto side_index = [&](uint32_t mask) {
    rows.clear();
    const uint32_t comp = full & ~mask;
    for (uint32_t m = mask; m; m &= m - 1)
      rows.push_back(adj[static_cast<std::size_t>(__builtin_ctz(m))] & comp);
    std::sort(rows.begin(), rows.end());
    return static_cast<int>(std::unique(rows.begin(), rows.end()) - rows.begin());
  };
  for (uint32_t mask = 1; mask < full; ++mask)
    f[mask] = std::max(side_index(mask), side_index(full & ~mask));

  // cost[mask]: best achievable max-iota over the edges strictly inside a
  // subtree holding exactly the leaves of mask (the edge above it not
  // counted). Splitting into children a and b adds their two edges, whose
  // bipartitions in the whole graph are (a, rest) and (b, rest).
  std::vector<int> cost(full + 1, 0);
  std::vector<uint32_t> split(full + 1, 0);
  for (uint32_t mask = 1; mask <= full; ++mask) {
    if (__builtin_popcount(mask) < 2) continue;
    const uint32_t low = mask & (~mask + 1);
    int best = INT_MAX;
    uint32_t best_a = 0;
    for (uint32_t a = (mask - 1) & mask; a; a = (a - 1) & mask) {
      if (!(a & low)) continue;
      const uint32_t b = mask & ~a;
      const int v = std::max(std::max(cost[a], cost[b]), std::max(f[a], f[b]));
      if (v < best) {
        best = v;
        best_a = a;
      }
    }
    cost[mask] = best;
    split[mask] = best_a;
  }

  std::function<int(uint32_t)> build = [&](uint32_t mask) -> int {
    if (__builtin_popcount(mask) == 1) return t.add_leaf(__builtin_ctz(mask));
    const uint32_t a = split[mask];
    const int l = build(a);
    const int r = build(mask & ~a);
    return t.add_inner(l, r);
  };
  t.root = build(full);
  return t;
}

DecompositionTree heuristic_tree(const IncidenceGraph& g) {
  const int n = g.vertex_count();
  DecompositionTree t;
  if (n == 0) return t;
  if (n == 1) {
    t.root = t.add_leaf(0);
    return t;
  }

  // Greedy order: append the vertex whose adjacency row, masked to the
  // still-open vertices, is Hamming-nearest to some placed vertex's row.
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  Bitset placed = g.no_vertices();
  order.push_back(0);
  placed.set(0);
  while (static_cast<int>(order.size()) < n) {
    int best = -1;
    std::size_t best_d = SIZE_MAX;
    for (int u = 0; u < n; ++u) {
      if (placed.test(static_cast<std::size_t>(u))) continue;
      Bitset open = ~placed;
      open.reset(static_cast<std::size_t>(u));
      std::size_t d = SIZE_MAX;
      for (int v : order) {
        Bitset diff = g.adjacency(u);
        diff ^= g.adjacency(v);
        diff &= open;
        d = std::min(d, diff.count());
      }
      if (d < best_d) {
        best_d = d;
        best = u;
      }
    }
    order.push_back(best);
    placed.set(static_cast<std::size_t>(best));
  }

  int spine = t.add_leaf(order[0]);
  for (int i = 1; i < n; ++i) spine = t.add_inner(spine, t.add_leaf(order[static_cast<std::size_t>(i)]));
  t.root = spine;

  std::unordered_map<Bitset, int, BitsetHash> memo;
  auto cut_iota = [&](const Bitset& x) {
    Bitset key = x;
    if (Bitset c = ~x; c < key) key = std::move(c);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const int v = iota(g, x);
    memo.emplace(std::move(key), v);
    return v;
  };
  auto width_of = [&](const DecompositionTree& tt) {
    auto leaves = leaf_sets(tt, g);
    int w = 0;
    for (int u : tt.postorder())
      if (u != tt.root) w = std::max(w, cut_iota(leaves[static_cast<std::size_t>(u)]));
    return w;
  };

  auto without_leaf = [](const DecompositionTree& tt, int vertex) {
    DecompositionTree out;
    std::function<int(int)> copy = [&](int u) -> int {
      const auto& nd = tt.nodes[static_cast<std::size_t>(u)];
      if (nd.is_leaf()) return nd.vertex == vertex ? -1 : out.add_leaf(nd.vertex);
      const int l = copy(nd.left);
      const int r = copy(nd.right);
      if (l < 0) return r;
      if (r < 0) return l;
      return out.add_inner(l, r);
    };
    out.root = copy(tt.root);
    return out;
  };

  // Reinsert `vertex` on the edge above `target` (above the whole tree when
  // target is the root).
  auto insert_above = [](const DecompositionTree& base, int target, int vertex) {
    DecompositionTree out;
    std::function<int(int)> copy = [&](int u) -> int {
      const auto& nd = base.nodes[static_cast<std::size_t>(u)];
      int id;
      if (nd.is_leaf()) {
        id = out.add_leaf(nd.vertex);
      } else {
        const int l = copy(nd.left);
        const int r = copy(nd.right);
        id = out.add_inner(l, r);
      }
      if (u == target) id = out.add_inner(id, out.add_leaf(vertex));
      return id;
    };
    out.root = copy(base.root);
    return out;
  };

  auto preorder = [](const DecompositionTree& tt) {
    std::vector<int> out;
    std::vector<int> stack{tt.root};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      out.push_back(u);
      const auto& nd = tt.nodes[static_cast<std::size_t>(u)];
      if (!nd.is_leaf()) {
        stack.push_back(nd.right);
        stack.push_back(nd.left);
      }
    }
    return out;
  };

  // One leaf-relocation pass, keeping only strict improvements; among equal
  // improvements the earliest insertion point wins.
  int width = width_of(t);
  for (int v = 0; v < n && t.leaf_count() > 2; ++v) {
    DecompositionTree base = without_leaf(t, v);
    DecompositionTree pick;
    int pick_width = width;
    bool found = false;
    for (int pos : preorder(base)) {
      DecompositionTree cand = insert_above(base, pos, v);
      const int w = width_of(cand);
      if (w < pick_width) {
        pick_width = w;
        pick = std::move(cand);
        found = true;
      }
    }
    if (found) {
      t = std::move(pick);
      width = pick_width;
    }
  }
  return t;
}

namespace {

int parse_label(const std::string& label, const IncidenceGraph& g,
                const std::unordered_map<int, int>& var_to_vertex, int line) {
  if (label.size() < 2 || (label[0] != 'v' && label[0] != 'c'))
    throw DecompParseError(line, "unknown vertex label '" + label + "'");
  int num = 0;
  for (std::size_t i = 1; i < label.size(); ++i) {
    if (label[i] < '0' || label[i] > '9' || num > 100000000)
      throw DecompParseError(line, "unknown vertex label '" + label + "'");
    num = num * 10 + (label[i] - '0');
  }
  if (label[0] == 'v') {
    auto it = var_to_vertex.find(num);
    if (it == var_to_vertex.end())
      throw DecompParseError(line, "unknown vertex label '" + label + "'");
    return it->second;
  }
  if (num < 1 || num > g.clause_vertex_count())
    throw DecompParseError(line, "unknown vertex label '" + label + "'");
  return g.vertex_of_clause(num);
}

}  // namespace

DecompositionTree parse_decomposition(const std::string& text, const IncidenceGraph& g) {
  struct Raw {
    bool leaf;
    int a = 0, b = 0;  // children for inner, graph vertex in a for leaf
    int line = 0;
  };
  std::unordered_map<int, int> var_to_vertex;
  for (int v = 0; v < g.variable_vertex_count(); ++v) var_to_vertex[g.variable_of(v)] = v;

  std::unordered_map<int, Raw> decls;
  bool have_root = false;
  int root_id = 0, root_line = 0;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "root") {
      if (have_root) throw DecompParseError(lineno, "duplicate root line");
      if (!(ls >> root_id)) throw DecompParseError(lineno, "expected a node id after 'root'");
      have_root = true;
      root_line = lineno;
    } else if (word == "node") {
      int id = 0;
      if (!(ls >> id)) throw DecompParseError(lineno, "expected a node id after 'node'");
      if (decls.count(id)) throw DecompParseError(lineno, "duplicate node " + std::to_string(id));
      std::string kind;
      ls >> kind;
      if (kind == "inner") {
        Raw r{false, 0, 0, lineno};
        if (!(ls >> r.a >> r.b)) throw DecompParseError(lineno, "inner node needs two child ids");
        decls.emplace(id, r);
      } else if (kind == "leaf") {
        std::string label;
        if (!(ls >> label)) throw DecompParseError(lineno, "leaf node needs a vertex label");
        decls.emplace(id, Raw{true, parse_label(label, g, var_to_vertex, lineno), 0, lineno});
      } else {
        throw DecompParseError(lineno, "expected 'inner' or 'leaf' after the node id");
      }
    } else {
      throw DecompParseError(lineno, "expected 'root' or 'node', got '" + word + "'");
    }
    if (std::string extra; ls >> extra)
      throw DecompParseError(lineno, "trailing token '" + extra + "'");
  }

  if (!have_root) throw DecompParseError(lineno, "missing root line");
  if (!decls.count(root_id)) throw DecompParseError(root_line, "root references undefined node " + std::to_string(root_id));

  std::unordered_map<int, int> parent_line;
  for (const auto& [id, r] : decls) {
    if (r.leaf) continue;
    for (int child : {r.a, r.b}) {
      if (!decls.count(child))
        throw DecompParseError(r.line, "undefined child node " + std::to_string(child));
      if (child == root_id)
        throw DecompParseError(r.line, "root node " + std::to_string(child) + " used as a child");
      if (!parent_line.emplace(child, r.line).second)
        throw DecompParseError(r.line, "node " + std::to_string(child) + " has two parents");
    }
  }

  Bitset seen_vertex(static_cast<std::size_t>(g.vertex_count()));
  std::vector<int> stack{root_id};
  std::size_t visited = 0;
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    ++visited;
    const Raw& r = decls.at(id);
    if (r.leaf) {
      if (seen_vertex.test(static_cast<std::size_t>(r.a)))
        throw DecompParseError(r.line, "duplicate leaf label " + g.vertex_label(r.a));
      seen_vertex.set(static_cast<std::size_t>(r.a));
    } else {
      stack.push_back(r.b);
      stack.push_back(r.a);
    }
  }
  if (visited < decls.size()) {
    int orphan = INT_MAX;
    for (const auto& [id, r] : decls)
      if (!parent_line.count(id) && id != root_id) orphan = std::min(orphan, id);
    if (orphan != INT_MAX)
      throw DecompParseError(0, "node " + std::to_string(orphan) + " is not reachable from the root");
    throw DecompParseError(0, "cycle among the declared nodes");
  }
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!seen_vertex.test(static_cast<std::size_t>(v)))
      throw DecompParseError(0, "missing vertex " + g.vertex_label(v));

  DecompositionTree t;
  std::unordered_map<int, int> built;
  std::vector<std::pair<int, bool>> bstack{{root_id, false}};
  while (!bstack.empty()) {
    auto [id, expanded] = bstack.back();
    bstack.pop_back();
    const Raw& r = decls.at(id);
    if (r.leaf) {
      built[id] = t.add_leaf(r.a);
    } else if (!expanded) {
      bstack.push_back({id, true});
      bstack.push_back({r.b, false});
      bstack.push_back({r.a, false});
    } else {
      built[id] = t.add_inner(built.at(r.a), built.at(r.b));
    }
  }
  t.root = built.at(root_id);
  return t;
}

std::string emit_decomposition(const DecompositionTree& t, const IncidenceGraph& g) {
  std::ostringstream out;
  if (t.root < 0) return out.str();
  out << "root " << t.root << "\n";
  for (int u : t.postorder()) {
    const auto& nd = t.nodes[static_cast<std::size_t>(u)];
    if (nd.is_leaf())
      out << "node " << u << " leaf " << g.vertex_label(nd.vertex) << "\n";
    else
      out << "node " << u << " inner " << nd.left << " " << nd.right << "\n";
  }
  return out.str();
}

AnnotatedTree annotate(const DecompositionTree& t, const CnfFormula& f, const IncidenceGraph& g) {
  const int n = g.vertex_count();
  Bitset seen(static_cast<std::size_t>(n));
  int leaves = 0;
  for (const auto& nd : t.nodes) {
    if (!nd.is_leaf()) continue;
    ++leaves;
    if (nd.vertex < 0 || nd.vertex >= n) throw std::invalid_argument("leaf vertex out of range");
    if (seen.test(static_cast<std::size_t>(nd.vertex)))
      throw std::invalid_argument("vertex at two leaves");
    seen.set(static_cast<std::size_t>(nd.vertex));
  }
  if (leaves != n) throw std::invalid_argument("tree leaves do not cover the graph");

  AnnotatedTree at;
  at.tree = t;
  at.formula = &f;
  at.graph = &g;
  at.contexts.assign(t.nodes.size(), NodeContext{});
  for (int u : t.postorder()) {
    NodeContext& c = at.contexts[static_cast<std::size_t>(u)];
    const auto& nd = t.nodes[static_cast<std::size_t>(u)];
    if (nd.is_leaf()) {
      c.leaves = g.no_vertices();
      c.leaves.set(static_cast<std::size_t>(nd.vertex));
      c.vars = f.no_vars();
      c.clauses = f.no_clauses();
      if (g.is_variable_vertex(nd.vertex))
        c.vars.set(static_cast<std::size_t>(g.variable_index_of(nd.vertex)));
      else
        c.clauses.set(static_cast<std::size_t>(g.clause_of(nd.vertex) - 1));
    } else {
      const NodeContext& l = at.contexts[static_cast<std::size_t>(nd.left)];
      const NodeContext& r = at.contexts[static_cast<std::size_t>(nd.right)];
      c.leaves = l.leaves | r.leaves;
      c.vars = l.vars | r.vars;
      c.clauses = l.clauses | r.clauses;
    }
    c.outside_vars = f.all_vars() - c.vars;
    c.outside_clauses = f.all_clauses() - c.clauses;
    if (u != t.root && n >= 2) {
      c.cut_rank = cut_rank(g, c.leaves);
      c.iota = iota(g, c.leaves);
      at.rankwidth = std::max(at.rankwidth, c.cut_rank);
      at.index = std::max(at.index, c.iota);
    }
  }
  return at;
}

}  // namespace scw
