#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "scw/bitset.hpp"
#include "scw/cnf.hpp"
#include "scw/incidence.hpp"

namespace scw {

// Rooted binary tree whose leaves carry graph vertices. Every inner node
// has exactly two children.
struct DecompositionTree {
  struct Node {
    int left = -1;
    int right = -1;
    int vertex = -1;  // graph vertex at a leaf, -1 for inner nodes
    bool is_leaf() const { return vertex >= 0; }
  };

  std::vector<Node> nodes;
  int root = -1;

  int add_leaf(int vertex) {
    nodes.push_back(Node{-1, -1, vertex});
    return static_cast<int>(nodes.size()) - 1;
  }
  int add_inner(int left, int right) {
    nodes.push_back(Node{left, right, -1});
    return static_cast<int>(nodes.size()) - 1;
  }

  int leaf_count() const;
  std::vector<int> postorder() const;

  // Structure-only encoding, invariant under node renumbering and child
  // order. Usable for equality checks and deterministic tie-breaking.
  std::vector<int> canonical_encoding() const;
};

enum class CutFunction { kCutRank, kIota };

// Maximum of the cut function over all tree-edge bipartitions; 0 when the
// graph has fewer than two vertices.
int f_width(const DecompositionTree& t, const IncidenceGraph& g, CutFunction f);

struct ExactSearchLimitError : std::runtime_error {
  explicit ExactSearchLimitError(const std::string& what) : std::runtime_error(what) {}
};

// Width-minimal tree by exhaustive search over all binary leaf trees,
// via dynamic programming over vertex subsets. Deterministic.
DecompositionTree exact_min_index_tree(const IncidenceGraph& g, int max_vertices = 10);

// Deterministic greedy construction: order vertices by nearest masked
// neighborhood, build a caterpillar, then one leaf-relocation pass keeping
// strict index-width improvements. No width guarantee.
DecompositionTree heuristic_tree(const IncidenceGraph& g);

struct DecompParseError : std::runtime_error {
  DecompParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

// Line format: "root <id>", "node <id> inner <left> <right>",
// "node <id> leaf <label>" with labels v<var id> / c<clause id>;
// '#' starts a comment. Leaf labels must cover the graph bijectively.
DecompositionTree parse_decomposition(const std::string& text, const IncidenceGraph& g);
std::string emit_decomposition(const DecompositionTree& t, const IncidenceGraph& g);

// Leaf sets and cut measures for one node. Variable sets run over the
// formula's variable indexes, clause sets over clause positions.
struct NodeContext {
  Bitset leaves;           // graph vertices under this node
  Bitset vars, clauses;    // inside the subtree
  Bitset outside_vars, outside_clauses;
  int cut_rank = 0;        // of (leaves, rest); 0 at the root
  int iota = 0;
};

struct AnnotatedTree {
  DecompositionTree tree;
  std::vector<NodeContext> contexts;
  int rankwidth = 0;
  int index = 0;
  const CnfFormula* formula = nullptr;
  const IncidenceGraph* graph = nullptr;

  const NodeContext& context(int node) const { return contexts[static_cast<std::size_t>(node)]; }
};

// Bottom-up per-node annotation. Throws std::invalid_argument when the
// tree's leaves do not match the graph's vertices.
AnnotatedTree annotate(const DecompositionTree& t, const CnfFormula& f, const IncidenceGraph& g);

}  // namespace scw
