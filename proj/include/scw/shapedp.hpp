#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "scw/bitset.hpp"
#include "scw/cnf.hpp"
#include "scw/decomp.hpp"

namespace scw {

using Count = mpz_class;

// Projection pair at a node z: `out` are clauses outside the subtree that
// the inside assignment satisfies, `in` are clauses inside the subtree that
// a matching outside assignment is expected to satisfy.
struct Shape {
  Bitset out, in;
  friend bool operator==(const Shape&, const Shape&) = default;
  friend std::strong_ordering operator<=>(const Shape&, const Shape&) = default;
};

struct ShapeHash {
  std::size_t operator()(const Shape& s) const {
    std::size_t h = s.out.hash();
    return h ^ (s.in.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
  }
};

// Per-node table: for each tracked shape, how many assignments of the
// subtree's variables take it. Values are exact for shapes whose components
// are realizable projections and never overcount otherwise.
struct ShapeTable {
  int node = -1;
  std::unordered_map<Shape, Count, ShapeHash> entries;
};

// Variable subsets cut out of clauses by the node's bipartition: `top`
// intersects outside clauses with the inside variables, `bot` intersects
// inside clauses with the outside variables. Both deduplicated and sorted.
struct CutFamilies {
  std::vector<Bitset> top, bot;
};

CutFamilies cut_families(const CnfFormula& f, const NodeContext& z);

// All shapes assembled from per-subset projection choices: every `out` is a
// union of one projection choice per member of `top`, every `in` one per
// member of `bot`. Sorted, duplicate-free. Contains every realizable shape.
std::vector<Shape> restricted_shapes(const CnfFormula& f, const NodeContext& z);

// Whether the child shapes (sx at x, sy at y) combine into sz at their
// parent z: the outside satisfactions merge onto z's outside, and each
// child's expectation is exactly what the parent expects plus what the
// sibling provides, restricted to that child's clauses.
bool generates(const Shape& sx, const Shape& sy, const Shape& sz,
               const NodeContext& x, const NodeContext& y, const NodeContext& z);

// Table for a leaf: a clause leaf can only be satisfied from outside, a
// variable leaf splits its two assignments by the clauses they satisfy.
ShapeTable leaf_table(const AnnotatedTree& at, int node);

enum class CombineMode {
  kFullScan,   // scan every (sx, sy, sz) triple
  kFiltered,   // bucket z's shapes by `out`, derived from (sx, sy)
};

// Inner-node step: for every generating triple, add the product of the
// child values onto the parent shape. Both modes produce identical tables.
ShapeTable combine_tables(const AnnotatedTree& at, int node, const ShapeTable& left,
                          const ShapeTable& right, CombineMode mode = CombineMode::kFullScan);

struct CountStats {
  std::size_t max_table = 0;  // largest table over all nodes
  long long nodes = 0;        // tables computed
};

// Model count over the occurring variables via bottom-up tables, read off
// the root's empty shape. The formula must have at least one clause and one
// variable; degenerate inputs are the caller's business. `threads` > 1
// allows sibling subtrees to be computed concurrently.
Count count_models(const AnnotatedTree& at, CombineMode mode = CombineMode::kFullScan,
                   int threads = 1, CountStats* stats = nullptr);

}  // namespace scw
