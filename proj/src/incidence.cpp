#include "scw/incidence.hpp"

#include <stdexcept>
#include <unordered_set>

namespace scw {

IncidenceGraph::IncidenceGraph(const CnfFormula& f) {
  nv_ = f.variable_count();
  const int n = nv_ + f.clause_count();
  adjacency_.assign(static_cast<std::size_t>(n), Bitset(static_cast<std::size_t>(n)));
  var_ids_.resize(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < nv_; ++i) var_ids_[static_cast<std::size_t>(i)] = f.variable_at(i);
  for (int c = 1; c <= f.clause_count(); ++c) {
    int cv = vertex_of_clause(c);
    f.clause_vars(c).for_each([&](int vi) {
      adjacency_[static_cast<std::size_t>(vi)].set(static_cast<std::size_t>(cv));
      adjacency_[static_cast<std::size_t>(cv)].set(static_cast<std::size_t>(vi));
      ++edges_;
    });
  }
}

std::string IncidenceGraph::vertex_label(int v) const {
  if (is_variable_vertex(v)) return "v" + std::to_string(variable_of(v));
  return "c" + std::to_string(clause_of(v));
}

int cut_rank(const IncidenceGraph& g, const Bitset& x) {
  const std::size_t n = static_cast<std::size_t>(g.vertex_count());
  std::size_t inside = x.count();
  if (inside == 0 || inside == n) return 0;
  const Bitset mask = ~x;

  // In-place elimination over the masked rows of X.
  std::vector<std::pair<int, Bitset>> pivots;  // (pivot column, row)
  int rank = 0;
  x.for_each([&](int v) {
    if (g.adjacency(v).is_subset_of(x)) return;  // zero row, nothing to eliminate
    Bitset row = g.adjacency(v) & mask;
    for (const auto& [col, prow] : pivots)
      if (row.test(static_cast<std::size_t>(col))) row ^= prow;
    int col = row.find_first();
    if (col >= 0) {
      pivots.emplace_back(col, std::move(row));
      ++rank;
    }
  });
  return rank;
}

int index_of(const IncidenceGraph& g, const Bitset& x) {
  const std::size_t n = static_cast<std::size_t>(g.vertex_count());
  std::size_t inside = x.count();
  if (inside == 0 || inside == n)
    throw std::invalid_argument("index_of requires a nonempty proper vertex subset");
  const Bitset mask = ~x;
  bool zero_row = false;
  std::unordered_set<Bitset, BitsetHash> rows;
  x.for_each([&](int v) {
    if (g.adjacency(v).is_subset_of(x))
      zero_row = true;
    else
      rows.insert(g.adjacency(v) & mask);
  });
  return static_cast<int>(rows.size()) + (zero_row ? 1 : 0);
}

int iota(const IncidenceGraph& g, const Bitset& x) {
  return std::max(index_of(g, x), index_of(g, ~x));
}

}  // namespace scw
