#pragma once

#include <string>

#include "scw/bitset.hpp"
#include "scw/cnf.hpp"

namespace scw {

// Bipartite incidence structure of a formula. Vertex order is fixed:
// variable vertices first (ascending variable id), then clause vertices
// (ascending clause id). Cut functions and decomposition files rely on
// this order being stable.
class IncidenceGraph {
public:
  IncidenceGraph() = default;
  explicit IncidenceGraph(const CnfFormula& f);

  int vertex_count() const { return static_cast<int>(adjacency_.size()); }
  int variable_vertex_count() const { return nv_; }
  int clause_vertex_count() const { return vertex_count() - nv_; }
  long long edge_count() const { return edges_; }

  bool is_variable_vertex(int v) const { return v < nv_; }
  int vertex_of_variable_index(int var_index) const { return var_index; }
  int vertex_of_clause(int clause_id) const { return nv_ + clause_id - 1; }
  int variable_index_of(int v) const { return v; }
  int clause_of(int v) const { return v - nv_ + 1; }
  int variable_of(int v) const { return var_ids_[static_cast<std::size_t>(v)]; }

  const Bitset& adjacency(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }

  // "v<var id>" or "c<clause id>", the labels used in decomposition files.
  std::string vertex_label(int v) const;

  Bitset no_vertices() const { return Bitset(static_cast<std::size_t>(vertex_count())); }
  Bitset all_vertices() const { return Bitset::all(static_cast<std::size_t>(vertex_count())); }

private:
  int nv_ = 0;
  long long edges_ = 0;
  std::vector<Bitset> adjacency_;
  std::vector<int> var_ids_;  // variable vertex -> variable id
};

// GF(2) rank of the adjacency submatrix between X and its complement.
// Zero for the empty or full vertex set.
int cut_rank(const IncidenceGraph& g, const Bitset& x);

// Number of distinct outside-neighborhoods among the vertices of X.
// X must be a nonempty proper subset.
int index_of(const IncidenceGraph& g, const Bitset& x);

// max(index_of(X), index_of(complement)); symmetric in X.
int iota(const IncidenceGraph& g, const Bitset& x);

}  // namespace scw
