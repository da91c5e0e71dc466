#pragma once

#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scw/cnf.hpp"
#include "scw/decomp.hpp"
#include "scw/incidence.hpp"

namespace scw::test {

// (x1 v x2)(-x1 v x2)(-x2 v x3), two models: 111 and 011.
inline CnfFormula fstar() {
  return normalize(parse_dimacs("p cnf 3 3\n1 2 0\n-1 2 0\n-2 3 0\n")).formula;
}

// Model count by walking every total assignment with the clause-level
// satisfies() predicate; independent of the oracle module's bit tricks.
inline unsigned long naive_count(const CnfFormula& f) {
  const int n = f.variable_count();
  unsigned long hits = 0;
  for (uint64_t bits = 0; bits < (uint64_t{1} << n); ++bits) {
    Assignment a{f.all_vars(), Bitset(static_cast<std::size_t>(n))};
    for (int i = 0; i < n; ++i)
      if ((bits >> i) & 1) a.values.set(static_cast<std::size_t>(i));
    bool ok = true;
    for (int c = 1; c <= f.clause_count() && ok; ++c) ok = satisfies(f, a, c);
    hits += ok;
  }
  return hits;
}

// Random normalized formula: every clause picks distinct variables, so no
// tautologies; duplicates may still merge.
inline CnfFormula random_normalized(std::mt19937& rng, int nv, int m, int maxw = 3) {
  std::vector<Clause> clauses;
  std::vector<int> vars(static_cast<std::size_t>(nv));
  std::iota(vars.begin(), vars.end(), 1);
  for (int c = 0; c < m; ++c) {
    std::shuffle(vars.begin(), vars.end(), rng);
    const int w = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(maxw, nv)));
    Clause cl;
    cl.id = c + 1;
    for (int i = 0; i < w; ++i) cl.literals.push_back({vars[static_cast<std::size_t>(i)], rng() % 2 == 0});
    clauses.push_back(std::move(cl));
  }
  return normalize(CnfFormula(std::move(clauses), nv)).formula;
}

// Raw DIMACS text with independently sampled literals: tautologies,
// duplicate literals and duplicate clauses all occur.
inline std::string random_raw_dimacs(std::mt19937& rng, int nv, int m, int maxw = 3) {
  std::ostringstream out;
  out << "c random instance\np cnf " << nv << " " << m << "\n";
  for (int c = 0; c < m; ++c) {
    const int w = 1 + static_cast<int>(rng() % static_cast<unsigned>(maxw));
    for (int i = 0; i < w; ++i) {
      const int var = 1 + static_cast<int>(rng() % static_cast<unsigned>(nv));
      out << (rng() % 2 ? var : -var) << " ";
    }
    out << "0\n";
  }
  return out.str();
}

// Random rooted binary tree over vertices 0..n-1, built by joining random
// forest roots.
inline DecompositionTree random_tree(std::mt19937& rng, int n) {
  DecompositionTree t;
  std::vector<int> roots;
  for (int v = 0; v < n; ++v) roots.push_back(t.add_leaf(v));
  while (roots.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, roots.size() - 1);
    const std::size_t i = pick(rng);
    std::swap(roots[i], roots.back());
    const int a = roots.back();
    roots.pop_back();
    const std::size_t j = pick(rng) % roots.size();
    roots[j] = t.add_inner(a, roots[j]);
  }
  t.root = roots[0];
  return t;
}

// Copy of `base` with a fresh leaf for `vertex` grafted above node `target`.
inline DecompositionTree insert_leaf_above(const DecompositionTree& base, int target,
                                           int vertex) {
  DecompositionTree t = base;
  const int leaf = t.add_leaf(vertex);
  const int inner = t.add_inner(target, leaf);
  if (target == t.root) {
    t.root = inner;
    return t;
  }
  for (std::size_t u = 0; u + 2 < t.nodes.size(); ++u) {
    if (t.nodes[u].left == target) {
      t.nodes[u].left = inner;
      return t;
    }
    if (t.nodes[u].right == target) {
      t.nodes[u].right = inner;
      return t;
    }
  }
  return t;
}

template <class Fn>
void for_each_tree_rec(const DecompositionTree& t, int next, int n, Fn& fn) {
  if (next == n) {
    fn(t);
    return;
  }
  const int size = static_cast<int>(t.nodes.size());
  for (int u = 0; u < size; ++u) for_each_tree_rec(insert_leaf_above(t, u, next), next + 1, n, fn);
}

// Every rooted binary leaf-labeled tree over 0..n-1, (2n-3)!! of them,
// each exactly once. n >= 2.
template <class Fn>
void for_each_tree(int n, Fn fn) {
  DecompositionTree t;
  const int a = t.add_leaf(0);
  const int b = t.add_leaf(1);
  t.root = t.add_inner(a, b);
  for_each_tree_rec(t, 2, n, fn);
}

inline std::string write_temp_file(const std::string& stem, const std::string& content) {
  static int counter = 0;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "scw_test_files";
  fs::create_directories(dir);
  const fs::path p =
      dir / (stem + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::ofstream out(p);
  out << content;
  return p.string();
}

}  // namespace scw::test
