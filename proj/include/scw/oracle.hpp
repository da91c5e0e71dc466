#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "scw/cnf.hpp"
#include "scw/decomp.hpp"
#include "scw/shapedp.hpp"

namespace scw {

// Enumeration guards. Oracles refuse oversized inputs instead of running
// unboundedly.
struct OracleBudget {
  int max_variables = 20;
  long long max_shape_pairs = 1 << 22;
};

struct BudgetExceededError : std::runtime_error {
  explicit BudgetExceededError(const std::string& what) : std::runtime_error(what) {}
};

// Model count by enumerating all assignments of the occurring variables.
Count brute_count(const CnfFormula& f, const OracleBudget& budget = {});

// Assignment over `domain` whose values come from `bits`: bit i of `bits`
// drives the i-th set position of `domain`.
Assignment assignment_from_bits(const Bitset& domain, uint64_t bits);

// Definition-level membership test: sigma must assign exactly the node's
// inside variables; true iff sigma satisfies exactly s.out among the outside
// clauses and every inside clause it misses lies in s.in.
bool has_shape(const CnfFormula& f, const NodeContext& z, const Assignment& sigma,
               const Shape& s);

// Shapes whose two components are both realizable: `out` ranges over the
// outside-clause projections of inside assignments, `in` over the
// inside-clause projections of outside assignments. Sorted.
std::vector<Shape> proper_shapes(const CnfFormula& f, const NodeContext& z,
                                 const OracleBudget& budget = {});

// Number of assignments of the node's inside variables that have shape s.
Count shape_count(const CnfFormula& f, const NodeContext& z, const Shape& s,
                  const OracleBudget& budget = {});

// Every (out, in) pair over the node's outside/inside clauses, regardless of
// realizability. Exponential in the clause count; test helper only.
std::vector<Shape> all_shapes(const CnfFormula& f, const NodeContext& z,
                              const OracleBudget& budget = {});

}  // namespace scw
