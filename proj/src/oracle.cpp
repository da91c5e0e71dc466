#include "scw/oracle.hpp"

#include <algorithm>
#include <cstdint>

namespace scw {

namespace {

void check_variable_budget(std::size_t n, const OracleBudget& budget, const char* who) {
  if (n > static_cast<std::size_t>(budget.max_variables) || n > 62)
    throw BudgetExceededError(std::string(who) + ": " + std::to_string(n) +
                              " variables exceed the enumeration budget of " +
                              std::to_string(std::min(budget.max_variables, 62)));
}

}  // namespace

Count brute_count(const CnfFormula& f, const OracleBudget& budget) {
  const int n = f.variable_count();
  check_variable_budget(static_cast<std::size_t>(n), budget, "brute_count");

  std::vector<uint64_t> pos(static_cast<std::size_t>(f.clause_count()), 0);
  std::vector<uint64_t> neg(static_cast<std::size_t>(f.clause_count()), 0);
  for (int c = 1; c <= f.clause_count(); ++c) {
    f.clause_pos_vars(c).for_each([&](int vi) { pos[static_cast<std::size_t>(c - 1)] |= uint64_t{1} << vi; });
    f.clause_neg_vars(c).for_each([&](int vi) { neg[static_cast<std::size_t>(c - 1)] |= uint64_t{1} << vi; });
  }

  unsigned long hits = 0;
  const uint64_t end = uint64_t{1} << n;
  for (uint64_t sigma = 0; sigma < end; ++sigma) {
    bool ok = true;
    for (std::size_t c = 0; c < pos.size() && ok; ++c)
      ok = (sigma & pos[c]) != 0 || (~sigma & neg[c]) != 0;
    hits += ok;
  }
  return Count(hits);
}

Assignment assignment_from_bits(const Bitset& domain, uint64_t bits) {
  Assignment a{domain, Bitset(domain.size())};
  int i = 0;
  domain.for_each([&](int v) {
    if ((bits >> i) & 1) a.values.set(static_cast<std::size_t>(v));
    ++i;
  });
  return a;
}

bool has_shape(const CnfFormula& f, const NodeContext& z, const Assignment& sigma,
               const Shape& s) {
  if (!(sigma.domain == z.vars))
    throw std::invalid_argument("has_shape: assignment domain must be the node's inside variables");
  if (!(satisfied_clauses(f, sigma, z.outside_clauses) == s.out)) return false;
  const Bitset satisfied_inside = satisfied_clauses(f, sigma, z.clauses);
  return (z.clauses - satisfied_inside).is_subset_of(s.in);
}

namespace {

// Distinct projections of `among` under all assignments of `domain`.
std::vector<Bitset> enumerate_projections(const CnfFormula& f, const Bitset& domain,
                                          const Bitset& among) {
  std::vector<Bitset> seen;
  const uint64_t end = uint64_t{1} << domain.count();
  for (uint64_t bits = 0; bits < end; ++bits)
    seen.push_back(satisfied_clauses(f, assignment_from_bits(domain, bits), among));
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  return seen;
}

}  // namespace

std::vector<Shape> proper_shapes(const CnfFormula& f, const NodeContext& z,
                                 const OracleBudget& budget) {
  check_variable_budget(z.vars.count(), budget, "proper_shapes");
  check_variable_budget(z.outside_vars.count(), budget, "proper_shapes");
  const std::vector<Bitset> outs = enumerate_projections(f, z.vars, z.outside_clauses);
  const std::vector<Bitset> ins = enumerate_projections(f, z.outside_vars, z.clauses);
  std::vector<Shape> shapes;
  shapes.reserve(outs.size() * ins.size());
  for (const Bitset& o : outs)
    for (const Bitset& i : ins) shapes.push_back(Shape{o, i});
  return shapes;
}

Count shape_count(const CnfFormula& f, const NodeContext& z, const Shape& s,
                  const OracleBudget& budget) {
  check_variable_budget(z.vars.count(), budget, "shape_count");
  unsigned long hits = 0;
  const uint64_t end = uint64_t{1} << z.vars.count();
  for (uint64_t bits = 0; bits < end; ++bits)
    hits += has_shape(f, z, assignment_from_bits(z.vars, bits), s);
  return Count(hits);
}

std::vector<Shape> all_shapes(const CnfFormula& f, const NodeContext& z,
                              const OracleBudget& budget) {
  const std::vector<int> out_ids = z.outside_clauses.to_indices();
  const std::vector<int> in_ids = z.clauses.to_indices();
  if (out_ids.size() + in_ids.size() > 62 ||
      (uint64_t{1} << (out_ids.size() + in_ids.size())) >
          static_cast<uint64_t>(budget.max_shape_pairs))
    throw BudgetExceededError("all_shapes: too many clause subsets to enumerate");

  std::vector<Shape> shapes;
  shapes.reserve(std::size_t{1} << (out_ids.size() + in_ids.size()));
  for (uint64_t ob = 0; ob < (uint64_t{1} << out_ids.size()); ++ob) {
    Bitset out = f.no_clauses();
    for (std::size_t i = 0; i < out_ids.size(); ++i)
      if ((ob >> i) & 1) out.set(static_cast<std::size_t>(out_ids[i]));
    for (uint64_t ib = 0; ib < (uint64_t{1} << in_ids.size()); ++ib) {
      Bitset in = f.no_clauses();
      for (std::size_t i = 0; i < in_ids.size(); ++i)
        if ((ib >> i) & 1) in.set(static_cast<std::size_t>(in_ids[i]));
      shapes.push_back(Shape{out, std::move(in)});
    }
  }
  std::sort(shapes.begin(), shapes.end());
  return shapes;
}

}  // namespace scw
