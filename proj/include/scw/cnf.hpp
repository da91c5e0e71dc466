#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "scw/bitset.hpp"

namespace scw {

struct Literal {
  int var = 0;  // 1-based DIMACS index
  bool positive = true;
  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

// Literals are kept sorted and distinct. A raw parsed clause may be
// tautological; normalize() removes those.
struct Clause {
  std::vector<Literal> literals;
  int id = 0;  // 1-based position in the owning formula

  bool empty() const { return literals.empty(); }
  bool tautological() const;
  std::vector<int> vars() const;  // distinct, ascending
};

// Clause list plus derived occurrence structure. Variable "indexes" number
// the occurring variables 0..variable_count()-1 in ascending DIMACS order;
// clause bit i stands for the clause with id i+1.
class CnfFormula {
public:
  CnfFormula() = default;
  CnfFormula(std::vector<Clause> clauses, int declared_variables);

  int clause_count() const { return static_cast<int>(clauses_.size()); }
  long long length() const { return length_; }
  int declared_variables() const { return declared_variables_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const Clause& clause(int id) const { return clauses_[static_cast<std::size_t>(id - 1)]; }

  const std::vector<int>& variables() const { return vars_; }  // occurring, ascending
  int variable_count() const { return static_cast<int>(vars_.size()); }
  int variable_index(int var) const;       // -1 when var does not occur
  int variable_at(int index) const { return vars_[static_cast<std::size_t>(index)]; }

  // Bit sets over variable indexes.
  const Bitset& clause_vars(int id) const { return clause_vars_[static_cast<std::size_t>(id - 1)]; }
  const Bitset& clause_pos_vars(int id) const { return clause_pos_vars_[static_cast<std::size_t>(id - 1)]; }
  const Bitset& clause_neg_vars(int id) const { return clause_neg_vars_[static_cast<std::size_t>(id - 1)]; }

  // Bit sets over clauses.
  const Bitset& positive_occurrences(int var_index) const { return pos_occ_[static_cast<std::size_t>(var_index)]; }
  const Bitset& negative_occurrences(int var_index) const { return neg_occ_[static_cast<std::size_t>(var_index)]; }

  std::vector<int> free_variables() const;  // declared but not occurring

  Bitset no_clauses() const { return Bitset(static_cast<std::size_t>(clause_count())); }
  Bitset all_clauses() const { return Bitset::all(static_cast<std::size_t>(clause_count())); }
  Bitset no_vars() const { return Bitset(static_cast<std::size_t>(variable_count())); }
  Bitset all_vars() const { return Bitset::all(static_cast<std::size_t>(variable_count())); }

private:
  std::vector<Clause> clauses_;
  int declared_variables_ = 0;
  long long length_ = 0;
  std::vector<int> vars_;
  std::vector<int> var_index_;  // var -> index, -1 if absent
  std::vector<Bitset> clause_vars_, clause_pos_vars_, clause_neg_vars_;
  std::vector<Bitset> pos_occ_, neg_occ_;
};

// Partial assignment over variable indexes: values must be a subset of
// domain; indexes outside domain are unbound.
struct Assignment {
  Bitset domain;
  Bitset values;
};

bool satisfies(const CnfFormula& f, const Assignment& a, int clause_id);

// Clauses of the given set satisfied by the assignment.
Bitset satisfied_clauses(const CnfFormula& f, const Assignment& a, const Bitset& among);

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs(const std::string& text);

// Instance contains an empty clause; trivially unsatisfiable.
struct EmptyClauseError : std::runtime_error {
  EmptyClauseError() : std::runtime_error("formula contains an empty clause") {}
};

struct NormalizationReport {
  int dropped_tautologies = 0;
  int merged_duplicates = 0;
  std::vector<int> free_variables;
  std::vector<int> clause_map;  // raw id -> normalized id, 0 when dropped
};

struct NormalizeResult {
  CnfFormula formula;
  NormalizationReport report;
};

NormalizeResult normalize(const CnfFormula& raw);

// DIMACS text for a formula; with a report, "c map <raw> <normalized|dropped>"
// comment lines record the clause id mapping.
std::string emit_dimacs(const CnfFormula& f, const NormalizationReport* report = nullptr);

// Ids of clauses containing every variable of X (X over variable indexes).
Bitset clauses_with_vars(const CnfFormula& f, const Bitset& x);

// All projections { G(sigma) : sigma over X } of a clause set G whose
// members each contain every variable of X. Computed from the classes of
// identical X-restricted literal sets, without enumerating assignments.
std::vector<Bitset> projection_set(const CnfFormula& f, const Bitset& g, const Bitset& x);

}  // namespace scw
