#include "scw/cnf.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace scw {

bool Clause::tautological() const {
  for (std::size_t i = 1; i < literals.size(); ++i)
    if (literals[i].var == literals[i - 1].var) return true;
  return false;
}

std::vector<int> Clause::vars() const {
  std::vector<int> v;
  for (const Literal& l : literals)
    if (v.empty() || v.back() != l.var) v.push_back(l.var);
  return v;
}

CnfFormula::CnfFormula(std::vector<Clause> clauses, int declared_variables)
    : clauses_(std::move(clauses)), declared_variables_(declared_variables) {
  for (const Clause& c : clauses_)
    for (const Literal& l : c.literals) declared_variables_ = std::max(declared_variables_, l.var);
  var_index_.assign(static_cast<std::size_t>(declared_variables_) + 1, -1);
  constexpr int kOccurs = -2;
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    clauses_[i].id = static_cast<int>(i) + 1;
    std::sort(clauses_[i].literals.begin(), clauses_[i].literals.end());
    clauses_[i].literals.erase(
        std::unique(clauses_[i].literals.begin(), clauses_[i].literals.end()),
        clauses_[i].literals.end());
    length_ += static_cast<long long>(clauses_[i].literals.size());
    for (const Literal& l : clauses_[i].literals) var_index_[static_cast<std::size_t>(l.var)] = kOccurs;
  }
  for (int v = 1; v <= declared_variables_; ++v)
    if (var_index_[static_cast<std::size_t>(v)] == kOccurs) {
      var_index_[static_cast<std::size_t>(v)] = static_cast<int>(vars_.size());
      vars_.push_back(v);
    }

  const auto nv = static_cast<std::size_t>(vars_.size());
  const auto m = clauses_.size();
  clause_vars_.assign(m, Bitset(nv));
  clause_pos_vars_.assign(m, Bitset(nv));
  clause_neg_vars_.assign(m, Bitset(nv));
  pos_occ_.assign(nv, Bitset(m));
  neg_occ_.assign(nv, Bitset(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (const Literal& l : clauses_[i].literals) {
      auto vi = static_cast<std::size_t>(var_index_[static_cast<std::size_t>(l.var)]);
      clause_vars_[i].set(vi);
      (l.positive ? clause_pos_vars_[i] : clause_neg_vars_[i]).set(vi);
      (l.positive ? pos_occ_[vi] : neg_occ_[vi]).set(i);
    }
  }
}

int CnfFormula::variable_index(int var) const {
  if (var < 1 || var > declared_variables_) return -1;
  return var_index_[static_cast<std::size_t>(var)];
}

std::vector<int> CnfFormula::free_variables() const {
  std::vector<int> free;
  for (int v = 1; v <= declared_variables_; ++v)
    if (variable_index(v) < 0) free.push_back(v);
  return free;
}

bool satisfies(const CnfFormula& f, const Assignment& a, int clause_id) {
  const Bitset falses = a.domain - a.values;
  return f.clause_pos_vars(clause_id).intersects(a.values) ||
         f.clause_neg_vars(clause_id).intersects(falses);
}

Bitset satisfied_clauses(const CnfFormula& f, const Assignment& a, const Bitset& among) {
  Bitset sat(static_cast<std::size_t>(f.clause_count()));
  among.for_each([&](int c) {
    if (satisfies(f, a, c + 1)) sat.set(static_cast<std::size_t>(c));
  });
  return sat;
}

namespace {

struct Tokenizer {
  std::istream& in;
  int line = 1;
  bool in_clause = false;

  // Returns false at end of input. Comment lines are skipped.
  bool next_int(long long& out) {
    std::string tok;
    char c;
    while (in.get(c)) {
      if (c == '\n') {
        ++line;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') continue;
      if (c == 'c' && !in_clause) {
        std::string rest;
        std::getline(in, rest);
        ++line;
        continue;
      }
      tok += c;
      while (in.get(c) && c != ' ' && c != '\t' && c != '\r' && c != '\n') tok += c;
      if (c == '\n') in.unget();
      std::size_t pos = 0;
      try {
        out = std::stoll(tok, &pos);
      } catch (const std::exception&) {
        throw ParseError(line, "expected an integer, got '" + tok + "'");
      }
      if (pos != tok.size()) throw ParseError(line, "expected an integer, got '" + tok + "'");
      return true;
    }
    return false;
  }
};

}  // namespace

CnfFormula parse_dimacs(std::istream& in) {
  int line = 1;
  std::string s;
  long long declared_vars = -1, declared_clauses = -1;
  // Header: comment lines, then "p cnf <vars> <clauses>".
  while (std::getline(in, s)) {
    std::size_t i = s.find_first_not_of(" \t\r");
    if (i == std::string::npos || s[i] == 'c') {
      ++line;
      continue;
    }
    std::istringstream hs(s);
    std::string p, fmt;
    if (!(hs >> p >> fmt >> declared_vars >> declared_clauses) || p != "p" || fmt != "cnf" ||
        declared_vars < 0 || declared_clauses < 0)
      throw ParseError(line, "malformed header, expected 'p cnf <vars> <clauses>'");
    break;
  }
  if (declared_vars < 0) throw ParseError(line, "missing 'p cnf' header");

  Tokenizer tok{in, line + 1};
  std::vector<Clause> clauses;
  Clause current;
  long long lit;
  while (tok.next_int(lit)) {
    if (lit == 0) {
      clauses.push_back(std::move(current));
      current = Clause{};
      tok.in_clause = false;
      continue;
    }
    tok.in_clause = true;
    long long v = lit < 0 ? -lit : lit;
    if (v > declared_vars)
      throw ParseError(tok.line, "literal " + std::to_string(lit) + " exceeds declared variable count " +
                                     std::to_string(declared_vars));
    current.literals.push_back(Literal{static_cast<int>(v), lit > 0});
  }
  if (tok.in_clause) throw ParseError(tok.line, "clause not terminated by 0");
  return CnfFormula(std::move(clauses), static_cast<int>(declared_vars));
}

CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

NormalizeResult normalize(const CnfFormula& raw) {
  NormalizationReport report;
  report.clause_map.assign(static_cast<std::size_t>(raw.clause_count()), 0);
  std::vector<Clause> kept;
  std::map<std::vector<Literal>, int> seen;  // literal set -> normalized id
  for (const Clause& c : raw.clauses()) {
    if (c.empty()) throw EmptyClauseError();
    if (c.tautological()) {
      ++report.dropped_tautologies;
      continue;
    }
    auto it = seen.find(c.literals);
    if (it != seen.end()) {
      ++report.merged_duplicates;
      report.clause_map[static_cast<std::size_t>(c.id - 1)] = it->second;
      continue;
    }
    int nid = static_cast<int>(kept.size()) + 1;
    seen.emplace(c.literals, nid);
    report.clause_map[static_cast<std::size_t>(c.id - 1)] = nid;
    kept.push_back(c);
  }
  NormalizeResult result{CnfFormula(std::move(kept), raw.declared_variables()), std::move(report)};
  result.report.free_variables = result.formula.free_variables();
  return result;
}

std::string emit_dimacs(const CnfFormula& f, const NormalizationReport* report) {
  std::ostringstream out;
  if (report) {
    for (std::size_t i = 0; i < report->clause_map.size(); ++i) {
      out << "c map " << i + 1 << ' ';
      if (report->clause_map[i] == 0)
        out << "dropped\n";
      else
        out << report->clause_map[i] << '\n';
    }
  }
  out << "p cnf " << f.declared_variables() << ' ' << f.clause_count() << '\n';
  for (const Clause& c : f.clauses()) {
    for (const Literal& l : c.literals) out << (l.positive ? l.var : -l.var) << ' ';
    out << "0\n";
  }
  return out.str();
}

Bitset clauses_with_vars(const CnfFormula& f, const Bitset& x) {
  Bitset result(static_cast<std::size_t>(f.clause_count()));
  for (int c = 1; c <= f.clause_count(); ++c)
    if (x.is_subset_of(f.clause_vars(c))) result.set(static_cast<std::size_t>(c - 1));
  return result;
}

std::vector<Bitset> projection_set(const CnfFormula& f, const Bitset& g, const Bitset& x) {
  g.for_each([&](int c) {
    if (!x.is_subset_of(f.clause_vars(c + 1)))
      throw std::invalid_argument("projection_set: clause " + std::to_string(c + 1) +
                                  " does not contain every variable of X");
  });

  // Group clauses by their X-restricted literal set. All of X occurs in each
  // clause, so the positive part determines the restriction.
  std::unordered_map<Bitset, Bitset, BitsetHash> classes;
  g.for_each([&](int c) {
    Bitset key = f.clause_pos_vars(c + 1) & x;
    auto it = classes.emplace(std::move(key), Bitset(g.size())).first;
    it->second.set(static_cast<std::size_t>(c));
  });

  std::vector<Bitset> result;
  for (const auto& [key, members] : classes) result.push_back(g - members);
  // Some assignment satisfies all of G exactly when fewer classes exist than
  // assignments to X.
  std::size_t nx = x.count();
  if (nx >= 63 || classes.size() < (std::size_t{1} << nx)) result.push_back(g);
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

}  // namespace scw
