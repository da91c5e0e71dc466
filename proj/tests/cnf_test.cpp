#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "scw/cnf.hpp"
#include "support.hpp"

using namespace scw;

TEST_CASE("parse_dimacs reads header, comments and clauses") {
  const CnfFormula f = parse_dimacs(
      "c sample\n"
      "c another comment\n"
      "p cnf 3 3\n"
      "1 2 0\n"
      "c mid comment\n"
      "-1 2 0\n"
      "-2\n"
      "3 0\n");
  CHECK(f.clause_count() == 3);
  CHECK(f.declared_variables() == 3);
  CHECK(f.length() == 6);
  CHECK(f.variables() == std::vector<int>{1, 2, 3});
  CHECK(f.clause(1).literals == std::vector<Literal>{{1, true}, {2, true}});
  CHECK(f.clause(3).literals == std::vector<Literal>{{2, false}, {3, true}});
  CHECK(f.clause_vars(1).to_indices() == std::vector<int>{0, 1});
  CHECK(f.clause_neg_vars(2).to_indices() == std::vector<int>{0});
  CHECK(f.positive_occurrences(1).to_indices() == std::vector<int>{0, 1});
}

TEST_CASE("parse_dimacs sorts and dedups literals inside a clause") {
  const CnfFormula f = parse_dimacs("p cnf 2 1\n2 1 1 -2 0\n");
  CHECK(f.clause(1).literals == std::vector<Literal>{{1, true}, {2, false}, {2, true}});
  CHECK(f.clause(1).tautological());
  CHECK(f.length() == 3);
}

TEST_CASE("parse_dimacs rejects malformed input") {
  CHECK_THROWS_WITH_AS(parse_dimacs("p dnf 2 1\n1 0\n"),
                       "line 1: malformed header, expected 'p cnf <vars> <clauses>'", ParseError);
  CHECK_THROWS_WITH_AS(parse_dimacs("c only comments\n"), "line 2: missing 'p cnf' header",
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_dimacs(""), "line 1: missing 'p cnf' header", ParseError);
  CHECK_THROWS_WITH_AS(parse_dimacs("p cnf 2 1\n1 3 0\n"),
                       "line 2: literal 3 exceeds declared variable count 2", ParseError);
  CHECK_THROWS_WITH_AS(parse_dimacs("p cnf 2 1\n1 x 0\n"), "line 2: expected an integer, got 'x'",
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_dimacs("p cnf 2 1\n1 2\n"), "line 3: clause not terminated by 0",
                       ParseError);
  try {
    parse_dimacs("p cnf 2 2\n1 0\n-3 0\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
}

TEST_CASE("normalize drops tautologies, merges duplicates, reports the map") {
  const CnfFormula raw = parse_dimacs(
      "p cnf 3 5\n"
      "1 -1 0\n"
      "1 2 0\n"
      "2 1 0\n"
      "-3 0\n"
      "-3 0\n");
  const NormalizeResult nr = normalize(raw);
  CHECK(nr.formula.clause_count() == 2);
  CHECK(nr.formula.clause(1).literals == std::vector<Literal>{{1, true}, {2, true}});
  CHECK(nr.formula.clause(2).literals == std::vector<Literal>{{3, false}});
  CHECK(nr.report.dropped_tautologies == 1);
  CHECK(nr.report.merged_duplicates == 2);
  CHECK(nr.report.clause_map == std::vector<int>{0, 1, 1, 2, 2});
  CHECK(nr.report.free_variables.empty());
}

TEST_CASE("normalize throws on an empty clause") {
  CHECK_THROWS_AS(normalize(parse_dimacs("p cnf 2 2\n1 0\n0\n")), EmptyClauseError);
}

TEST_CASE("free variables are declared but never occur") {
  const NormalizeResult nr = normalize(parse_dimacs("p cnf 5 1\n2 4 0\n"));
  CHECK(nr.report.free_variables == std::vector<int>{1, 3, 5});
  CHECK(nr.formula.variable_count() == 2);
  CHECK(nr.formula.variables() == std::vector<int>{2, 4});
  CHECK(nr.formula.variable_index(2) == 0);
  CHECK(nr.formula.variable_index(4) == 1);
  CHECK(nr.formula.variable_index(3) == -1);
  CHECK(nr.formula.variable_at(1) == 4);
}

TEST_CASE("emit_dimacs round-trips and records the clause map") {
  const CnfFormula raw = parse_dimacs("p cnf 3 3\n1 -1 0\n3 -2 0\n3 -2 0\n");
  const NormalizeResult nr = normalize(raw);
  CHECK(emit_dimacs(nr.formula, &nr.report) ==
        "c map 1 dropped\n"
        "c map 2 1\n"
        "c map 3 1\n"
        "p cnf 3 1\n"
        "-2 3 0\n");
  const CnfFormula again = parse_dimacs(emit_dimacs(nr.formula));
  CHECK(again.clause_count() == nr.formula.clause_count());
  for (int c = 1; c <= again.clause_count(); ++c)
    CHECK(again.clause(c).literals == nr.formula.clause(c).literals);
}

TEST_CASE("emit then parse preserves random formulas") {
  std::mt19937 rng(11);
  for (int round = 0; round < 30; ++round) {
    const CnfFormula f = test::random_normalized(rng, 2 + static_cast<int>(rng() % 5),
                                                 1 + static_cast<int>(rng() % 6));
    const CnfFormula back = parse_dimacs(emit_dimacs(f));
    REQUIRE(back.clause_count() == f.clause_count());
    CHECK(back.declared_variables() == f.declared_variables());
    for (int c = 1; c <= f.clause_count(); ++c)
      CHECK(back.clause(c).literals == f.clause(c).literals);
  }
}

TEST_CASE("satisfies respects partial assignments") {
  const CnfFormula f = test::fstar();
  Assignment all{f.all_vars(), f.all_vars()};
  CHECK(satisfies(f, all, 1));
  CHECK(satisfies(f, all, 2));
  CHECK(satisfies(f, all, 3));
  CHECK(satisfied_clauses(f, all, f.all_clauses()) == f.all_clauses());

  Assignment partial{Bitset(3), Bitset(3)};
  partial.domain.set(0);
  partial.domain.set(1);
  partial.values.set(0);  // x1=1, x2=0, x3 unbound
  CHECK(satisfies(f, partial, 1));
  CHECK(!satisfies(f, partial, 2));
  CHECK(satisfies(f, partial, 3));
  CHECK(satisfied_clauses(f, partial, f.all_clauses()).to_indices() == std::vector<int>{0, 2});

  Assignment narrow{Bitset(3), Bitset(3)};
  narrow.domain.set(1);  // x2=0 only
  CHECK(!satisfies(f, narrow, 1));
  CHECK(!satisfies(f, narrow, 2));
  CHECK(satisfies(f, narrow, 3));
}

TEST_CASE("clauses_with_vars needs every variable of X") {
  const CnfFormula f = test::fstar();
  CHECK(clauses_with_vars(f, f.no_vars()) == f.all_clauses());
  Bitset x2(3);
  x2.set(1);
  CHECK(clauses_with_vars(f, x2) == f.all_clauses());
  Bitset x12(3);
  x12.set(0);
  x12.set(1);
  CHECK(clauses_with_vars(f, x12).to_indices() == std::vector<int>{0, 1});
  Bitset x13(3);
  x13.set(0);
  x13.set(2);
  CHECK(clauses_with_vars(f, x13).none());
}

TEST_CASE("projection_set on hand instances") {
  const CnfFormula f = test::fstar();
  Bitset x2(3);
  x2.set(1);
  const std::vector<Bitset> s = projection_set(f, f.all_clauses(), x2);
  REQUIRE(s.size() == 2);
  CHECK(s[0].to_indices() == std::vector<int>{0, 1});
  CHECK(s[1].to_indices() == std::vector<int>{2});

  // Empty X: the one empty assignment satisfies nothing.
  CHECK(projection_set(f, f.all_clauses(), f.no_vars()) == std::vector<Bitset>{f.no_clauses()});
  CHECK(projection_set(f, f.no_clauses(), x2) == std::vector<Bitset>{f.no_clauses()});

  Bitset x1(3);
  x1.set(0);
  CHECK_THROWS_AS(projection_set(f, f.all_clauses(), x1), std::invalid_argument);
}

TEST_CASE("projection_set equals direct enumeration and obeys the size bound") {
  std::mt19937 rng(23);
  int pairs = 0;
  while (pairs < 250) {
    const CnfFormula f = test::random_normalized(rng, 3 + static_cast<int>(rng() % 4),
                                                 1 + static_cast<int>(rng() % 8));
    const int nv = f.variable_count();
    Bitset x(static_cast<std::size_t>(nv));
    const int want = std::min(static_cast<int>(rng() % 4), nv);
    while (static_cast<int>(x.count()) < want) x.set(rng() % static_cast<std::size_t>(nv));
    Bitset g = clauses_with_vars(f, x);
    // Random sub-selection keeps the precondition.
    g.for_each([&](int c) {
      if (rng() % 3 == 0) g.reset(static_cast<std::size_t>(c));
    });
    ++pairs;

    std::set<Bitset> expect;
    for (uint64_t bits = 0; bits < (uint64_t{1} << x.count()); ++bits) {
      Assignment a{x, Bitset(static_cast<std::size_t>(nv))};
      int i = 0;
      x.for_each([&](int v) {
        if ((bits >> i) & 1) a.values.set(static_cast<std::size_t>(v));
        ++i;
      });
      expect.insert(satisfied_clauses(f, a, g));
    }
    const std::vector<Bitset> got = projection_set(f, g, x);
    CHECK(got == std::vector<Bitset>(expect.begin(), expect.end()));
    CHECK(got.size() <= static_cast<std::size_t>(f.clause_count()) + 1);
    CHECK(got.size() <= (std::size_t{1} << x.count()));
  }
}
