// SPDX-License-Identifier: Apache-2.0

#include <string>

#include "doctest.h"
#include "indloop/predicate.hpp"
#include "test_util.hpp"

using namespace indloop;

namespace {

const char* kP1 = "(/\\ (= (s1 x) (s1 1)) (= (v0 (+ 1 x)) (+ (+ (w1 x) (v0 x)) (w1 x))))";

}  // namespace

TEST_CASE("predicate size counts nodes") {
  const Problem& a217 = testutil::problem("A217");
  Pred q = parse_pred("(= (+ (* x x) x) (* 2 (v0 x)))", a217.registry);
  CHECK(q.size() == 10);

  const Problem& a2411 = testutil::problem("A2411");
  const Problem& a2278 = testutil::problem("A2278");
  Candidate small = parse_candidate("(/\\ (<= 0 x) (= (+ (* x x) x) (* 2 (v0 x))))", a2411.registry);
  Candidate p1 = parse_candidate(kP1, a2278.registry);
  CHECK(candidate_size(small) == 14);
  CHECK(candidate_size(p1) == 19);
  CHECK(candidate_size(p1) > candidate_size(small));
}

TEST_CASE("predicate text roundtrips") {
  const Problem& p = testutil::problem("A2278");
  for (const char* t : {kP1, "(==> (<= 0 x) (~ (= (u1 x i1 j1) 0)))",
                        "(ite (<= (- x 1) 0) (modf x 2) (divf y 2))", "(<= (f0 y) (g1 x))"}) {
    if (std::string(t).rfind("(ite", 0) == 0) {
      Pred term = parse_pred(std::string("(= ") + t + " 0)", p.registry);
      CHECK(parse_pred(to_text(term, p.registry), p.registry) == term);
      continue;
    }
    Pred q = parse_pred(t, p.registry);
    CHECK(to_text(q, p.registry) == t);
  }
  // SMT-LIB spellings are accepted
  CHECK(parse_pred("(and (<= 0 x) (not (= x 1)))", p.registry) ==
        parse_pred("(/\\ (<= 0 x) (~ (= x 1)))", p.registry));
}

TEST_CASE("unknown symbols and sort errors are rejected") {
  const Problem& p = testutil::problem("A217");
  CHECK_THROWS_AS(parse_pred("(= (w1 x) 0)", p.registry), ParseError);
  CHECK_THROWS_AS(parse_pred("(= (v0 x y) 0)", p.registry), ParseError);
  CHECK_THROWS_AS(parse_pred("(+ x 1)", p.registry), ParseError);
  CHECK(validate(p_eq(p_x(), p_int(1)), p.registry).empty());
  CHECK_FALSE(validate(p_add(p_x(), p_int(1)), p.registry).empty());
}

TEST_CASE("three-valued truth") {
  const Problem& p = testutil::problem("A217");
  EvalLimits lim;
  Integer x(3), y(0), z(0);
  auto tv = [&](const char* s) { return truth_value(parse_pred(s, p.registry), p.registry, x, y, z, lim); };
  CHECK(tv("(= (v0 x) (+ 2 (+ 2 2)))") == true);
  CHECK(tv("(= (divf x 0) 1)") == std::nullopt);
  // false antecedent settles an implication with an undefined consequent
  CHECK(tv("(==> (= x 0) (= (divf x 0) 1))") == true);
  CHECK(tv("(/\\ (= x 0) (= (divf x 0) 1))") == false);
  CHECK(tv("(==> (= x (+ 1 2)) (= (divf x 0) 1))") == std::nullopt);
  CHECK_FALSE(holds(parse_pred("(= (divf x 0) 1)", p.registry), p.registry, x, y, z, lim));
}

TEST_CASE("loop functions evaluate like the loop") {
  const Problem& p = testutil::problem("A217");
  EvalLimits lim;
  for (int x = 0; x <= 10; ++x) {
    Pred t = parse_pred("(= (v0 x) (u0 (g0 x) h0))", p.registry);
    CHECK(holds(t, p.registry, Integer(x), Integer(0), Integer(0), lim));
    PointValue v = eval_term(parse_pred("(= (v0 x) 0)", p.registry).arg(0), p.registry, Integer(x),
                             Integer(0), Integer(0), lim);
    REQUIRE(v.ok);
    CHECK(v.value == x * (x + 1) / 2);
  }
}

TEST_CASE("substitution and program terms") {
  const Problem& p = testutil::problem("A217");
  Pred q = parse_pred("(= (+ (* x x) x) (* 2 (v0 x)))", p.registry);
  Pred at0 = substitute_x(q, p_int(0));
  CHECK(to_text(at0, p.registry) == "(= (+ (* 0 0) 0) (* 2 (v0 0)))");
  Pred term = program_to_term(parse_program("(X * X + X) div 2"), p.registry, p_x(), p_y());
  CHECK(to_text(term, p.registry) == "(divf (+ (* x x) x) 2)");
}
