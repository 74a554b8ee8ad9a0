// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <regex>
#include <set>
#include <string>

#include "doctest.h"
#include "indloop/predicate.hpp"
#include "indloop/smt.hpp"
#include "test_util.hpp"

using namespace indloop;

namespace {

std::string script_with_goal(const Problem& p, DefStyle style, const std::string& goal) {
  EmitOptions o;
  o.style = style;
  SmtProblem sp = emit_problem(p, o);
  sp.goal = {goal};
  return sp.script();
}

Verdict solve(const std::string& script, int timeout_ms = 5000) {
  return run_solver(script, testutil::solver(timeout_ms)).verdict;
}

}  // namespace

TEST_CASE("A217 emits the listing's assertions") {
  SmtProblem sp = emit_problem(testutil::problem("A217"));
  std::set<std::string> got;
  for (const auto& group : {sp.definitions, sp.trivial, sp.goal})
    for (std::string a : group) {
      a = std::regex_replace(a, std::regex(R"(\b([fghuv])0\b)"), "$1");
      a = std::regex_replace(a, std::regex(R"(\bdivf\b)"), "div");
      got.insert(a.substr(8, a.size() - 9));  // strip (assert ...)
    }
  std::set<std::string> listing = {
      "(forall ((x Int) (y Int)) (= (f x y) (+ x y)))",
      "(forall ((x Int)) (= (g x) x))",
      "(= h 0)",
      "(forall ((x Int) (y Int)) (= (u x y) (ite (<= x 0) y (f (u (- x 1) y) x))))",
      "(forall ((x Int)) (= (v x) (u (g x) h)))",
      "(forall ((x Int)) (= (small x) (v x)))",
      "(forall ((x Int)) (= (fast x) (div (+ (* x x) x) 2)))",
      "(exists ((c Int)) (and (>= c 0) (not (= (small c) (fast c)))))",
  };
  CHECK(got == listing);
}

TEST_CASE("A108411 defines one loop and one two-register loop") {
  SmtProblem sp = emit_problem(testutil::problem("A108411"));
  std::string defs;
  for (const auto& d : sp.definitions) defs += d + "\n";
  for (const char* fn : {"(v0 x)", "(w1 x)", "(s1 x)", "(u1 x y z)", "(t1 x y z)", "(u0 x y)"})
    CHECK_MESSAGE(defs.find(fn) != std::string::npos, fn);
}

TEST_CASE("trivial axioms: shared updates and congruences") {
  Problem same("s", parse_program("loop(X * Y, X, 1) + 1"), parse_program("loop(X * Y, X div 2, 2)"));
  auto ax = emit_trivial_axioms(same.registry);
  REQUIRE(ax.size() == 1);
  CHECK(ax[0] == "(assert (forall ((x Int) (y Int)) (= (u0 x y) (u1 x y))))");

  Problem cong("c", parse_program("loop(X + Y, X, 0)"), parse_program("loop(Y + X, X, 0)"));
  ax = emit_trivial_axioms(cong.registry);
  REQUIRE(ax.size() == 1);
  CHECK(ax[0] ==
        "(assert (=> (forall ((x Int) (y Int)) (= (f0 x y) (f1 x y))) "
        "(forall ((x Int) (y Int)) (= (u0 x y) (u1 x y)))))");

  Problem kinds("k", parse_program("loop(X + Y, X, 0)"), parse_program("loop2(X + Y, Y, X, 0, 1)"));
  CHECK(emit_trivial_axioms(kinds.registry).empty());
}

TEST_CASE("induction instance shape") {
  const Problem& p = testutil::problem("A217");
  Pred q = parse_pred("(= (+ (* x x) x) (* 2 (v0 x)))", p.registry);
  CHECK(emit_induction_instance(q, p.registry) ==
        "(assert (=> (and (forall ((y Int)) (= (+ (* 0 0) 0) (* 2 (v0 0)))) "
        "(forall ((x Int) (y Int)) (=> (= (+ (* x x) x) (* 2 (v0 x))) "
        "(= (+ (* (+ x 1) (+ x 1)) (+ x 1)) (* 2 (v0 (+ x 1))))))) "
        "(forall ((x Int) (y Int)) (=> (<= 0 x) (= (+ (* x x) x) (* 2 (v0 x)))))))");
  Pred bad = Pred(FuncSym{0, Role::Small}, {p_x()});
  CHECK_THROWS_AS(emit_induction_instance(p_eq(bad, p_x()), p.registry), std::invalid_argument);
}

TEST_CASE("candidate scripts carry a content hash") {
  const Problem& p = testutil::problem("A2411");
  Candidate c = parse_candidate("(/\\ (<= 0 x) (= (+ (* x x) x) (* 2 (v0 x))))", p.registry);
  SmtProblem sp = emit_with_candidate(p, c);
  CHECK(sp.header[0].find("candidate: " + candidate_hash(c, p.registry)) != std::string::npos);
  CHECK(sp.instances.size() == 1);
}

TEST_CASE("solver: modf and divf follow floor semantics" * doctest::timeout(60)) {
  if (!testutil::have_z3()) return;
  std::string pre;
  for (const auto& l : emit_preamble()) pre += l + "\n";
  CHECK(solve(pre + "(assert (not (= (modf (- 7) 2) 1)))\n(check-sat)\n") == Verdict::Unsat);
  CHECK(solve(pre + "(assert (not (= (divf 7 (- 2)) (- 4))))\n(check-sat)\n") == Verdict::Unsat);
  CHECK(solve(pre + "(assert (not (= (modf 7 (- 2)) (- 1))))\n(check-sat)\n") == Verdict::Unsat);
  CHECK(solve(pre +
              "(assert (not (forall ((a Int) (b Int)) (=> (not (= b 0)) "
              "(= a (+ (* b (divf a b)) (modf a b)))))))\n(check-sat)\n") == Verdict::Unsat);
}

TEST_CASE("solver: recursive definitions reproduce the interpreter" * doctest::timeout(120)) {
  if (!testutil::have_z3()) return;
  for (const char* id : {"A108411", "A1026", "A205646"}) {
    const Problem& p = testutil::problem(id);
    std::string conj;
    for (FuncSym f : p.registry.main_symbols())
      for (int x = 0; x <= 9; ++x) {
        Integer arg(x);
        EvalResult r = eval_function(p.registry, f, std::span<const Integer>(&arg, 1));
        REQUIRE(r.ok());
        conj += " (= (" + p.registry.name(f) + " " + std::to_string(x) + ") " + r.value.get_str() + ")";
      }
    std::string goal = "(assert (not (and" + conj + ")))";
    CHECK_MESSAGE(solve(script_with_goal(p, DefStyle::Recursive, goal)) == Verdict::Unsat, id);
  }
}

TEST_CASE("solver: a true ground instance is satisfiable" * doctest::timeout(60)) {
  if (!testutil::have_z3()) return;
  const Problem& p = testutil::problem("A217");
  CHECK(solve(script_with_goal(p, DefStyle::Recursive, "(assert (= (small 5) (fast 5)))")) == Verdict::Sat);
  CHECK(solve(script_with_goal(p, DefStyle::Recursive, "(assert (= (small 5) 16))")) == Verdict::Unsat);
}

TEST_CASE("solver: congruence axioms close loop-free rewrites" * doctest::timeout(60)) {
  if (!testutil::have_z3()) return;
  Problem cong("c", parse_program("loop(X + Y, X, 0)"), parse_program("loop(Y + X, X, 0)"));
  EmitOptions without;
  without.with_trivial = false;
  CHECK(solve(emit_problem(cong, without).script(), 2000) != Verdict::Unsat);
  CHECK(solve(emit_problem(cong).script(), 2000) == Verdict::Unsat);
}
