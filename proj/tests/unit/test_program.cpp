// SPDX-License-Identifier: Apache-2.0

#include <string>
#include <vector>

#include "doctest.h"
#include "indloop/program.hpp"
#include "indloop/registry.hpp"
#include "test_util.hpp"

using namespace indloop;

namespace {

// Floor division by exhaustive search: the q with q*b <= a < (q+1)*b for
// b > 0, and q*b >= a > (q+1)*b for b < 0.
std::pair<long, long> floor_divmod(long a, long b) {
  for (long q = -200; q <= 200; ++q) {
    bool ok = b > 0 ? (q * b <= a && a < (q + 1) * b) : (q * b >= a && a > (q + 1) * b);
    if (ok) return {q, a - q * b};
  }
  throw std::logic_error("out of range");
}

long eval_long(const std::string& src, long x, long y = 0) {
  EvalResult r = evaluate(parse_program(src), x, y);
  REQUIRE(r.ok());
  return r.value.get_si();
}

// u(x, y) for loop(F, A, B) written out directly.
long loop_oracle(long (*f)(long, long), long bound, long init) {
  if (bound <= 0) return init;
  return f(loop_oracle(f, bound - 1, init), bound);
}

}  // namespace

TEST_CASE("div and mod floor toward negative infinity") {
  CHECK(sml_div(-7, 2) == -4);
  CHECK(sml_mod(-7, 2) == 1);
  CHECK(sml_div(7, -2) == -4);
  CHECK(sml_mod(7, -2) == -1);
  for (long a = -30; a <= 30; ++a)
    for (long b = -7; b <= 7; ++b) {
      if (b == 0) continue;
      auto [q, r] = floor_divmod(a, b);
      CHECK(sml_div(a, b) == q);
      CHECK(sml_mod(a, b) == r);
    }
}

TEST_CASE("division by zero aborts evaluation") {
  EvalResult r = evaluate(parse_program("X div 0"), 3, 0);
  CHECK(r.abort == AbortReason::DivZero);
}

TEST_CASE("parse builds the expected trees") {
  CHECK(parse_program("loop(X + Y, X, 0)") ==
        loop(add(Program::leaf(Op::X), Program::leaf(Op::Y)), Program::leaf(Op::X),
             Program::leaf(Op::Zero)));
  CHECK(parse_program("2") == Program::leaf(Op::Two));
  Program X = Program::leaf(Op::X), Y = Program::leaf(Op::Y);
  Program one = Program::leaf(Op::One), two = Program::leaf(Op::Two);
  CHECK(parse_program("loop2(X * Y, Y, X div 2, 1, 1 + 2)") ==
        loop2(mul(X, Y), Y, div(X, two), one, add(one, two)));
}

TEST_CASE("printing then parsing is the identity") {
  for (const char* src : {"loop(X + Y, X, 0)", "(X * X + X) div 2", "cond(X - 1, Y, X mod 2)",
                          "compr(X mod 2, X)", "loop2(X * Y, Y, X div 2, loop(3, X mod 2, 1), 9)",
                          "1 - (2 - X)", "(1 - 2) - X"}) {
    Program p = parse_program(src);
    CHECK(parse_program(to_string(p)) == p);
    CHECK(parse_program(to_sexp(p)) == p);
  }
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_program("loop(X + , X, 0)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.column() > 1);
  }
  CHECK_THROWS_AS(parse_program("loop(X, 0)"), ParseError);
}

TEST_CASE("loop evaluation matches a direct recursion") {
  // loop(X + Y, X, 0): triangular numbers
  for (long x = 0; x <= 20; ++x)
    CHECK(eval_long("loop(X + Y, X, 0)", x) ==
          loop_oracle([](long u, long k) { return u + k; }, x, 0));
  std::vector<long> tri;
  for (long x = 0; x <= 6; ++x) tri.push_back(eval_long("loop(X + Y, X, 0)", x));
  CHECK(tri == std::vector<long>{0, 1, 3, 6, 10, 15, 21});

  // loop(X + X + X, X div 2, 1) is 3^(x div 2)
  std::vector<long> got;
  for (long x = 0; x <= 5; ++x) got.push_back(eval_long("loop(X + X + X, X div 2, 1)", x));
  CHECK(got == std::vector<long>{1, 1, 3, 3, 9, 9});
  for (long x = 0; x <= 20; ++x) {
    long expect = loop_oracle([](long u, long) { return 3 * u; }, sml_div(x, 2).get_si(), 1);
    CHECK(eval_long("loop(X + X + X, X div 2, 1)", x) == expect);
  }
}

TEST_CASE("compr enumerates the zeros of its test") {
  // t(x) = first n >= x with F(n, 0) <= 0; u(k) = the (k+1)-th such n
  auto brute = [](long k) {
    long seen = -1;
    for (long n = 0;; ++n)
      if (n % 2 == 0 && ++seen == k) return n;
  };
  for (long k = 0; k <= 15; ++k) CHECK(eval_long("compr(X mod 2, X)", k) == brute(k));
}

TEST_CASE("loop2 evaluates both registers") {
  // loop2(X * Y, Y, X, 1, 17): 17^x in the first register, 17 in the second
  Program p = parse_program("loop2(X * Y, Y, X, 1, 17)");
  PairResult r = evaluate_loop2_pair(p, 3, 0);
  REQUIRE(r.ok());
  CHECK(r.first == 17 * 17 * 17);
  CHECK(r.second == 17);
}

TEST_CASE("evaluation limits stop runaway growth") {
  EvalLimits lim(Integer(1000), 1000000, 1000);
  EvalResult r = evaluate(parse_program("loop(X * X + 2, X, 2)"), 10, 0, lim);
  CHECK(r.abort == AbortReason::Overflow);
}

TEST_CASE("example program pairs agree on 0..20") {
  for (const char* id : {"A217", "A108411", "A1026", "A2278", "A105281", "A198766", "A2411", "A59826",
                         "A205646"}) {
    const Problem& p = testutil::problem(id);
    for (long x = 0; x <= 20; ++x) {
      EvalResult a = evaluate(p.small, x, 0), b = evaluate(p.fast, x, 0);
      REQUIRE(a.ok());
      REQUIRE(b.ok());
      CHECK_MESSAGE(a.value == b.value, id << " at " << x);
    }
  }
}

TEST_CASE("loops are numbered outer before inner, small program first") {
  auto [small, fast] = parse_equation(
      "(1 + (((2 * (x + x)) + (loop:v0 ((2 * (x + x)) + x) x 1)) + x)) = "
      "((1 + (loop2:w1 (x * y) y (x div 2) (loop:v2 (1 + (2 + 2)) (x mod 2) 1) "
      "(loop:v3 (x * x) 1 (1 + (2 + 2))))) + ((2 * (x + x)) + x))");
  LoopRegistry reg = index_loops(small, fast);
  std::vector<std::string> names;
  for (FuncSym f : reg.main_symbols())
    if (f.role == Role::Main) names.push_back(reg.name(f));
  CHECK(names == std::vector<std::string>{"v0", "w1", "v2", "v3"});
  CHECK(reg.name({1, Role::Second}) == "s1");
}

TEST_CASE("equal loop subprograms share an index") {
  Problem p("t", parse_program("loop(X + Y, X, 0) + loop(X + Y, X, 0)"),
            parse_program("2 * loop(X + Y, X, 0)"));
  CHECK(p.registry.size() == 1);
}

TEST_CASE("dummy arguments are dropped from function parameters") {
  const Problem& p = testutil::problem("A217");
  CHECK(p.registry.arity({0, Role::F}) == 2);
  CHECK(p.registry.arity({0, Role::G}) == 1);
  CHECK(p.registry.arity({0, Role::H}) == 0);
  CHECK(p.registry.arity({0, Role::U}) == 2);
  CHECK(p.registry.arity({0, Role::Main}) == 1);
}

TEST_CASE("problem files report the failing line") {
  try {
    parse_problems("A1: X = X\nA2: loop(X, = 1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  auto ps = parse_problems("# comment\n\nA1: X + 0 = X\n");
  REQUIRE(ps.size() == 1);
  CHECK(ps[0].id == "A1");
}
