// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <map>
#include <set>
#include <string>

#include "doctest.h"
#include "indloop/candidates.hpp"
#include "test_util.hpp"

using namespace indloop;

namespace {

// All terms of exactly `size` nodes over 0, 1, 2, x, y, the arithmetic
// operators, ite and the main symbols of `reg`.
std::vector<std::vector<Pred>> all_terms(const LoopRegistry& reg, std::size_t max_size, bool with_apps) {
  std::vector<std::vector<Pred>> by(max_size + 1);
  for (PKind k : {PKind::Zero, PKind::One, PKind::Two, PKind::VarX, PKind::VarY}) by[1].push_back(Pred::leaf(k));
  for (std::size_t s = 2; s <= max_size; ++s) {
    if (with_apps)
      for (FuncSym f : reg.main_symbols())
        if (reg.arity(f) == 1)
          for (const auto& a : by[s - 1]) by[s].push_back(p_app(f, {a}));
    for (PKind k : {PKind::Add, PKind::Sub, PKind::Mul, PKind::Div, PKind::Mod})
      for (std::size_t l = 1; l + 1 < s; ++l)
        for (const auto& a : by[l])
          for (const auto& b : by[s - 1 - l]) by[s].push_back(Pred(k, {a, b}));
    for (std::size_t l = 1; l + 2 < s; ++l)
      for (std::size_t m = 1; l + m + 1 < s; ++m)
        for (const auto& a : by[l])
          for (const auto& b : by[m])
            for (const auto& c : by[s - 1 - l - m]) by[s].push_back(Pred(PKind::Ite, {a, b, c}));
  }
  return by;
}

struct FpLess {
  bool operator()(const Fingerprint& a, const Fingerprint& b) const {
    return std::tie(a.defined, a.values) < std::tie(b.defined, b.values);
  }
};

}  // namespace

TEST_CASE("fingerprints identify equal terms") {
  const Problem& p = testutil::problem("A217");
  auto fp = [&](const char* s) {
    return fingerprint(parse_pred(std::string("(= ") + s + " 0)", p.registry).arg(0), p.registry, 0);
  };
  CHECK(fp("(+ x y)") == fp("(+ y x)"));
  CHECK(fp("(* 2 x)") == fp("(+ x x)"));
  CHECK(fp("(v0 (+ x 1))") == fp("(v0 (+ 1 x))"));
  CHECK_FALSE(fp("(v0 x)") == fp("(v0 y)"));
  // loop functions are opaque: the real identity v0 x = (x*x+x)/2 is not seen
  CHECK_FALSE(fp("(v0 x)") == fp("(divf (+ (* x x) x) 2)"));
  // different seeds give different opaque functions
  Pred v = parse_pred("(= (v0 x) 0)", p.registry).arg(0);
  CHECK_FALSE(fingerprint(v, p.registry, 1) == fingerprint(v, p.registry, 2));
  // argument functions keep their meaning
  CHECK(fp("(f0 x y)") == fp("(+ y x)"));
}

TEST_CASE("enumeration keeps one smallest term per class") {
  const Problem& p = testutil::problem("A217");
  const std::size_t max_size = 4;
  EnumOptions o;
  o.cap = 1'000'000;
  o.max_size = max_size;
  TermPool pool = enumerate_terms(p.registry, o);

  auto brute = all_terms(p.registry, max_size, true);
  std::map<Fingerprint, std::size_t, FpLess> smallest;
  for (std::size_t s = 1; s <= max_size; ++s)
    for (const auto& t : brute[s]) smallest.emplace(fingerprint(t, p.registry, o.seed), s);

  REQUIRE(pool.terms.size() == smallest.size());
  std::set<Fingerprint, FpLess> seen;
  std::size_t prev = 0;
  for (std::size_t i = 0; i < pool.terms.size(); ++i) {
    Fingerprint f = fingerprint(pool.terms[i], p.registry, o.seed);
    CHECK(f == pool.fingerprints[i]);
    CHECK(seen.insert(f).second);
    REQUIRE(smallest.count(f));
    CHECK(pool.terms[i].size() == smallest[f]);
    CHECK(pool.terms[i].size() >= prev);
    prev = pool.terms[i].size();
  }

  SUBCASE("a cap keeps a prefix") {
    EnumOptions c = o;
    c.cap = 64;
    TermPool capped = enumerate_terms(p.registry, c);
    REQUIRE(capped.terms.size() == 64);
    for (std::size_t i = 0; i < 64; ++i) CHECK(capped.terms[i] == pool.terms[i]);
  }
  SUBCASE("threads do not change the pool") {
    EnumOptions t = o;
    t.threads = 4;
    CHECK(enumerate_terms(p.registry, t).terms == pool.terms);
  }
}

TEST_CASE("loop-free fingerprint classes agree on a wider grid") {
  const Problem& p = testutil::problem("A217");
  auto brute = all_terms(p.registry, 5, false);
  std::map<Fingerprint, Pred, FpLess> rep;
  EvalLimits lim;
  std::size_t compared = 0;
  for (const auto& layer : brute)
    for (const auto& t : layer) {
      if (mentions(t, PKind::Div) || mentions(t, PKind::Mod) || mentions(t, PKind::Ite)) continue;
      auto [it, fresh] = rep.emplace(fingerprint(t, p.registry, 0), t);
      if (fresh) continue;
      ++compared;
      for (int x = -25; x <= 25; x += 5)
        for (int y = -25; y <= 25; y += 5) {
          PointValue a = eval_term(t, p.registry, Integer(x), Integer(y), Integer(0), lim);
          PointValue b = eval_term(it->second, p.registry, Integer(x), Integer(y), Integer(0), lim);
          REQUIRE(a.ok);
          REQUIRE(b.ok);
          CHECK(a.value == b.value);
        }
    }
  CHECK(compared > 1000);
}

TEST_CASE("literal quotas for A217 at seed 0") {
  const Problem& p = testutil::problem("A217");
  TermPool pool = enumerate_terms(p.registry);
  CHECK(pool.terms.size() == 1024);
  LiteralPool lits = sample_literals(pool, p.registry);
  CHECK(lits.counts == std::array<std::size_t, 4>{250, 250, 250, 250});
  CHECK_FALSE(lits.partial);
  for (const auto& l : lits.literals) {
    TruthProfile tp = truth_profile(l.pred, p.registry);
    CHECK(tp.truth == l.profile.truth);
    bool negated = l.pred.kind() == PKind::Not;
    CHECK(negated == (l.cls == LiteralClass::NegTrue || l.cls == LiteralClass::NegSome));
    if (l.cls == LiteralClass::PosTrue || l.cls == LiteralClass::NegTrue) CHECK(tp.always_true());
    CHECK(tp.sometimes_true());
  }

  LiteralPool again = sample_literals(pool, p.registry);
  REQUIRE(again.literals.size() == lits.literals.size());
  for (std::size_t i = 0; i < lits.literals.size(); ++i) CHECK(again.literals[i].pred == lits.literals[i].pred);

  SUBCASE("predicates hold on the whole grid") {
    PredicateOptions po;
    po.count = 300;
    bool partial = true;
    auto preds = build_predicates(lits, po, &partial);
    CHECK_FALSE(partial);
    REQUIRE(preds.size() == 300);
    for (const auto& q : preds) {
      CHECK((q.kind() == PKind::And || q.kind() == PKind::Implies));
      CHECK(true_on_grid(q, p.registry));
    }
    auto cands = sample_candidates(preds, 50, 4, 3);
    REQUIRE(cands.size() == 50);
    for (const auto& c : cands) {
      REQUIRE(c.size() == 4);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) CHECK_FALSE(c[i] == c[j]);
    }
  }
}

TEST_CASE("too few predicates give no candidates") {
  std::vector<Pred> preds = {p_eq(p_x(), p_x())};
  CHECK(sample_candidates(preds, 10, 4, 0).empty());
}
