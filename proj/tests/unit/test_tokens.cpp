// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <random>
#include <set>
#include <string>

#include "doctest.h"
#include "indloop/candidates.hpp"
#include "indloop/tokens.hpp"
#include "test_util.hpp"

using namespace indloop;

namespace {

struct Recorded {
  std::string id;
  std::string text;
};

std::vector<Recorded> spectra_solutions() {
  std::ifstream in(testutil::fixture("spectra_solutions.txt"));
  std::vector<Recorded> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back({line.substr(0, line.find(' ')), line.substr(line.find(": ") + 2)});
  }
  return out;
}

const Problem& spectra_problem(const std::string& id) {
  static const std::vector<Problem> ps = read_problems(testutil::fixture("spectra.txt"));
  for (const auto& p : ps)
    if (p.id == id) return p;
  throw std::runtime_error("missing " + id);
}

// Every token an example may use for a problem: the fixed vocabulary plus
// the letters and helper tokens of its declared loops.
std::set<std::string> declared_tokens(const Problem& p) {
  std::set<std::string> ok;
  for (char c = 'A'; c <= 'T'; ++c) ok.insert(std::string(1, c));
  ok.insert(">");
  for (std::size_t k = 0; k < p.registry.size(); ++k) {
    std::string l(1, static_cast<char>('a' + k));
    ok.insert(l);
    for (int d = 0; d <= 7; ++d) ok.insert(std::to_string(d));
  }
  return ok;
}

}  // namespace

TEST_CASE("A217 example encodes to the documented tokens") {
  const Problem& p = testutil::problem("A217");
  Candidate c = parse_candidate("(= (+ (* x x) x) (* 2 (v0 x)))", p.registry);
  CHECK(encode_example(p, c) == "J a D K L K A = G D F K K K C > O D F K K K F C a K");
}

TEST_CASE("recorded solutions encode and decode to themselves") {
  auto sols = spectra_solutions();
  CHECK(sols.size() == 57);
  for (const auto& s : sols) {
    const Problem& p = spectra_problem(s.id);
    Candidate c = parse_candidate(s.text, p.registry);
    CHECK(parse_candidate(candidate_text(c, p.registry), p.registry) == c);
    auto toks = encode_candidate(c, p.registry);
    Candidate back = decode_tokens(join_tokens(toks), p.registry);
    CHECK_MESSAGE(back == c, s.text);
  }
}

TEST_CASE("index shifting moves every loop letter") {
  const Problem& p = testutil::problem("A2278");
  Candidate c = parse_candidate(
      "(/\\ (= (s1 x) (s1 1)) (= (v0 (+ 1 x)) (+ (+ (w1 x) (v0 x)) (w1 x))))", p.registry);
  std::string ex = encode_example(p, c);
  CHECK(max_shift(ex) == 18);
  auto up = shift_indices(ex, 2);
  REQUIRE(up);
  CHECK(up->find(" a ") == std::string::npos);
  CHECK(up->find(" c ") != std::string::npos);
  auto down = shift_indices(*up, -2);
  REQUIRE(down);
  CHECK(*down == ex);
  CHECK_FALSE(shift_indices(ex, -1));
  CHECK_FALSE(shift_indices(ex, 19));
  CHECK(max_shift("K = K > O K K") == -1);
}

TEST_CASE("definition expansion preserves meaning and vocabulary") {
  const Problem& p = testutil::problem("A59826");
  Candidate c = parse_candidate("(= (- (u0 x 1) 1) (+ (* x x) x))", p.registry);
  auto ok = declared_tokens(p);
  std::mt19937_64 rng(7);
  EvalLimits lim;
  for (int trial = 0; trial < 50; ++trial) {
    Candidate e = expand_definitions(c, p.registry, 1 + trial % 2, rng);
    for (const auto& t : encode_candidate(e, p.registry)) CHECK_MESSAGE(ok.count(t), t);
    for (int x = 0; x <= 6; ++x)
      for (int y = -2; y <= 2; ++y)
        CHECK(truth_value(e[0], p.registry, Integer(x), Integer(y), Integer(0), lim) ==
              truth_value(c[0], p.registry, Integer(x), Integer(y), Integer(0), lim));
  }
}

TEST_CASE("unfolding agrees with evaluation on every symbol") {
  const Problem& p = testutil::problem("A205646");
  EvalLimits lim;
  for (FuncSym f : p.registry.symbols()) {
    std::vector<Pred> args;
    for (std::size_t i = 0; i < static_cast<std::size_t>(p.registry.arity(f)); ++i) args.push_back(i == 0 ? p_x() : p_y());
    Pred app = p_app(f, args);
    auto u = unfold(app, p.registry);
    if (!u) continue;
    for (int x = 0; x <= 5; ++x)
      for (int y = 0; y <= 3; ++y) {
        PointValue a = eval_term(app, p.registry, Integer(x), Integer(y), Integer(0), lim);
        PointValue b = eval_term(*u, p.registry, Integer(x), Integer(y), Integer(0), lim);
        REQUIRE(a.ok == b.ok);
        if (a.ok) CHECK_MESSAGE(a.value == b.value, p.registry.name(f));
      }
  }
}

TEST_CASE("malformed token strings") {
  const Problem& p = testutil::problem("A217");
  CHECK_THROWS_AS(decode_tokens("O K", p.registry), DecodeError);
  CHECK_THROWS_AS(decode_tokens("O b K K", p.registry), DecodeError);
  CHECK_THROWS_AS(decode_tokens("", p.registry), DecodeError);
  // a malformed suffix after a complete predicate is dropped
  Decoded d = decode_tokens(split_tokens("O K K O K"), p.registry);
  CHECK(d.candidate.size() == 1);
  CHECK(d.consumed == 3);
}
