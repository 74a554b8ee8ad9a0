// SPDX-License-Identifier: Apache-2.0
//
// Micro-benchmarks for the CPU-bound stages: interpretation, term
// enumeration, literal sampling, SMT emission and token encoding.

#include <benchmark/benchmark.h>

#include "indloop/candidates.hpp"
#include "indloop/smt.hpp"
#include "indloop/tokens.hpp"

using namespace indloop;

namespace {

const Problem& a205646() {
  static const Problem p("A205646", parse_program("loop(3 * X, X, 1) + 16"),
                         parse_program("loop2(X * Y, Y, X div 2, loop(3, X mod 2, 1), 9) + 16"));
  return p;
}

const Problem& a217() {
  static const Problem p("A217", parse_program("loop(X + Y, X, 0)"), parse_program("(X * X + X) div 2"));
  return p;
}

void BM_Evaluate(benchmark::State& state) {
  const Problem& p = a205646();
  long x = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(p.small, x, 0));
    benchmark::DoNotOptimize(evaluate(p.fast, x, 0));
  }
}
BENCHMARK(BM_Evaluate)->Arg(10)->Arg(100)->Arg(1000);

void BM_EnumerateTerms(benchmark::State& state) {
  EnumOptions o;
  o.cap = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_terms(a205646().registry, o));
}
BENCHMARK(BM_EnumerateTerms)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_SampleLiterals(benchmark::State& state) {
  TermPool pool = enumerate_terms(a217().registry);
  for (auto _ : state) benchmark::DoNotOptimize(sample_literals(pool, a217().registry));
}
BENCHMARK(BM_SampleLiterals)->Unit(benchmark::kMillisecond);

void BM_EmitProblem(benchmark::State& state) {
  const Problem& p = a205646();
  Candidate c = parse_candidate("(= (s1 x) (s1 1)) | (<= x (w1 x))", p.registry);
  for (auto _ : state) benchmark::DoNotOptimize(emit_with_candidate(p, c).script());
}
BENCHMARK(BM_EmitProblem);

void BM_TokenRoundtrip(benchmark::State& state) {
  const Problem& p = a205646();
  Candidate c = parse_candidate(
      "(/\\ (= (w1 (+ 1 x)) (v0 (+ 1 x))) (= (w1 x) (v0 x))) | (<= x (w1 2)) | (= (s1 (+ x 1)) (s1 x))",
      p.registry);
  for (auto _ : state) {
    auto toks = encode_candidate(c, p.registry);
    benchmark::DoNotOptimize(decode_tokens(join_tokens(toks), p.registry));
  }
}
BENCHMARK(BM_TokenRoundtrip);

}  // namespace
BENCHMARK_MAIN();
