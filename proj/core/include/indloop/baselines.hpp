// SPDX-License-Identifier: Apache-2.0
//
// Manual induction heuristics and the prover comparison harness.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "indloop/predicate.hpp"
#include "indloop/registry.hpp"
#include "indloop/solver.hpp"

namespace indloop {

/// n previous terms (n = 0..9) or strong induction.
struct Heuristic {
  enum class Kind : std::uint8_t { Previous, Strong } kind = Kind::Previous;
  int n = 0;

  /// "n=4", "4" or "strong". Throws std::invalid_argument.
  static Heuristic parse(std::string_view s);
  std::string label() const;  // "0".."9" or "strong"

  friend bool operator==(const Heuristic&, const Heuristic&) = default;
};

/// 0 <= x => (a(x) = b(x) /\ ... /\ a(x+n-1) = b(x+n-1)) with a = small,
/// b = fast. Conjunctions nest to the left. Requires 1 <= n <= 9.
Pred manual_predicate(int n);

/// Induction instance for 0 <= x => (forall z. 0 <= z <= x => a(z) = b(z)).
std::string strong_induction_instance();

/// Assertions added by a heuristic (none for n = 0).
std::vector<std::string> heuristic_instances(const Heuristic& h);

/// A benchmark problem: parsed from a program pair, or an opaque SMT-LIB
/// script whose instances are inserted before (check-sat).
struct BenchProblem {
  std::string id;
  std::optional<Problem> parsed;
  std::string raw_smt;

  std::string script(const Heuristic& h) const;
};

/// Inserts `assertions` before the last (check-sat) of `script`.
std::string insert_before_check_sat(const std::string& script,
                                    const std::vector<std::string>& assertions);

/// Reads `*.smt2` scripts and problem files (`*.txt`, `*.prob`) from a
/// directory. When an id occurs in both, the SMT-LIB script is kept.
std::vector<BenchProblem> ingest_benchmark(const std::string& dir);

struct ProverSpec {
  std::string name;
  SolverConfig config;
};

struct ComparisonCell {
  std::string prover;
  std::string heuristic;
  bool available = true;
  std::size_t solved = 0;
  std::vector<std::string> solved_ids;
};

struct ComparisonTable {
  std::size_t problems = 0;
  std::vector<std::string> provers;
  std::vector<std::string> heuristics;
  std::vector<ComparisonCell> cells;  // prover-major

  const ComparisonCell* cell(const std::string& prover, const std::string& heuristic) const;
  std::string csv() const;
  std::string text() const;
};

/// Runs every (prover, heuristic) pair on every problem. Unavailable
/// provers are skipped with a notice on stderr. `timeout` overrides the
/// per-prover timeout.
ComparisonTable run_comparison(const std::vector<BenchProblem>& problems,
                               const std::vector<ProverSpec>& provers,
                               const std::vector<Heuristic>& heuristics,
                               std::chrono::milliseconds timeout, unsigned workers = 1);

/// Built-in solver templates: z3, cvc5, vampire.
std::optional<ProverSpec> prover_template(const std::string& name);

}  // namespace indloop
