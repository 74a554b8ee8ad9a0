// SPDX-License-Identifier: Apache-2.0
//
// Candidate checking, minimization and batch evaluation.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "indloop/predicate.hpp"
#include "indloop/registry.hpp"
#include "indloop/smt.hpp"
#include "indloop/solver.hpp"

namespace indloop {

/// Emits the problem with one induction instance per predicate and runs the
/// solver. Invalid predicates give an Error verdict.
SolverRun check_candidate(const Problem& problem, const Candidate& cand, const SolverConfig& cfg);

/// Speed of a proof: instruction count when available and requested,
/// otherwise the median wall-clock time of `runs` runs. nullopt if any run
/// fails to prove.
std::optional<double> measure_speed(const Problem& problem, const Candidate& cand,
                                    const SolverConfig& cfg, int runs = 3);

enum class MinimizeMode : std::uint8_t { Shortest, Fastest };

struct Minimized {
  Candidate candidate;
  bool reproved = true;  // false when the input no longer proves
  std::optional<double> speed;
  int solver_calls = 0;
};

/// Greedy left-to-right removal of single predicates, repeated to a
/// fixpoint.
Minimized minimize(const Problem& problem, const Candidate& cand, MinimizeMode mode,
                   const SolverConfig& cfg);

struct Job {
  std::size_t problem = 0;  // index into the problem list
  Candidate candidate;
};

struct JobResult {
  SolverRun run;
  bool skipped = false;  // not run because the problem was already proved
};

struct BatchSummary {
  std::size_t jobs = 0;
  std::size_t run = 0;
  std::size_t proved = 0;
  std::map<std::string, std::size_t> verdicts;
  std::vector<std::string> solved_ids;  // sorted, unique
  /// Elapsed-time histogram with upper bounds 10, 50, 100, 200, 500 ms and
  /// one open bucket.
  std::array<std::size_t, 6> histogram{};
};

struct BatchResult {
  std::vector<JobResult> results;  // parallel to the job list
  BatchSummary summary;
};

/// Checks all jobs on `cfg.workers` threads. With `short_circuit`, jobs of
/// a problem after its first proof (in job order) are skipped; the outcome
/// does not depend on scheduling.
BatchResult run_batch(const std::vector<Problem>& problems, const std::vector<Job>& jobs,
                      const SolverConfig& cfg, bool short_circuit = false);

std::string render_summary(const BatchSummary& s);

}  // namespace indloop
