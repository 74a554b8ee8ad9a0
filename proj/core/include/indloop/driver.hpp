// SPDX-License-Identifier: Apache-2.0
//
// Self-learning loop: training export, predictor calls, candidate assembly,
// evaluation and selection over a run directory.
//
// Run directory layout:
//   config.json        RunConfig
//   problems.txt       one `ID: SMALL = FAST` line per problem
//   solutions.jsonl    current SolutionDB
//   iter_000/          initial phase: report.json, solutions.jsonl
//   iter_NNN/          train.txt, problems.tok, predictions_K.txt,
//                      report.json, solutions.jsonl

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "indloop/candidates.hpp"
#include "indloop/prover.hpp"
#include "indloop/registry.hpp"
#include "indloop/solution_db.hpp"

namespace indloop {

enum class InferenceMode : std::uint8_t { Split, Whole };
enum class TrainOn : std::uint8_t { Shortest, ShortestAndFastest };

struct RunConfig {
  InferenceMode mode = InferenceMode::Split;
  TrainOn train_on = TrainOn::Shortest;
  double shift_probability = 0.1;
  bool expansion = true;
  std::vector<int> split_sizes = {1, 2, 3, 4, 5, 6, 8, 12};
  std::size_t split_candidates = 100;
  std::size_t whole_candidates = 240;
  bool semantic_filter = false;
  bool short_circuit = false;
  /// Proved candidates minimized per problem and iteration, shortest first.
  std::size_t minimize_limit = 8;
  /// Commands with placeholders {train} {problems} {out} {iteration} {seed}.
  std::vector<std::string> predictors;
  std::uint64_t seed = 0;
  SolverConfig solver;
  InitOptions init;

  /// Throws std::invalid_argument on a broken invariant.
  void validate() const;
  std::string to_json() const;
  /// Missing keys keep their defaults. Throws std::runtime_error.
  static RunConfig from_json(const std::string& text);
  /// Applies INDLOOP_SOLVER (solver command) and INDLOOP_PREDICTOR
  /// (replaces the predictor list) when set.
  void apply_env();
};

RunConfig load_config(const std::string& path);

struct StageTimes {
  double export_ms = 0, predict_ms = 0, assemble_ms = 0, evaluate_ms = 0, minimize_ms = 0;
};

struct IterationReport {
  int iteration = 0;
  std::size_t predictions = 0;
  std::size_t invalid_predictions = 0;
  std::size_t candidates = 0;
  std::size_t problems_with_candidates = 0;
  BatchSummary batch;
  std::size_t new_solutions = 0;    // new history entries
  std::size_t improved = 0;         // problems whose shortest changed
  std::size_t newly_solved = 0;
  std::size_t cumulative_solved = 0;
  StageTimes times;

  double validity_rate() const;
  std::string to_json() const;
  std::string text() const;
};

// ---------------------------------------------------------------------------
// Stages

/// One training line per (problem, predicate) in split mode, per (problem,
/// candidate) in whole mode, for every shortest (and optionally fastest)
/// solution. Lines whose solution side exceeds kMaxOutputTokens are dropped.
std::vector<std::string> export_training(const SolutionDB& db, const std::vector<Problem>& problems,
                                         const RunConfig& cfg, std::uint64_t seed);

/// `id TAB problem-tokens` per problem.
std::string problem_token_file(const std::vector<Problem>& problems);

struct Prediction {
  std::string id;
  int rank = 0;
  std::string tokens;
};

/// Parses `id TAB rank TAB tokens` lines. Malformed lines are counted in
/// `malformed`.
std::vector<Prediction> parse_predictions(const std::string& text, std::size_t* malformed = nullptr);

struct Assembled {
  std::map<std::string, std::vector<Candidate>> candidates;  // by problem id
  std::size_t predictions = 0;
  std::size_t invalid = 0;
};

/// Decodes predictions against their problems and forms candidates. Split
/// mode samples `split_candidates` combinations per problem from the pool of
/// decoded predicates; whole mode keeps decoded candidates in rank order,
/// at most `whole_candidates`.
Assembled assemble_candidates(const std::vector<Prediction>& predictions,
                              const std::vector<Problem>& problems, const RunConfig& cfg,
                              std::uint64_t seed);

/// Expands the placeholders of a predictor command.
std::string expand_predictor(const std::string& command, const std::map<std::string, std::string>& vars);

/// Evaluates candidates, minimizes proofs and offers them to the db.
IterationReport evaluate_and_select(SolutionDB& db, const std::vector<Problem>& problems,
                                    const std::map<std::string, std::vector<Candidate>>& cands,
                                    const RunConfig& cfg, int iteration, const std::string& origin);

// ---------------------------------------------------------------------------
// Runs

class Run {
 public:
  /// Creates a run directory. Fails if it already holds a run.
  static Run create(const std::string& dir, const RunConfig& cfg, const std::vector<Problem>& problems);
  static Run open(const std::string& dir);

  const std::string& dir() const { return dir_; }
  const RunConfig& config() const { return cfg_; }
  RunConfig& config() { return cfg_; }
  const std::vector<Problem>& problems() const { return problems_; }
  const SolutionDB& db() const { return db_; }
  /// Last completed iteration, -1 before the initial phase.
  int iteration() const { return iteration_; }

  /// Initial brute-force phase (iteration 0).
  IterationReport init(std::ostream* log = nullptr);

  /// Adds solutions without the search, e.g. known ones. Each is checked
  /// and minimized first; returns the number accepted.
  std::size_t seed_solutions(const std::vector<std::pair<std::string, Candidate>>& sols);

  /// One loop iteration. With `replay_from`, predictor outputs are read from
  /// that run's matching iteration folder instead of running the predictor.
  /// Throws std::runtime_error when a predictor fails; the db is unchanged.
  IterationReport iterate(const std::optional<std::string>& replay_from = std::nullopt,
                          std::ostream* log = nullptr);

  std::string iteration_dir(int k) const;

 private:
  Run() = default;
  void commit(int iteration, const IterationReport& report);

  std::string dir_;
  RunConfig cfg_;
  std::vector<Problem> problems_;
  SolutionDB db_;
  int iteration_ = -1;
};

}  // namespace indloop
