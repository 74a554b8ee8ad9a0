// SPDX-License-Identifier: Apache-2.0
//
// Brute-force initial candidates: term enumeration modulo fingerprints,
// literal and predicate sampling on the grid, candidate assembly.

#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <vector>

#include "indloop/predicate.hpp"
#include "indloop/registry.hpp"

namespace indloop {

inline constexpr int kGridXMin = 0, kGridXMax = 10;  // half-open
inline constexpr int kGridYMin = -5, kGridYMax = 10;
inline constexpr std::size_t kGridSize =
    static_cast<std::size_t>((kGridXMax - kGridXMin) * (kGridYMax - kGridYMin));

struct GridPoint {
  int x;
  int y;
};

/// The evaluation grid in lexicographic order.
const std::array<GridPoint, kGridSize>& grid();

/// Limits used for evaluation on the grid.
EvalLimits grid_limits();

struct Fingerprint {
  std::vector<Integer> values;
  std::vector<std::uint8_t> defined;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
  std::size_t hash() const;
};

/// Evaluation on the grid with loop and s functions replaced by a seeded
/// random function of their arguments.
Fingerprint fingerprint(const Pred& term, const LoopRegistry& reg, std::uint64_t seed,
                        const EvalLimits& limits = grid_limits());

struct TermPool {
  std::vector<Pred> terms;  // nondecreasing size
  std::vector<Fingerprint> fingerprints;
};

struct EnumOptions {
  std::size_t cap = 1024;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t max_size = 12;
};

TermPool enumerate_terms(const LoopRegistry& reg, const EnumOptions& opts = {});

/// Truth of a formula at every grid point; points in neither set are
/// undefined.
struct TruthProfile {
  std::bitset<kGridSize> truth;
  std::bitset<kGridSize> falsity;

  bool always_true() const { return truth.all(); }
  bool sometimes_true() const { return truth.any(); }
};

TruthProfile truth_profile(const Pred& formula, const LoopRegistry& reg,
                           const EvalLimits& limits = grid_limits());

/// Literal classes: positive (= and <=) or negated, each split into
/// true-on-grid and not-always-false.
enum class LiteralClass : std::uint8_t { PosTrue, PosSome, NegTrue, NegSome };

struct Literal {
  Pred pred;
  TruthProfile profile;
  LiteralClass cls;
};

struct LiteralOptions {
  std::size_t per_class = 250;
  std::uint64_t seed = 0;
  std::size_t max_draws = 1'000'000;
};

struct LiteralPool {
  std::vector<Literal> literals;
  std::array<std::size_t, 4> counts{};
  bool partial = false;
};

LiteralPool sample_literals(const TermPool& pool, const LoopRegistry& reg,
                            const LiteralOptions& opts = {});

struct PredicateOptions {
  std::size_t count = 4000;
  std::uint64_t seed = 0;
  std::size_t max_draws = 1'000'000;
};

/// Conjunctions and implications of two literals, true at every grid point.
std::vector<Pred> build_predicates(const LiteralPool& lits, const PredicateOptions& opts = {},
                                   bool* partial = nullptr);

/// Ordered samples of `length` distinct predicates.
std::vector<Candidate> sample_candidates(const std::vector<Pred>& preds, std::size_t count = 1000,
                                         std::size_t length = 4, std::uint64_t seed = 0);

struct InitOptions {
  EnumOptions terms;
  LiteralOptions literals;
  PredicateOptions predicates;
  std::size_t candidates = 1000;
  std::size_t candidate_length = 4;
};

/// Full pipeline for one problem. Seeds are mixed with the problem id.
std::vector<Candidate> initial_candidates(const Problem& problem, const InitOptions& opts = {});

/// True at every grid point.
bool true_on_grid(const Pred& formula, const LoopRegistry& reg,
                  const EvalLimits& limits = grid_limits());

std::uint64_t mix_seed(std::uint64_t seed, std::string_view salt);

}  // namespace indloop
