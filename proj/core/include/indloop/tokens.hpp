// SPDX-License-Identifier: Apache-2.0
//
// Closed-vocabulary token encoding of problems and candidates, and the
// training-data augmentations (index shifting, definition expansion).
//
// Uppercase tokens:
//   A 0   B 1   C 2   D +   E -   F *   G div  H mod  I cond/ite
//   J loop  K x  L y  M loop2  N compr  O =  P <=  Q not  R and  S =>  T z
// Lowercase a..t name the loop with that index; a loop letter followed by a
// digit names one of its argument or helper functions:
//   loop   f 0  g 1  h 2  u 3
//   loop2  f 0  g 1  h 2  i 3  j 4  u 5  t 6  s 7
//   compr  f 0  g 1  t 2  u 3
// In programs each loop operator is followed by its loop letter.

#pragma once

#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "indloop/predicate.hpp"
#include "indloop/registry.hpp"

namespace indloop {

inline constexpr int kMaxLoopLetters = 20;
inline constexpr std::size_t kMaxOutputTokens = 60;

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_tokens(std::string_view s);
std::string join_tokens(std::span<const std::string> toks);

/// Throws std::invalid_argument for symbols without a token (small, fast)
/// or loop indices beyond `t`.
std::vector<std::string> encode_program(const Program& p, const LoopRegistry& reg);
std::vector<std::string> encode_problem(const Problem& problem);
std::vector<std::string> encode_pred(const Pred& p, const LoopRegistry& reg);
std::vector<std::string> encode_candidate(const Candidate& c, const LoopRegistry& reg);

/// `problem-tokens > solution-tokens`
std::string encode_example(const Problem& problem, const Candidate& c);

struct Decoded {
  Candidate candidate;
  std::size_t consumed = 0;  // tokens used by the parsed predicates
};

/// Decodes concatenated predicates. A malformed suffix after at least one
/// complete predicate is ignored; a malformed first predicate throws
/// DecodeError.
Decoded decode_tokens(std::span<const std::string> toks, const LoopRegistry& reg);
Candidate decode_tokens(std::string_view s, const LoopRegistry& reg);

/// Moves every loop letter by `offset` on both sides of an example. Returns
/// nullopt when a letter would leave a..t.
std::optional<std::string> shift_indices(std::string_view example, int offset);

/// Largest offset usable for an example (19 minus its highest letter), or -1
/// when the example uses no loop letter.
int max_shift(std::string_view example);

/// Unfolds `times` uniformly chosen occurrences of loop, argument or helper
/// functions into their definitions. Returns the input when nothing is
/// expandable.
Candidate expand_definitions(const Candidate& c, const LoopRegistry& reg, int times,
                             std::mt19937_64& rng);

/// One unfolding of an application, or nullopt for non-expandable symbols.
std::optional<Pred> unfold(const Pred& app, const LoopRegistry& reg);

}  // namespace indloop
