// SPDX-License-Identifier: Apache-2.0
//
// SMT-LIB emission of equivalence problems and induction instances.

#pragma once

#include <string>
#include <vector>

#include "indloop/predicate.hpp"
#include "indloop/registry.hpp"

namespace indloop {

enum class DefStyle {
  Quantified,  // universally quantified definitional equations
  Recursive,   // define-fun / define-fun-rec; lets solvers build models
};

struct EmitOptions {
  bool with_trivial = true;
  DefStyle style = DefStyle::Quantified;
};

/// A complete script split into its command groups. Every entry is one
/// top-level SMT-LIB command.
struct SmtProblem {
  std::vector<std::string> header;  // set-info, set-logic
  std::vector<std::string> preamble;
  std::vector<std::string> declarations;
  std::vector<std::string> definitions;
  std::vector<std::string> trivial;
  std::vector<std::string> instances;
  std::vector<std::string> goal;

  /// Full script ending in (check-sat).
  std::string script() const;
};

SmtProblem emit_problem(const Problem& problem, const EmitOptions& opts = {});

/// divf/modf definitions matching sml_div/sml_mod for nonzero divisors.
std::vector<std::string> emit_preamble();

/// Helper equalities and congruences between loops of the same kind.
std::vector<std::string> emit_trivial_axioms(const LoopRegistry& reg);

/// The induction axiom instantiated with `q`. Throws std::invalid_argument
/// if `q` is not a valid formula over the registry.
std::string emit_induction_instance(const Pred& q, const LoopRegistry& reg);

/// Problem plus one induction instance per predicate, with the candidate
/// hash recorded in the header.
SmtProblem emit_with_candidate(const Problem& problem, const Candidate& cand,
                               const EmitOptions& opts = {});

/// `(exists ((c Int)) (and (>= c 0) (not (= (small c) (fast c)))))`
std::string goal_assertion();

std::string candidate_hash(const Candidate& cand, const LoopRegistry& reg);

}  // namespace indloop
