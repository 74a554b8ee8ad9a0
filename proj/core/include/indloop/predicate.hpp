// SPDX-License-Identifier: Apache-2.0
//
// Induction predicates: quantifier-free formulas over x, y built from
// arithmetic, ite and the function symbols of a problem.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "indloop/program.hpp"
#include "indloop/registry.hpp"

namespace indloop {

enum class PKind : std::uint8_t {
  // terms
  Zero,
  One,
  Two,
  VarX,
  VarY,
  VarZ,  // extra parameter variable; quantified like y
  Add,
  Sub,
  Mul,
  Div,
  Mod,
  Ite,  // ite(a <= 0, b, c)
  App,
  // formulas
  Eq,
  Le,
  Not,  // over Eq or Le only
  And,
  Implies,
};

bool is_term_kind(PKind k);
int pkind_arity(PKind k);  // -1 for App

class Pred {
 public:
  Pred() = default;
  Pred(PKind kind, std::vector<Pred> args);
  Pred(FuncSym fn, std::vector<Pred> args);

  static Pred leaf(PKind k) { return Pred(k, {}); }

  PKind kind() const { return kind_; }
  FuncSym fn() const { return fn_; }
  const std::vector<Pred>& args() const { return args_; }
  const Pred& arg(std::size_t i) const { return args_.at(i); }
  std::vector<Pred>& mutable_args() { return args_; }

  bool is_term() const { return is_term_kind(kind_); }

  /// Node count.
  std::size_t size() const;

  friend bool operator==(const Pred&, const Pred&) = default;

 private:
  PKind kind_ = PKind::Zero;
  FuncSym fn_{};
  std::vector<Pred> args_;
};

using Candidate = std::vector<Pred>;

std::size_t candidate_size(const Candidate& c);

// Term/formula builders.
Pred p_add(Pred a, Pred b);
Pred p_sub(Pred a, Pred b);
Pred p_mul(Pred a, Pred b);
Pred p_eq(Pred a, Pred b);
Pred p_le(Pred a, Pred b);
Pred p_not(Pred a);
Pred p_and(Pred a, Pred b);
Pred p_implies(Pred a, Pred b);
Pred p_app(FuncSym f, std::vector<Pred> args);
Pred p_int(int n);  // 0, 1 or 2
inline Pred p_x() { return Pred::leaf(PKind::VarX); }
inline Pred p_y() { return Pred::leaf(PKind::VarY); }

/// Checks sorts, arities and symbol membership. Returns an empty string when
/// valid, otherwise a description of the first problem.
std::string validate(const Pred& p, const LoopRegistry& reg, bool formula = true);

bool mentions(const Pred& p, PKind var);
bool mentions_helpers(const Pred& p);  // any non-main symbol

/// Prefix rendering in the solver-log style: `(/\ a b)`, `(==> a b)`,
/// `(~ a)`, `divf`, `modf`, `(ite (<= c 0) a b)`.
std::string to_text(const Pred& p, const LoopRegistry& reg);
std::string candidate_text(const Candidate& c, const LoopRegistry& reg);  // joined by " | "

/// SMT-LIB rendering. `x_term` replaces x (used to instantiate at 0 and x+1).
std::string to_smt(const Pred& p, const LoopRegistry& reg, std::string_view x_term = "x");

/// Inverse of `to_text`; also accepts SMT-LIB spellings (and, =>, not, div,
/// mod). Throws ParseError.
Pred parse_pred(std::string_view text, const LoopRegistry& reg);
/// Predicates separated by `|`.
Candidate parse_candidate(std::string_view text, const LoopRegistry& reg);

/// Interpretation of a program as a term in the variables given for X/Y.
/// Nested loop subprograms become applications of their loop functions.
Pred program_to_term(const Program& p, const LoopRegistry& reg, const Pred& x, const Pred& y);

/// Replaces x by `x_value` throughout.
Pred substitute_x(const Pred& p, const Pred& x_value);

// ---------------------------------------------------------------------------
// Semantics

struct PointValue {
  Integer value;
  bool ok = true;
};

/// Evaluates a term with real function semantics. Division by zero,
/// limits and small/fast applications yield !ok.
PointValue eval_term(const Pred& t, const LoopRegistry& reg, const Integer& x, const Integer& y,
                     const Integer& z, const EvalLimits& limits);

/// Three-valued truth; nullopt when a subterm is undefined and the
/// connectives cannot settle the value.
std::optional<bool> truth_value(const Pred& f, const LoopRegistry& reg, const Integer& x,
                                const Integer& y, const Integer& z, const EvalLimits& limits);

/// Truth of a formula; undefined subterms make the formula not hold.
bool holds(const Pred& f, const LoopRegistry& reg, const Integer& x, const Integer& y,
           const Integer& z, const EvalLimits& limits);

}  // namespace indloop
