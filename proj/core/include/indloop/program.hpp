// SPDX-License-Identifier: Apache-2.0
//
// Programs of the integer-sequence DSL: syntax tree, parser, printers and
// an arbitrary-precision interpreter.

#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace indloop {

using Integer = mpz_class;

enum class Op : std::uint8_t {
  Zero,
  One,
  Two,
  X,
  Y,
  Add,
  Sub,
  Mul,
  Div,
  Mod,
  Cond,
  Loop,
  Loop2,
  Compr,
};

int arity(Op op);
bool is_loop_op(Op op);
std::string_view op_name(Op op);

/// Immutable-by-convention program tree. Equality is structural.
class Program {
 public:
  Program() = default;
  Program(Op op, std::vector<Program> args);

  static Program leaf(Op op) { return Program(op, {}); }

  Op op() const { return op_; }
  const std::vector<Program>& args() const { return args_; }
  const Program& arg(std::size_t i) const { return args_.at(i); }

  /// Number of nodes.
  std::size_t size() const;

  friend bool operator==(const Program&, const Program&) = default;

 private:
  Op op_ = Op::Zero;
  std::vector<Program> args_;
};

// Convenience constructors, mostly for tests.
Program add(Program a, Program b);
Program sub(Program a, Program b);
Program mul(Program a, Program b);
Program div(Program a, Program b);
Program mod(Program a, Program b);
Program cond(Program a, Program b, Program c);
Program loop(Program f, Program a, Program b);
Program loop2(Program f, Program g, Program a, Program b, Program c);
Program compr(Program f, Program a);

/// Builds a program computing the nonnegative integer n out of 0, 1, 2.
Program literal(unsigned long n);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

/// Parses one program. Accepts the infix form `loop(X + Y, X, 0)`, the
/// prefix form `(loop (+ x y) x 0)` and mixtures such as
/// `(loop:v0 ((x - 2) + y) x 1)`. Integer literals above 2 are desugared
/// with `literal`.
Program parse_program(std::string_view text);

/// Parses `LHS = RHS`.
std::pair<Program, Program> parse_equation(std::string_view text);

/// Infix rendering; `parse_program(to_string(p)) == p`.
std::string to_string(const Program& p);

/// Prefix rendering without loop labels.
std::string to_sexp(const Program& p);

// ---------------------------------------------------------------------------
// Interpreter

struct EvalLimits {
  Integer max_abs;                       // inclusive bound on |value|
  std::uint64_t max_steps = 10'000'000;  // primitive evaluations per call
  std::uint64_t max_compr = 100'000;     // compr search iterations per call

  EvalLimits();
  EvalLimits(Integer max_abs, std::uint64_t max_steps, std::uint64_t max_compr);
};

enum class AbortReason : std::uint8_t { None, Overflow, StepLimit, ComprLimit, DivZero };

std::string_view abort_name(AbortReason r);

struct EvalResult {
  Integer value;
  AbortReason abort = AbortReason::None;

  bool ok() const { return abort == AbortReason::None; }
};

/// Floor division and its remainder (sign follows the divisor). b != 0.
Integer sml_div(const Integer& a, const Integer& b);
Integer sml_mod(const Integer& a, const Integer& b);

EvalResult evaluate(const Program& p, const Integer& x, const Integer& y,
                    const EvalLimits& limits = {});

/// Both components of a loop2 program at (x, y): the first is the program's
/// value, the second the value of its companion `s` function.
struct PairResult {
  Integer first;
  Integer second;
  AbortReason abort = AbortReason::None;
  bool ok() const { return abort == AbortReason::None; }
};
PairResult evaluate_loop2_pair(const Program& loop2_program, const Integer& x,
                               const Integer& y, const EvalLimits& limits = {});

// Helper recursions, exposed so that helper functions can be evaluated on
// arbitrary arguments. `update`/`second_update` are the F and G arguments.
EvalResult run_loop_helper(const Program& update, const Integer& bound, const Integer& init,
                           const EvalLimits& limits = {});
PairResult run_loop2_helper(const Program& update, const Program& second_update,
                            const Integer& bound, const Integer& init1, const Integer& init2,
                            const EvalLimits& limits = {});
EvalResult run_compr_search(const Program& test, const Integer& from,
                            const EvalLimits& limits = {});
EvalResult run_compr_helper(const Program& test, const Integer& bound,
                            const EvalLimits& limits = {});

}  // namespace indloop
