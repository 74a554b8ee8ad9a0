// SPDX-License-Identifier: Apache-2.0
//
// Loop registry: serial numbering of the loop subprograms of a problem and
// the function symbols (loop, argument and helper functions) they induce.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "indloop/program.hpp"

namespace indloop {

enum class LoopKind : std::uint8_t { Loop, Loop2, Compr };

/// Variables a function actually depends on. Dummy arguments are dropped.
enum VarSet : std::uint8_t { kNoVars = 0, kVarX = 1, kVarY = 2, kVarXY = 3 };

VarSet free_vars(const Program& p);
int var_count(VarSet v);

/// Role of a function symbol relative to its loop.
///  - Main: v (loop, compr) or w (loop2)
///  - Second: s (loop2 only)
///  - F..J: argument functions (I, J for loop2 only)
///  - U, T: helper recursions
///  - Small, Fast: the two sides of a problem (loop index is -1)
enum class Role : std::uint8_t { Main, Second, F, G, H, I, J, U, T, Small, Fast };

struct FuncSym {
  int loop = -1;
  Role role = Role::Main;

  friend bool operator==(const FuncSym&, const FuncSym&) = default;
  friend auto operator<=>(const FuncSym&, const FuncSym&) = default;
};

struct LoopEntry {
  int index = 0;
  LoopKind kind = LoopKind::Loop;
  Program program;
  VarSet params = kNoVars;  // parameters of the loop function(s)
};

class LoopRegistry {
 public:
  LoopRegistry() = default;

  const std::vector<LoopEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const LoopEntry& at(int index) const { return entries_.at(static_cast<std::size_t>(index)); }

  /// Index of a syntactically equal loop subprogram, if registered.
  std::optional<int> find(const Program& loop_program) const;
  int add(const Program& loop_program);

  /// All function symbols of the registry, by loop index then role.
  std::vector<FuncSym> symbols() const;
  /// Loop functions and s functions only.
  std::vector<FuncSym> main_symbols() const;

  bool has(FuncSym f) const;
  int arity(FuncSym f) const;
  /// For functions interpreting a program (argument, loop and s functions):
  /// which of x, y the arguments stand for, in order.
  VarSet params(FuncSym f) const;
  /// Program interpreted by an argument function.
  const Program& argument_program(FuncSym f) const;

  /// SMT/textual name, e.g. v0, w1, s1, f0, u0, t1, small.
  std::string name(FuncSym f) const;
  /// Inverse of `name`. For loop2 entries `v<k>` is accepted as an alias of
  /// the second helper `t<k>`.
  std::optional<FuncSym> lookup(std::string_view name) const;

 private:
  std::vector<LoopEntry> entries_;
};

/// Assigns indices to loop subprograms in pre-order, small program first.
/// Syntactically equal loops share one index.
LoopRegistry index_loops(const Program& small, const Program& fast);

/// Roles available for a loop kind, in canonical order.
std::span<const Role> roles_of(LoopKind kind);

/// Evaluates a registry function on concrete arguments.
EvalResult eval_function(const LoopRegistry& reg, FuncSym f, std::span<const Integer> args,
                         const EvalLimits& limits = {});

/// A problem: two programs claimed equal on all x >= 0.
struct Problem {
  std::string id;
  Program small;
  Program fast;
  LoopRegistry registry;

  Problem() = default;
  Problem(std::string id, Program small, Program fast);
};

/// Parses `ID: LHS = RHS` (the id and colon are optional; a missing id is
/// replaced by `fallback_id`).
Problem parse_problem_line(std::string_view line, const std::string& fallback_id);

/// Reads a problem file: one problem per line, `#` comments and blank
/// lines ignored. Parse errors report the file line.
std::vector<Problem> read_problems(const std::string& path);
std::vector<Problem> parse_problems(std::string_view text);

std::string problem_line(const Problem& p);

}  // namespace indloop
