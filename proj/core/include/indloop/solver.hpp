// SPDX-License-Identifier: Apache-2.0
//
// External SMT solver invocation with a hard deadline.

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace indloop {

enum class Verdict : std::uint8_t { Unsat, Sat, Unknown, Timeout, Error };

std::string_view verdict_name(Verdict v);

enum class SpeedMetric : std::uint8_t { WallClock, Instructions };

struct SolverConfig {
  /// Whitespace-separated argv template. Placeholders: {file}, {timeout_ms},
  /// {timeout_s} (rounded up).
  std::string command = "z3 -smt2 -t:{timeout_ms} {file}";
  std::chrono::milliseconds timeout{200};
  /// Extra time before the process is killed, beyond `timeout`.
  std::chrono::milliseconds grace{300};
  unsigned workers = 1;
  SpeedMetric metric = SpeedMetric::WallClock;
  /// Directory for generated scripts; empty means a per-process temp dir.
  std::string scratch_dir;
  bool keep_files = false;

  /// Throws std::invalid_argument when the template lacks {file} or the
  /// timeout is not positive.
  void validate() const;
};

struct SolverRun {
  Verdict verdict = Verdict::Error;
  double elapsed_ms = 0;
  std::optional<std::uint64_t> instructions;
  int exit_code = 0;
  std::string diagnostics;

  bool proved() const { return verdict == Verdict::Unsat; }
};

/// Expands the command template into argv.
std::vector<std::string> expand_command(const SolverConfig& cfg, const std::string& file);

/// Writes `script` to a scratch file and runs the solver on it.
SolverRun run_solver(const std::string& script, const SolverConfig& cfg);

/// Runs the solver on an existing file.
SolverRun run_solver_file(const std::string& path, const SolverConfig& cfg);

/// Maps solver stdout to a verdict: the last line among sat/unsat/unknown/
/// timeout wins; an `(error` line yields Error.
Verdict parse_verdict(const std::string& stdout_text);

/// Whether the executable named by the command template can be found.
bool solver_available(const SolverConfig& cfg);

}  // namespace indloop
