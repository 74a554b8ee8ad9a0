// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "indloop/registry.hpp"
#include "indloop/solver.hpp"

namespace testutil {

inline std::string fixture(const std::string& name) { return std::string(INDLOOP_FIXTURE_DIR) + "/" + name; }

inline const indloop::Problem& problem(const std::string& id) {
  static const std::vector<indloop::Problem> ps = indloop::read_problems(fixture("appendix.txt"));
  for (const auto& p : ps)
    if (p.id == id) return p;
  throw std::runtime_error("missing fixture " + id);
}

inline indloop::SolverConfig solver(int timeout_ms = 2000) {
  indloop::SolverConfig c;
  c.timeout = std::chrono::milliseconds(timeout_ms);
  return c;
}

inline bool have_z3() { return indloop::solver_available(solver()); }

}  // namespace testutil
