// SPDX-License-Identifier: Apache-2.0

#include "indloop/prover.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>
#include <thread>

namespace indloop {

SolverRun check_candidate(const Problem& problem, const Candidate& cand, const SolverConfig& cfg) {
  std::string script;
  try {
    script = emit_with_candidate(problem, cand).script();
  } catch (const std::exception& e) {
    SolverRun r;
    r.verdict = Verdict::Error;
    r.diagnostics = e.what();
    return r;
  }
  return run_solver(script, cfg);
}

std::optional<double> measure_speed(const Problem& problem, const Candidate& cand,
                                    const SolverConfig& cfg, int runs) {
  std::string script = emit_with_candidate(problem, cand).script();
  std::vector<double> samples;
  for (int i = 0; i < std::max(1, runs); ++i) {
    SolverRun r = run_solver(script, cfg);
    if (!r.proved()) return std::nullopt;
    if (cfg.metric == SpeedMetric::Instructions && r.instructions) {
      // instruction counts do not need repetition
      return static_cast<double>(*r.instructions);
    }
    samples.push_back(r.elapsed_ms);
  }
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

Minimized minimize(const Problem& problem, const Candidate& cand, MinimizeMode mode,
                   const SolverConfig& cfg) {
  Minimized m;
  m.candidate = cand;

  if (mode == MinimizeMode::Shortest) {
    ++m.solver_calls;
    if (!check_candidate(problem, cand, cfg).proved()) {
      m.reproved = false;
      return m;
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < m.candidate.size();) {
        Candidate trial = m.candidate;
        trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
        ++m.solver_calls;
        if (check_candidate(problem, trial, cfg).proved()) {
          m.candidate = std::move(trial);
          changed = true;
        } else {
          ++i;
        }
      }
    }
    return m;
  }

  ++m.solver_calls;
  auto best = measure_speed(problem, cand, cfg);
  if (!best) {
    m.reproved = false;
    return m;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < m.candidate.size();) {
      Candidate trial = m.candidate;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
      ++m.solver_calls;
      auto s = measure_speed(problem, trial, cfg);
      if (s && *s < *best) {
        m.candidate = std::move(trial);
        best = s;
        changed = true;
      } else {
        ++i;
      }
    }
  }
  m.speed = best;
  return m;
}

namespace {

std::size_t bucket(double ms) {
  static constexpr double kBounds[] = {10, 50, 100, 200, 500};
  std::size_t b = 0;
  while (b < 5 && ms >= kBounds[b]) ++b;
  return b;
}

}  // namespace

BatchResult run_batch(const std::vector<Problem>& problems, const std::vector<Job>& jobs,
                      const SolverConfig& cfg, bool short_circuit) {
  BatchResult out;
  out.results.resize(jobs.size());
  unsigned nworkers = std::max(1u, cfg.workers);

  auto run_one = [&](std::size_t j) {
    const Job& job = jobs[j];
    out.results[j].run = check_candidate(problems.at(job.problem), job.candidate, cfg);
  };

  if (!short_circuit) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t j = next++; j < jobs.size(); j = next++) run_one(j);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nworkers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  } else {
    // one queue per problem, processed in job order
    std::map<std::size_t, std::vector<std::size_t>> per_problem;
    for (std::size_t j = 0; j < jobs.size(); ++j) per_problem[jobs[j].problem].push_back(j);
    std::vector<const std::vector<std::size_t>*> queues;
    for (const auto& [_, q] : per_problem) queues.push_back(&q);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t q = next++; q < queues.size(); q = next++) {
        bool done = false;
        for (std::size_t j : *queues[q]) {
          if (done) {
            out.results[j].skipped = true;
            continue;
          }
          run_one(j);
          done = out.results[j].run.proved();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nworkers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }

  BatchSummary& s = out.summary;
  s.jobs = jobs.size();
  std::set<std::string> solved;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const JobResult& r = out.results[j];
    if (r.skipped) continue;
    ++s.run;
    ++s.verdicts[std::string(verdict_name(r.run.verdict))];
    ++s.histogram[bucket(r.run.elapsed_ms)];
    if (r.run.proved()) {
      ++s.proved;
      solved.insert(problems.at(jobs[j].problem).id);
    }
  }
  s.solved_ids.assign(solved.begin(), solved.end());
  return out;
}

std::string render_summary(const BatchSummary& s) {
  std::ostringstream os;
  os << "jobs " << s.jobs << ", run " << s.run << ", proved " << s.proved << ", solved problems "
     << s.solved_ids.size() << "\n";
  for (const auto& [v, n] : s.verdicts) os << "  " << v << ": " << n << "\n";
  static const char* kLabels[] = {"<10ms", "<50ms", "<100ms", "<200ms", "<500ms", ">=500ms"};
  os << "  time:";
  for (std::size_t i = 0; i < s.histogram.size(); ++i) os << " " << kLabels[i] << "=" << s.histogram[i];
  os << "\n";
  return os.str();
}

}  // namespace indloop
