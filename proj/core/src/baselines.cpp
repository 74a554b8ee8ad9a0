// SPDX-License-Identifier: Apache-2.0

#include "indloop/baselines.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "indloop/smt.hpp"

namespace indloop {

namespace fs = std::filesystem;

Heuristic Heuristic::parse(std::string_view s) {
  if (s == "strong") return {Kind::Strong, 0};
  if (s.starts_with("n=")) s.remove_prefix(2);
  if (s.size() == 1 && s[0] >= '0' && s[0] <= '9') return {Kind::Previous, s[0] - '0'};
  throw std::invalid_argument("unknown heuristic '" + std::string(s) + "'");
}

std::string Heuristic::label() const {
  return kind == Kind::Strong ? "strong" : std::to_string(n);
}

namespace {

Pred small_at(Pred x) { return p_app({-1, Role::Small}, {std::move(x)}); }
Pred fast_at(Pred x) { return p_app({-1, Role::Fast}, {std::move(x)}); }

Pred offset_term(int k) {
  // x + k, with k written over 0, 1, 2
  if (k == 0) return p_x();
  Pred c = p_int(k % 2 == 0 ? 2 : 1);
  for (int v = k % 2 == 0 ? 2 : 1; v < k; v += 2) c = p_add(c, p_int(2));
  return p_add(p_x(), std::move(c));
}

}  // namespace

Pred manual_predicate(int n) {
  if (n < 1 || n > 9) throw std::invalid_argument("n must be in 1..9");
  Pred conj = p_eq(small_at(p_x()), fast_at(p_x()));
  for (int k = 1; k < n; ++k)
    conj = p_and(std::move(conj), p_eq(small_at(offset_term(k)), fast_at(offset_term(k))));
  return p_implies(p_le(p_int(0), p_x()), std::move(conj));
}

std::string strong_induction_instance() {
  auto p = [](const std::string& x) {
    return "(=> (<= 0 " + x + ") (forall ((z Int)) (=> (and (<= 0 z) (<= z " + x +
           ")) (= (small z) (fast z)))))";
  };
  return "(assert (=> (and (forall ((y Int)) " + p("0") + ") (forall ((x Int) (y Int)) (=> " +
         p("x") + " " + p("(+ x 1)") + "))) (forall ((x Int) (y Int)) (=> (<= 0 x) " + p("x") +
         "))))";
}

std::vector<std::string> heuristic_instances(const Heuristic& h) {
  if (h.kind == Heuristic::Kind::Strong) return {strong_induction_instance()};
  if (h.n == 0) return {};
  static const LoopRegistry empty;
  return {emit_induction_instance(manual_predicate(h.n), empty)};
}

std::string insert_before_check_sat(const std::string& script,
                                    const std::vector<std::string>& assertions) {
  std::string block;
  for (const auto& a : assertions) block += a + "\n";
  auto pos = script.rfind("(check-sat)");
  if (pos == std::string::npos) return script + block + "(check-sat)\n";
  return script.substr(0, pos) + block + script.substr(pos);
}

std::string BenchProblem::script(const Heuristic& h) const {
  auto inst = heuristic_instances(h);
  if (parsed) {
    SmtProblem sp = emit_problem(*parsed);
    sp.instances = std::move(inst);
    return sp.script();
  }
  return insert_before_check_sat(raw_smt, inst);
}

std::vector<BenchProblem> ingest_benchmark(const std::string& dir) {
  std::map<std::string, BenchProblem> byid;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::string ext = f.extension().string();
    if (ext == ".smt2") {
      std::ifstream in(f);
      std::stringstream ss;
      ss << in.rdbuf();
      BenchProblem b;
      b.id = f.stem().string();
      b.raw_smt = ss.str();
      byid[b.id] = std::move(b);
    }
  }
  for (const auto& f : files) {
    std::string ext = f.extension().string();
    if (ext != ".txt" && ext != ".prob") continue;
    for (auto& p : read_problems(f.string())) {
      if (byid.count(p.id)) continue;
      BenchProblem b;
      b.id = p.id;
      b.parsed = std::move(p);
      byid[b.id] = std::move(b);
    }
  }
  std::vector<BenchProblem> out;
  for (auto& [_, b] : byid) out.push_back(std::move(b));
  return out;
}

const ComparisonCell* ComparisonTable::cell(const std::string& prover,
                                            const std::string& heuristic) const {
  for (const auto& c : cells)
    if (c.prover == prover && c.heuristic == heuristic) return &c;
  return nullptr;
}

std::string ComparisonTable::csv() const {
  std::ostringstream os;
  os << "prover,heuristic,solved,total\n";
  for (const auto& c : cells) {
    os << c.prover << ',' << c.heuristic << ',';
    if (c.available) {
      os << c.solved;
    } else {
      os << "n/a";
    }
    os << ',' << problems << '\n';
  }
  return os.str();
}

std::string ComparisonTable::text() const {
  std::ostringstream os;
  os << std::left << std::setw(10) << "prover";
  for (const auto& h : heuristics) os << std::right << std::setw(8) << h;
  os << std::right << std::setw(8) << "total" << '\n';
  for (const auto& p : provers) {
    os << std::left << std::setw(10) << p;
    std::set<std::string> uni;
    bool any = false;
    for (const auto& h : heuristics) {
      const ComparisonCell* c = cell(p, h);
      if (c && c->available) {
        os << std::right << std::setw(8) << c->solved;
        uni.insert(c->solved_ids.begin(), c->solved_ids.end());
        any = true;
      } else {
        os << std::right << std::setw(8) << "n/a";
      }
    }
    os << std::right << std::setw(8) << (any ? std::to_string(uni.size()) : "n/a") << '\n';
  }
  os << "(" << problems << " problems)\n";
  return os.str();
}

ComparisonTable run_comparison(const std::vector<BenchProblem>& problems,
                               const std::vector<ProverSpec>& provers,
                               const std::vector<Heuristic>& heuristics,
                               std::chrono::milliseconds timeout, unsigned workers) {
  ComparisonTable t;
  t.problems = problems.size();
  for (const auto& h : heuristics) t.heuristics.push_back(h.label());

  // scripts are shared across provers
  std::vector<std::vector<std::string>> scripts(heuristics.size());
  for (std::size_t h = 0; h < heuristics.size(); ++h)
    for (const auto& p : problems) scripts[h].push_back(p.script(heuristics[h]));

  for (const auto& spec : provers) {
    t.provers.push_back(spec.name);
    SolverConfig cfg = spec.config;
    cfg.timeout = timeout;
    bool available = solver_available(cfg);
    if (!available)
      std::cerr << "notice: prover '" << spec.name << "' not found; column skipped\n";
    for (std::size_t h = 0; h < heuristics.size(); ++h) {
      ComparisonCell cell{spec.name, t.heuristics[h], available, 0, {}};
      if (available) {
        std::vector<char> proved(problems.size(), 0);
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
          for (std::size_t i = next++; i < problems.size(); i = next++)
            proved[i] = run_solver(scripts[h][i], cfg).proved();
        };
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < std::max(1u, workers); ++w) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
        for (std::size_t i = 0; i < problems.size(); ++i) {
          if (proved[i]) cell.solved_ids.push_back(problems[i].id);
        }
        std::sort(cell.solved_ids.begin(), cell.solved_ids.end());
        cell.solved = cell.solved_ids.size();
      }
      t.cells.push_back(std::move(cell));
    }
  }
  return t;
}

std::optional<ProverSpec> prover_template(const std::string& name) {
  SolverConfig cfg;
  if (name == "z3") {
    cfg.command = "z3 -smt2 -t:{timeout_ms} {file}";
  } else if (name == "cvc5") {
    cfg.command = "cvc5 --lang=smt2 --quant-ind --tlimit={timeout_ms} {file}";
  } else if (name == "vampire") {
    cfg.command =
        "vampire --input_syntax smtlib2 --output_mode smtcomp --induction int -t {timeout_s} {file}";
  } else {
    return std::nullopt;
  }
  return ProverSpec{name, cfg};
}

}  // namespace indloop
