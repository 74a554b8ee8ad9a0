// SPDX-License-Identifier: Apache-2.0
//
// indloop: command-line front end.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "indloop/baselines.hpp"
#include "indloop/driver.hpp"
#include "indloop/prover.hpp"
#include "indloop/smt.hpp"
#include "indloop/tokens.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace indloop;

namespace {

std::chrono::milliseconds parse_duration(const std::string& s) {
  std::size_t used = 0;
  double v = std::stod(s, &used);
  std::string unit = s.substr(used);
  if (unit == "ms") return std::chrono::milliseconds(static_cast<long>(v));
  if (unit == "s" || unit.empty()) return std::chrono::milliseconds(static_cast<long>(v * 1000));
  throw std::invalid_argument("bad duration '" + s + "'");
}

const Problem& find_problem(const std::vector<Problem>& ps, const std::string& id) {
  for (const auto& p : ps)
    if (p.id == id) return p;
  throw std::runtime_error("no problem with id " + id);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

/// `ID: candidate text` lines.
std::vector<std::pair<std::string, std::string>> read_solution_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw std::runtime_error("expected 'ID: solution' in " + path);
    std::string text = line.substr(colon + 1);
    text.erase(0, text.find_first_not_of(' '));
    out.emplace_back(line.substr(0, colon), text);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"indloop: invented induction predicates for program equivalence"};
  app.require_subcommand(1);

  // ingest
  std::string ingest_dir, ingest_out;
  auto* ingest = app.add_subcommand("ingest", "collect benchmark problems from a directory");
  ingest->add_option("dir", ingest_dir, "benchmark directory")->required()->check(CLI::ExistingDirectory);
  ingest->add_option("-o,--out", ingest_out, "write parsed problems to this file");

  // init
  std::string run_dir, problems_path, config_path;
  std::optional<std::uint64_t> seed;
  std::string seed_solutions;
  auto* init = app.add_subcommand("init", "create a run and execute the initial phase");
  init->add_option("--run", run_dir, "run directory")->required();
  init->add_option("--problems", problems_path, "problem file")->required()->check(CLI::ExistingFile);
  init->add_option("--config", config_path, "JSON configuration")->check(CLI::ExistingFile);
  init->add_option("--seed", seed, "seed (overrides the configuration)");
  init->add_option("--seed-solutions", seed_solutions, "known solutions, one 'ID: text' per line");
  bool init_skip = false;
  init->add_flag("--skip-search", init_skip, "only create the run (and add seed solutions)");

  // export-train
  std::string export_out;
  auto* exp = app.add_subcommand("export-train", "write training examples for the current db");
  exp->add_option("--run", run_dir, "run directory")->required()->check(CLI::ExistingDirectory);
  exp->add_option("-o,--out", export_out, "output file (stdout if omitted)");

  // iterate
  int iter_count = 1;
  std::string replay_from;
  auto* iter = app.add_subcommand("iterate", "run loop iterations");
  iter->add_option("--run", run_dir, "run directory")->required()->check(CLI::ExistingDirectory);
  iter->add_option("-n,--count", iter_count, "number of iterations")->check(CLI::PositiveNumber);
  iter->add_option("--replay-from", replay_from, "reuse logged predictions of another run");

  // baseline
  std::string bench_dir, provers_arg = "z3", heuristics_arg = "0,1,2,3,4", timeout_arg = "10s", csv_out;
  unsigned workers = 1;
  auto* base = app.add_subcommand("baseline", "compare manual induction heuristics");
  base->add_option("--bench", bench_dir, "benchmark directory")->required()->check(CLI::ExistingDirectory);
  base->add_option("--heuristic", heuristics_arg, "comma list of n=0..9 or strong");
  base->add_option("--provers", provers_arg, "comma list of z3, cvc5, vampire");
  base->add_option("--timeout", timeout_arg, "per-problem timeout, e.g. 10s");
  base->add_option("--workers", workers, "parallel solver processes");
  base->add_option("--csv", csv_out, "also write CSV here");

  // report
  std::string pattern;
  auto* report = app.add_subcommand("report", "summarize a run");
  report->add_option("--run", run_dir, "run directory")->required()->check(CLI::ExistingDirectory);
  report->add_option("--pattern", pattern, "count solutions containing this text per iteration");

  // check
  std::string problem_id, cand_text, timeout_check = "2s";
  bool do_minimize = false;
  auto* check = app.add_subcommand("check", "prove a problem with a candidate");
  check->add_option("--problems", problems_path, "problem file")->required()->check(CLI::ExistingFile);
  check->add_option("--id", problem_id, "problem id")->required();
  check->add_option("--candidate", cand_text, "predicates separated by |");
  check->add_option("--timeout", timeout_check, "solver timeout");
  check->add_flag("--minimize", do_minimize, "minimize a successful candidate");

  // emit
  bool recursive = false, tokens = false;
  auto* emit = app.add_subcommand("emit", "print the SMT-LIB script of a problem");
  emit->add_option("--problems", problems_path, "problem file")->required()->check(CLI::ExistingFile);
  emit->add_option("--id", problem_id, "problem id")->required();
  emit->add_option("--candidate", cand_text, "predicates separated by |");
  emit->add_flag("--recursive", recursive, "define functions recursively instead of by axioms");
  emit->add_flag("--tokens", tokens, "print the token encoding instead");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      auto bench = ingest_benchmark(ingest_dir);
      std::size_t parsed = 0;
      std::string lines;
      for (const auto& b : bench) {
        if (!b.parsed) continue;
        ++parsed;
        lines += problem_line(*b.parsed) + "\n";
      }
      std::cout << bench.size() << " problems (" << parsed << " parsed, " << bench.size() - parsed
                << " SMT-LIB)\n";
      if (!ingest_out.empty()) std::ofstream(ingest_out) << lines;
      return 0;
    }

    if (*init) {
      RunConfig cfg;
      if (!config_path.empty()) cfg = load_config(config_path);
      else cfg.apply_env();
      if (seed) cfg.seed = *seed;
      Run run = Run::create(run_dir, cfg, read_problems(problems_path));
      if (!seed_solutions.empty()) {
        std::vector<std::pair<std::string, Candidate>> sols;
        for (const auto& [id, text] : read_solution_lines(seed_solutions))
          sols.emplace_back(id, parse_candidate(text, find_problem(run.problems(), id).registry));
        std::cout << run.seed_solutions(sols) << " seed solutions accepted\n";
      }
      if (!init_skip) run.init(&std::cout);
      return 0;
    }

    if (*exp) {
      Run run = Run::open(run_dir);
      auto lines = export_training(run.db(), run.problems(), run.config(), run.config().seed);
      std::ofstream file;
      if (!export_out.empty()) file.open(export_out);
      std::ostream& os = export_out.empty() ? std::cout : file;
      for (const auto& l : lines) os << l << "\n";
      return 0;
    }

    if (*iter) {
      Run run = Run::open(run_dir);
      for (int i = 0; i < iter_count; ++i)
        run.iterate(replay_from.empty() ? std::nullopt : std::optional<std::string>(replay_from), &std::cout);
      return 0;
    }

    if (*base) {
      auto bench = ingest_benchmark(bench_dir);
      std::vector<Heuristic> hs;
      for (const auto& h : split_list(heuristics_arg)) hs.push_back(Heuristic::parse(h));
      std::vector<ProverSpec> ps;
      for (const auto& name : split_list(provers_arg)) {
        auto spec = prover_template(name);
        if (!spec) throw std::runtime_error("unknown prover " + name);
        ps.push_back(*spec);
      }
      if (const char* s = std::getenv("INDLOOP_SOLVER"); s && *s)
        for (auto& p : ps)
          if (p.name == "z3") p.config.command = s;
      auto table = run_comparison(bench, ps, hs, parse_duration(timeout_arg), workers);
      std::cout << table.text();
      if (!csv_out.empty()) std::ofstream(csv_out) << table.csv();
      return 0;
    }

    if (*report) {
      Run run = Run::open(run_dir);
      std::cout << "run " << run.dir() << ": " << run.problems().size() << " problems, "
                << run.db().solved() << " solved, " << run.db().history().size()
                << " solutions recorded\n";
      for (int k = 0; k <= run.iteration(); ++k) {
        fs::path rp = fs::path(run.iteration_dir(k)) / "report.json";
        if (!fs::exists(rp)) continue;
        auto j = nlohmann::json::parse(std::ifstream(rp));
        std::cout << "  iter " << k << ": solved " << j["cumulative_solved"] << " (+"
                  << j["newly_solved"] << "), validity " << j["validity_rate"];
        if (!pattern.empty()) {
          std::size_t n = 0;
          for (const auto& s : run.db().history())
            if (s.iteration <= k && s.text.find(pattern) != std::string::npos) ++n;
          std::cout << ", pattern " << n;
        }
        std::cout << "\n";
      }
      return 0;
    }

    if (*check) {
      auto ps = read_problems(problems_path);
      const Problem& p = find_problem(ps, problem_id);
      Candidate c = cand_text.empty() ? Candidate{} : parse_candidate(cand_text, p.registry);
      SolverConfig cfg;
      if (const char* s = std::getenv("INDLOOP_SOLVER"); s && *s) cfg.command = s;
      cfg.timeout = parse_duration(timeout_check);
      SolverRun r = check_candidate(p, c, cfg);
      std::cout << verdict_name(r.verdict) << " " << r.elapsed_ms << " ms\n";
      if (!r.diagnostics.empty()) std::cout << r.diagnostics << "\n";
      if (do_minimize && r.proved()) {
        Minimized m = minimize(p, c, MinimizeMode::Shortest, cfg);
        std::cout << "minimized: " << candidate_text(m.candidate, p.registry) << "\n";
      }
      return r.proved() ? 0 : 2;
    }

    if (*emit) {
      auto ps = read_problems(problems_path);
      const Problem& p = find_problem(ps, problem_id);
      Candidate c = cand_text.empty() ? Candidate{} : parse_candidate(cand_text, p.registry);
      if (tokens) {
        std::cout << encode_example(p, c) << "\n";
        return 0;
      }
      EmitOptions o;
      o.style = recursive ? DefStyle::Recursive : DefStyle::Quantified;
      SmtProblem sp = emit_problem(p, o);
      for (const auto& q : c) sp.instances.push_back(emit_induction_instance(q, p.registry));
      std::cout << sp.script();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
