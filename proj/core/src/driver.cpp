// SPDX-License-Identifier: Apache-2.0

#include "indloop/driver.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "indloop/tokens.hpp"
#include "json.hpp"

namespace indloop {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream o(p, std::ios::binary);
  if (!o) throw std::runtime_error("cannot write " + p.string());
  o << text;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig

void RunConfig::validate() const {
  if (split_sizes.empty()) throw std::invalid_argument("split_sizes must not be empty");
  for (int n : split_sizes)
    if (n < 1) throw std::invalid_argument("split sizes must be positive");
  if (split_candidates == 0 || whole_candidates == 0)
    throw std::invalid_argument("candidates per problem must be positive");
  if (shift_probability < 0 || shift_probability > 1)
    throw std::invalid_argument("shift_probability must be in [0, 1]");
  solver.validate();
}

std::string RunConfig::to_json() const {
  ordered_json j;
  j["mode"] = mode == InferenceMode::Split ? "split" : "whole";
  j["train_on"] = train_on == TrainOn::Shortest ? "shortest" : "shortest+fastest";
  j["shift_probability"] = shift_probability;
  j["expansion"] = expansion;
  j["split_sizes"] = split_sizes;
  j["split_candidates"] = split_candidates;
  j["whole_candidates"] = whole_candidates;
  j["semantic_filter"] = semantic_filter;
  j["short_circuit"] = short_circuit;
  j["minimize_limit"] = minimize_limit;
  j["predictors"] = predictors;
  j["seed"] = seed;
  ordered_json s;
  s["command"] = solver.command;
  s["timeout_ms"] = solver.timeout.count();
  s["grace_ms"] = solver.grace.count();
  s["workers"] = solver.workers;
  s["metric"] = solver.metric == SpeedMetric::WallClock ? "wall" : "instructions";
  j["solver"] = s;
  ordered_json i;
  i["terms"] = init.terms.cap;
  i["max_term_size"] = init.terms.max_size;
  i["threads"] = init.terms.threads;
  i["literals_per_class"] = init.literals.per_class;
  i["predicates"] = init.predicates.count;
  i["candidates"] = init.candidates;
  i["candidate_length"] = init.candidate_length;
  j["init"] = i;
  return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json(const std::string& text) {
  RunConfig c;
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  try {
    if (j.contains("mode")) {
      auto m = j["mode"].get<std::string>();
      if (m == "split") c.mode = InferenceMode::Split;
      else if (m == "whole") c.mode = InferenceMode::Whole;
      else throw std::runtime_error("config: unknown mode '" + m + "'");
    }
    if (j.contains("train_on")) {
      auto t = j["train_on"].get<std::string>();
      if (t == "shortest") c.train_on = TrainOn::Shortest;
      else if (t == "shortest+fastest") c.train_on = TrainOn::ShortestAndFastest;
      else throw std::runtime_error("config: unknown train_on '" + t + "'");
    }
    c.shift_probability = j.value("shift_probability", c.shift_probability);
    c.expansion = j.value("expansion", c.expansion);
    c.split_sizes = j.value("split_sizes", c.split_sizes);
    c.split_candidates = j.value("split_candidates", c.split_candidates);
    c.whole_candidates = j.value("whole_candidates", c.whole_candidates);
    c.semantic_filter = j.value("semantic_filter", c.semantic_filter);
    c.short_circuit = j.value("short_circuit", c.short_circuit);
    c.minimize_limit = j.value("minimize_limit", c.minimize_limit);
    c.predictors = j.value("predictors", c.predictors);
    c.seed = j.value("seed", c.seed);
    if (j.contains("solver")) {
      const auto& s = j["solver"];
      c.solver.command = s.value("command", c.solver.command);
      c.solver.timeout = std::chrono::milliseconds(s.value("timeout_ms", c.solver.timeout.count()));
      c.solver.grace = std::chrono::milliseconds(s.value("grace_ms", c.solver.grace.count()));
      c.solver.workers = s.value("workers", c.solver.workers);
      auto m = s.value("metric", std::string("wall"));
      if (m == "wall") c.solver.metric = SpeedMetric::WallClock;
      else if (m == "instructions") c.solver.metric = SpeedMetric::Instructions;
      else throw std::runtime_error("config: unknown metric '" + m + "'");
    }
    if (j.contains("init")) {
      const auto& i = j["init"];
      c.init.terms.cap = i.value("terms", c.init.terms.cap);
      c.init.terms.max_size = i.value("max_term_size", c.init.terms.max_size);
      c.init.terms.threads = i.value("threads", c.init.terms.threads);
      c.init.literals.per_class = i.value("literals_per_class", c.init.literals.per_class);
      c.init.predicates.count = i.value("predicates", c.init.predicates.count);
      c.init.candidates = i.value("candidates", c.init.candidates);
      c.init.candidate_length = i.value("candidate_length", c.init.candidate_length);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  return c;
}

void RunConfig::apply_env() {
  if (const char* s = std::getenv("INDLOOP_SOLVER"); s && *s) solver.command = s;
  if (const char* p = std::getenv("INDLOOP_PREDICTOR"); p && *p) predictors = {p};
}

RunConfig load_config(const std::string& path) {
  RunConfig c = RunConfig::from_json(read_file(path));
  c.apply_env();
  return c;
}

// ---------------------------------------------------------------------------
// IterationReport

double IterationReport::validity_rate() const {
  if (predictions == 0) return 0;
  return static_cast<double>(predictions - invalid_predictions) / static_cast<double>(predictions);
}

std::string IterationReport::to_json() const {
  ordered_json j;
  j["iteration"] = iteration;
  j["predictions"] = predictions;
  j["invalid_predictions"] = invalid_predictions;
  j["validity_rate"] = validity_rate();
  j["candidates"] = candidates;
  j["problems_with_candidates"] = problems_with_candidates;
  j["jobs"] = batch.jobs;
  j["solver_runs"] = batch.run;
  j["proved"] = batch.proved;
  j["verdicts"] = batch.verdicts;
  j["histogram"] = batch.histogram;
  j["solved_in_batch"] = batch.solved_ids;
  j["new_solutions"] = new_solutions;
  j["improved"] = improved;
  j["newly_solved"] = newly_solved;
  j["cumulative_solved"] = cumulative_solved;
  ordered_json t;
  t["export_ms"] = times.export_ms;
  t["predict_ms"] = times.predict_ms;
  t["assemble_ms"] = times.assemble_ms;
  t["evaluate_ms"] = times.evaluate_ms;
  t["minimize_ms"] = times.minimize_ms;
  j["times"] = t;
  return j.dump(2) + "\n";
}

std::string IterationReport::text() const {
  std::ostringstream os;
  os << "iteration " << iteration << ": solved " << cumulative_solved << " (+" << newly_solved
     << "), new solutions " << new_solutions << ", improved " << improved << "\n";
  if (predictions > 0)
    os << "  predictions " << predictions << ", invalid " << invalid_predictions << ", validity "
       << std::fixed << std::setprecision(3) << validity_rate() << "\n";
  os << "  candidates " << candidates << " for " << problems_with_candidates << " problems\n";
  os << "  " << render_summary(batch);
  return os.str();
}

// ---------------------------------------------------------------------------
// Export

std::vector<std::string> export_training(const SolutionDB& db, const std::vector<Problem>& problems,
                                         const RunConfig& cfg, std::uint64_t seed) {
  std::map<std::string, const Problem*> byid;
  for (const auto& p : problems) byid[p.id] = &p;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution shift(cfg.shift_probability);
  std::vector<std::string> lines;

  auto emit = [&](const Problem& p, const Candidate& c) {
    if (encode_candidate(c, p.registry).size() > kMaxOutputTokens) return;
    std::string line = encode_example(p, c);
    if (shift(rng)) {
      int hi = max_shift(line);
      if (hi > 0) {
        std::uniform_int_distribution<int> off(1, hi);
        if (auto s = shift_indices(line, off(rng))) line = *s;
      }
    }
    lines.push_back(std::move(line));
  };

  for (const auto& [id, entry] : db.entries()) {
    auto it = byid.find(id);
    if (it == byid.end()) continue;
    const Problem& p = *it->second;
    std::vector<const Solution*> sols{&entry.shortest};
    if (cfg.train_on == TrainOn::ShortestAndFastest && entry.fastest &&
        entry.fastest->text != entry.shortest.text)
      sols.push_back(&*entry.fastest);
    for (const Solution* s : sols) {
      Candidate cand = s->candidate(p);
      std::vector<Candidate> units;
      if (cfg.mode == InferenceMode::Split) {
        for (const auto& q : cand) units.push_back({q});
      } else {
        units.push_back(cand);
      }
      for (const auto& u : units) {
        emit(p, u);
        if (!cfg.expansion) continue;
        for (int times = 1; times <= 2; ++times) {
          Candidate e = expand_definitions(u, p.registry, times, rng);
          if (candidate_text(e, p.registry) != candidate_text(u, p.registry)) emit(p, e);
        }
      }
    }
  }
  return lines;
}

std::string problem_token_file(const std::vector<Problem>& problems) {
  std::string out;
  for (const auto& p : problems) out += p.id + "\t" + join_tokens(encode_problem(p)) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Predictions

std::vector<Prediction> parse_predictions(const std::string& text, std::size_t* malformed) {
  std::vector<Prediction> out;
  std::size_t bad = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      ++bad;
      continue;
    }
    Prediction p;
    p.id = line.substr(0, t1);
    try {
      std::size_t used = 0;
      std::string r = line.substr(t1 + 1, t2 - t1 - 1);
      p.rank = std::stoi(r, &used);
      if (used != r.size()) throw std::invalid_argument("rank");
    } catch (const std::exception&) {
      ++bad;
      continue;
    }
    p.tokens = line.substr(t2 + 1);
    out.push_back(std::move(p));
  }
  if (malformed) *malformed = bad;
  return out;
}

Assembled assemble_candidates(const std::vector<Prediction>& predictions,
                              const std::vector<Problem>& problems, const RunConfig& cfg,
                              std::uint64_t seed) {
  std::map<std::string, const Problem*> byid;
  for (const auto& p : problems) byid[p.id] = &p;

  // stable rank order per problem
  std::map<std::string, std::vector<const Prediction*>> per;
  for (const auto& p : predictions) per[p.id].push_back(&p);
  for (auto& [_, v] : per)
    std::stable_sort(v.begin(), v.end(), [](auto* a, auto* b) { return a->rank < b->rank; });

  Assembled out;
  out.predictions = predictions.size();
  for (const auto& [id, preds] : per) {
    auto it = byid.find(id);
    if (it == byid.end()) {
      out.invalid += preds.size();
      continue;
    }
    const Problem& prob = *it->second;
    const LoopRegistry& reg = prob.registry;
    std::vector<Candidate> decoded;
    for (const Prediction* p : preds) {
      try {
        Candidate c = decode_tokens(p->tokens, reg);
        if (c.empty()) throw DecodeError("empty");
        decoded.push_back(std::move(c));
      } catch (const std::exception&) {
        ++out.invalid;
      }
    }
    if (cfg.semantic_filter) {
      for (auto& c : decoded)
        std::erase_if(c, [&](const Pred& q) { return !true_on_grid(q, reg); });
      std::erase_if(decoded, [](const Candidate& c) { return c.empty(); });
    }
    if (decoded.empty()) continue;

    std::vector<Candidate> cands;
    if (cfg.mode == InferenceMode::Whole) {
      for (auto& c : decoded) {
        if (cands.size() == cfg.whole_candidates) break;
        cands.push_back(std::move(c));
      }
    } else {
      // pool of distinct predicates in first-seen order
      std::vector<Pred> pool;
      std::set<std::string> seen;
      for (const auto& c : decoded)
        for (const auto& q : c)
          if (seen.insert(to_text(q, reg)).second) pool.push_back(q);
      std::mt19937_64 rng(mix_seed(seed, id));
      std::uniform_int_distribution<std::size_t> pick_size(0, cfg.split_sizes.size() - 1);
      std::vector<std::size_t> idx(pool.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      for (std::size_t k = 0; k < cfg.split_candidates; ++k) {
        std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(cfg.split_sizes[pick_size(rng)]),
                                              pool.size());
        // partial Fisher-Yates for n distinct members
        for (std::size_t i = 0; i < n; ++i) {
          std::uniform_int_distribution<std::size_t> d(i, idx.size() - 1);
          std::swap(idx[i], idx[d(rng)]);
        }
        Candidate c;
        for (std::size_t i = 0; i < n; ++i) c.push_back(pool[idx[i]]);
        cands.push_back(std::move(c));
      }
    }
    out.candidates[id] = std::move(cands);
  }
  return out;
}

std::string expand_predictor(const std::string& command, const std::map<std::string, std::string>& vars) {
  std::string out;
  for (std::size_t i = 0; i < command.size();) {
    if (command[i] == '{') {
      auto close = command.find('}', i);
      if (close != std::string::npos) {
        auto it = vars.find(command.substr(i + 1, close - i - 1));
        if (it != vars.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += command[i++];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation and selection

IterationReport evaluate_and_select(SolutionDB& db, const std::vector<Problem>& problems,
                                    const std::map<std::string, std::vector<Candidate>>& cands,
                                    const RunConfig& cfg, int iteration, const std::string& origin) {
  IterationReport rep;
  rep.iteration = iteration;
  std::size_t solved_before = db.solved();

  std::vector<Job> jobs;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    auto it = cands.find(problems[i].id);
    if (it == cands.end() || it->second.empty()) continue;
    ++rep.problems_with_candidates;
    for (const auto& c : it->second) jobs.push_back({i, c});
  }
  rep.candidates = jobs.size();

  auto t0 = std::chrono::steady_clock::now();
  BatchResult batch = run_batch(problems, jobs, cfg.solver, cfg.short_circuit);
  rep.times.evaluate_ms = ms_since(t0);
  rep.batch = batch.summary;

  t0 = std::chrono::steady_clock::now();
  std::map<std::size_t, std::vector<const Candidate*>> proved;
  for (std::size_t j = 0; j < jobs.size(); ++j)
    if (!batch.results[j].skipped && batch.results[j].run.proved())
      proved[jobs[j].problem].push_back(&jobs[j].candidate);

  bool fastest = db.track_fastest();
  for (auto& [pi, list] : proved) {
    const Problem& p = problems[pi];
    // distinct proofs, shortest first
    std::vector<std::pair<std::size_t, std::string>> order;
    std::map<std::string, const Candidate*> bytext;
    for (const Candidate* c : list) {
      std::string t = candidate_text(*c, p.registry);
      if (bytext.emplace(t, c).second) order.emplace_back(candidate_size(*c), t);
    }
    std::sort(order.begin(), order.end());
    if (order.size() > cfg.minimize_limit) order.resize(cfg.minimize_limit);
    for (const auto& [_, text] : order) {
      const Candidate& c = *bytext[text];
      if (!fastest && db.known(p.id, text)) continue;
      Minimized m = minimize(p, c, MinimizeMode::Shortest, cfg.solver);
      if (!m.reproved) continue;
      auto r = db.offer(Solution::make(p, m.candidate, iteration, origin));
      rep.new_solutions += r.new_history;
      rep.improved += r.new_shortest;
      if (fastest) {
        Minimized f = minimize(p, c, MinimizeMode::Fastest, cfg.solver);
        if (f.reproved) {
          Solution s = Solution::make(p, f.candidate, iteration, origin);
          s.speed = f.speed;
          auto rf = db.offer(std::move(s));
          rep.new_solutions += rf.new_history;
        }
      }
    }
  }
  rep.times.minimize_ms = ms_since(t0);
  rep.cumulative_solved = db.solved();
  rep.newly_solved = db.solved() - solved_before;
  return rep;
}

// ---------------------------------------------------------------------------
// Run

std::string Run::iteration_dir(int k) const {
  std::ostringstream os;
  os << "iter_" << std::setw(3) << std::setfill('0') << k;
  return (fs::path(dir_) / os.str()).string();
}

Run Run::create(const std::string& dir, const RunConfig& cfg, const std::vector<Problem>& problems) {
  cfg.validate();
  fs::create_directories(dir);
  if (fs::exists(fs::path(dir) / "config.json"))
    throw std::runtime_error("run directory already initialized: " + dir);
  Run r;
  r.dir_ = dir;
  r.cfg_ = cfg;
  r.problems_ = problems;
  r.db_ = SolutionDB(cfg.train_on == TrainOn::ShortestAndFastest);
  write_file(fs::path(dir) / "config.json", cfg.to_json());
  std::string lines;
  for (const auto& p : problems) lines += problem_line(p) + "\n";
  write_file(fs::path(dir) / "problems.txt", lines);
  r.db_.save((fs::path(dir) / "solutions.jsonl").string());
  return r;
}

Run Run::open(const std::string& dir) {
  Run r;
  r.dir_ = dir;
  r.cfg_ = load_config((fs::path(dir) / "config.json").string());
  r.problems_ = read_problems((fs::path(dir) / "problems.txt").string());
  r.db_ = SolutionDB::load((fs::path(dir) / "solutions.jsonl").string());
  for (int k = 0;; ++k) {
    if (!fs::exists(fs::path(r.iteration_dir(k)) / "report.json")) break;
    r.iteration_ = k;
  }
  return r;
}

void Run::commit(int iteration, const IterationReport& report) {
  fs::path idir = iteration_dir(iteration);
  fs::create_directories(idir);
  db_.save((idir / "solutions.jsonl").string());
  db_.save((fs::path(dir_) / "solutions.jsonl").string());
  write_file(idir / "report.json", report.to_json());
  iteration_ = iteration;
}

IterationReport Run::init(std::ostream* log) {
  if (iteration_ >= 0) throw std::runtime_error("initial phase already done in " + dir_);
  InitOptions opts = cfg_.init;
  opts.terms.seed = opts.literals.seed = opts.predicates.seed = cfg_.seed;
  auto t0 = std::chrono::steady_clock::now();
  std::map<std::string, std::vector<Candidate>> cands;
  for (const auto& p : problems_) {
    cands[p.id] = initial_candidates(p, opts);
    if (log) *log << "generated " << cands[p.id].size() << " candidates for " << p.id << "\n";
  }
  double gen_ms = ms_since(t0);
  IterationReport rep = evaluate_and_select(db_, problems_, cands, cfg_, 0, "init");
  rep.times.assemble_ms = gen_ms;
  commit(0, rep);
  if (log) *log << rep.text();
  return rep;
}

std::size_t Run::seed_solutions(const std::vector<std::pair<std::string, Candidate>>& sols) {
  std::size_t accepted = 0;
  for (const auto& [id, cand] : sols) {
    auto it = std::find_if(problems_.begin(), problems_.end(), [&](auto& p) { return p.id == id; });
    if (it == problems_.end()) continue;
    Minimized m = minimize(*it, cand, MinimizeMode::Shortest, cfg_.solver);
    if (!m.reproved) continue;
    db_.offer(Solution::make(*it, m.candidate, std::max(iteration_, 0), "seed"));
    ++accepted;
  }
  db_.save((fs::path(dir_) / "solutions.jsonl").string());
  return accepted;
}

IterationReport Run::iterate(const std::optional<std::string>& replay_from, std::ostream* log) {
  int k = iteration_ + 1;
  if (k == 0) k = 1;  // the loop may start without an initial phase
  fs::path idir = iteration_dir(k);
  fs::create_directories(idir);
  std::uint64_t iseed = mix_seed(cfg_.seed, "iteration " + std::to_string(k));
  IterationReport rep;

  auto t0 = std::chrono::steady_clock::now();
  auto lines = export_training(db_, problems_, cfg_, iseed);
  std::string train;
  for (const auto& l : lines) train += l + "\n";
  write_file(idir / "train.txt", train);
  write_file(idir / "problems.tok", problem_token_file(problems_));
  double export_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  std::vector<fs::path> outputs;
  if (replay_from) {
    Run src;
    src.dir_ = *replay_from;
    fs::path sdir = src.iteration_dir(k);
    for (std::size_t c = 0;; ++c) {
      fs::path f = sdir / ("predictions_" + std::to_string(c) + ".txt");
      if (!fs::exists(f)) break;
      fs::path dst = idir / f.filename();
      if (fs::absolute(f) != fs::absolute(dst)) fs::copy_file(f, dst, fs::copy_options::overwrite_existing);
      outputs.push_back(dst);
    }
    if (outputs.empty()) throw std::runtime_error("no logged predictions in " + sdir.string());
  } else {
    if (cfg_.predictors.empty()) throw std::runtime_error("no predictor command configured");
    for (std::size_t c = 0; c < cfg_.predictors.size(); ++c) {
      fs::path out = idir / ("predictions_" + std::to_string(c) + ".txt");
      std::map<std::string, std::string> vars = {
          {"train", (idir / "train.txt").string()},
          {"problems", (idir / "problems.tok").string()},
          {"out", out.string()},
          {"iteration", std::to_string(k)},
          {"seed", std::to_string(mix_seed(iseed, "predictor " + std::to_string(c)))},
      };
      std::string cmd = expand_predictor(cfg_.predictors[c], vars);
      if (log) *log << "predictor: " << cmd << "\n";
      int status = std::system(cmd.c_str());
      if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0)
        throw std::runtime_error("predictor failed (status " + std::to_string(status) + "): " + cmd);
      if (!fs::exists(out)) throw std::runtime_error("predictor wrote no output: " + out.string());
      outputs.push_back(out);
    }
  }
  double predict_ms = ms_since(t0);

  // each predictor output forms its own batch, like separate prover runs
  t0 = std::chrono::steady_clock::now();
  std::vector<Assembled> batches;
  for (std::size_t c = 0; c < outputs.size(); ++c) {
    std::size_t malformed = 0;
    auto preds = parse_predictions(read_file(outputs[c]), &malformed);
    Assembled a = assemble_candidates(preds, problems_, cfg_, mix_seed(iseed, "assemble " + std::to_string(c)));
    a.predictions += malformed;
    a.invalid += malformed;
    batches.push_back(std::move(a));
  }
  double assemble_ms = ms_since(t0);

  SolutionDB db = db_;
  std::size_t solved_before = db.solved();
  rep.iteration = k;
  for (std::size_t c = 0; c < batches.size(); ++c) {
    IterationReport r = evaluate_and_select(db, problems_, batches[c].candidates, cfg_, k,
                                            "iter " + std::to_string(k) + "/" + std::to_string(c));
    rep.predictions += batches[c].predictions;
    rep.invalid_predictions += batches[c].invalid;
    rep.candidates += r.candidates;
    rep.problems_with_candidates += r.problems_with_candidates;
    rep.batch.jobs += r.batch.jobs;
    rep.batch.run += r.batch.run;
    rep.batch.proved += r.batch.proved;
    for (const auto& [v, n] : r.batch.verdicts) rep.batch.verdicts[v] += n;
    for (std::size_t b = 0; b < rep.batch.histogram.size(); ++b) rep.batch.histogram[b] += r.batch.histogram[b];
    rep.batch.solved_ids.insert(rep.batch.solved_ids.end(), r.batch.solved_ids.begin(), r.batch.solved_ids.end());
    rep.new_solutions += r.new_solutions;
    rep.improved += r.improved;
    rep.times.evaluate_ms += r.times.evaluate_ms;
    rep.times.minimize_ms += r.times.minimize_ms;
  }
  std::sort(rep.batch.solved_ids.begin(), rep.batch.solved_ids.end());
  rep.batch.solved_ids.erase(std::unique(rep.batch.solved_ids.begin(), rep.batch.solved_ids.end()),
                             rep.batch.solved_ids.end());
  rep.times.export_ms = export_ms;
  rep.times.predict_ms = predict_ms;
  rep.times.assemble_ms = assemble_ms;
  rep.cumulative_solved = db.solved();
  rep.newly_solved = db.solved() - solved_before;

  db_ = std::move(db);
  commit(k, rep);
  if (log) *log << rep.text();
  return rep;
}

}  // namespace indloop
