// SPDX-License-Identifier: Apache-2.0

#include "indloop/solution_db.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "indloop/hash.hpp"
#include "json.hpp"

namespace indloop {

using nlohmann::ordered_json;

Solution Solution::make(const Problem& problem, const Candidate& cand, int iteration,
                        std::string origin) {
  Solution s;
  s.problem_id = problem.id;
  s.text = candidate_text(cand, problem.registry);
  s.size = candidate_size(cand);
  s.iteration = iteration;
  s.origin = std::move(origin);
  return s;
}

Candidate Solution::candidate(const Problem& problem) const {
  if (text.empty()) return {};
  return parse_candidate(text, problem.registry);
}

bool shorter(const Solution& a, const Solution& b) {
  if (a.size != b.size) return a.size < b.size;
  return a.text < b.text;
}

bool faster(const Solution& a, const Solution& b) {
  if (*a.speed != *b.speed) return *a.speed < *b.speed;
  return shorter(a, b);
}

const DbEntry* SolutionDB::find(const std::string& id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

OfferResult SolutionDB::offer(Solution s) {
  OfferResult r;
  if (!track_fastest_) s.speed.reset();
  if (seen_.emplace(s.problem_id, s.text).second) {
    history_.push_back(s);
    r.new_history = true;
  }
  auto it = entries_.find(s.problem_id);
  if (it == entries_.end()) {
    DbEntry e{s, std::nullopt};
    if (track_fastest_ && s.speed) e.fastest = s;
    entries_.emplace(s.problem_id, std::move(e));
    r.new_shortest = true;
    r.new_fastest = track_fastest_ && s.speed;
    return r;
  }
  DbEntry& e = it->second;
  if (shorter(s, e.shortest)) {
    e.shortest = s;
    r.new_shortest = true;
  }
  if (track_fastest_ && s.speed && (!e.fastest || faster(s, *e.fastest))) {
    e.fastest = s;
    r.new_fastest = true;
  }
  return r;
}

std::size_t SolutionDB::history_count(const std::string& id) const {
  std::size_t n = 0;
  for (const auto& h : history_)
    if (h.problem_id == id) ++n;
  return n;
}

namespace {

ordered_json to_json(const Solution& s) {
  ordered_json j;
  j["id"] = s.problem_id;
  j["text"] = s.text;
  j["size"] = s.size;
  j["iteration"] = s.iteration;
  j["origin"] = s.origin;
  if (s.speed) j["speed"] = *s.speed;
  return j;
}

Solution from_json(const ordered_json& j) {
  Solution s;
  s.problem_id = j.at("id").get<std::string>();
  s.text = j.at("text").get<std::string>();
  s.size = j.at("size").get<std::size_t>();
  s.iteration = j.at("iteration").get<int>();
  s.origin = j.at("origin").get<std::string>();
  if (j.contains("speed")) s.speed = j.at("speed").get<double>();
  return s;
}

std::string sealed(ordered_json rec) {
  rec["hash"] = hex64(fnv1a64(rec.dump()));
  return rec.dump();
}

}  // namespace

std::string SolutionDB::serialize() const {
  std::ostringstream os;
  ordered_json header;
  header["format"] = "indloop-solutions";
  header["version"] = 1;
  header["track_fastest"] = track_fastest_;
  os << header.dump() << '\n';
  for (const auto& [id, e] : entries_) {
    ordered_json rec;
    rec["type"] = "best";
    rec["id"] = id;
    rec["shortest"] = to_json(e.shortest);
    if (e.fastest) rec["fastest"] = to_json(*e.fastest);
    os << sealed(std::move(rec)) << '\n';
  }
  for (const auto& s : history_) {
    ordered_json rec;
    rec["type"] = "history";
    rec["solution"] = to_json(s);
    os << sealed(std::move(rec)) << '\n';
  }
  return os.str();
}

SolutionDB SolutionDB::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("solution db: empty file");
  ordered_json header = ordered_json::parse(line);
  if (header.value("format", "") != "indloop-solutions")
    throw std::runtime_error("solution db: bad header");
  if (header.value("version", 0) != 1)
    throw std::runtime_error("solution db: unsupported version");
  SolutionDB db(header.value("track_fastest", false));
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    ordered_json rec = ordered_json::parse(line);
    std::string hash = rec.at("hash").get<std::string>();
    rec.erase("hash");
    if (hex64(fnv1a64(rec.dump())) != hash)
      throw std::runtime_error("solution db: hash mismatch on line " + std::to_string(lineno));
    std::string type = rec.at("type").get<std::string>();
    if (type == "best") {
      DbEntry e{from_json(rec.at("shortest")), std::nullopt};
      if (rec.contains("fastest")) e.fastest = from_json(rec.at("fastest"));
      db.entries_[rec.at("id").get<std::string>()] = std::move(e);
    } else if (type == "history") {
      Solution s = from_json(rec.at("solution"));
      db.seen_.emplace(s.problem_id, s.text);
      db.history_.push_back(std::move(s));
    } else {
      throw std::runtime_error("solution db: unknown record type '" + type + "'");
    }
  }
  return db;
}

void SolutionDB::save(const std::string& path) const {
  std::string tmp = path + ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary);
    if (!o) throw std::runtime_error("cannot write " + tmp);
    o << serialize();
  }
  std::filesystem::rename(tmp, path);
}

SolutionDB SolutionDB::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace indloop
