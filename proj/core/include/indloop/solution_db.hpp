// SPDX-License-Identifier: Apache-2.0
//
// Per-problem best solutions with an append-only history, persisted as
// line-delimited JSON.
//
// File layout (version 1):
//   {"format":"indloop-solutions","version":1,"track_fastest":B}
//   {"type":"best","id":...,"shortest":S,"fastest":S?,"hash":H}   per problem, sorted by id
//   {"type":"history","solution":S,"hash":H}                      in discovery order
// where S = {"id","text","size","iteration","origin","speed"?} and H is the
// FNV-1a hash (hex) of the record serialized without its hash field.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "indloop/predicate.hpp"
#include "indloop/registry.hpp"

namespace indloop {

struct Solution {
  std::string problem_id;
  std::string text;  // predicates joined by " | "
  std::size_t size = 0;
  std::optional<double> speed;
  int iteration = 0;
  std::string origin;

  static Solution make(const Problem& problem, const Candidate& cand, int iteration,
                       std::string origin);
  Candidate candidate(const Problem& problem) const;

  friend bool operator==(const Solution&, const Solution&) = default;
};

/// Shortest-solution order: size, then text.
bool shorter(const Solution& a, const Solution& b);
/// Fastest-solution order: speed, then size, then text. Both need a speed.
bool faster(const Solution& a, const Solution& b);

struct DbEntry {
  Solution shortest;
  std::optional<Solution> fastest;
};

struct OfferResult {
  bool new_shortest = false;
  bool new_fastest = false;
  bool new_history = false;
};

class SolutionDB {
 public:
  explicit SolutionDB(bool track_fastest = false) : track_fastest_(track_fastest) {}

  bool track_fastest() const { return track_fastest_; }
  const std::map<std::string, DbEntry>& entries() const { return entries_; }
  const std::vector<Solution>& history() const { return history_; }
  std::size_t solved() const { return entries_.size(); }
  bool contains(const std::string& id) const { return entries_.count(id) != 0; }
  const DbEntry* find(const std::string& id) const;

  /// Records a verified solution. Speeds are dropped unless fastest
  /// tracking is on.
  OfferResult offer(Solution s);

  /// Whether a solution text is already in the history of a problem.
  bool known(const std::string& id, const std::string& text) const {
    return seen_.count({id, text}) != 0;
  }

  /// Number of history entries for a problem.
  std::size_t history_count(const std::string& id) const;

  std::string serialize() const;
  static SolutionDB parse(const std::string& text);  // throws std::runtime_error

  void save(const std::string& path) const;  // atomic replace
  static SolutionDB load(const std::string& path);

 private:
  bool track_fastest_;
  std::map<std::string, DbEntry> entries_;
  std::vector<Solution> history_;
  std::set<std::pair<std::string, std::string>> seen_;
};

}  // namespace indloop
