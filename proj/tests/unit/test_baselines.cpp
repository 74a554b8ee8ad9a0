// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "indloop/baselines.hpp"
#include "indloop/smt.hpp"
#include "test_util.hpp"

using namespace indloop;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("heuristic labels") {
  CHECK(Heuristic::parse("n=4") == Heuristic{Heuristic::Kind::Previous, 4});
  CHECK(Heuristic::parse("0").label() == "0");
  CHECK(Heuristic::parse("strong").kind == Heuristic::Kind::Strong);
  CHECK_THROWS_AS(Heuristic::parse("10"), std::invalid_argument);
  CHECK_THROWS_AS(Heuristic::parse("weak"), std::invalid_argument);
}

TEST_CASE("manual predicates") {
  LoopRegistry none;
  CHECK(to_smt(manual_predicate(1), none) == "(=> (<= 0 x) (= (small x) (fast x)))");
  CHECK(to_smt(manual_predicate(2), none) ==
        "(=> (<= 0 x) (and (= (small x) (fast x)) (= (small (+ x 1)) (fast (+ x 1)))))");
  std::string nine = to_smt(manual_predicate(9), none);
  CHECK(nine.find("(small (+ x (+ (+ (+ 2 2) 2) 2)))") != std::string::npos);
  CHECK(nine.find("(small (+ x (+ (+ (+ 1 2) 2) 2)))") != std::string::npos);
  CHECK_THROWS_AS(manual_predicate(0), std::invalid_argument);
  CHECK(heuristic_instances(Heuristic{}).empty());
  CHECK(heuristic_instances(Heuristic::parse("3")).size() == 1);
}

TEST_CASE("instances go before the last check-sat") {
  CHECK(insert_before_check_sat("(a)\n(check-sat)\n", {"(b)"}) == "(a)\n(b)\n(check-sat)\n");
  CHECK(insert_before_check_sat("(a)\n", {"(b)"}) == "(a)\n(b)\n(check-sat)\n");
}

TEST_CASE("solver: heuristic scripts are well formed" * doctest::timeout(120)) {
  if (!testutil::have_z3()) return;
  for (const char* id : {"A217", "A1026", "A2411"}) {
    BenchProblem b{id, testutil::problem(id), ""};
    for (const char* h : {"1", "4", "9", "strong"}) {
      Verdict v = run_solver(b.script(Heuristic::parse(h)), testutil::solver(1000)).verdict;
      CHECK_MESSAGE(v != Verdict::Error, id << " " << h);
    }
  }
  // strong induction gives the n = 1 conclusion
  BenchProblem a217{"A217", testutil::problem("A217"), ""};
  CHECK(run_solver(a217.script(Heuristic::parse("strong")), testutil::solver(5000)).verdict ==
        Verdict::Unsat);
}

TEST_CASE("ingestion prefers SMT-LIB scripts") {
  TempDir d("indloop-test-ingest");
  std::ofstream(d.path / "set.txt") << "B1: X + 0 = X\nB2: X * 1 = X\n";
  std::ofstream(d.path / "B2.smt2") << "(assert false)\n(check-sat)\n";
  auto bench = ingest_benchmark(d.path.string());
  REQUIRE(bench.size() == 2);
  CHECK(bench[0].id == "B1");
  CHECK(bench[0].parsed);
  CHECK(bench[1].id == "B2");
  CHECK_FALSE(bench[1].parsed);
  CHECK(bench[1].script(Heuristic::parse("1")).find("small") != std::string::npos);
}

TEST_CASE("an empty benchmark gives zero counts") {
  TempDir d("indloop-test-empty");
  auto z3 = prover_template("z3");
  REQUIRE(z3);
  auto table = run_comparison(ingest_benchmark(d.path.string()), {*z3}, {Heuristic{}, Heuristic::parse("1")},
                              std::chrono::milliseconds(100));
  CHECK(table.problems == 0);
  REQUIRE(table.cell("z3", "1"));
  CHECK(table.cell("z3", "1")->solved == 0);
  CHECK(table.csv().find("z3,0,0,0") != std::string::npos);
}

TEST_CASE("unavailable provers are reported, not counted") {
  TempDir d("indloop-test-missing");
  std::ofstream(d.path / "set.txt") << "B1: X + 0 = X\n";
  ProverSpec ghost{"ghost", SolverConfig{}};
  ghost.config.command = "/nonexistent/prover {file}";
  auto table = run_comparison(ingest_benchmark(d.path.string()), {ghost}, {Heuristic{}},
                              std::chrono::milliseconds(100));
  REQUIRE(table.cell("ghost", "0"));
  CHECK_FALSE(table.cell("ghost", "0")->available);
  CHECK(table.csv().find("n/a") != std::string::npos);
}

TEST_CASE("solver: more previous terms solve more" * doctest::timeout(300)) {
  if (!testutil::have_z3()) return;
  TempDir d("indloop-test-ladder");
  std::ofstream(d.path / "set.txt") << "CG00: loop(X + Y + 0, X, 1) = loop(Y + X + 0, X, 1)\n"
                                       "AP01: loop(X + 1, X, 0) = 1 * X\n"
                                       "FB00: loop2(Y, X + Y, X, 0, 1) = loop2(X + Y, X, X, 0, 1)\n";
  auto z3 = prover_template("z3");
  auto table = run_comparison(ingest_benchmark(d.path.string()), {*z3},
                              {Heuristic::parse("0"), Heuristic::parse("1"), Heuristic::parse("2")},
                              std::chrono::milliseconds(2000));
  CHECK(table.cell("z3", "0")->solved_ids == std::vector<std::string>{"CG00"});
  CHECK(table.cell("z3", "1")->solved_ids == std::vector<std::string>{"AP01", "CG00"});
  CHECK(table.cell("z3", "2")->solved == 3);
}
