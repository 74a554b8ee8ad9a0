// SPDX-License-Identifier: Apache-2.0
//
// Stand-in predictor speaking the file protocol. For each problem it
// returns the training solutions of that problem first, then solutions of
// other problems, verbatim and with loop indices shifted.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "indloop/candidates.hpp"
#include "indloop/tokens.hpp"

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mock predictor"};
  std::string train_path, problems_path, out_path;
  std::uint64_t seed = 0;
  std::size_t beam = 240;
  int max_offset = 2;
  bool foreign = true;
  app.add_option("--train", train_path, "training file")->required();
  app.add_option("--problems", problems_path, "problem token file")->required();
  app.add_option("--out", out_path, "prediction file")->required();
  app.add_option("--seed", seed, "seed");
  app.add_option("--beam", beam, "lines per problem")->check(CLI::PositiveNumber);
  app.add_option("--max-offset", max_offset, "largest index shift")->check(CLI::NonNegativeNumber);
  app.add_flag("!--no-foreign", foreign, "only echo a problem's own solutions");
  CLI11_PARSE(app, argc, argv);

  std::ifstream tin(train_path);
  if (!tin) {
    std::cerr << "cannot open " << train_path << "\n";
    return 1;
  }
  std::map<std::string, std::vector<std::string>> own;
  std::vector<std::string> all;
  std::set<std::string> all_seen;
  std::string line;
  while (std::getline(tin, line)) {
    auto gt = line.find('>');
    if (gt == std::string::npos) continue;
    std::string prob = trim(line.substr(0, gt));
    std::string sol = trim(line.substr(gt + 1));
    auto& v = own[prob];
    if (std::find(v.begin(), v.end(), sol) == v.end()) v.push_back(sol);
    if (all_seen.insert(sol).second) all.push_back(sol);
  }

  std::ifstream pin(problems_path);
  if (!pin) {
    std::cerr << "cannot open " << problems_path << "\n";
    return 1;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return 1;
  }
  while (std::getline(pin, line)) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    std::string id = line.substr(0, tab);
    std::string prob = trim(line.substr(tab + 1));

    std::vector<std::string> ranked;
    std::set<std::string> used;
    auto push = [&](const std::string& s) {
      if (ranked.size() < beam && used.insert(s).second) ranked.push_back(s);
    };
    if (auto it = own.find(prob); it != own.end())
      for (const auto& s : it->second) push(s);
    if (foreign) {
      std::vector<std::string> pool = all;
      std::mt19937_64 rng(indloop::mix_seed(seed, id));
      std::shuffle(pool.begin(), pool.end(), rng);
      for (int d = 0; d <= max_offset; ++d)
        for (const auto& s : pool)
          for (int off : {d, -d}) {
            if (auto sh = indloop::shift_indices(s, off)) push(*sh);
            if (d == 0) break;
          }
    }
    for (std::size_t r = 0; r < ranked.size(); ++r) out << id << '\t' << r << '\t' << ranked[r] << '\n';
  }
  return 0;
}
