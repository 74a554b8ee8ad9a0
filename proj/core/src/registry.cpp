// SPDX-License-Identifier: Apache-2.0

#include "indloop/registry.hpp"

#include <array>
#include <fstream>
#include <regex>
#include <sstream>

namespace indloop {

VarSet free_vars(const Program& p) {
  switch (p.op()) {
    case Op::Zero:
    case Op::One:
    case Op::Two:
      return kNoVars;
    case Op::X:
      return kVarX;
    case Op::Y:
      return kVarY;
    case Op::Loop:
      return static_cast<VarSet>(free_vars(p.arg(1)) | free_vars(p.arg(2)));
    case Op::Loop2:
      return static_cast<VarSet>(free_vars(p.arg(2)) | free_vars(p.arg(3)) | free_vars(p.arg(4)));
    case Op::Compr:
      return free_vars(p.arg(1));
    default: {
      int v = 0;
      for (const auto& a : p.args()) v |= free_vars(a);
      return static_cast<VarSet>(v);
    }
  }
}

int var_count(VarSet v) { return (v & kVarX ? 1 : 0) + (v & kVarY ? 1 : 0); }

namespace {

LoopKind kind_of(Op op) {
  switch (op) {
    case Op::Loop: return LoopKind::Loop;
    case Op::Loop2: return LoopKind::Loop2;
    case Op::Compr: return LoopKind::Compr;
    default: throw std::invalid_argument("not a loop program");
  }
}

constexpr std::array kLoopRoles{Role::Main, Role::F, Role::G, Role::H, Role::U};
constexpr std::array kLoop2Roles{Role::Main, Role::Second, Role::F, Role::G, Role::H,
                                 Role::I,    Role::J,      Role::U, Role::T};
constexpr std::array kComprRoles{Role::Main, Role::F, Role::G, Role::T, Role::U};

void index_rec(const Program& p, LoopRegistry& reg) {
  if (is_loop_op(p.op())) {
    if (reg.find(p)) return;
    reg.add(p);
  }
  for (const auto& a : p.args()) index_rec(a, reg);
}

}  // namespace

std::span<const Role> roles_of(LoopKind kind) {
  switch (kind) {
    case LoopKind::Loop: return kLoopRoles;
    case LoopKind::Loop2: return kLoop2Roles;
    case LoopKind::Compr: return kComprRoles;
  }
  return {};
}

std::optional<int> LoopRegistry::find(const Program& loop_program) const {
  for (const auto& e : entries_)
    if (e.program == loop_program) return e.index;
  return std::nullopt;
}

int LoopRegistry::add(const Program& loop_program) {
  if (auto i = find(loop_program)) return *i;
  LoopEntry e;
  e.index = static_cast<int>(entries_.size());
  e.kind = kind_of(loop_program.op());
  e.program = loop_program;
  e.params = free_vars(loop_program);
  entries_.push_back(std::move(e));
  return entries_.back().index;
}

std::vector<FuncSym> LoopRegistry::symbols() const {
  std::vector<FuncSym> out;
  for (const auto& e : entries_)
    for (Role r : roles_of(e.kind)) out.push_back({e.index, r});
  return out;
}

std::vector<FuncSym> LoopRegistry::main_symbols() const {
  std::vector<FuncSym> out;
  for (const auto& e : entries_) {
    out.push_back({e.index, Role::Main});
    if (e.kind == LoopKind::Loop2) out.push_back({e.index, Role::Second});
  }
  return out;
}

bool LoopRegistry::has(FuncSym f) const {
  if (f.role == Role::Small || f.role == Role::Fast) return f.loop == -1;
  if (f.loop < 0 || f.loop >= static_cast<int>(entries_.size())) return false;
  for (Role r : roles_of(at(f.loop).kind))
    if (r == f.role) return true;
  return false;
}

const Program& LoopRegistry::argument_program(FuncSym f) const {
  const LoopEntry& e = at(f.loop);
  int slot = -1;
  switch (f.role) {
    case Role::F: slot = 0; break;
    case Role::G: slot = 1; break;
    case Role::H: slot = 2; break;
    case Role::I: slot = 3; break;
    case Role::J: slot = 4; break;
    default: break;
  }
  if (slot < 0 || !has(f)) throw std::invalid_argument("not an argument function: " + name(f));
  return e.program.arg(static_cast<std::size_t>(slot));
}

VarSet LoopRegistry::params(FuncSym f) const {
  switch (f.role) {
    case Role::Small:
    case Role::Fast:
      return kVarX;
    case Role::Main:
    case Role::Second:
      return at(f.loop).params;
    case Role::U:
    case Role::T:
      return kNoVars;
    default:
      return free_vars(argument_program(f));
  }
}

int LoopRegistry::arity(FuncSym f) const {
  switch (f.role) {
    case Role::U:
      switch (at(f.loop).kind) {
        case LoopKind::Loop: return 2;
        case LoopKind::Loop2: return 3;
        case LoopKind::Compr: return 1;
      }
      return 0;
    case Role::T:
      return at(f.loop).kind == LoopKind::Loop2 ? 3 : 1;
    default:
      return var_count(params(f));
  }
}

std::string LoopRegistry::name(FuncSym f) const {
  char c = '?';
  switch (f.role) {
    case Role::Small: return "small";
    case Role::Fast: return "fast";
    case Role::Main: c = at(f.loop).kind == LoopKind::Loop2 ? 'w' : 'v'; break;
    case Role::Second: c = 's'; break;
    case Role::F: c = 'f'; break;
    case Role::G: c = 'g'; break;
    case Role::H: c = 'h'; break;
    case Role::I: c = 'i'; break;
    case Role::J: c = 'j'; break;
    case Role::U: c = 'u'; break;
    case Role::T: c = 't'; break;
  }
  return c + std::to_string(f.loop);
}

std::optional<FuncSym> LoopRegistry::lookup(std::string_view n) const {
  if (n == "small") return FuncSym{-1, Role::Small};
  if (n == "fast") return FuncSym{-1, Role::Fast};
  if (n.size() < 2) return std::nullopt;
  int index = 0;
  for (char c : n.substr(1)) {
    if (c < '0' || c > '9') return std::nullopt;
    index = index * 10 + (c - '0');
    if (index > 1'000'000) return std::nullopt;
  }
  if (n.size() > 2 && n[1] == '0') return std::nullopt;
  if (index >= static_cast<int>(entries_.size())) return std::nullopt;
  LoopKind kind = at(index).kind;
  Role role;
  switch (n[0]) {
    case 'v':
      role = kind == LoopKind::Loop2 ? Role::T : Role::Main;
      break;
    case 'w':
      if (kind != LoopKind::Loop2) return std::nullopt;
      role = Role::Main;
      break;
    case 's': role = Role::Second; break;
    case 'f': role = Role::F; break;
    case 'g': role = Role::G; break;
    case 'h': role = Role::H; break;
    case 'i': role = Role::I; break;
    case 'j': role = Role::J; break;
    case 'u': role = Role::U; break;
    case 't': role = Role::T; break;
    default: return std::nullopt;
  }
  FuncSym f{index, role};
  if (!has(f)) return std::nullopt;
  return f;
}

LoopRegistry index_loops(const Program& small, const Program& fast) {
  LoopRegistry reg;
  index_rec(small, reg);
  index_rec(fast, reg);
  return reg;
}

EvalResult eval_function(const LoopRegistry& reg, FuncSym f, std::span<const Integer> args,
                         const EvalLimits& limits) {
  if (!reg.has(f) || f.role == Role::Small || f.role == Role::Fast)
    throw std::invalid_argument("eval_function: unsupported symbol");
  if (static_cast<int>(args.size()) != reg.arity(f))
    throw std::invalid_argument("eval_function: arity mismatch for " + reg.name(f));

  const LoopEntry& e = reg.at(f.loop);
  const Program& p = e.program;
  auto point = [&](VarSet params) {
    Integer x = 0, y = 0;
    std::size_t k = 0;
    if (params & kVarX) x = args[k++];
    if (params & kVarY) y = args[k++];
    return std::pair{x, y};
  };

  switch (f.role) {
    case Role::Main: {
      auto [x, y] = point(e.params);
      return evaluate(p, x, y, limits);
    }
    case Role::Second: {
      auto [x, y] = point(e.params);
      auto r = evaluate_loop2_pair(p, x, y, limits);
      return {r.second, r.abort};
    }
    case Role::U:
      switch (e.kind) {
        case LoopKind::Loop: return run_loop_helper(p.arg(0), args[0], args[1], limits);
        case LoopKind::Loop2: {
          auto r = run_loop2_helper(p.arg(0), p.arg(1), args[0], args[1], args[2], limits);
          return {r.first, r.abort};
        }
        case LoopKind::Compr: return run_compr_helper(p.arg(0), args[0], limits);
      }
      break;
    case Role::T:
      if (e.kind == LoopKind::Loop2) {
        auto r = run_loop2_helper(p.arg(0), p.arg(1), args[0], args[1], args[2], limits);
        return {r.second, r.abort};
      }
      return run_compr_search(p.arg(0), args[0], limits);
    default: {
      const Program& body = reg.argument_program(f);
      auto [x, y] = point(free_vars(body));
      return evaluate(body, x, y, limits);
    }
  }
  return {0, AbortReason::None};
}

Problem::Problem(std::string id_, Program small_, Program fast_)
    : id(std::move(id_)), small(std::move(small_)), fast(std::move(fast_)) {
  registry = index_loops(small, fast);
}

Problem parse_problem_line(std::string_view line, const std::string& fallback_id) {
  static const std::regex with_id(R"(^\s*([A-Za-z0-9_.\-]+):\s+(.*)$)");
  std::string s(line);
  std::smatch m;
  std::string id = fallback_id;
  std::string body = s;
  if (std::regex_match(s, m, with_id)) {
    id = m[1];
    body = m[2];
  }
  auto [lhs, rhs] = parse_equation(body);
  return Problem(id, std::move(lhs), std::move(rhs));
}

std::vector<Problem> parse_problems(std::string_view text) {
  std::vector<Problem> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back(parse_problem_line(line, "P" + std::to_string(lineno)));
    } catch (const ParseError& e) {
      throw ParseError(e.message(), lineno, e.column());
    }
  }
  return out;
}

std::vector<Problem> read_problems(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_problems(ss.str());
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ":" + e.what());
  }
}

std::string problem_line(const Problem& p) {
  return p.id + ": " + to_string(p.small) + " = " + to_string(p.fast);
}

}  // namespace indloop
