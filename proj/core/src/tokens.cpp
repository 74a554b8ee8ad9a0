// SPDX-License-Identifier: Apache-2.0

#include "indloop/tokens.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace indloop {

std::vector<std::string> split_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::string join_tokens(std::span<const std::string> toks) {
  std::string s;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) s += ' ';
    s += toks[i];
  }
  return s;
}

namespace {

std::string letter(int index) {
  if (index < 0 || index >= kMaxLoopLetters)
    throw std::invalid_argument("loop index " + std::to_string(index) + " has no letter");
  return std::string(1, static_cast<char>('a' + index));
}

int slot_of(LoopKind kind, Role r) {
  switch (kind) {
    case LoopKind::Loop:
      switch (r) {
        case Role::F: return 0;
        case Role::G: return 1;
        case Role::H: return 2;
        case Role::U: return 3;
        default: return -1;
      }
    case LoopKind::Loop2:
      switch (r) {
        case Role::F: return 0;
        case Role::G: return 1;
        case Role::H: return 2;
        case Role::I: return 3;
        case Role::J: return 4;
        case Role::U: return 5;
        case Role::T: return 6;
        case Role::Second: return 7;
        default: return -1;
      }
    case LoopKind::Compr:
      switch (r) {
        case Role::F: return 0;
        case Role::G: return 1;
        case Role::T: return 2;
        case Role::U: return 3;
        default: return -1;
      }
  }
  return -1;
}

std::optional<Role> role_of_slot(LoopKind kind, int slot) {
  for (Role r : roles_of(kind))
    if (r != Role::Main && slot_of(kind, r) == slot) return r;
  return std::nullopt;
}

void enc_program(const Program& p, const LoopRegistry& reg, std::vector<std::string>& out) {
  static constexpr const char* kTok[] = {"A", "B", "C", "K", "L", "D", "E",
                                         "F", "G", "H", "I", "J", "M", "N"};
  out.emplace_back(kTok[static_cast<int>(p.op())]);
  if (is_loop_op(p.op())) {
    auto idx = reg.find(p);
    if (!idx) throw std::invalid_argument("loop subprogram missing from registry");
    out.push_back(letter(*idx));
  }
  for (const auto& a : p.args()) enc_program(a, reg, out);
}

void enc_pred(const Pred& p, const LoopRegistry& reg, std::vector<std::string>& out) {
  switch (p.kind()) {
    case PKind::Zero: out.emplace_back("A"); break;
    case PKind::One: out.emplace_back("B"); break;
    case PKind::Two: out.emplace_back("C"); break;
    case PKind::VarX: out.emplace_back("K"); break;
    case PKind::VarY: out.emplace_back("L"); break;
    case PKind::VarZ: out.emplace_back("T"); break;
    case PKind::Add: out.emplace_back("D"); break;
    case PKind::Sub: out.emplace_back("E"); break;
    case PKind::Mul: out.emplace_back("F"); break;
    case PKind::Div: out.emplace_back("G"); break;
    case PKind::Mod: out.emplace_back("H"); break;
    case PKind::Ite: out.emplace_back("I"); break;
    case PKind::Eq: out.emplace_back("O"); break;
    case PKind::Le: out.emplace_back("P"); break;
    case PKind::Not: out.emplace_back("Q"); break;
    case PKind::And: out.emplace_back("R"); break;
    case PKind::Implies: out.emplace_back("S"); break;
    case PKind::App: {
      FuncSym f = p.fn();
      if (f.role == Role::Small || f.role == Role::Fast)
        throw std::invalid_argument("small/fast have no token");
      out.push_back(letter(f.loop));
      if (f.role != Role::Main) {
        int slot = slot_of(reg.at(f.loop).kind, f.role);
        if (slot < 0) throw std::invalid_argument("function has no token slot");
        out.push_back(std::to_string(slot));
      }
      break;
    }
  }
  for (const auto& a : p.args()) enc_pred(a, reg, out);
}

class TokenDecoder {
 public:
  TokenDecoder(std::span<const std::string> toks, const LoopRegistry& reg)
      : toks_(toks), reg_(reg) {}

  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ >= toks_.size(); }

  Pred formula() {
    const std::string& t = next();
    if (t == "O" || t == "P") {
      Pred a = term();
      Pred b = term();
      return Pred(t == "O" ? PKind::Eq : PKind::Le, {std::move(a), std::move(b)});
    }
    if (t == "Q") {
      Pred a = formula();
      if (a.kind() != PKind::Eq && a.kind() != PKind::Le)
        throw DecodeError("negation of a non-literal");
      return p_not(std::move(a));
    }
    if (t == "R" || t == "S") {
      Pred a = formula();
      Pred b = formula();
      return Pred(t == "R" ? PKind::And : PKind::Implies, {std::move(a), std::move(b)});
    }
    throw DecodeError("expected a formula token, got '" + t + "'");
  }

  Pred term() {
    const std::string& t = next();
    if (t.size() == 1 && t[0] >= 'a' && t[0] < 'a' + kMaxLoopLetters) return application(t[0]);
    auto bin = [&](PKind k) {
      Pred a = term();
      Pred b = term();
      return Pred(k, {std::move(a), std::move(b)});
    };
    if (t == "A") return p_int(0);
    if (t == "B") return p_int(1);
    if (t == "C") return p_int(2);
    if (t == "K") return p_x();
    if (t == "L") return p_y();
    if (t == "T") return Pred::leaf(PKind::VarZ);
    if (t == "D") return bin(PKind::Add);
    if (t == "E") return bin(PKind::Sub);
    if (t == "F") return bin(PKind::Mul);
    if (t == "G") return bin(PKind::Div);
    if (t == "H") return bin(PKind::Mod);
    if (t == "I") {
      Pred c = term();
      Pred a = term();
      Pred b = term();
      return Pred(PKind::Ite, {std::move(c), std::move(a), std::move(b)});
    }
    throw DecodeError("expected a term token, got '" + t + "'");
  }

 private:
  const std::string& next() {
    if (done()) throw DecodeError("unexpected end of token stream");
    return toks_[pos_++];
  }

  Pred application(char c) {
    int index = c - 'a';
    if (index >= static_cast<int>(reg_.size()))
      throw DecodeError(std::string("loop letter '") + c + "' not in problem");
    FuncSym f{index, Role::Main};
    if (!done() && toks_[pos_].size() == 1 && std::isdigit(static_cast<unsigned char>(toks_[pos_][0]))) {
      int slot = toks_[pos_][0] - '0';
      auto r = role_of_slot(reg_.at(index).kind, slot);
      if (!r) throw DecodeError("invalid function slot " + toks_[pos_]);
      ++pos_;
      f.role = *r;
    }
    std::vector<Pred> args;
    int n = reg_.arity(f);
    for (int i = 0; i < n; ++i) args.push_back(term());
    return p_app(f, std::move(args));
  }

  std::span<const std::string> toks_;
  const LoopRegistry& reg_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::string> encode_program(const Program& p, const LoopRegistry& reg) {
  std::vector<std::string> out;
  enc_program(p, reg, out);
  return out;
}

std::vector<std::string> encode_problem(const Problem& problem) {
  std::vector<std::string> out = encode_program(problem.small, problem.registry);
  out.emplace_back("=");
  enc_program(problem.fast, problem.registry, out);
  return out;
}

std::vector<std::string> encode_pred(const Pred& p, const LoopRegistry& reg) {
  std::vector<std::string> out;
  enc_pred(p, reg, out);
  return out;
}

std::vector<std::string> encode_candidate(const Candidate& c, const LoopRegistry& reg) {
  std::vector<std::string> out;
  for (const auto& p : c) enc_pred(p, reg, out);
  return out;
}

std::string encode_example(const Problem& problem, const Candidate& c) {
  auto toks = encode_problem(problem);
  toks.emplace_back(">");
  auto sol = encode_candidate(c, problem.registry);
  toks.insert(toks.end(), sol.begin(), sol.end());
  return join_tokens(toks);
}

Decoded decode_tokens(std::span<const std::string> toks, const LoopRegistry& reg) {
  Decoded out;
  TokenDecoder d(toks, reg);
  while (!d.done()) {
    try {
      out.candidate.push_back(d.formula());
      out.consumed = d.pos();
    } catch (const DecodeError&) {
      if (out.candidate.empty()) throw;
      break;
    }
  }
  if (out.candidate.empty()) throw DecodeError("empty token stream");
  return out;
}

Candidate decode_tokens(std::string_view s, const LoopRegistry& reg) {
  auto toks = split_tokens(s);
  return decode_tokens(std::span<const std::string>(toks), reg).candidate;
}

namespace {

bool is_letter(const std::string& t) {
  return t.size() == 1 && t[0] >= 'a' && t[0] < 'a' + kMaxLoopLetters;
}

}  // namespace

int max_shift(std::string_view example) {
  int hi = -1;
  for (const auto& t : split_tokens(example))
    if (is_letter(t)) hi = std::max(hi, t[0] - 'a');
  return hi < 0 ? -1 : kMaxLoopLetters - 1 - hi;
}

std::optional<std::string> shift_indices(std::string_view example, int offset) {
  auto toks = split_tokens(example);
  for (auto& t : toks) {
    if (!is_letter(t)) continue;
    int v = t[0] - 'a' + offset;
    if (v < 0 || v >= kMaxLoopLetters) return std::nullopt;
    t[0] = static_cast<char>('a' + v);
  }
  return join_tokens(toks);
}

// ---------------------------------------------------------------------------
// Definition expansion

namespace {

std::vector<Pred> bind_args(VarSet params, const Pred& x, const Pred& y) {
  std::vector<Pred> out;
  if (params & kVarX) out.push_back(x);
  if (params & kVarY) out.push_back(y);
  return out;
}

/// Values standing for X and Y given the arguments of a function with
/// parameters `params`.
std::pair<Pred, Pred> point_of(VarSet params, const std::vector<Pred>& args) {
  Pred x = p_int(0), y = p_int(0);
  std::size_t k = 0;
  if (params & kVarX) x = args[k++];
  if (params & kVarY) y = args[k++];
  return {x, y};
}

Pred ite(Pred c, Pred a, Pred b) { return Pred(PKind::Ite, {std::move(c), std::move(a), std::move(b)}); }

void collect(const Pred& p, const LoopRegistry& reg, std::vector<std::vector<std::size_t>>& paths,
             std::vector<std::size_t>& cur) {
  if (p.kind() == PKind::App && unfold(p, reg)) paths.push_back(cur);
  for (std::size_t i = 0; i < p.args().size(); ++i) {
    cur.push_back(i);
    collect(p.arg(i), reg, paths, cur);
    cur.pop_back();
  }
}

Pred& at_path(Pred& p, std::span<const std::size_t> path) {
  Pred* cur = &p;
  for (std::size_t i : path) cur = &cur->mutable_args()[i];
  return *cur;
}

}  // namespace

std::optional<Pred> unfold(const Pred& app, const LoopRegistry& reg) {
  if (app.kind() != PKind::App) return std::nullopt;
  FuncSym f = app.fn();
  if (f.role == Role::Small || f.role == Role::Fast || !reg.has(f)) return std::nullopt;
  const LoopEntry& e = reg.at(f.loop);
  const auto& args = app.args();
  auto sym = [&](Role r) { return FuncSym{f.loop, r}; };
  auto call = [&](Role r, const Pred& x, const Pred& y) {
    return p_app(sym(r), bind_args(reg.params(sym(r)), x, y));
  };

  switch (f.role) {
    case Role::Main:
    case Role::Second: {
      auto [x, y] = point_of(e.params, args);
      switch (e.kind) {
        case LoopKind::Loop:
          return p_app(sym(Role::U), {call(Role::G, x, y), call(Role::H, x, y)});
        case LoopKind::Loop2:
          return p_app(sym(f.role == Role::Main ? Role::U : Role::T),
                       {call(Role::H, x, y), call(Role::I, x, y), call(Role::J, x, y)});
        case LoopKind::Compr:
          return p_app(sym(Role::U), {call(Role::G, x, y)});
      }
      return std::nullopt;
    }
    case Role::U:
    case Role::T: {
      switch (e.kind) {
        case LoopKind::Loop: {
          Pred prev = p_app(sym(Role::U), {p_sub(args[0], p_int(1)), args[1]});
          return ite(args[0], args[1], call(Role::F, prev, args[0]));
        }
        case LoopKind::Loop2: {
          Pred dec = p_sub(args[0], p_int(1));
          Pred pu = p_app(sym(Role::U), {dec, args[1], args[2]});
          Pred pt = p_app(sym(Role::T), {dec, args[1], args[2]});
          bool first = f.role == Role::U;
          return ite(args[0], first ? args[1] : args[2],
                     call(first ? Role::F : Role::G, pu, pt));
        }
        case LoopKind::Compr: {
          if (f.role == Role::T) {
            return ite(call(Role::F, args[0], p_int(0)), args[0],
                       p_app(sym(Role::T), {p_add(args[0], p_int(1))}));
          }
          Pred prev = p_app(sym(Role::U), {p_sub(args[0], p_int(1))});
          return ite(args[0], p_app(sym(Role::T), {p_int(0)}),
                     p_app(sym(Role::T), {p_add(prev, p_int(1))}));
        }
      }
      return std::nullopt;
    }
    default: {
      const Program& body = reg.argument_program(f);
      auto [x, y] = point_of(free_vars(body), args);
      return program_to_term(body, reg, x, y);
    }
  }
}

Candidate expand_definitions(const Candidate& c, const LoopRegistry& reg, int times,
                             std::mt19937_64& rng) {
  Candidate out = c;
  for (int round = 0; round < times; ++round) {
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> sites;
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::vector<std::vector<std::size_t>> paths;
      std::vector<std::size_t> cur;
      collect(out[i], reg, paths, cur);
      for (auto& p : paths) sites.emplace_back(i, std::move(p));
    }
    if (sites.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, sites.size() - 1);
    const auto& [which, path] = sites[pick(rng)];
    Pred& target = at_path(out[which], path);
    target = *unfold(target, reg);
  }
  return out;
}

}  // namespace indloop
