// SPDX-License-Identifier: Apache-2.0

#include "indloop/predicate.hpp"

#include <cctype>
#include <memory>
#include <sstream>

namespace indloop {

bool is_term_kind(PKind k) { return static_cast<int>(k) <= static_cast<int>(PKind::App); }

int pkind_arity(PKind k) {
  switch (k) {
    case PKind::Zero:
    case PKind::One:
    case PKind::Two:
    case PKind::VarX:
    case PKind::VarY:
    case PKind::VarZ:
      return 0;
    case PKind::Not:
      return 1;
    case PKind::Ite:
      return 3;
    case PKind::App:
      return -1;
    default:
      return 2;
  }
}

Pred::Pred(PKind kind, std::vector<Pred> args) : kind_(kind), args_(std::move(args)) {
  if (kind == PKind::App) throw std::invalid_argument("Pred: use the FuncSym constructor");
  if (static_cast<int>(args_.size()) != pkind_arity(kind))
    throw std::invalid_argument("Pred: wrong number of arguments");
}

Pred::Pred(FuncSym fn, std::vector<Pred> args)
    : kind_(PKind::App), fn_(fn), args_(std::move(args)) {}

std::size_t Pred::size() const {
  std::size_t n = 1;
  for (const auto& a : args_) n += a.size();
  return n;
}

std::size_t candidate_size(const Candidate& c) {
  std::size_t n = 0;
  for (const auto& p : c) n += p.size();
  return n;
}

Pred p_add(Pred a, Pred b) { return Pred(PKind::Add, {std::move(a), std::move(b)}); }
Pred p_sub(Pred a, Pred b) { return Pred(PKind::Sub, {std::move(a), std::move(b)}); }
Pred p_mul(Pred a, Pred b) { return Pred(PKind::Mul, {std::move(a), std::move(b)}); }
Pred p_eq(Pred a, Pred b) { return Pred(PKind::Eq, {std::move(a), std::move(b)}); }
Pred p_le(Pred a, Pred b) { return Pred(PKind::Le, {std::move(a), std::move(b)}); }
Pred p_not(Pred a) { return Pred(PKind::Not, {std::move(a)}); }
Pred p_and(Pred a, Pred b) { return Pred(PKind::And, {std::move(a), std::move(b)}); }
Pred p_implies(Pred a, Pred b) { return Pred(PKind::Implies, {std::move(a), std::move(b)}); }
Pred p_app(FuncSym f, std::vector<Pred> args) { return Pred(f, std::move(args)); }
Pred p_int(int n) {
  switch (n) {
    case 0: return Pred::leaf(PKind::Zero);
    case 1: return Pred::leaf(PKind::One);
    case 2: return Pred::leaf(PKind::Two);
    default: throw std::invalid_argument("p_int: only 0, 1, 2 are constants");
  }
}

std::string validate(const Pred& p, const LoopRegistry& reg, bool formula) {
  if (formula) {
    switch (p.kind()) {
      case PKind::Eq:
      case PKind::Le:
        for (const auto& a : p.args())
          if (auto e = validate(a, reg, false); !e.empty()) return e;
        return {};
      case PKind::Not:
        if (p.arg(0).kind() != PKind::Eq && p.arg(0).kind() != PKind::Le)
          return "negation applies to = and <= only";
        return validate(p.arg(0), reg, true);
      case PKind::And:
      case PKind::Implies:
        for (const auto& a : p.args())
          if (auto e = validate(a, reg, true); !e.empty()) return e;
        return {};
      default:
        return "expected a formula";
    }
  }
  if (!p.is_term()) return "expected a term";
  if (p.kind() == PKind::App) {
    if (!reg.has(p.fn())) return "unknown function symbol";
    if (static_cast<int>(p.args().size()) != reg.arity(p.fn()))
      return "wrong arity for " + reg.name(p.fn());
  }
  for (const auto& a : p.args())
    if (auto e = validate(a, reg, false); !e.empty()) return e;
  return {};
}

bool mentions(const Pred& p, PKind var) {
  if (p.kind() == var) return true;
  for (const auto& a : p.args())
    if (mentions(a, var)) return true;
  return false;
}

bool mentions_helpers(const Pred& p) {
  if (p.kind() == PKind::App && p.fn().role != Role::Main && p.fn().role != Role::Second)
    return true;
  for (const auto& a : p.args())
    if (mentions_helpers(a)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

struct Spelling {
  const char* conj;
  const char* impl;
  const char* neg;
};

constexpr Spelling kTextSpelling{"/\\", "==>", "~"};
constexpr Spelling kSmtSpelling{"and", "=>", "not"};

void print(const Pred& p, const LoopRegistry& reg, const Spelling& sp, std::string_view x_term,
           std::ostream& os) {
  auto list = [&](const char* head) {
    os << '(' << head;
    for (const auto& a : p.args()) {
      os << ' ';
      print(a, reg, sp, x_term, os);
    }
    os << ')';
  };
  switch (p.kind()) {
    case PKind::Zero: os << '0'; return;
    case PKind::One: os << '1'; return;
    case PKind::Two: os << '2'; return;
    case PKind::VarX: os << x_term; return;
    case PKind::VarY: os << 'y'; return;
    case PKind::VarZ: os << 'z'; return;
    case PKind::Add: list("+"); return;
    case PKind::Sub: list("-"); return;
    case PKind::Mul: list("*"); return;
    case PKind::Div: list("divf"); return;
    case PKind::Mod: list("modf"); return;
    case PKind::Ite:
      os << "(ite (<= ";
      print(p.arg(0), reg, sp, x_term, os);
      os << " 0) ";
      print(p.arg(1), reg, sp, x_term, os);
      os << ' ';
      print(p.arg(2), reg, sp, x_term, os);
      os << ')';
      return;
    case PKind::App:
      if (p.args().empty()) {
        os << reg.name(p.fn());
      } else {
        list(reg.name(p.fn()).c_str());
      }
      return;
    case PKind::Eq: list("="); return;
    case PKind::Le: list("<="); return;
    case PKind::Not: list(sp.neg); return;
    case PKind::And: list(sp.conj); return;
    case PKind::Implies: list(sp.impl); return;
  }
}

}  // namespace

std::string to_text(const Pred& p, const LoopRegistry& reg) {
  std::ostringstream os;
  print(p, reg, kTextSpelling, "x", os);
  return os.str();
}

std::string candidate_text(const Candidate& c, const LoopRegistry& reg) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += " | ";
    out += to_text(c[i], reg);
  }
  return out;
}

std::string to_smt(const Pred& p, const LoopRegistry& reg, std::string_view x_term) {
  std::ostringstream os;
  print(p, reg, kSmtSpelling, x_term, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct SNode {
  std::string atom;  // empty for lists
  std::vector<SNode> items;
  int column = 0;
  bool is_list() const { return atom.empty(); }
};

class SReader {
 public:
  explicit SReader(std::string_view s) : s_(s) {}

  bool at_end() {
    skip();
    return i_ >= s_.size();
  }

  bool at_bar() {
    skip();
    return i_ < s_.size() && s_[i_] == '|';
  }
  void take_bar() { ++i_; }

  SNode read() {
    skip();
    if (i_ >= s_.size()) throw ParseError("unexpected end of predicate", 1, col());
    SNode n;
    n.column = col();
    if (s_[i_] == '(') {
      ++i_;
      for (;;) {
        skip();
        if (i_ >= s_.size()) throw ParseError("unbalanced '('", 1, n.column);
        if (s_[i_] == ')') {
          ++i_;
          break;
        }
        n.items.push_back(read());
      }
      if (n.items.empty()) throw ParseError("empty list", 1, n.column);
      return n;
    }
    if (s_[i_] == ')') throw ParseError("unexpected ')'", 1, col());
    std::size_t j = i_;
    while (j < s_.size() && !std::isspace(static_cast<unsigned char>(s_[j])) && s_[j] != '(' &&
           s_[j] != ')' && s_[j] != '|') {
      ++j;
    }
    n.atom = std::string(s_.substr(i_, j - i_));
    i_ = j;
    return n;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  int col() const { return static_cast<int>(i_) + 1; }

  std::string_view s_;
  std::size_t i_ = 0;
};

class PredBuilder {
 public:
  explicit PredBuilder(const LoopRegistry& reg) : reg_(reg) {}

  Pred formula(const SNode& n) {
    if (!n.is_list()) fail(n, "expected a formula");
    const std::string& h = head(n);
    if (h == "=" || h == "<=") {
      arity(n, 2);
      return Pred(h == "=" ? PKind::Eq : PKind::Le, {term(n.items[1]), term(n.items[2])});
    }
    if (h == "~" || h == "not") {
      arity(n, 1);
      Pred inner = formula(n.items[1]);
      if (inner.kind() != PKind::Eq && inner.kind() != PKind::Le)
        fail(n, "negation applies to = and <= only");
      return p_not(std::move(inner));
    }
    if (h == "/\\" || h == "and" || h == "==>" || h == "=>") {
      PKind k = (h == "==>" || h == "=>") ? PKind::Implies : PKind::And;
      if (n.items.size() < 3) fail(n, "connective needs two operands");
      if (k == PKind::Implies && n.items.size() != 3) fail(n, "implication takes two operands");
      // n-ary conjunction associates to the right
      Pred acc = formula(n.items.back());
      for (std::size_t i = n.items.size() - 2; i >= 1; --i)
        acc = Pred(k, {formula(n.items[i]), std::move(acc)});
      return acc;
    }
    fail(n, "unknown connective '" + h + "'");
  }

  Pred term(const SNode& n) {
    if (!n.is_list()) {
      const std::string& a = n.atom;
      if (a == "0") return p_int(0);
      if (a == "1") return p_int(1);
      if (a == "2") return p_int(2);
      if (a == "x") return p_x();
      if (a == "y") return p_y();
      if (a == "z") return Pred::leaf(PKind::VarZ);
      auto f = reg_.lookup(a);
      if (!f) fail(n, "unknown symbol '" + a + "'");
      if (reg_.arity(*f) != 0) fail(n, "function '" + a + "' needs arguments");
      return p_app(*f, {});
    }
    const std::string& h = head(n);
    auto binary = [&](PKind k) {
      arity(n, 2);
      return Pred(k, {term(n.items[1]), term(n.items[2])});
    };
    if (h == "+") return binary(PKind::Add);
    if (h == "-") return binary(PKind::Sub);
    if (h == "*") return binary(PKind::Mul);
    if (h == "divf" || h == "div") return binary(PKind::Div);
    if (h == "modf" || h == "mod") return binary(PKind::Mod);
    if (h == "ite") {
      arity(n, 3);
      const SNode& c = n.items[1];
      if (!c.is_list() || c.items.size() != 3 || c.items[0].atom != "<=" ||
          c.items[2].atom != "0") {
        fail(c, "ite condition must have the form (<= t 0)");
      }
      return Pred(PKind::Ite, {term(c.items[1]), term(n.items[2]), term(n.items[3])});
    }
    auto f = reg_.lookup(h);
    if (!f) fail(n, "unknown function '" + h + "'");
    std::vector<Pred> args;
    for (std::size_t i = 1; i < n.items.size(); ++i) args.push_back(term(n.items[i]));
    if (static_cast<int>(args.size()) != reg_.arity(*f))
      fail(n, "function '" + h + "' expects " + std::to_string(reg_.arity(*f)) + " arguments");
    return p_app(*f, std::move(args));
  }

 private:
  static const std::string& head(const SNode& n) {
    if (n.items[0].is_list()) throw ParseError("expected an operator", 1, n.items[0].column);
    return n.items[0].atom;
  }
  static void arity(const SNode& n, std::size_t k) {
    if (n.items.size() != k + 1)
      throw ParseError("'" + n.items[0].atom + "' expects " + std::to_string(k) + " operands", 1,
                       n.column);
  }
  [[noreturn]] static void fail(const SNode& n, const std::string& msg) {
    throw ParseError(msg, 1, n.column);
  }

  const LoopRegistry& reg_;
};

}  // namespace

Pred parse_pred(std::string_view text, const LoopRegistry& reg) {
  SReader r(text);
  PredBuilder b(reg);
  Pred p = b.formula(r.read());
  if (!r.at_end()) throw ParseError("trailing input after predicate", 1, 1);
  return p;
}

Candidate parse_candidate(std::string_view text, const LoopRegistry& reg) {
  SReader r(text);
  PredBuilder b(reg);
  Candidate out;
  out.push_back(b.formula(r.read()));
  while (r.at_bar()) {
    r.take_bar();
    out.push_back(b.formula(r.read()));
  }
  if (!r.at_end()) throw ParseError("trailing input after candidate", 1, 1);
  return out;
}

// ---------------------------------------------------------------------------

Pred program_to_term(const Program& p, const LoopRegistry& reg, const Pred& x, const Pred& y) {
  auto bin = [&](PKind k) {
    return Pred(k, {program_to_term(p.arg(0), reg, x, y), program_to_term(p.arg(1), reg, x, y)});
  };
  switch (p.op()) {
    case Op::Zero: return p_int(0);
    case Op::One: return p_int(1);
    case Op::Two: return p_int(2);
    case Op::X: return x;
    case Op::Y: return y;
    case Op::Add: return bin(PKind::Add);
    case Op::Sub: return bin(PKind::Sub);
    case Op::Mul: return bin(PKind::Mul);
    case Op::Div: return bin(PKind::Div);
    case Op::Mod: return bin(PKind::Mod);
    case Op::Cond:
      return Pred(PKind::Ite, {program_to_term(p.arg(0), reg, x, y),
                               program_to_term(p.arg(1), reg, x, y),
                               program_to_term(p.arg(2), reg, x, y)});
    case Op::Loop:
    case Op::Loop2:
    case Op::Compr: {
      auto idx = reg.find(p);
      if (!idx) throw std::invalid_argument("loop subprogram missing from registry");
      VarSet params = reg.at(*idx).params;
      std::vector<Pred> args;
      if (params & kVarX) args.push_back(x);
      if (params & kVarY) args.push_back(y);
      return p_app({*idx, Role::Main}, std::move(args));
    }
  }
  return p_int(0);
}

Pred substitute_x(const Pred& p, const Pred& x_value) {
  if (p.kind() == PKind::VarX) return x_value;
  Pred out = p;
  for (auto& a : out.mutable_args()) a = substitute_x(a, x_value);
  return out;
}

// ---------------------------------------------------------------------------
// Semantics

namespace {

enum class Truth : std::uint8_t { False, True, Undef };

class TermEval {
 public:
  TermEval(const LoopRegistry& reg, const Integer& x, const Integer& y, const Integer& z,
           const EvalLimits& limits)
      : reg_(reg), x_(x), y_(y), z_(z), limits_(limits) {}

  PointValue term(const Pred& t) {
    auto bin = [&](auto&& op) -> PointValue {
      PointValue a = term(t.arg(0));
      if (!a.ok) return a;
      PointValue b = term(t.arg(1));
      if (!b.ok) return b;
      return op(a.value, b.value);
    };
    switch (t.kind()) {
      case PKind::Zero: return {0};
      case PKind::One: return {1};
      case PKind::Two: return {2};
      case PKind::VarX: return {x_};
      case PKind::VarY: return {y_};
      case PKind::VarZ: return {z_};
      case PKind::Add: return bin([&](auto& a, auto& b) { return bounded(a + b); });
      case PKind::Sub: return bin([&](auto& a, auto& b) { return bounded(a - b); });
      case PKind::Mul: return bin([&](auto& a, auto& b) { return bounded(a * b); });
      case PKind::Div:
        return bin([](auto& a, auto& b) {
          return b == 0 ? PointValue{0, false} : PointValue{sml_div(a, b)};
        });
      case PKind::Mod:
        return bin([](auto& a, auto& b) {
          return b == 0 ? PointValue{0, false} : PointValue{sml_mod(a, b)};
        });
      case PKind::Ite: {
        PointValue c = term(t.arg(0));
        if (!c.ok) return c;
        return term(t.arg(c.value <= 0 ? 1 : 2));
      }
      case PKind::App: {
        if (t.fn().role == Role::Small || t.fn().role == Role::Fast) return {0, false};
        std::vector<Integer> args;
        args.reserve(t.args().size());
        for (const auto& a : t.args()) {
          PointValue v = term(a);
          if (!v.ok) return v;
          args.push_back(std::move(v.value));
        }
        EvalResult r = eval_function(reg_, t.fn(), args, limits_);
        return {r.value, r.ok()};
      }
      default:
        throw std::invalid_argument("eval_term: not a term");
    }
  }

  Truth formula(const Pred& f) {
    switch (f.kind()) {
      case PKind::Eq:
      case PKind::Le: {
        PointValue a = term(f.arg(0));
        if (!a.ok) return Truth::Undef;
        PointValue b = term(f.arg(1));
        if (!b.ok) return Truth::Undef;
        bool r = f.kind() == PKind::Eq ? a.value == b.value : a.value <= b.value;
        return r ? Truth::True : Truth::False;
      }
      case PKind::Not: {
        Truth t = formula(f.arg(0));
        if (t == Truth::Undef) return t;
        return t == Truth::True ? Truth::False : Truth::True;
      }
      case PKind::And: {
        Truth a = formula(f.arg(0));
        if (a == Truth::False) return a;
        Truth b = formula(f.arg(1));
        if (b == Truth::False) return b;
        return (a == Truth::Undef || b == Truth::Undef) ? Truth::Undef : Truth::True;
      }
      case PKind::Implies: {
        Truth a = formula(f.arg(0));
        if (a == Truth::False) return Truth::True;
        if (a == Truth::Undef) return a;
        return formula(f.arg(1));
      }
      default:
        throw std::invalid_argument("holds: not a formula");
    }
  }

 private:
  PointValue bounded(Integer v) const {
    if (abs(v) > limits_.max_abs) return {0, false};
    return {std::move(v)};
  }

  const LoopRegistry& reg_;
  const Integer& x_;
  const Integer& y_;
  const Integer& z_;
  const EvalLimits& limits_;
};

}  // namespace

PointValue eval_term(const Pred& t, const LoopRegistry& reg, const Integer& x, const Integer& y,
                     const Integer& z, const EvalLimits& limits) {
  return TermEval(reg, x, y, z, limits).term(t);
}

std::optional<bool> truth_value(const Pred& f, const LoopRegistry& reg, const Integer& x,
                                const Integer& y, const Integer& z, const EvalLimits& limits) {
  Truth t = TermEval(reg, x, y, z, limits).formula(f);
  if (t == Truth::Undef) return std::nullopt;
  return t == Truth::True;
}

bool holds(const Pred& f, const LoopRegistry& reg, const Integer& x, const Integer& y,
           const Integer& z, const EvalLimits& limits) {
  return TermEval(reg, x, y, z, limits).formula(f) == Truth::True;
}

}  // namespace indloop
