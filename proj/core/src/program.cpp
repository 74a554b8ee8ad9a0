// SPDX-License-Identifier: Apache-2.0

#include "indloop/program.hpp"

#include <cctype>
#include <optional>
#include <sstream>

namespace indloop {

int arity(Op op) {
  switch (op) {
    case Op::Zero:
    case Op::One:
    case Op::Two:
    case Op::X:
    case Op::Y:
      return 0;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Mod:
    case Op::Compr:
      return 2;
    case Op::Cond:
    case Op::Loop:
      return 3;
    case Op::Loop2:
      return 5;
  }
  return 0;
}

bool is_loop_op(Op op) { return op == Op::Loop || op == Op::Loop2 || op == Op::Compr; }

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Zero: return "0";
    case Op::One: return "1";
    case Op::Two: return "2";
    case Op::X: return "X";
    case Op::Y: return "Y";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "div";
    case Op::Mod: return "mod";
    case Op::Cond: return "cond";
    case Op::Loop: return "loop";
    case Op::Loop2: return "loop2";
    case Op::Compr: return "compr";
  }
  return "?";
}

Program::Program(Op op, std::vector<Program> args) : op_(op), args_(std::move(args)) {
  if (static_cast<int>(args_.size()) != arity(op_)) {
    throw std::invalid_argument("operator " + std::string(op_name(op_)) + " expects " +
                                std::to_string(arity(op_)) + " arguments, got " +
                                std::to_string(args_.size()));
  }
}

std::size_t Program::size() const {
  std::size_t n = 1;
  for (const auto& a : args_) n += a.size();
  return n;
}

Program add(Program a, Program b) { return Program(Op::Add, {std::move(a), std::move(b)}); }
Program sub(Program a, Program b) { return Program(Op::Sub, {std::move(a), std::move(b)}); }
Program mul(Program a, Program b) { return Program(Op::Mul, {std::move(a), std::move(b)}); }
Program div(Program a, Program b) { return Program(Op::Div, {std::move(a), std::move(b)}); }
Program mod(Program a, Program b) { return Program(Op::Mod, {std::move(a), std::move(b)}); }
Program cond(Program a, Program b, Program c) {
  return Program(Op::Cond, {std::move(a), std::move(b), std::move(c)});
}
Program loop(Program f, Program a, Program b) {
  return Program(Op::Loop, {std::move(f), std::move(a), std::move(b)});
}
Program loop2(Program f, Program g, Program a, Program b, Program c) {
  return Program(Op::Loop2, {std::move(f), std::move(g), std::move(a), std::move(b), std::move(c)});
}
Program compr(Program f, Program a) { return Program(Op::Compr, {std::move(f), std::move(a)}); }

Program literal(unsigned long n) {
  if (n == 0) return Program::leaf(Op::Zero);
  if (n == 1) return Program::leaf(Op::One);
  if (n == 2) return Program::leaf(Op::Two);
  if (n % 2 == 0) return mul(Program::leaf(Op::Two), literal(n / 2));
  return add(Program::leaf(Op::One), literal(n - 1));
}

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      message_(msg),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------------------
// Lexer / parser

namespace {

enum class TokKind { Num, Name, Sym, End };

struct Token {
  TokKind kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    int l = line, cl = col;
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({TokKind::Num, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
    } else if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                src[j] == '_' || src[j] == ':')) {
        ++j;
      }
      out.push_back({TokKind::Name, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
    } else if (c == 0xC3 && i + 1 < src.size() && static_cast<unsigned char>(src[i + 1]) == 0x97) {
      out.push_back({TokKind::Sym, "*", l, cl});  // U+00D7 multiplication sign
      advance(2);
    } else if (std::string_view("+-*(),=").find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({TokKind::Sym, std::string(1, static_cast<char>(c)), l, cl});
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", l, cl);
    }
  }
  out.push_back({TokKind::End, "", line, col});
  return out;
}

// Strips a `:label` suffix such as `loop:v0`.
std::string_view base_name(const std::string& name) {
  auto colon = name.find(':');
  return colon == std::string::npos ? std::string_view(name)
                                    : std::string_view(name).substr(0, colon);
}

std::optional<Op> named_op(const Token& t) {
  if (t.kind == TokKind::Sym) {
    if (t.text == "+") return Op::Add;
    if (t.text == "-") return Op::Sub;
    if (t.text == "*") return Op::Mul;
    return std::nullopt;
  }
  if (t.kind != TokKind::Name) return std::nullopt;
  auto n = base_name(t.text);
  if (n == "div") return Op::Div;
  if (n == "mod") return Op::Mod;
  if (n == "cond" || n == "ite") return Op::Cond;
  if (n == "loop") return Op::Loop;
  if (n == "loop2") return Op::Loop2;
  if (n == "compr") return Op::Compr;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program expr() {
    Program lhs = term();
    while (peek().kind == TokKind::Sym && (peek().text == "+" || peek().text == "-")) {
      Op op = next().text == "+" ? Op::Add : Op::Sub;
      lhs = Program(op, {std::move(lhs), term()});
    }
    return lhs;
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  void expect_sym(const char* s) {
    if (peek().kind != TokKind::Sym || peek().text != s) fail(std::string("expected '") + s + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(msg + (t.kind == TokKind::End ? " at end of input" : " near '" + t.text + "'"),
                     t.line, t.column);
  }

  std::size_t pos_ = 0;

 private:
  Program term() {
    Program lhs = factor();
    for (;;) {
      const Token& t = peek();
      std::optional<Op> op;
      if (t.kind == TokKind::Sym && t.text == "*") op = Op::Mul;
      if (t.kind == TokKind::Name && (t.text == "div" || t.text == "mod"))
        op = t.text == "div" ? Op::Div : Op::Mod;
      if (!op) return lhs;
      next();
      lhs = Program(*op, {std::move(lhs), factor()});
    }
  }

  Program factor() {
    const Token& t = peek();
    if (t.kind == TokKind::Num) {
      next();
      unsigned long n = 0;
      try {
        n = std::stoul(t.text);
      } catch (const std::exception&) {
        throw ParseError("integer literal too large", t.line, t.column);
      }
      return literal(n);
    }
    if (t.kind == TokKind::Name) {
      auto n = base_name(t.text);
      if (n == "X" || n == "x") {
        next();
        return Program::leaf(Op::X);
      }
      if (n == "Y" || n == "y") {
        next();
        return Program::leaf(Op::Y);
      }
      auto op = named_op(t);
      if (op && arity(*op) > 0 && toks_[pos_ + 1].kind == TokKind::Sym &&
          toks_[pos_ + 1].text == "(") {
        const Token& head = next();
        next();  // '('
        std::vector<Program> args;
        args.push_back(expr());
        while (peek().kind == TokKind::Sym && peek().text == ",") {
          next();
          args.push_back(expr());
        }
        expect_sym(")");
        next();
        return make(*op, std::move(args), head);
      }
      fail("unexpected name");
    }
    if (t.kind == TokKind::Sym && t.text == "(") {
      next();
      return paren_inner();
    }
    fail("expected a program");
  }

  // After '(' : either a prefix application `(op a b ...)` or an infix
  // expression followed by ')'.
  Program paren_inner() {
    std::size_t start = pos_;
    if (named_op(peek())) {
      try {
        const Token& head = next();
        Op op = *named_op(head);
        std::vector<Program> args;
        while (!(peek().kind == TokKind::Sym && peek().text == ")")) {
          if (peek().kind == TokKind::End) fail("unterminated '('");
          args.push_back(factor());
        }
        next();
        return make(op, std::move(args), head);
      } catch (const ParseError& e) {
        prefix_error_ = e;
        pos_ = start;
      }
    }
    try {
      Program p = expr();
      expect_sym(")");
      next();
      return p;
    } catch (const ParseError&) {
      if (prefix_error_) throw *prefix_error_;
      throw;
    }
  }

  static Program make(Op op, std::vector<Program> args, const Token& head) {
    if (static_cast<int>(args.size()) != arity(op)) {
      throw ParseError("operator " + std::string(op_name(op)) + " expects " +
                           std::to_string(arity(op)) + " arguments, got " +
                           std::to_string(args.size()),
                       head.line, head.column);
    }
    return Program(op, std::move(args));
  }

  std::vector<Token> toks_;
  std::optional<ParseError> prefix_error_;
};

}  // namespace

Program parse_program(std::string_view text) {
  Parser p(lex(text));
  Program out = p.expr();
  if (p.peek().kind != TokKind::End) p.fail("trailing input");
  return out;
}

std::pair<Program, Program> parse_equation(std::string_view text) {
  Parser p(lex(text));
  Program lhs = p.expr();
  p.expect_sym("=");
  p.next();
  Program rhs = p.expr();
  if (p.peek().kind != TokKind::End) p.fail("trailing input");
  return {std::move(lhs), std::move(rhs)};
}

// ---------------------------------------------------------------------------
// Printing

namespace {

bool is_binary(Op op) {
  return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div || op == Op::Mod;
}

void print_infix(const Program& p, std::ostream& os) {
  if (arity(p.op()) == 0) {
    os << op_name(p.op());
    return;
  }
  if (is_binary(p.op())) {
    for (int i = 0; i < 2; ++i) {
      const Program& a = p.arg(i);
      bool wrap = is_binary(a.op());
      if (i == 1) os << ' ' << op_name(p.op()) << ' ';
      if (wrap) os << '(';
      print_infix(a, os);
      if (wrap) os << ')';
    }
    return;
  }
  os << op_name(p.op()) << '(';
  for (std::size_t i = 0; i < p.args().size(); ++i) {
    if (i) os << ", ";
    print_infix(p.arg(i), os);
  }
  os << ')';
}

void print_sexp(const Program& p, std::ostream& os) {
  switch (p.op()) {
    case Op::X: os << 'x'; return;
    case Op::Y: os << 'y'; return;
    default: break;
  }
  if (arity(p.op()) == 0) {
    os << op_name(p.op());
    return;
  }
  os << '(' << op_name(p.op());
  for (const auto& a : p.args()) {
    os << ' ';
    print_sexp(a, os);
  }
  os << ')';
}

}  // namespace

std::string to_string(const Program& p) {
  std::ostringstream os;
  print_infix(p, os);
  return os.str();
}

std::string to_sexp(const Program& p) {
  std::ostringstream os;
  print_sexp(p, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Interpreter

EvalLimits::EvalLimits() {
  mpz_ui_pow_ui(max_abs.get_mpz_t(), 10, 4000);
}

EvalLimits::EvalLimits(Integer m, std::uint64_t steps, std::uint64_t compr_iters)
    : max_abs(std::move(m)), max_steps(steps), max_compr(compr_iters) {
  if (max_abs <= 0 || max_steps == 0 || max_compr == 0)
    throw std::invalid_argument("evaluation limits must be strictly positive");
}

std::string_view abort_name(AbortReason r) {
  switch (r) {
    case AbortReason::None: return "none";
    case AbortReason::Overflow: return "overflow-limit";
    case AbortReason::StepLimit: return "step-limit";
    case AbortReason::ComprLimit: return "compr-limit";
    case AbortReason::DivZero: return "div-zero";
  }
  return "?";
}

Integer sml_div(const Integer& a, const Integer& b) {
  if (b == 0) throw std::domain_error("division by zero");
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer sml_mod(const Integer& a, const Integer& b) {
  if (b == 0) throw std::domain_error("division by zero");
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

namespace {

struct AbortSignal {
  AbortReason reason;
};

class Interp {
 public:
  explicit Interp(const EvalLimits& limits)
      : limits_(limits), max_bits_(mpz_sizeinbase(limits.max_abs.get_mpz_t(), 2)) {}

  Integer eval(const Program& p, const Integer& x, const Integer& y) {
    step();
    switch (p.op()) {
      case Op::Zero: return 0;
      case Op::One: return 1;
      case Op::Two: return 2;
      case Op::X: return x;
      case Op::Y: return y;
      case Op::Add: return checked(eval(p.arg(0), x, y) + eval(p.arg(1), x, y));
      case Op::Sub: return checked(eval(p.arg(0), x, y) - eval(p.arg(1), x, y));
      case Op::Mul: return checked(eval(p.arg(0), x, y) * eval(p.arg(1), x, y));
      case Op::Div:
      case Op::Mod: {
        Integer a = eval(p.arg(0), x, y);
        Integer b = eval(p.arg(1), x, y);
        if (b == 0) throw AbortSignal{AbortReason::DivZero};
        return p.op() == Op::Div ? sml_div(a, b) : sml_mod(a, b);
      }
      case Op::Cond:
        return eval(p.arg(0), x, y) <= 0 ? eval(p.arg(1), x, y) : eval(p.arg(2), x, y);
      case Op::Loop: {
        Integer n = eval(p.arg(1), x, y);
        Integer init = eval(p.arg(2), x, y);
        return loop(p.arg(0), n, std::move(init));
      }
      case Op::Loop2: {
        Integer n = eval(p.arg(2), x, y);
        Integer a = eval(p.arg(3), x, y);
        Integer b = eval(p.arg(4), x, y);
        return loop2(p.arg(0), p.arg(1), n, std::move(a), std::move(b)).first;
      }
      case Op::Compr: {
        Integer n = eval(p.arg(1), x, y);
        return compr_u(p.arg(0), n);
      }
    }
    return 0;
  }

  // u(n, init) with u(k) = F(u(k-1), k).
  Integer loop(const Program& f, const Integer& n, Integer acc) {
    for (Integer k = 1; k <= n; ++k) {
      step();
      acc = eval(f, acc, k);
    }
    return acc;
  }

  // (u, t)(n) with u(k) = F(u(k-1), t(k-1)), t(k) = G(u(k-1), t(k-1)).
  std::pair<Integer, Integer> loop2(const Program& f, const Program& g, const Integer& n,
                                    Integer a, Integer b) {
    for (Integer k = 1; k <= n; ++k) {
      step();
      Integer na = eval(f, a, b);
      Integer nb = eval(g, a, b);
      a = std::move(na);
      b = std::move(nb);
    }
    return {std::move(a), std::move(b)};
  }

  // Smallest x' >= from with F(x', 0) <= 0.
  Integer compr_t(const Program& f, Integer from) {
    static const Integer zero = 0;
    for (;;) {
      if (++compr_iters_ > limits_.max_compr) throw AbortSignal{AbortReason::ComprLimit};
      if (eval(f, from, zero) <= 0) return from;
      from = checked(from + 1);
    }
  }

  Integer compr_u(const Program& f, const Integer& n) {
    Integer acc = compr_t(f, 0);
    for (Integer k = 1; k <= n; ++k) {
      step();
      acc = compr_t(f, acc + 1);
    }
    return acc;
  }

 private:
  void step() {
    if (++steps_ > limits_.max_steps) throw AbortSignal{AbortReason::StepLimit};
  }

  Integer checked(Integer v) {
    if (mpz_sizeinbase(v.get_mpz_t(), 2) >= max_bits_ && abs(v) > limits_.max_abs)
      throw AbortSignal{AbortReason::Overflow};
    return v;
  }

  const EvalLimits& limits_;
  std::size_t max_bits_;
  std::uint64_t steps_ = 0;
  std::uint64_t compr_iters_ = 0;
};

template <class Fn>
EvalResult guarded(Fn&& fn) {
  try {
    return {fn(), AbortReason::None};
  } catch (const AbortSignal& a) {
    return {0, a.reason};
  }
}

template <class Fn>
PairResult guarded_pair(Fn&& fn) {
  try {
    auto [a, b] = fn();
    return {std::move(a), std::move(b), AbortReason::None};
  } catch (const AbortSignal& a) {
    return {0, 0, a.reason};
  }
}

}  // namespace

EvalResult evaluate(const Program& p, const Integer& x, const Integer& y,
                    const EvalLimits& limits) {
  Interp in(limits);
  return guarded([&] { return in.eval(p, x, y); });
}

PairResult evaluate_loop2_pair(const Program& p, const Integer& x, const Integer& y,
                               const EvalLimits& limits) {
  if (p.op() != Op::Loop2) throw std::invalid_argument("evaluate_loop2_pair: not a loop2 program");
  Interp in(limits);
  return guarded_pair([&] {
    Integer n = in.eval(p.arg(2), x, y);
    Integer a = in.eval(p.arg(3), x, y);
    Integer b = in.eval(p.arg(4), x, y);
    return in.loop2(p.arg(0), p.arg(1), n, std::move(a), std::move(b));
  });
}

EvalResult run_loop_helper(const Program& update, const Integer& bound, const Integer& init,
                           const EvalLimits& limits) {
  Interp in(limits);
  return guarded([&] { return in.loop(update, bound, init); });
}

PairResult run_loop2_helper(const Program& update, const Program& second_update,
                            const Integer& bound, const Integer& init1, const Integer& init2,
                            const EvalLimits& limits) {
  Interp in(limits);
  return guarded_pair([&] { return in.loop2(update, second_update, bound, init1, init2); });
}

EvalResult run_compr_search(const Program& test, const Integer& from, const EvalLimits& limits) {
  Interp in(limits);
  return guarded([&] { return in.compr_t(test, from); });
}

EvalResult run_compr_helper(const Program& test, const Integer& bound, const EvalLimits& limits) {
  Interp in(limits);
  return guarded([&] { return in.compr_u(test, bound); });
}

}  // namespace indloop
