// SPDX-License-Identifier: Apache-2.0

#include "indloop/smt.hpp"

#include <sstream>
#include <stdexcept>

#include "indloop/hash.hpp"

namespace indloop {

namespace {

std::string call_fn(const std::string& fn, const std::vector<std::string>& args) {
  if (args.empty()) return fn;
  std::string s = "(" + fn;
  for (const auto& a : args) s += " " + a;
  return s + ")";
}

/// Arguments for a function whose parameters are `params`, with X and Y
/// bound to the given terms.
std::vector<std::string> bind(VarSet params, const std::string& x, const std::string& y) {
  std::vector<std::string> out;
  if (params & kVarX) out.push_back(x);
  if (params & kVarY) out.push_back(y);
  return out;
}

std::vector<std::string> param_names(int arity) {
  static const char* kNames[] = {"x", "y", "z"};
  std::vector<std::string> out;
  for (int i = 0; i < arity; ++i) out.emplace_back(kNames[i]);
  return out;
}

std::vector<std::string> param_names(VarSet params) { return bind(params, "x", "y"); }

std::string sorted_vars(const std::vector<std::string>& names) {
  std::string s = "(";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) s += ' ';
    s += "(" + names[i] + " Int)";
  }
  return s + ")";
}

std::string forall(const std::vector<std::string>& vars, const std::string& body) {
  if (vars.empty()) return body;
  return "(forall " + sorted_vars(vars) + " " + body + ")";
}

std::string term_of(const Program& p, const LoopRegistry& reg, const Pred& x, const Pred& y) {
  return to_smt(program_to_term(p, reg, x, y), reg);
}

/// One function definition: name, parameters and body.
struct Def {
  std::string name;
  std::vector<std::string> params;
  std::string body;
  bool recursive = false;
  int group = -1;  // mutually recursive definitions share a group
};

class Emitter {
 public:
  explicit Emitter(const LoopRegistry& reg) : reg_(reg) {}

  std::vector<Def> entry_defs(const LoopEntry& e) const {
    std::vector<Def> defs;
    auto sym = [&](Role r) { return FuncSym{e.index, r}; };
    auto nm = [&](Role r) { return reg_.name(sym(r)); };

    // argument functions
    for (Role r : roles_of(e.kind)) {
      if (r == Role::Main || r == Role::Second || r == Role::U || r == Role::T) continue;
      const Program& body = reg_.argument_program(sym(r));
      VarSet ps = free_vars(body);
      defs.push_back({nm(r), param_names(ps), term_of(body, reg_, p_x(), p_y())});
    }

    auto call_arg = [&](Role r, const std::string& x, const std::string& y) {
      return call_fn(nm(r), bind(reg_.params(sym(r)), x, y));
    };
    VarSet ep = e.params;
    std::vector<std::string> main_params = param_names(ep);

    switch (e.kind) {
      case LoopKind::Loop: {
        std::string u = nm(Role::U);
        std::string prev = "(" + u + " (- x 1) y)";
        defs.push_back({u, param_names(2),
                        "(ite (<= x 0) y " + call_arg(Role::F, prev, "x") + ")", true});
        defs.push_back({nm(Role::Main), main_params,
                        "(" + u + " " + call_arg(Role::G, "x", "y") + " " +
                            call_arg(Role::H, "x", "y") + ")"});
        break;
      }
      case LoopKind::Loop2: {
        std::string u = nm(Role::U), t = nm(Role::T);
        std::string pu = "(" + u + " (- x 1) y z)";
        std::string pt = "(" + t + " (- x 1) y z)";
        defs.push_back({u, param_names(3), "(ite (<= x 0) y " + call_arg(Role::F, pu, pt) + ")",
                        true, e.index});
        defs.push_back({t, param_names(3), "(ite (<= x 0) z " + call_arg(Role::G, pu, pt) + ")",
                        true, e.index});
        std::string args = call_arg(Role::H, "x", "y") + " " + call_arg(Role::I, "x", "y") + " " +
                           call_arg(Role::J, "x", "y");
        defs.push_back({nm(Role::Main), main_params, "(" + u + " " + args + ")"});
        defs.push_back({nm(Role::Second), main_params, "(" + t + " " + args + ")"});
        break;
      }
      case LoopKind::Compr: {
        std::string u = nm(Role::U), t = nm(Role::T);
        defs.push_back({t, param_names(1),
                        "(ite (<= " + call_arg(Role::F, "x", "0") + " 0) x (" + t + " (+ x 1)))",
                        true});
        defs.push_back({u, param_names(1),
                        "(ite (<= x 0) (" + t + " 0) (" + t + " (+ (" + u + " (- x 1)) 1)))",
                        true});
        defs.push_back({nm(Role::Main), main_params, "(" + u + " " + call_arg(Role::G, "x", "y") +
                                                         ")"});
        break;
      }
    }
    return defs;
  }

  /// Loops referenced directly (not through another loop) by `p`.
  void direct_loops(const Program& p, std::vector<int>& out) const {
    if (is_loop_op(p.op())) {
      if (auto i = reg_.find(p)) out.push_back(*i);
      return;
    }
    for (const auto& a : p.args()) direct_loops(a, out);
  }

  void topo(int k, std::vector<int>& order, std::vector<char>& seen) const {
    if (seen[static_cast<std::size_t>(k)]) return;
    seen[static_cast<std::size_t>(k)] = 1;
    std::vector<int> deps;
    for (const auto& a : reg_.at(k).program.args()) direct_loops(a, deps);
    for (int d : deps) topo(d, order, seen);
    order.push_back(k);
  }

  std::vector<int> dependency_order() const {
    std::vector<int> order;
    std::vector<char> seen(reg_.size(), 0);
    for (std::size_t k = 0; k < reg_.size(); ++k) topo(static_cast<int>(k), order, seen);
    return order;
  }

 private:
  const LoopRegistry& reg_;
};

std::string quantified(const Def& d) {
  return "(assert " + forall(d.params, "(= " + call_fn(d.name, d.params) + " " + d.body + ")") + ")";
}

std::string signature(const Def& d) {
  return "(" + d.name + " " + sorted_vars(d.params) + " Int)";
}

std::string defined(const Def& d) {
  return std::string(d.recursive ? "(define-fun-rec " : "(define-fun ") + d.name + " " +
         sorted_vars(d.params) + " Int " + d.body + ")";
}

std::string declare(const std::string& name, int arity) {
  std::string s = "(declare-fun " + name + " (";
  for (int i = 0; i < arity; ++i) s += i ? " Int" : "Int";
  return s + ") Int)";
}

void render(const std::vector<Def>& defs, DefStyle style, std::vector<std::string>& out) {
  for (std::size_t i = 0; i < defs.size(); ++i) {
    const Def& d = defs[i];
    if (style == DefStyle::Quantified) {
      out.push_back(quantified(d));
    } else if (d.group >= 0) {
      std::size_t j = i;
      std::string sigs, bodies;
      while (j < defs.size() && defs[j].group == d.group) {
        sigs += (j > i ? " " : "") + signature(defs[j]);
        bodies += (j > i ? " " : "") + defs[j].body;
        ++j;
      }
      out.push_back("(define-funs-rec (" + sigs + ") (" + bodies + "))");
      i = j - 1;
    } else {
      out.push_back(defined(d));
    }
  }
}

std::string quote_source(std::string s) {
  for (char& c : s)
    if (c == '|' || c == '\\' || c == '\n') c = ' ';
  return s;
}

}  // namespace

std::string SmtProblem::script() const {
  std::ostringstream os;
  for (const auto* group :
       {&header, &preamble, &declarations, &definitions, &trivial, &instances, &goal}) {
    for (const auto& cmd : *group) os << cmd << '\n';
  }
  os << "(check-sat)\n";
  return os.str();
}

std::vector<std::string> emit_preamble() {
  return {
      "(define-fun divf ((a Int) (b Int)) Int (ite (< 0 b) (div a b) (div (- a) (- b))))",
      "(define-fun modf ((a Int) (b Int)) Int (- a (* b (divf a b))))",
  };
}

std::string goal_assertion() {
  return "(assert (exists ((c Int)) (and (>= c 0) (not (= (small c) (fast c))))))";
}

SmtProblem emit_problem(const Problem& problem, const EmitOptions& opts) {
  const LoopRegistry& reg = problem.registry;
  Emitter em(reg);
  SmtProblem out;
  out.header.push_back("(set-info :source |problem " + quote_source(problem.id) +
                       "; small: " + quote_source(to_string(problem.small)) +
                       "; fast: " + quote_source(to_string(problem.fast)) + "|)");
  out.header.push_back(opts.style == DefStyle::Recursive ? "(set-logic ALL)" : "(set-logic UFNIA)");
  out.preamble = emit_preamble();

  std::vector<int> order;
  if (opts.style == DefStyle::Quantified) {
    for (std::size_t k = 0; k < reg.size(); ++k) order.push_back(static_cast<int>(k));
  } else {
    order = em.dependency_order();
  }

  std::vector<Def> defs;
  for (int k : order) {
    auto d = em.entry_defs(reg.at(k));
    defs.insert(defs.end(), d.begin(), d.end());
  }
  defs.push_back({"small", {"x"}, term_of(problem.small, reg, p_x(), p_int(0))});
  defs.push_back({"fast", {"x"}, term_of(problem.fast, reg, p_x(), p_int(0))});

  if (opts.style == DefStyle::Quantified) {
    for (const auto& d : defs)
      out.declarations.push_back(declare(d.name, static_cast<int>(d.params.size())));
  }
  render(defs, opts.style, out.definitions);

  if (opts.with_trivial) out.trivial = emit_trivial_axioms(reg);
  out.goal.push_back(goal_assertion());
  return out;
}

std::vector<std::string> emit_trivial_axioms(const LoopRegistry& reg) {
  std::vector<std::string> out;
  const auto& es = reg.entries();

  auto helpers_equal = [&](const LoopEntry& a, const LoopEntry& b) {
    std::vector<std::string> eqs;
    std::vector<std::string> ps;
    switch (a.kind) {
      case LoopKind::Loop: ps = param_names(2); break;
      case LoopKind::Loop2: ps = param_names(3); break;
      case LoopKind::Compr: ps = param_names(1); break;
    }
    for (Role r : {Role::U, Role::T}) {
      FuncSym fa{a.index, r}, fb{b.index, r};
      if (!reg.has(fa)) continue;
      eqs.push_back("(= " + call_fn(reg.name(fa), ps) + " " + call_fn(reg.name(fb), ps) + ")");
    }
    std::string body = eqs.size() == 1 ? eqs[0] : "(and " + eqs[0] + " " + eqs[1] + ")";
    return forall(ps, body);
  };

  auto updates_equal = [&](const LoopEntry& a, const LoopEntry& b) {
    std::vector<std::string> parts;
    std::vector<Role> roles{Role::F};
    if (a.kind == LoopKind::Loop2) roles.push_back(Role::G);
    for (Role r : roles) {
      FuncSym fa{a.index, r}, fb{b.index, r};
      std::string lhs = call_fn(reg.name(fa), bind(reg.params(fa), "x", "y"));
      std::string rhs = call_fn(reg.name(fb), bind(reg.params(fb), "x", "y"));
      parts.push_back(forall(param_names(2), "(= " + lhs + " " + rhs + ")"));
    }
    return parts.size() == 1 ? parts[0] : "(and " + parts[0] + " " + parts[1] + ")";
  };

  for (std::size_t i = 0; i < es.size(); ++i) {
    for (std::size_t j = i + 1; j < es.size(); ++j) {
      const LoopEntry& a = es[i];
      const LoopEntry& b = es[j];
      if (a.kind != b.kind) continue;
      bool same_update = a.program.arg(0) == b.program.arg(0) &&
                         (a.kind != LoopKind::Loop2 || a.program.arg(1) == b.program.arg(1));
      if (same_update) {
        out.push_back("(assert " + helpers_equal(a, b) + ")");
      } else {
        out.push_back("(assert (=> " + updates_equal(a, b) + " " + helpers_equal(a, b) + "))");
      }
    }
  }
  return out;
}

std::string emit_induction_instance(const Pred& q, const LoopRegistry& reg) {
  if (auto err = validate(q, reg, true); !err.empty())
    throw std::invalid_argument("invalid induction predicate: " + err);
  std::vector<std::string> params{"y"};
  if (mentions(q, PKind::VarZ)) params.emplace_back("z");
  std::vector<std::string> with_x{"x"};
  with_x.insert(with_x.end(), params.begin(), params.end());

  std::string base = forall(params, to_smt(q, reg, "0"));
  std::string step =
      forall(with_x, "(=> " + to_smt(q, reg, "x") + " " + to_smt(q, reg, "(+ x 1)") + ")");
  std::string concl = forall(with_x, "(=> (<= 0 x) " + to_smt(q, reg, "x") + ")");
  return "(assert (=> (and " + base + " " + step + ") " + concl + "))";
}

std::string candidate_hash(const Candidate& cand, const LoopRegistry& reg) {
  return hex64(fnv1a64(candidate_text(cand, reg)));
}

SmtProblem emit_with_candidate(const Problem& problem, const Candidate& cand,
                               const EmitOptions& opts) {
  SmtProblem out = emit_problem(problem, opts);
  std::string& src = out.header.front();
  src.insert(src.size() - 2, "; candidate: " + candidate_hash(cand, problem.registry));
  for (const auto& q : cand) out.instances.push_back(emit_induction_instance(q, problem.registry));
  return out;
}

}  // namespace indloop
