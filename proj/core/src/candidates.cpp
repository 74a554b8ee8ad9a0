// SPDX-License-Identifier: Apache-2.0

#include "indloop/candidates.hpp"

#include <algorithm>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <thread>
#include <tuple>
#include <unordered_map>

#include "indloop/hash.hpp"

namespace indloop {

const std::array<GridPoint, kGridSize>& grid() {
  static const auto g = [] {
    std::array<GridPoint, kGridSize> a{};
    std::size_t i = 0;
    for (int x = kGridXMin; x < kGridXMax; ++x)
      for (int y = kGridYMin; y < kGridYMax; ++y) a[i++] = {x, y};
    return a;
  }();
  return g;
}

EvalLimits grid_limits() {
  Integer bound;
  mpz_ui_pow_ui(bound.get_mpz_t(), 10, 300);
  return EvalLimits(bound, 20'000, 2'000);
}

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_integer(const Integer& v, std::uint64_t h) {
  const mpz_srcptr z = v.get_mpz_t();
  h = splitmix(h ^ static_cast<std::uint64_t>(mpz_sgn(z) + 2));
  std::size_t n = mpz_size(z);
  for (std::size_t i = 0; i < n; ++i) h = splitmix(h ^ mpz_getlimbn(z, static_cast<mp_size_t>(i)));
  return h;
}

/// Pseudo-random value in [-2^31, 2^31) determined by the seed, the
/// function symbol and its arguments.
Integer opaque_value(std::uint64_t seed, FuncSym f, std::span<const Integer> args) {
  std::uint64_t h = splitmix(seed ^ (static_cast<std::uint64_t>(f.loop) << 8) ^
                             static_cast<std::uint64_t>(f.role));
  for (const auto& a : args) h = hash_integer(a, h);
  h = splitmix(h);
  return Integer(static_cast<long>(static_cast<std::int64_t>(h >> 32) - (std::int64_t{1} << 31)));
}

bool within(const Integer& v, const EvalLimits& limits) { return abs(v) <= limits.max_abs; }

/// Pointwise combination shared by fingerprint evaluation and pool
/// construction. `vals[i]` is nullopt when undefined.
using Vals = std::vector<std::optional<Integer>>;

std::optional<Integer> combine(PKind k, const std::optional<Integer>& a,
                               const std::optional<Integer>& b, const EvalLimits& limits) {
  if (!a || !b) return std::nullopt;
  Integer r;
  switch (k) {
    case PKind::Add: r = *a + *b; break;
    case PKind::Sub: r = *a - *b; break;
    case PKind::Mul: r = *a * *b; break;
    case PKind::Div:
      if (*b == 0) return std::nullopt;
      r = sml_div(*a, *b);
      break;
    case PKind::Mod:
      if (*b == 0) return std::nullopt;
      r = sml_mod(*a, *b);
      break;
    default: return std::nullopt;
  }
  if (!within(r, limits)) return std::nullopt;
  return r;
}

std::optional<Integer> opaque_eval(const Pred& t, const LoopRegistry& reg, std::uint64_t seed,
                                   const Integer& x, const Integer& y, const EvalLimits& limits) {
  switch (t.kind()) {
    case PKind::Zero: return Integer(0);
    case PKind::One: return Integer(1);
    case PKind::Two: return Integer(2);
    case PKind::VarX: return x;
    case PKind::VarY: return y;
    case PKind::VarZ: return Integer(0);
    case PKind::Ite: {
      auto c = opaque_eval(t.arg(0), reg, seed, x, y, limits);
      if (!c) return c;
      return opaque_eval(t.arg(*c <= 0 ? 1 : 2), reg, seed, x, y, limits);
    }
    case PKind::App: {
      std::vector<Integer> args;
      for (const auto& a : t.args()) {
        auto v = opaque_eval(a, reg, seed, x, y, limits);
        if (!v) return v;
        args.push_back(*v);
      }
      FuncSym f = t.fn();
      if (f.role == Role::Main || f.role == Role::Second) return opaque_value(seed, f, args);
      EvalResult r = eval_function(reg, f, args, limits);
      if (!r.ok()) return std::nullopt;
      return r.value;
    }
    default:
      return combine(t.kind(), opaque_eval(t.arg(0), reg, seed, x, y, limits),
                     opaque_eval(t.arg(1), reg, seed, x, y, limits), limits);
  }
}

Fingerprint to_fingerprint(const Vals& v) {
  Fingerprint fp;
  fp.values.resize(v.size());
  fp.defined.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i]) {
      fp.values[i] = *v[i];
      fp.defined[i] = 1;
    }
  }
  return fp;
}

struct FingerprintHash {
  std::size_t operator()(const Fingerprint& f) const { return f.hash(); }
};

}  // namespace

std::size_t Fingerprint::hash() const {
  std::uint64_t h = 0x51ed270b27ULL;
  for (std::size_t i = 0; i < values.size(); ++i)
    h = defined[i] ? hash_integer(values[i], h) : splitmix(h ^ 0xabcdefULL);
  return static_cast<std::size_t>(h);
}

Fingerprint fingerprint(const Pred& term, const LoopRegistry& reg, std::uint64_t seed,
                        const EvalLimits& limits) {
  Vals v(kGridSize);
  const auto& g = grid();
  for (std::size_t i = 0; i < kGridSize; ++i)
    v[i] = opaque_eval(term, reg, seed, Integer(g[i].x), Integer(g[i].y), limits);
  return to_fingerprint(v);
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

/// A proposed term: an operator over pool members.
struct Proposal {
  PKind kind;
  FuncSym fn{};
  std::array<int, 3> kids{-1, -1, -1};
};

class Enumerator {
 public:
  Enumerator(const LoopRegistry& reg, const EnumOptions& opts)
      : reg_(reg), opts_(opts), limits_(grid_limits()) {
    for (FuncSym f : reg.main_symbols()) symbols_.push_back(f);
  }

  TermPool run() {
    for (std::size_t size = 1; size <= opts_.max_size && !full(); ++size) {
      by_size_.emplace_back();
      std::vector<Proposal> layer = proposals(size);
      admit(layer, size);
    }
    return std::move(pool_);
  }

 private:
  bool full() const { return pool_.terms.size() >= opts_.cap; }

  std::vector<Proposal> proposals(std::size_t size) {
    std::vector<Proposal> out;
    if (size == 1) {
      for (PKind k : {PKind::Zero, PKind::One, PKind::Two, PKind::VarX, PKind::VarY})
        out.push_back({k});
      for (FuncSym f : symbols_)
        if (reg_.arity(f) == 0) out.push_back({PKind::App, f});
      return out;
    }
    const std::size_t rest = size - 1;
    for (FuncSym f : symbols_) {
      int n = reg_.arity(f);
      if (n == 1) {
        for (int a : layer(rest)) out.push_back({PKind::App, f, {a, -1, -1}});
      } else if (n == 2) {
        for (std::size_t s1 = 1; s1 < rest; ++s1)
          for (int a : layer(s1))
            for (int b : layer(rest - s1)) out.push_back({PKind::App, f, {a, b, -1}});
      }
    }
    for (PKind k : {PKind::Add, PKind::Sub, PKind::Mul, PKind::Div, PKind::Mod}) {
      for (std::size_t s1 = 1; s1 < rest; ++s1)
        for (int a : layer(s1))
          for (int b : layer(rest - s1)) out.push_back({k, {}, {a, b, -1}});
    }
    for (std::size_t s1 = 1; s1 + 1 < rest; ++s1)
      for (std::size_t s2 = 1; s1 + s2 < rest; ++s2)
        for (int a : layer(s1))
          for (int b : layer(s2))
            for (int c : layer(rest - s1 - s2)) out.push_back({PKind::Ite, {}, {a, b, c}});
    return out;
  }

  const std::vector<int>& layer(std::size_t size) const { return by_size_.at(size - 1); }

  Vals values_of(const Proposal& p) const {
    Vals v(kGridSize);
    const auto& g = grid();
    auto kid = [&](int i) -> const Vals& { return vals_[static_cast<std::size_t>(p.kids[static_cast<std::size_t>(i)])]; };
    for (std::size_t i = 0; i < kGridSize; ++i) {
      switch (p.kind) {
        case PKind::Zero: v[i] = Integer(0); break;
        case PKind::One: v[i] = Integer(1); break;
        case PKind::Two: v[i] = Integer(2); break;
        case PKind::VarX: v[i] = Integer(g[i].x); break;
        case PKind::VarY: v[i] = Integer(g[i].y); break;
        case PKind::Ite: {
          const auto& c = kid(0)[i];
          if (c) v[i] = (*c <= 0 ? kid(1) : kid(2))[i];
          break;
        }
        case PKind::App: {
          std::vector<Integer> args;
          bool ok = true;
          for (int a = 0; a < reg_.arity(p.fn); ++a) {
            const auto& w = kid(a)[i];
            if (!w) {
              ok = false;
              break;
            }
            args.push_back(*w);
          }
          if (ok) v[i] = opaque_value(opts_.seed, p.fn, args);
          break;
        }
        default:
          v[i] = combine(p.kind, kid(0)[i], kid(1)[i], limits_);
      }
    }
    return v;
  }

  Pred build(const Proposal& p) const {
    auto term = [&](int i) { return pool_.terms[static_cast<std::size_t>(p.kids[static_cast<std::size_t>(i)])]; };
    switch (p.kind) {
      case PKind::Zero:
      case PKind::One:
      case PKind::Two:
      case PKind::VarX:
      case PKind::VarY:
        return Pred::leaf(p.kind);
      case PKind::App: {
        std::vector<Pred> args;
        for (int a = 0; a < reg_.arity(p.fn); ++a) args.push_back(term(a));
        return p_app(p.fn, std::move(args));
      }
      case PKind::Ite:
        return Pred(PKind::Ite, {term(0), term(1), term(2)});
      default:
        return Pred(p.kind, {term(0), term(1)});
    }
  }

  void admit(const std::vector<Proposal>& layer, std::size_t size) {
    constexpr std::size_t kChunk = 2048;
    for (std::size_t start = 0; start < layer.size() && !full(); start += kChunk) {
      std::size_t end = std::min(layer.size(), start + kChunk);
      std::vector<Vals> chunk(end - start);
      unsigned nt = std::max(1u, opts_.threads);
      if (nt == 1) {
        for (std::size_t i = start; i < end; ++i) chunk[i - start] = values_of(layer[i]);
      } else {
        std::vector<std::thread> workers;
        for (unsigned t = 0; t < nt; ++t) {
          workers.emplace_back([&, t] {
            for (std::size_t i = start + t; i < end; i += nt) chunk[i - start] = values_of(layer[i]);
          });
        }
        for (auto& w : workers) w.join();
      }
      // merge in proposal order
      for (std::size_t i = start; i < end && !full(); ++i) {
        Fingerprint fp = to_fingerprint(chunk[i - start]);
        if (seen_.count(fp)) continue;
        seen_.emplace(fp, static_cast<int>(pool_.terms.size()));
        by_size_[size - 1].push_back(static_cast<int>(pool_.terms.size()));
        pool_.terms.push_back(build(layer[i]));
        pool_.fingerprints.push_back(std::move(fp));
        vals_.push_back(std::move(chunk[i - start]));
      }
    }
  }

  const LoopRegistry& reg_;
  EnumOptions opts_;
  EvalLimits limits_;
  std::vector<FuncSym> symbols_;
  TermPool pool_;
  std::vector<Vals> vals_;
  std::vector<std::vector<int>> by_size_;
  std::unordered_map<Fingerprint, int, FingerprintHash> seen_;
};

}  // namespace

TermPool enumerate_terms(const LoopRegistry& reg, const EnumOptions& opts) {
  return Enumerator(reg, opts).run();
}

// ---------------------------------------------------------------------------
// Truth on the grid

TruthProfile truth_profile(const Pred& formula, const LoopRegistry& reg, const EvalLimits& limits) {
  TruthProfile tp;
  const auto& g = grid();
  for (std::size_t i = 0; i < kGridSize; ++i) {
    Integer x(g[i].x), y(g[i].y), z(0);
    auto v = truth_value(formula, reg, x, y, z, limits);
    if (v) (*v ? tp.truth : tp.falsity).set(i);
  }
  return tp;
}

bool true_on_grid(const Pred& formula, const LoopRegistry& reg, const EvalLimits& limits) {
  const auto& g = grid();
  for (const auto& p : g)
    if (!holds(formula, reg, Integer(p.x), Integer(p.y), Integer(0), limits)) return false;
  return true;
}

std::uint64_t mix_seed(std::uint64_t seed, std::string_view salt) {
  return splitmix(seed ^ fnv1a64(salt));
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

using RealVals = std::vector<PointValue>;

class RealCache {
 public:
  RealCache(const TermPool& pool, const LoopRegistry& reg) : pool_(pool), reg_(reg), limits_(grid_limits()) {
    cache_.resize(pool.terms.size());
  }

  const RealVals& at(std::size_t i) {
    if (!cache_[i]) {
      RealVals v(kGridSize);
      const auto& g = grid();
      for (std::size_t k = 0; k < kGridSize; ++k)
        v[k] = eval_term(pool_.terms[i], reg_, Integer(g[k].x), Integer(g[k].y), Integer(0),
                         limits_);
      cache_[i] = std::move(v);
    }
    return *cache_[i];
  }

 private:
  const TermPool& pool_;
  const LoopRegistry& reg_;
  EvalLimits limits_;
  std::vector<std::optional<RealVals>> cache_;
};

TruthProfile relation_profile(const RealVals& a, const RealVals& b, bool eq) {
  TruthProfile tp;
  for (std::size_t i = 0; i < kGridSize; ++i) {
    if (!a[i].ok || !b[i].ok) continue;
    bool r = eq ? a[i].value == b[i].value : a[i].value <= b[i].value;
    (r ? tp.truth : tp.falsity).set(i);
  }
  return tp;
}

}  // namespace

LiteralPool sample_literals(const TermPool& pool, const LoopRegistry& reg,
                            const LiteralOptions& opts) {
  LiteralPool out;
  if (pool.terms.empty()) {
    out.partial = true;
    return out;
  }
  RealCache real(pool, reg);
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.terms.size() - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  std::set<std::tuple<std::size_t, std::size_t, int, int>> seen;
  const std::size_t target = 4 * opts.per_class;

  for (std::size_t draw = 0; draw < opts.max_draws && out.literals.size() < target; ++draw) {
    std::size_t i = pick(rng), j = pick(rng);
    bool eq = coin(rng) == 0;
    bool neg = coin(rng) == 1;
    const Pred& a = pool.terms[i];
    const Pred& b = pool.terms[j];
    if (!mentions(a, PKind::VarX) && !mentions(b, PKind::VarX)) continue;
    if (!seen.emplace(i, j, eq, neg).second) continue;

    TruthProfile tp = relation_profile(real.at(i), real.at(j), eq);
    if (neg) std::swap(tp.truth, tp.falsity);
    if (!tp.sometimes_true()) continue;

    int base = neg ? 2 : 0;
    int cls = -1;
    if (tp.always_true() && out.counts[static_cast<std::size_t>(base)] < opts.per_class) {
      cls = base;
    } else if (out.counts[static_cast<std::size_t>(base + 1)] < opts.per_class) {
      cls = base + 1;
    }
    if (cls < 0) continue;

    Pred lit = eq ? p_eq(a, b) : p_le(a, b);
    if (neg) lit = p_not(std::move(lit));
    out.literals.push_back({std::move(lit), tp, static_cast<LiteralClass>(cls)});
    ++out.counts[static_cast<std::size_t>(cls)];
  }
  out.partial = out.literals.size() < target;
  return out;
}

std::vector<Pred> build_predicates(const LiteralPool& lits, const PredicateOptions& opts,
                                   bool* partial) {
  std::vector<Pred> out;
  const auto& ls = lits.literals;
  if (ls.size() >= 2) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, ls.size() - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    std::set<std::tuple<std::size_t, std::size_t, int>> seen;
    for (std::size_t draw = 0; draw < opts.max_draws && out.size() < opts.count; ++draw) {
      std::size_t i = pick(rng), j = pick(rng);
      if (i == j) continue;
      bool conj = coin(rng) == 0;
      const TruthProfile& a = ls[i].profile;
      const TruthProfile& b = ls[j].profile;
      bool ok = conj ? (a.truth & b.truth).all() : (a.falsity | (a.truth & b.truth)).all();
      if (!ok || !seen.emplace(i, j, conj).second) continue;
      out.push_back(conj ? p_and(ls[i].pred, ls[j].pred) : p_implies(ls[i].pred, ls[j].pred));
    }
  }
  if (partial) *partial = out.size() < opts.count;
  return out;
}

std::vector<Candidate> sample_candidates(const std::vector<Pred>& preds, std::size_t count,
                                         std::size_t length, std::uint64_t seed) {
  std::vector<Candidate> out;
  if (preds.size() < length || length == 0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, preds.size() - 1);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<std::size_t> idx;
    while (idx.size() < length) {
      std::size_t k = pick(rng);
      if (std::find(idx.begin(), idx.end(), k) == idx.end()) idx.push_back(k);
    }
    Candidate cand;
    for (std::size_t k : idx) cand.push_back(preds[k]);
    out.push_back(std::move(cand));
  }
  return out;
}

std::vector<Candidate> initial_candidates(const Problem& problem, const InitOptions& opts) {
  EnumOptions eo = opts.terms;
  eo.seed = mix_seed(eo.seed, problem.id + "/terms");
  TermPool pool = enumerate_terms(problem.registry, eo);

  LiteralOptions lo = opts.literals;
  lo.seed = mix_seed(lo.seed, problem.id + "/literals");
  LiteralPool lits = sample_literals(pool, problem.registry, lo);
  if (lits.partial) {
    std::clog << "warning: " << problem.id << ": literal quotas not reached ("
              << lits.literals.size() << "/" << 4 * lo.per_class << ")\n";
  }

  PredicateOptions po = opts.predicates;
  po.seed = mix_seed(po.seed, problem.id + "/predicates");
  bool partial = false;
  std::vector<Pred> preds = build_predicates(lits, po, &partial);
  if (partial) {
    std::clog << "warning: " << problem.id << ": built " << preds.size() << "/" << po.count
              << " predicates\n";
  }
  return sample_candidates(preds, opts.candidates, opts.candidate_length,
                           mix_seed(opts.predicates.seed, problem.id + "/candidates"));
}

}  // namespace indloop
