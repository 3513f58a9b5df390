#include "needsem/harness.hpp"

#include <pthread.h>

#include <algorithm>
#include <array>
#include <exception>
#include <random>
#include <unordered_map>

#include "json.hpp"
#include "needsem/textio.hpp"

namespace needsem {

std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Agree: return "agree";
    case VerdictStatus::Disagree: return "disagree";
    case VerdictStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Generation

namespace {

constexpr std::array<const char*, 8> kPool{"x", "y", "z", "f", "g", "h", "u", "v"};

class Generator {
 public:
  explicit Generator(const GenConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  Term program() {
    std::size_t target = 2 + below(std::max<std::size_t>(cfg_.max_size, 2) - 1);
    for (;;) {
      scope_.clear();
      bound_.clear();
      Term t = gen(target, true);
      if (size(t) <= cfg_.max_size) return t;
    }
  }

 private:
  std::size_t below(std::size_t n) { return n ? static_cast<std::size_t>(rng_() % n) : 0; }
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  Name binder() { return kPool[below(kPool.size())]; }
  bool pairs() const { return cfg_.mode == Mode::LetrecPairs; }
  bool let_mode() const { return cfg_.mode == Mode::Let; }

  // Smallest closed term given the current scope.
  std::size_t floor() const { return scope_.empty() ? 2 : 1; }

  Term variable() {
    if (!group_.empty() && chance(cfg_.recursion_bias)) return Term::var(group_[below(group_.size())]);
    if (!bound_.empty() && chance(cfg_.reuse_bias)) return Term::var(bound_[below(bound_.size())]);
    return Term::var(scope_[below(scope_.size())]);
  }

  Term identity() {
    Name x = binder();
    return Term::lam(x, Term::var(x));
  }

  Term lam(std::size_t budget) {
    Name x = binder();
    scope_.push_back(x);
    std::vector<Name> saved_group;
    saved_group.swap(group_);
    Term body = gen(budget - 1, false);
    group_.swap(saved_group);
    scope_.pop_back();
    return Term::lam(x, std::move(body));
  }

  std::pair<std::size_t, std::size_t> split(std::size_t total, std::size_t min_a, std::size_t min_b) {
    std::size_t spare = total - min_a - min_b;
    std::size_t a = min_a + below(spare + 1);
    return {a, total - a};
  }

  Term gen(std::size_t budget, bool top) {
    const std::size_t f = floor();
    if (budget < f) budget = f;
    if (budget == 1) return variable();
    if (budget == 2 && scope_.empty()) return identity();

    enum Choice { Var, Lam, App, Bind, Pair, Proj };
    std::vector<std::pair<Choice, double>> options;
    if (!scope_.empty()) options.push_back({Var, budget <= 3 ? 3.0 : 0.6});
    options.push_back({Lam, top ? 0.3 : 1.5});
    if (budget >= f + f + 1) options.push_back({App, top ? 3.0 : 2.2});
    if (budget >= f + 2) options.push_back({Bind, top ? 3.0 : 1.2});
    if (pairs() && budget >= 2 * f + 1) options.push_back({Pair, 0.8});
    if (pairs() && budget >= 2 * f + 2) options.push_back({Proj, 0.8});

    double total = 0;
    for (const auto& o : options) total += o.second;
    double pick = unit() * total;
    Choice c = options.back().first;
    for (const auto& o : options) {
      if (pick < o.second) {
        c = o.first;
        break;
      }
      pick -= o.second;
    }

    switch (c) {
      case Var: return variable();
      case Lam: return lam(budget);
      case App: {
        auto [a, b] = split(budget - 1, f, f);
        Term fn;
        if (chance(0.6) && a >= 2) {
          fn = lam(a);
        } else {
          fn = gen(a, false);
        }
        return Term::app(std::move(fn), gen(b, false));
      }
      case Bind: return let_mode() ? let(budget) : letrec(budget);
      case Pair: {
        auto [a, b] = split(budget - 1, f, f);
        Term l = gen(a, false);
        return Term::pair(std::move(l), gen(b, false));
      }
      case Proj: {
        int index = 1 + static_cast<int>(below(2));
        if (chance(0.8) && budget >= 2 * f + 2) {
          auto [a, b] = split(budget - 2, f, f);
          Term l = gen(a, false);
          return Term::proj(Term::pair(std::move(l), gen(b, false)), index);
        }
        return Term::proj(gen(budget - 1, false), index);
      }
    }
    return variable();
  }

  Term let(std::size_t budget) {
    auto [a, b] = split(budget - 1, floor(), 1);
    Name x = binder();
    Term m = gen(a, false);
    scope_.push_back(x);
    bound_.push_back(x);
    Term n = gen(b, false);
    bound_.pop_back();
    scope_.pop_back();
    return Term::let(x, std::move(m), std::move(n));
  }

  Term letrec(std::size_t budget) {
    std::size_t groups = 1 + below(std::min<std::size_t>(3, (budget - 1) / 2));
    std::vector<Name> names;
    while (names.size() < groups) {
      Name x = binder();
      if (std::find(names.begin(), names.end(), x) == names.end()) names.push_back(x);
    }
    for (const auto& x : names) {
      scope_.push_back(x);
      bound_.push_back(x);
    }
    std::size_t rest = budget - 1;
    std::vector<Binding> bs;
    std::vector<Name> saved_group = group_;
    group_ = names;
    for (std::size_t i = 0; i < names.size(); ++i) {
      std::size_t left = names.size() - i;  // bindings still to place, plus the body
      std::size_t share = rest - left;
      std::size_t a = 1 + below(share / 2 + 1);
      rest -= a;
      bs.push_back({names[i], gen(a, false)});
    }
    group_ = saved_group;
    Term body = gen(rest, false);
    for (std::size_t i = 0; i < names.size(); ++i) {
      scope_.pop_back();
      bound_.pop_back();
    }
    return Term::letrec(std::move(bs), std::move(body));
  }

  GenConfig cfg_;
  std::mt19937_64 rng_;
  std::vector<Name> scope_;
  std::vector<Name> bound_;
  std::vector<Name> group_;
};

}  // namespace

Term gen_program(const GenConfig& cfg) { return Generator(cfg).program(); }

// ---------------------------------------------------------------------------
// Result comparison

Term let_spine(const std::vector<Binding>& heap, const Term& value) {
  Term t = value;
  for (auto it = heap.rbegin(); it != heap.rend(); ++it) t = Term::let(it->name, it->value, t);
  return t;
}

void answer_spine(const Term& answer, std::vector<Binding>& heap, Term& value) {
  Term t = answer;
  while (t.is(TermKind::Letrec) || t.is(TermKind::Let)) {
    if (t.is(TermKind::Let)) {
      heap.push_back({t.name(), t.bound()});
    } else {
      heap.insert(heap.end(), t.bindings().begin(), t.bindings().end());
    }
    t = t.body();
  }
  value = t;
}

namespace {

// Matches two term families whose free names are heap names, building a
// bijection between the two heaps as it goes.
class HeapMatcher {
 public:
  HeapMatcher(const std::vector<Binding>& a, const std::vector<Binding>& b) {
    for (const auto& x : a) a_.emplace(x.name, x.value);
    for (const auto& x : b) b_.emplace(x.name, x.value);
  }

  bool run(const Term& va, const Term& vb) {
    if (a_.size() != b_.size()) return false;
    State s;
    s.work.push_back({va, vb});
    return solve(std::move(s));
  }

 private:
  struct State {
    std::unordered_map<Name, Name> ab, ba;
    std::vector<std::pair<Term, Term>> work;
  };
  using Scope = std::vector<std::pair<Name, Name>>;

  bool solve(State s) {
    while (!s.work.empty()) {
      auto [x, y] = s.work.back();
      s.work.pop_back();
      Scope scope;
      if (!match(s, x, y, scope)) return false;
    }
    if (s.ab.size() == a_.size()) return true;
    for (const auto& kv : a_) {
      if (s.ab.count(kv.first)) continue;
      const std::size_t ha = alpha_hash(kv.second, true);
      for (const auto& kw : b_) {
        if (s.ba.count(kw.first) || alpha_hash(kw.second, true) != ha) continue;
        State next = s;
        bind(next, kv.first, kw.first);
        if (solve(std::move(next))) return true;
      }
      return false;
    }
    return false;
  }

  void bind(State& s, const Name& a, const Name& b) {
    s.ab.emplace(a, b);
    s.ba.emplace(b, a);
    s.work.push_back({a_.at(a), b_.at(b)});
  }

  bool var(State& s, const Name& a, const Name& b, const Scope& scope) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
      bool la = it->first == a, lb = it->second == b;
      if (la || lb) return la && lb;
    }
    bool ha = a_.count(a) != 0, hb = b_.count(b) != 0;
    if (!ha || !hb) return !ha && !hb && a == b;
    auto ia = s.ab.find(a);
    if (ia != s.ab.end()) return ia->second == b;
    if (s.ba.count(b)) return false;
    bind(s, a, b);
    return true;
  }

  bool match(State& s, const Term& x, const Term& y, Scope& scope) {
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
      case TermKind::Var: return var(s, x.name(), y.name(), scope);
      case TermKind::BlackHole: return true;
      case TermKind::Lam: {
        scope.push_back({x.name(), y.name()});
        bool ok = match(s, x.body(), y.body(), scope);
        scope.pop_back();
        return ok;
      }
      case TermKind::App:
        return match(s, x.fn(), y.fn(), scope) && match(s, x.arg(), y.arg(), scope);
      case TermKind::Let: {
        if (!match(s, x.bound(), y.bound(), scope)) return false;
        scope.push_back({x.name(), y.name()});
        bool ok = match(s, x.body(), y.body(), scope);
        scope.pop_back();
        return ok;
      }
      case TermKind::Letrec: {
        const auto& bx = x.bindings();
        const auto& by = y.bindings();
        if (bx.size() != by.size()) return false;
        for (std::size_t i = 0; i < bx.size(); ++i) scope.push_back({bx[i].name, by[i].name});
        bool ok = match(s, x.body(), y.body(), scope);
        for (std::size_t i = 0; ok && i < bx.size(); ++i) ok = match(s, bx[i].value, by[i].value, scope);
        scope.resize(scope.size() - bx.size());
        return ok;
      }
      case TermKind::Pair:
        return match(s, x.left(), y.left(), scope) && match(s, x.right(), y.right(), scope);
      case TermKind::Proj:
        return x.index() == y.index() && match(s, x.target(), y.target(), scope);
    }
    return false;
  }

  std::unordered_map<Name, Term> a_, b_;
};

}  // namespace

bool cyclic_result_match(const Term& answer, const std::vector<Binding>& heap, const Term& value) {
  std::vector<Binding> spine;
  Term v;
  answer_spine(answer, spine, v);
  return HeapMatcher(spine, heap).run(v, value);
}

// ---------------------------------------------------------------------------
// Checks

namespace {

FaultKind fault_of(const std::string& detail) {
  if (detail.find("application of a pair") != std::string::npos) return FaultKind::ApplyPair;
  if (detail.find("projection") != std::string::npos) return FaultKind::ProjectNonPair;
  return FaultKind::Malformed;
}

bool is_lambda(const Term& v) { return v && v.is(TermKind::Lam); }

class Runner {
 public:
  Runner(Verdict& v, Mode mode, const CheckOptions& opts) : v_(v), mode_(mode), opts_(opts) {}

  ReduceResult reduce_run(const Term& t, std::size_t budget) {
    ReduceOptions ro;
    ro.max_steps = budget;
    ro.record_trace = false;
    ro.reduction = opts_.reduction;
    // Audits are quadratic in the run length, so margin retries skip them.
    const bool audit = opts_.audit && budget <= opts_.budgets.steps;
    if (audit) {
      ro.observer = [this](const Term& before, const Decomposition& d, const Term& after) {
        sweep(before, &d);
        if (!binders_distinct(after)) note("binders not distinct after a reduction step");
      };
    }
    ReduceResult r = reduce(t, mode_, ro);
    if (audit && r.outcome == OutcomeKind::Answer) sweep(r.term, nullptr);
    if (r.outcome == OutcomeKind::Stuck && (mode_ == Mode::Let || mode_ == Mode::Letrec))
      note("reduction stuck in a calculus with unique decomposition: " + r.detail);
    return r;
  }

  EvalOptions eval_opts(std::size_t budget) const {
    EvalOptions eo;
    eo.budget = budget;
    eo.audit = opts_.audit && budget <= opts_.budgets.depth;
    return eo;
  }

  void absorb(const std::vector<std::string>& vs, std::string_view engine) {
    for (const auto& s : vs) note(std::string(engine) + ": " + s);
  }

  void note(std::string s) {
    if (v_.violations.size() < 16) v_.violations.push_back(std::move(s));
  }

  void record(const ReduceResult& r) {
    EngineRun run{"need-red", std::string(to_string(r.outcome)), r.steps, "", ""};
    if (r.outcome == OutcomeKind::Answer) {
      run.value = print(r.term);
    } else if (r.outcome == OutcomeKind::Stuck) {
      run.value = std::string(to_string(r.fault));
    }
    v_.runs.push_back(std::move(run));
  }

  void record(std::string engine, const EvalOutcome& e) {
    EngineRun run{std::move(engine), std::string(to_string(e.status)), e.nodes, "", ""};
    if (e.ok()) {
      run.heap = print_bindings(e.heap);
      run.value = print(e.value);
    } else if (e.status == EvalStatus::StuckCycle) {
      run.value = e.stuck_on;
    } else if (e.status == EvalStatus::TypeFault) {
      run.value = e.detail;
    }
    v_.runs.push_back(std::move(run));
  }

  void record(const IEvalOutcome& e) {
    EngineRun run{"need-inst", std::string(to_string(e.status)), e.nodes, "", ""};
    if (e.ok()) {
      run.heap = print_heap(e.sigma);
      run.value = print(e.value);
    } else if (e.status == EvalStatus::TypeFault) {
      run.value = e.detail;
    }
    v_.runs.push_back(std::move(run));
  }

 private:
  void sweep(const Term& p, const Decomposition* d) {
    ++v_.decompositions_checked;
    std::vector<DecompositionKey> keys = decompose_oracle(p, mode_);
    if (!d) {
      if (!keys.empty()) note("oracle finds a redex in the answer " + print(p));
      return;
    }
    DecompositionKey mine = key_of(*d);
    if (keys.size() != 1 || !(keys[0] == mine)) {
      std::string found;
      for (const auto& k : keys) found += (found.empty() ? "" : "; ") + to_string(k);
      note("decomposition of " + print(p) + ": engine " + to_string(mine) + ", oracle [" + found + "]");
    }
  }

  Verdict& v_;
  Mode mode_;
  const CheckOptions& opts_;
};

void finish(Verdict& v, bool ok, std::string detail) {
  v.status = ok ? VerdictStatus::Agree : VerdictStatus::Disagree;
  if (!ok || v.detail.empty()) v.detail = std::move(detail);
}

bool settled(const ReduceResult& r) { return r.outcome != OutcomeKind::FuelExhausted; }
bool settled(const EvalOutcome& e) { return e.status != EvalStatus::BudgetExhausted; }
bool settled(const IEvalOutcome& e) { return e.status != EvalStatus::BudgetExhausted; }

Verdict equiv(const Term& t, Mode mode, const CheckOptions& opts, bool cyclic) {
  Verdict v;
  v.check = cyclic ? "equiv-cyclic" : "equiv-acyclic";
  v.program = t;
  Runner run(v, mode, opts);
  const Budgets& b = opts.budgets;
  auto nat = [&](std::size_t budget) {
    return cyclic ? eval_letrec({}, t, run.eval_opts(budget)) : eval_let({}, t, {}, run.eval_opts(budget));
  };
  // The big-step side is cheap, so it runs first; when it cannot finish
  // even with the margin no reduction outcome could make the verdict
  // conclusive.
  EvalOutcome e = nat(b.depth);
  const bool nat_base = settled(e);
  if (!nat_base) e = nat(b.depth * b.margin);
  ReduceResult r;
  if (settled(e)) {
    r = run.reduce_run(t, b.steps);
    if (nat_base && !settled(r)) r = run.reduce_run(t, b.steps * b.margin);
    run.record(r);
  } else {
    r.outcome = OutcomeKind::FuelExhausted;
  }
  run.record(cyclic ? "need-nat" : "need-nat-let", e);
  run.absorb(e.violations, "natural");
  if (!settled(r) || !settled(e)) {
    v.status = VerdictStatus::Inconclusive;
    v.detail = "budget exhausted";
    return v;
  }
  if (r.outcome == OutcomeKind::Stuck || e.status == EvalStatus::TypeFault) {
    bool same = r.outcome == OutcomeKind::Stuck && e.status == EvalStatus::TypeFault &&
                r.fault == fault_of(e.detail);
    finish(v, same, same ? "both report " + std::string(to_string(r.fault))
                         : "fault on one side only");
    return v;
  }
  if (!e.ok()) {
    finish(v, false, "natural semantics ended with " + std::string(to_string(e.status)));
    return v;
  }
  bool ok = cyclic ? cyclic_result_match(r.term, e.heap, e.value)
                   : alpha_eq(r.term, let_spine(e.heap, e.value));
  finish(v, ok, ok ? "" : "answer " + print(r.term) + " vs heap " + print_bindings(e.heap) +
                            " value " + print(e.value));
  return v;
}

}  // namespace

Verdict check_equiv_acyclic(const Term& t, const CheckOptions& opts) {
  return equiv(t, Mode::Let, opts, false);
}

Verdict check_equiv_cyclic(const Term& t, Mode mode, const CheckOptions& opts) {
  return equiv(t, mode, opts, true);
}

Verdict check_instrumented(const Term& t, Mode mode, const CheckOptions& opts) {
  const bool cyclic = mode != Mode::Let;
  Verdict v;
  v.check = "instrumented";
  v.program = t;
  Runner run(v, mode, opts);
  const Budgets& b = opts.budgets;
  auto inst = [&](std::size_t budget) {
    IEvalOptions io;
    io.budget = budget;
    io.audit = opts.audit && budget <= b.depth;
    return cyclic ? ieval_letrec({}, t, io) : ieval_let({}, t, io);
  };
  auto nat = [&](std::size_t budget) {
    return cyclic ? eval_letrec({}, t, run.eval_opts(budget)) : eval_let({}, t, {}, run.eval_opts(budget));
  };
  // Cheapest engine first: if the natural semantics cannot finish even with
  // the margin, the verdict is inconclusive whatever the others do.
  EvalOutcome e = nat(b.depth);
  bool base = settled(e);
  if (!base) e = nat(b.depth * b.margin);
  IEvalOutcome ie;
  ie.status = EvalStatus::BudgetExhausted;
  ReduceResult r;
  r.outcome = OutcomeKind::FuelExhausted;
  if (settled(e)) {
    ie = inst(b.depth);
    base = base || settled(ie);
    if (base && !settled(ie)) ie = inst(b.depth * b.margin);
    if (settled(ie)) {
      r = run.reduce_run(t, b.steps);
      base = base || settled(r);
      if (base && !settled(r)) r = run.reduce_run(t, b.steps * b.margin);
      run.record(r);
      if (!base) ie.status = EvalStatus::BudgetExhausted;
    }
  }
  run.record(ie);
  run.record("need-nat", e);
  run.absorb(ie.violations, "instrumented");
  run.absorb(e.violations, "natural");
  if (!settled(ie) || !settled(r) || !settled(e)) {
    v.status = VerdictStatus::Inconclusive;
    v.detail = "budget exhausted";
    return v;
  }
  if (ie.status == EvalStatus::TypeFault || r.outcome == OutcomeKind::Stuck ||
      e.status == EvalStatus::TypeFault) {
    bool same = ie.status == EvalStatus::TypeFault && r.outcome == OutcomeKind::Stuck &&
                e.status == EvalStatus::TypeFault && fault_of(ie.detail) == r.fault &&
                fault_of(e.detail) == r.fault;
    finish(v, same, same ? "all report " + std::string(to_string(r.fault)) : "fault on some engines only");
    return v;
  }
  if (!ie.ok() || !e.ok()) {
    finish(v, false, "an engine ended without a value");
    return v;
  }
  std::string why;
  if (!well_formed(ie.sigma, ie.value, cyclic, &why)) {
    finish(v, false, "final configuration ill-formed: " + why);
    return v;
  }
  if (!heap_leq({}, ie.sigma, cyclic)) {
    finish(v, false, "final heap is not a sequence of bind frames");
    return v;
  }
  Term plugged = plug(comp(ie.sigma), ie.value);
  bool reduction_ok = alpha_eq(r.term, plugged);
  std::string note;
  if (!reduction_ok && cyclic) {
    std::vector<Binding> spine;
    Term val;
    answer_spine(plugged, spine, val);
    reduction_ok = cyclic_result_match(r.term, spine, val);
    if (reduction_ok) note = "reduction answer matches up to binding order";
  }
  if (!reduction_ok) {
    finish(v, false, "reduction answer " + print(r.term) + " vs instrumented " + print(plugged));
    return v;
  }
  std::vector<Binding> flat = decomp(ie.sigma);
  bool natural_ok = cyclic ? cyclic_result_match(Term::letrec(flat, ie.value), e.heap, e.value)
                           : alpha_eq(let_spine(flat, ie.value), let_spine(e.heap, e.value));
  finish(v, natural_ok, natural_ok ? note
                                   : "decomp " + print_bindings(flat) + " vs heap " +
                                         print_bindings(e.heap));
  return v;
}

Verdict check_cbv_implies_cbn(const Term& t, const CheckOptions& opts) {
  Verdict v;
  v.check = "cbv-implies-cbn";
  v.program = t;
  Runner run(v, Mode::Value, opts);
  const Budgets& b = opts.budgets;
  EvalOutcome cbv = eval_value({}, t, run.eval_opts(b.depth));
  run.record("value", cbv);
  run.absorb(cbv.violations, "value");
  if (!settled(cbv)) {
    v.status = VerdictStatus::Inconclusive;
    v.detail = "call-by-value run exhausted";
    return v;
  }
  ReduceResult r = run.reduce_run(t, b.steps);
  if (!settled(r)) r = run.reduce_run(t, b.steps * b.margin);
  run.record(r);
  if (settled(r)) {
    bool same = false;
    if (r.outcome == OutcomeKind::Answer && cbv.ok()) {
      same = cyclic_result_match(r.term, cbv.heap, cbv.value);
    } else if (r.outcome == OutcomeKind::Stuck && cbv.status == EvalStatus::TypeFault) {
      same = true;
    }
    if (!same) {
      finish(v, false, "by-value reduction and natural semantics differ");
      return v;
    }
  }
  if (!cbv.ok() || !is_lambda(cbv.value)) {
    v.status = settled(r) ? VerdictStatus::Agree : VerdictStatus::Inconclusive;
    v.detail = "no good answer by value";
    return v;
  }
  EvalOutcome cbn = eval_letrec({}, t, run.eval_opts(b.depth));
  if (!settled(cbn)) cbn = eval_letrec({}, t, run.eval_opts(b.depth * b.margin));
  run.record("need-nat", cbn);
  run.absorb(cbn.violations, "natural");
  if (!settled(cbn)) {
    v.status = VerdictStatus::Inconclusive;
    v.detail = "call-by-need run exhausted";
    return v;
  }
  bool ok = cbn.ok() && is_lambda(cbn.value);
  finish(v, ok, ok ? "" : "good answer by value but not by need");
  return v;
}

Verdict check_adequacy_oracles(const Term& t, const CheckOptions& opts) {
  Verdict v;
  v.check = "adequacy";
  v.program = t;
  Runner run(v, Mode::Letrec, opts);
  const Budgets& b = opts.budgets;
  EvalOutcome need = eval_letrec({}, t, run.eval_opts(b.depth));
  EvalOutcome stuck = eval_letrec_stuck({}, t, run.eval_opts(b.depth));
  EvalOutcome name = eval_name({}, t, run.eval_opts(b.depth));
  const bool any = settled(need) || settled(stuck);
  if (any && !settled(need)) need = eval_letrec({}, t, run.eval_opts(b.depth * b.margin));
  if (any && !settled(stuck)) stuck = eval_letrec_stuck({}, t, run.eval_opts(b.depth * b.margin));
  if (settled(name) && name.ok() && is_lambda(name.value) && !settled(need))
    need = eval_letrec({}, t, run.eval_opts(b.depth * b.margin));
  run.record("need-nat", need);
  run.record("stuck", stuck);
  run.record("name", name);
  run.absorb(need.violations, "natural");
  run.absorb(stuck.violations, "stuck");
  run.absorb(name.violations, "name");
  if (!settled(need) || !settled(stuck)) {
    v.status = VerdictStatus::Inconclusive;
    v.detail = "budget exhausted";
    return v;
  }
  bool lam_need = need.ok() && is_lambda(need.value);
  bool lam_stuck = stuck.ok() && is_lambda(stuck.value);
  if (lam_need != lam_stuck) {
    finish(v, false, "abstraction under one of need and stuck only");
    return v;
  }
  if (settled(name) && name.ok() && is_lambda(name.value) && !lam_need) {
    finish(v, false, "abstraction by name but not by need");
    return v;
  }
  finish(v, true, settled(name) ? "" : "by-name run exhausted");
  return v;
}

std::vector<Verdict> check_all(const Term& t, Mode mode, const CheckOptions& opts) {
  std::vector<Verdict> out;
  switch (mode) {
    case Mode::Let:
      out.push_back(check_equiv_acyclic(t, opts));
      out.push_back(check_instrumented(t, mode, opts));
      break;
    case Mode::Letrec:
      out.push_back(check_equiv_cyclic(t, mode, opts));
      out.push_back(check_instrumented(t, mode, opts));
      out.push_back(check_adequacy_oracles(t, opts));
      break;
    case Mode::LetrecPairs:
      out.push_back(check_equiv_cyclic(t, mode, opts));
      out.push_back(check_instrumented(t, mode, opts));
      break;
    case Mode::Value: out.push_back(check_cbv_implies_cbn(t, opts)); break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shrinking

namespace {

std::vector<Term> children(const Term& t) {
  switch (t.kind()) {
    case TermKind::Lam: return {t.body()};
    case TermKind::App: return {t.fn(), t.arg()};
    case TermKind::Let: return {t.bound(), t.body()};
    case TermKind::Letrec: {
      std::vector<Term> out;
      for (const auto& b : t.bindings()) out.push_back(b.value);
      out.push_back(t.body());
      return out;
    }
    case TermKind::Pair: return {t.left(), t.right()};
    case TermKind::Proj: return {t.target()};
    default: return {};
  }
}

Term with_child(const Term& t, std::size_t i, Term c) {
  switch (t.kind()) {
    case TermKind::Lam: return Term::lam(t.name(), std::move(c));
    case TermKind::App: return i == 0 ? Term::app(std::move(c), t.arg()) : Term::app(t.fn(), std::move(c));
    case TermKind::Let:
      return i == 0 ? Term::let(t.name(), std::move(c), t.body()) : Term::let(t.name(), t.bound(), std::move(c));
    case TermKind::Letrec: {
      auto bs = t.bindings();
      if (i == bs.size()) return Term::letrec(std::move(bs), std::move(c));
      bs[i].value = std::move(c);
      return Term::letrec(std::move(bs), t.body());
    }
    case TermKind::Pair:
      return i == 0 ? Term::pair(std::move(c), t.right()) : Term::pair(t.left(), std::move(c));
    case TermKind::Proj: return Term::proj(std::move(c), t.index());
    default: return t;
  }
}

// Local rewrites of t itself, in no particular order of size.
std::vector<Term> local_candidates(const Term& t) {
  std::vector<Term> out = children(t);
  if (t.is(TermKind::Letrec)) {
    const auto& bs = t.bindings();
    for (std::size_t i = 0; i < bs.size(); ++i) {
      auto rest = bs;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      out.push_back(Term::letrec(std::move(rest), t.body()));
    }
  }
  if (size(t) > 2) out.push_back(Term::lam("x", Term::var("x")));
  return out;
}

void all_candidates(const Term& t, const std::function<Term(Term)>& rebuild, std::vector<Term>& out) {
  for (auto& c : local_candidates(t)) out.push_back(rebuild(c));
  auto kids = children(t);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    all_candidates(kids[i], [&, i](Term c) { return rebuild(with_child(t, i, std::move(c))); }, out);
  }
}

}  // namespace

Term shrink(const Term& t, const std::function<bool(const Term&)>& fails) {
  Term cur = t;
  if (!fails(cur)) return cur;
  for (bool progress = true; progress;) {
    progress = false;
    std::vector<Term> cands;
    all_candidates(cur, [](Term c) { return c; }, cands);
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Term& a, const Term& b) { return size(a) < size(b); });
    const std::size_t n = size(cur);
    for (const auto& c : cands) {
      if (size(c) >= n || !is_closed(c)) continue;
      if (fails(c)) {
        cur = c;
        progress = true;
        break;
      }
    }
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Output and threads

std::string encode_verdict(const Verdict& v) {
  nlohmann::ordered_json j;
  j["check"] = v.check;
  j["program"] = print(v.program);
  j["status"] = to_string(v.status);
  j["agree"] = v.agree();
  auto runs = nlohmann::ordered_json::array();
  for (const auto& r : v.runs) {
    nlohmann::ordered_json o;
    o["engine"] = r.engine;
    o["outcome"] = r.outcome;
    o["cost"] = r.cost;
    o["heap"] = r.heap;
    o["value"] = r.value;
    runs.push_back(std::move(o));
  }
  j["runs"] = std::move(runs);
  j["detail"] = v.detail;
  j["violations"] = v.violations;
  j["witness"] = v.witness ? nlohmann::ordered_json(print(v.witness)) : nlohmann::ordered_json();
  return j.dump();
}

namespace {

struct ThreadJob {
  const std::function<void()>* fn;
  std::exception_ptr error;
};

void* thread_main(void* arg) {
  auto* job = static_cast<ThreadJob*>(arg);
  try {
    (*job->fn)();
  } catch (...) {
    job->error = std::current_exception();
  }
  return nullptr;
}

}  // namespace

void run_with_stack(const std::function<void()>& fn, std::size_t bytes) {
  ThreadJob job{&fn, nullptr};
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, bytes);
  pthread_t thread;
  int rc = pthread_create(&thread, &attr, thread_main, &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) {
    fn();
    return;
  }
  pthread_join(thread, nullptr);
  if (job.error) std::rethrow_exception(job.error);
}

}  // namespace needsem
