#include "needsem/natural.hpp"

#include <algorithm>
#include <unordered_set>

namespace needsem {

CyclicHeap::CyclicHeap(const std::vector<Binding>& bindings) {
  for (const auto& b : bindings) set(b.name, b.value);
}

const Term& CyclicHeap::at(const Name& n) const {
  auto it = index_.find(n);
  if (it == index_.end()) throw InvariantFault("variable '" + n + "' is not bound in the heap");
  return entries_[it->second].value;
}

void CyclicHeap::set(const Name& n, Term t) {
  auto it = index_.find(n);
  if (it != index_.end()) {
    entries_[it->second].value = std::move(t);
    return;
  }
  auto dead = erased_.find(n);
  if (dead != erased_.end()) {
    entries_[dead->second].value = std::move(t);
    index_.emplace(n, dead->second);
    erased_.erase(dead);
    return;
  }
  index_.emplace(n, entries_.size());
  entries_.push_back({n, std::move(t)});
}

void CyclicHeap::erase(const Name& n) {
  auto it = index_.find(n);
  if (it == index_.end()) return;
  entries_[it->second].value = Term();
  erased_.emplace(n, it->second);
  index_.erase(it);
}

std::vector<Binding> CyclicHeap::bindings() const {
  std::vector<Binding> out;
  out.reserve(index_.size());
  for (const auto& b : entries_)
    if (b.value) out.push_back(b);
  return out;
}

std::string_view to_string(EvalStatus s) {
  switch (s) {
    case EvalStatus::Value: return "value";
    case EvalStatus::BudgetExhausted: return "budget_exhausted";
    case EvalStatus::StuckCycle: return "stuck_cycle";
    case EvalStatus::TypeFault: return "type_fault";
  }
  return "?";
}

namespace {

struct Exhausted {};
struct StuckOn {
  Name name;
};
struct Fault {
  std::string detail;
};

void reserve_all(NameSupply& supply, const std::vector<Binding>& heap, const Term& t,
                 const NameSet& avoid) {
  for (const auto& b : heap) {
    supply.reserve(b.name);
    supply.reserve(b.value);
  }
  supply.reserve(t);
  for (const auto& n : avoid) supply.reserve(n);
}

// Shared budget, event and audit bookkeeping.
class EngineBase {
 protected:
  explicit EngineBase(const EvalOptions& opts) : opts_(opts) {}

  std::size_t enter(std::string_view rule, std::size_t heap_size) {
    if (++nodes_ > opts_.budget) throw Exhausted{};
    if (!opts_.record_rules) return 0;
    events_.push_back({std::string(rule), depth_, heap_size, 0});
    return events_.size() - 1;
  }
  void leave(std::size_t event, std::size_t heap_size) {
    if (opts_.record_rules) events_[event].heap_out = heap_size;
  }

  void violation(std::string what) {
    if (violations_.size() < 16) violations_.push_back(std::move(what));
  }

  template <typename Run>
  EvalOutcome finish(Run&& run) {
    EvalOutcome out;
    try {
      out.value = run();
      out.status = EvalStatus::Value;
    } catch (const Exhausted&) {
      out.status = EvalStatus::BudgetExhausted;
    } catch (const StuckOn& s) {
      out.status = EvalStatus::StuckCycle;
      out.stuck_on = s.name;
    } catch (const Fault& f) {
      out.status = EvalStatus::TypeFault;
      out.detail = f.detail;
    }
    out.nodes = nodes_;
    out.violations = std::move(violations_);
    out.events = std::move(events_);
    return out;
  }

  const EvalOptions& opts_;
  NameSupply supply_;
  std::size_t nodes_ = 0;
  std::size_t depth_ = 0;
  std::vector<DerivationEvent> events_;
  std::vector<std::string> violations_;
};

struct DepthGuard {
  explicit DepthGuard(std::size_t& d) : d_(d) { ++d_; }
  ~DepthGuard() { --d_; }
  std::size_t& d_;
};

// ---------------------------------------------------------------------------
// Acyclic

class LetEngine : EngineBase {
 public:
  LetEngine(const OrderedHeap& heap, const EvalOptions& opts) : EngineBase(opts), heap_(heap) {}

  EvalOutcome run(const Term& t, const NameSet& avoid) {
    reserve_all(supply_, heap_, t, avoid);
    EvalOutcome out = finish([&] { return eval(t, avoid); });
    if (out.ok()) {
      out.heap = heap_;
      if (opts_.audit) audit_closed(out.heap, out.value, out.violations);
    }
    return out;
  }

 private:
  static void audit_closed(const OrderedHeap& heap, const Term& v, std::vector<std::string>& out) {
    NameSet scope;
    for (const auto& b : heap) {
      for (const auto& n : free_vars(b.value))
        if (!scope.count(n)) out.push_back("heap binding '" + b.name + "' mentions later '" + n + "'");
      scope.insert(b.name);
    }
    for (const auto& n : free_vars(v))
      if (!scope.count(n)) out.push_back("value mentions unbound '" + n + "'");
  }

  void audit_good(const NameSet& avoid, std::string_view where) {
    std::unordered_set<Name> seen;
    for (const auto& b : heap_) {
      if (!seen.insert(b.name).second)
        violation(std::string(where) + ": heap binds '" + b.name + "' twice");
      if (avoid.count(b.name))
        violation(std::string(where) + ": heap name '" + b.name + "' is in the avoid set");
    }
  }

  Term eval(const Term& t, const NameSet& avoid) {
    DepthGuard g(depth_);
    std::vector<Name> before;
    if (opts_.audit) {
      audit_good(avoid, "input");
      for (const auto& b : heap_) before.push_back(b.name);
    }
    Term v = dispatch(t, avoid);
    if (opts_.audit) {
      audit_good(avoid, "output");
      std::unordered_set<Name> after;
      for (const auto& b : heap_) after.insert(b.name);
      for (const auto& n : before)
        if (!after.count(n)) violation("heap lost binding '" + n + "'");
      if (!v.is(TermKind::Lam)) violation("result is not an abstraction");
    }
    return v;
  }

  Term dispatch(const Term& t, const NameSet& avoid) {
    switch (t.kind()) {
      case TermKind::Lam: {
        std::size_t e = enter("Lambda", heap_.size());
        leave(e, heap_.size());
        return t;
      }
      case TermKind::App: {
        std::size_t e = enter("Application", heap_.size());
        Term f = eval(t.fn(), avoid);
        if (!f.is(TermKind::Lam)) throw InvariantFault("function position did not yield an abstraction");
        Name x = supply_.fresh(f.name(), avoid);
        heap_.push_back({x, t.arg()});
        Term v = eval(subst_var(f.body(), x, f.name()), avoid);
        leave(e, heap_.size());
        return v;
      }
      case TermKind::Let: {
        std::size_t e = enter("Let", heap_.size());
        Name x = supply_.fresh(t.name(), avoid);
        heap_.push_back({x, t.bound()});
        Term v = eval(subst_var(t.body(), x, t.name()), avoid);
        leave(e, heap_.size());
        return v;
      }
      case TermKind::Var: {
        std::size_t e = enter("Variable", heap_.size());
        std::size_t k = heap_.size();
        while (k > 0 && heap_[k - 1].name != t.name()) --k;
        if (k == 0) throw InvariantFault("variable '" + t.name() + "' is not bound in the heap");
        --k;
        Term m = heap_[k].value;
        std::vector<Binding> suffix(heap_.begin() + static_cast<std::ptrdiff_t>(k) + 1, heap_.end());
        heap_.resize(k);
        NameSet inner = avoid;
        inner.insert(t.name());
        for (const auto& b : suffix) inner.insert(b.name);
        Term v = eval(m, inner);
        heap_.push_back({t.name(), v});
        heap_.insert(heap_.end(), suffix.begin(), suffix.end());
        leave(e, heap_.size());
        return v;
      }
      default: throw InvariantFault("construct outside the let calculus");
    }
  }

  OrderedHeap heap_;
};

// ---------------------------------------------------------------------------
// Cyclic

enum class Variant { Need, Stuck, Name, Value };

class CyclicEngine : EngineBase {
 public:
  CyclicEngine(const std::vector<Binding>& heap, Variant variant, const EvalOptions& opts)
      : EngineBase(opts), heap_(heap), variant_(variant) {}

  EvalOutcome run(const Term& t) {
    reserve_all(supply_, heap_.bindings(), t, {});
    EvalOutcome out = finish([&] { return eval(t); });
    if (out.ok()) {
      out.heap = heap_.bindings();
      if (opts_.audit) {
        NameSet dom;
        for (const auto& b : out.heap) dom.insert(b.name);
        auto check = [&](const Term& m, const std::string& where) {
          for (const auto& n : free_vars(m))
            if (!dom.count(n)) out.violations.push_back(where + " mentions unbound '" + n + "'");
        };
        for (const auto& b : out.heap) check(b.value, "heap binding '" + b.name + "'");
        check(out.value, "value");
      }
    }
    return out;
  }

 private:
  Term eval(const Term& t) {
    DepthGuard g(depth_);
    std::vector<Name> before;
    if (opts_.audit)
      for (const auto& b : heap_.bindings()) before.push_back(b.name);
    Term v = dispatch(t);
    if (opts_.audit) {
      for (const auto& n : before)
        if (!heap_.contains(n)) violation("heap lost binding '" + n + "'");
      if (!is_value(v, Mode::LetrecPairs)) violation("result is not a value");
    }
    return v;
  }

  std::size_t enter(std::string_view rule) { return EngineBase::enter(rule, heap_.size()); }
  void leave(std::size_t e) { EngineBase::leave(e, heap_.size()); }

  Term dispatch(const Term& t) {
    switch (t.kind()) {
      case TermKind::Lam:
      case TermKind::BlackHole: {
        std::size_t e = enter("Value");
        leave(e);
        return t;
      }
      case TermKind::App: return app(t);
      case TermKind::Letrec: {
        std::size_t e = enter("Letrec");
        std::unordered_map<Name, Name> renaming;
        for (const auto& b : t.bindings()) renaming.emplace(b.name, supply_.fresh(b.name));
        for (const auto& b : t.bindings())
          heap_.set(renaming.at(b.name), rename_free(b.value, renaming));
        Term v = eval(rename_free(t.body(), renaming));
        leave(e);
        return v;
      }
      case TermKind::Var: return var(t.name());
      case TermKind::Pair: {
        if (is_value(t, Mode::LetrecPairs)) {
          std::size_t e = enter("Value");
          leave(e);
          return t;
        }
        std::size_t e = enter("Pair");
        Term l = eval(t.left());
        Term r = eval(t.right());
        leave(e);
        return Term::pair(std::move(l), std::move(r));
      }
      case TermKind::Proj: {
        std::size_t e = enter("Projection");
        Term p = eval(t.target());
        if (!p.is(TermKind::Pair)) throw Fault{"projection of a non-pair value"};
        leave(e);
        return t.index() == 1 ? p.left() : p.right();
      }
      case TermKind::Let: throw InvariantFault("'let' outside the let calculus");
    }
    throw InvariantFault("unknown term");
  }

  Term app(const Term& t) {
    std::size_t e = enter("Application");
    Term f = eval(t.fn());
    if (f.is(TermKind::BlackHole)) {
      if (opts_.record_rules) events_[e].rule = "Error_beta";
      leave(e);
      return f;
    }
    if (f.is(TermKind::Pair)) throw Fault{"application of a pair"};
    Term arg = t.arg();
    if (variant_ == Variant::Value) {
      arg = eval(arg);
      if (arg.is(TermKind::BlackHole)) {
        if (opts_.record_rules) events_[e].rule = "Error_arg";
        leave(e);
        return arg;
      }
      if (arg.is(TermKind::Pair)) throw Fault{"pair argument in the by-value calculus"};
    }
    Name x = supply_.fresh(f.name());
    heap_.set(x, std::move(arg));
    Term v = eval(subst_var(f.body(), x, f.name()));
    leave(e);
    return v;
  }

  Term var(const Name& x) {
    std::size_t e = enter("Variable");
    Term v;
    switch (variant_) {
      case Variant::Need:
      case Variant::Value: {
        Term m = heap_.at(x);
        heap_.set(x, Term::black_hole());
        v = eval(m);
        heap_.set(x, v);
        break;
      }
      case Variant::Stuck: {
        if (!heap_.contains(x)) throw StuckOn{x};
        Term m = heap_.at(x);
        heap_.erase(x);
        v = eval(m);
        heap_.set(x, v);
        break;
      }
      case Variant::Name: {
        Term m = heap_.at(x);
        v = eval(m);
        break;
      }
    }
    leave(e);
    return v;
  }

  CyclicHeap heap_;
  Variant variant_;
};

}  // namespace

EvalOutcome eval_let(const OrderedHeap& heap, const Term& t, const NameSet& avoid,
                     const EvalOptions& opts) {
  return LetEngine(heap, opts).run(t, avoid);
}

EvalOutcome eval_letrec(const std::vector<Binding>& heap, const Term& t, const EvalOptions& opts) {
  return CyclicEngine(heap, Variant::Need, opts).run(t);
}

EvalOutcome eval_letrec_stuck(const std::vector<Binding>& heap, const Term& t,
                              const EvalOptions& opts) {
  return CyclicEngine(heap, Variant::Stuck, opts).run(t);
}

EvalOutcome eval_name(const std::vector<Binding>& heap, const Term& t, const EvalOptions& opts) {
  return CyclicEngine(heap, Variant::Name, opts).run(t);
}

EvalOutcome eval_value(const std::vector<Binding>& heap, const Term& t, const EvalOptions& opts) {
  return CyclicEngine(heap, Variant::Value, opts).run(t);
}

}  // namespace needsem
