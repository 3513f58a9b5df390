#include "needsem/instrumented.hpp"

#include <algorithm>
#include <unordered_set>

#include "needsem/textio.hpp"

namespace needsem {

Frame Frame::app_arg(Term m) {
  Frame f;
  f.kind = FrameKind::AppArg;
  f.term = std::move(m);
  return f;
}

Frame Frame::let_bind(Name x, Term m) {
  Frame f;
  f.kind = FrameKind::LetBind;
  f.name = std::move(x);
  f.term = std::move(m);
  return f;
}

const Term& FocusBody::get() const {
  if (!term) term = plug(comp(above), Term::var(demanded));
  return term;
}

namespace {

std::shared_ptr<const FocusBody> ready_body(Term body) {
  auto b = std::make_shared<FocusBody>();
  b->term = std::move(body);
  return b;
}

std::shared_ptr<FocusBody> lazy_body(StructuredHeap above, Name demanded) {
  auto b = std::make_shared<FocusBody>();
  b->above = std::move(above);
  b->demanded = std::move(demanded);
  return b;
}

bool same_body(const Frame& a, const Frame& b) {
  if (a.focus == b.focus) return true;
  return a.focus && b.focus && a.body() == b.body();
}

}  // namespace

Frame Frame::let_focus(Name x, Term body) {
  Frame f;
  f.kind = FrameKind::LetFocus;
  f.name = std::move(x);
  f.focus = ready_body(std::move(body));
  return f;
}

Frame Frame::let_focus_over(Name x, StructuredHeap above) {
  Frame f;
  f.kind = FrameKind::LetFocus;
  f.focus = lazy_body(std::move(above), x);
  f.name = std::move(x);
  return f;
}

Frame Frame::letrec_bind(std::vector<Binding> d) {
  Frame f;
  f.kind = FrameKind::LetrecBind;
  f.group = std::move(d);
  return f;
}

Frame Frame::letrec_focus(std::vector<Binding> group, std::vector<Name> chain, Term body) {
  Frame f;
  f.kind = FrameKind::LetrecFocus;
  f.group = std::move(group);
  f.chain = std::move(chain);
  f.focus = ready_body(std::move(body));
  return f;
}

Frame Frame::letrec_focus_over(std::vector<Binding> group, std::vector<Name> chain,
                               StructuredHeap above) {
  Frame f;
  f.kind = FrameKind::LetrecFocus;
  f.group = std::move(group);
  f.focus = lazy_body(std::move(above), chain.front());
  f.chain = std::move(chain);
  return f;
}

Frame Frame::pair_left(Term right) {
  Frame f;
  f.kind = FrameKind::PairL;
  f.term = std::move(right);
  return f;
}

Frame Frame::pair_right(Term left) {
  Frame f;
  f.kind = FrameKind::PairR;
  f.term = std::move(left);
  return f;
}

Frame Frame::proj(int index) {
  Frame f;
  f.kind = FrameKind::ProjF;
  f.index = index;
  return f;
}

Term Frame::slot(std::size_t i) const {
  const Binding& b = group[i];
  if (b.value) return b.value;
  for (std::size_t j = 0; j < links.size() && j < chain.size(); ++j)
    if (chain[j] == b.name && links[j]) return links[j]->get();
  return Term();
}

bool operator==(const Frame& a, const Frame& b) {
  if (!(a.kind == b.kind && a.term == b.term && same_body(a, b) && a.name == b.name &&
        a.chain == b.chain && a.index == b.index && a.group.size() == b.group.size()))
    return false;
  for (std::size_t i = 0; i < a.group.size(); ++i)
    if (a.group[i].name != b.group[i].name || !(a.slot(i) == b.slot(i))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string atomic(const Term& t) {
  std::string s = print(t);
  if (t.is(TermKind::Var) || t.is(TermKind::BlackHole) || t.is(TermKind::Pair) ||
      t.is(TermKind::Proj))
    return s;
  return "(" + s + ")";
}

std::string print_group(const Frame& f) {
  std::string s;
  for (std::size_t i = 0; i < f.group.size(); ++i) {
    if (i) s += ", ";
    Term v = f.slot(i);
    s += f.group[i].name + " = " + (v ? print(v) : "[]");
  }
  return s;
}

std::size_t group_index(const std::vector<Binding>& group, const Name& n) {
  for (std::size_t i = 0; i < group.size(); ++i)
    if (group[i].name == n) return i;
  return group.size();
}

}  // namespace

std::string print_frame(const Frame& f) {
  switch (f.kind) {
    case FrameKind::AppArg: return "[] " + atomic(f.term);
    case FrameKind::LetBind: return "let " + f.name + " = " + print(f.term) + " in []";
    case FrameKind::LetFocus: return "let " + f.name + " = [] in " + print(f.body());
    case FrameKind::LetrecBind: return "letrec " + print_group(f) + " in []";
    case FrameKind::LetrecFocus:
      return "letrec " + print_group(f) + " in " + print(f.body());
    case FrameKind::PairL: return "<[], " + print(f.term) + ">";
    case FrameKind::PairR: return "<" + print(f.term) + ", []>";
    case FrameKind::ProjF: return std::string("[].") + (f.index == 1 ? "1" : "2");
  }
  return "?";
}

std::string print_heap(const StructuredHeap& sigma) {
  if (sigma.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (i) s += " ; ";
    s += print_frame(sigma[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Translations

EvalContext comp(const StructuredHeap& sigma) {
  EvalContext ctx;
  for (const auto& f : sigma) {
    Layer l;
    switch (f.kind) {
      case FrameKind::AppArg: l.other = f.term; break;
      case FrameKind::LetBind:
        l.kind = LayerKind::LetBody;
        l.binder = f.name;
        l.other = f.term;
        break;
      case FrameKind::LetFocus:
        l.kind = LayerKind::LetBind;
        l.binder = f.name;
        l.other = f.body();
        break;
      case FrameKind::LetrecBind:
        l.kind = LayerKind::LetrecBody;
        l.bindings = f.group;
        break;
      case FrameKind::LetrecFocus: {
        l.kind = f.chain.size() == 1 ? LayerKind::LetrecBind : LayerKind::LetrecDep;
        l.bindings = f.group;
        for (std::size_t i = 0; i < f.group.size(); ++i)
          if (!l.bindings[i].value) l.bindings[i].value = f.slot(i);
        l.focus = group_index(f.group, f.chain.back());
        for (std::size_t i = 0; i + 1 < f.chain.size(); ++i)
          l.chain.push_back(ChainLink{group_index(f.group, f.chain[i]), {}});
        l.other = f.body();
        break;
      }
      case FrameKind::PairL:
        l.kind = LayerKind::PairL;
        l.other = f.term;
        break;
      case FrameKind::PairR:
        l.kind = LayerKind::PairR;
        l.other = f.term;
        break;
      case FrameKind::ProjF:
        l.kind = LayerKind::ProjHole;
        l.index = f.index;
        break;
    }
    ctx.layers.push_back(std::move(l));
  }
  return ctx;
}

std::vector<Binding> decomp(const StructuredHeap& sigma) {
  std::vector<Binding> out;
  for (const auto& f : sigma) {
    switch (f.kind) {
      case FrameKind::LetBind: out.push_back({f.name, f.term}); break;
      case FrameKind::LetrecBind:
        out.insert(out.end(), f.group.begin(), f.group.end());
        break;
      case FrameKind::LetrecFocus:
        for (const auto& b : f.group) {
          bool in_chain = std::find(f.chain.begin(), f.chain.end(), b.name) != f.chain.end();
          out.push_back({b.name, in_chain ? Term::black_hole() : b.value});
        }
        break;
      default: break;
    }
  }
  return out;
}

std::vector<Binding> flatten(const StructuredHeap& theta) {
  std::vector<Binding> out;
  for (const auto& f : theta) {
    if (f.kind != FrameKind::LetrecBind) throw InvariantFault("flatten of a non-letrec frame");
    out.insert(out.end(), f.group.begin(), f.group.end());
  }
  return out;
}

NameSet lbv(const StructuredHeap& sigma) {
  NameSet out;
  for (const auto& f : sigma) {
    if (f.kind == FrameKind::LetBind) out.insert(f.name);
    if (f.kind == FrameKind::LetrecBind || f.kind == FrameKind::LetrecFocus)
      for (const auto& b : f.group) out.insert(b.name);
  }
  return out;
}

bool well_formed(const StructuredHeap& sigma, const Term& t, bool cyclic, std::string* why) {
  NameSet scope;
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  auto within = [](const Term& m, const NameSet& names) {
    for (const auto& n : free_vars(m))
      if (!names.count(n)) return false;
    return true;
  };
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const Frame& f = sigma[i];
    const std::string at = "frame " + std::to_string(i) + ": ";
    switch (f.kind) {
      case FrameKind::AppArg:
      case FrameKind::PairL:
        if (!within(f.term, scope)) return fail(at + "free variable outside the heap");
        break;
      case FrameKind::PairR:
        if (!within(f.term, scope)) return fail(at + "free variable outside the heap");
        if (!is_value(f.term, Mode::LetrecPairs)) return fail(at + "left component is not a value");
        break;
      case FrameKind::ProjF: break;
      case FrameKind::LetBind:
        if (cyclic) return fail(at + "let frame in a cyclic heap");
        if (!within(f.term, scope)) return fail(at + "bound term mentions a later name");
        if (scope.count(f.name)) return fail(at + "'" + f.name + "' bound twice");
        scope.insert(f.name);
        break;
      case FrameKind::LetFocus: {
        if (cyclic) return fail(at + "let frame in a cyclic heap");
        if (scope.count(f.name)) return fail(at + "'" + f.name + "' bound twice");
        NameSet inner = scope;
        inner.insert(f.name);
        if (!within(f.body(), inner)) return fail(at + "body mentions an unbound name");
        break;
      }
      case FrameKind::LetrecBind:
      case FrameKind::LetrecFocus: {
        if (!cyclic) return fail(at + "letrec frame in an acyclic heap");
        NameSet inner = scope;
        for (const auto& b : f.group) {
          if (scope.count(b.name)) return fail(at + "'" + b.name + "' bound twice");
          if (!inner.insert(b.name).second) return fail(at + "'" + b.name + "' repeated in a group");
        }
        std::size_t holes = 0;
        std::size_t hole = f.group.size();
        for (std::size_t j = 0; j < f.group.size(); ++j) {
          Term v = f.slot(j);
          if (!v) {
            ++holes;
            hole = j;
            continue;
          }
          if (!within(v, inner)) return fail(at + "binding '" + f.group[j].name + "' mentions an unbound name");
        }
        if (f.kind == FrameKind::LetrecBind) {
          if (holes) return fail(at + "hole in a binding frame");
        } else {
          if (holes != 1 || f.chain.empty()) return fail(at + "focus frame needs exactly one hole");
          if (hole != group_index(f.group, f.chain.back())) return fail(at + "hole is not at the chain end");
          for (const auto& c : f.chain)
            if (group_index(f.group, c) == f.group.size()) return fail(at + "chain leaves the group");
          if (!within(f.body(), inner)) return fail(at + "body mentions an unbound name");
        }
        scope = std::move(inner);
        break;
      }
    }
  }
  if (!within(t, scope)) return fail("term mentions a name outside the heap");
  return true;
}

namespace {

NameSet group_names(const std::vector<Binding>& g) {
  NameSet s;
  for (const auto& b : g) s.insert(b.name);
  return s;
}

bool subset(const NameSet& a, const NameSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool frame_leq(const Frame& a, const Frame& b, bool cyclic) {
  if (a.kind != b.kind) return false;
  if (!cyclic) return a.kind == FrameKind::LetBind ? a.name == b.name : a == b;
  switch (a.kind) {
    case FrameKind::LetrecBind: return subset(group_names(a.group), group_names(b.group));
    case FrameKind::LetrecFocus: {
      if (a.chain != b.chain || !same_body(a, b)) return false;
      for (const auto& c : a.chain) {
        std::size_t i = group_index(a.group, c);
        std::size_t j = group_index(b.group, c);
        if (j == b.group.size()) return false;
        Term sa = a.slot(i), sb = b.slot(j);
        bool same = i < a.links.size() && j < b.links.size() && a.links[i] == b.links[j];
        if (!same && !(sa == sb)) return false;
      }
      return subset(group_names(a.group), group_names(b.group));
    }
    default: return a == b;
  }
}

}  // namespace

bool heap_leq(const StructuredHeap& a, const StructuredHeap& b, bool cyclic) {
  std::size_t j = 0;
  for (const auto& f : a) {
    while (j < b.size() && !frame_leq(f, b[j], cyclic)) {
      if (!b[j].is_bind()) return false;
      ++j;
    }
    if (j == b.size()) return false;
    ++j;
  }
  for (; j < b.size(); ++j)
    if (!b[j].is_bind()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Engines

namespace {

struct Exhausted {};
struct Fault {
  std::string detail;
};

class IEngine {
 public:
  IEngine(const StructuredHeap& sigma, bool cyclic, const IEvalOptions& opts)
      : sigma_(sigma), cyclic_(cyclic), opts_(opts) {}

  IEvalOutcome run(const Term& t) {
    for (const auto& f : sigma_) {
      supply_.reserve(f.name);
      if (f.term) supply_.reserve(f.term);
      if (f.focus) supply_.reserve(f.body());
      for (std::size_t i = 0; i < f.group.size(); ++i) {
        supply_.reserve(f.group[i].name);
        if (Term v = f.slot(i)) supply_.reserve(v);
      }
    }
    supply_.reserve(t);
    IEvalOutcome out;
    try {
      out.value = eval(t);
      out.status = EvalStatus::Value;
      out.sigma = sigma_;
    } catch (const Exhausted&) {
      out.status = EvalStatus::BudgetExhausted;
    } catch (const Fault& f) {
      out.status = EvalStatus::TypeFault;
      out.detail = f.detail;
    }
    out.nodes = nodes_;
    out.violations = std::move(violations_);
    out.events = std::move(events_);
    return out;
  }

 private:
  Term eval(const Term& t) {
    if (++nodes_ > opts_.budget) throw Exhausted{};
    ++depth_;
    StructuredHeap before;
    std::string why;
    if (opts_.audit) {
      before = sigma_;
      if (!well_formed(sigma_, t, cyclic_, &why)) violation("ill-formed input: " + why);
    }
    std::size_t ev = 0;
    if (opts_.record_rules) {
      events_.push_back({"", depth_, print_heap(sigma_), ""});
      ev = events_.size() - 1;
    }
    std::string rule;
    Term v = dispatch(t, rule);
    if (opts_.record_rules) {
      events_[ev].rule = rule;
      events_[ev].sigma_out = print_heap(sigma_);
    }
    if (opts_.audit) {
      if (!well_formed(sigma_, v, cyclic_, &why)) violation("ill-formed output: " + why);
      if (!heap_leq(before, sigma_, cyclic_)) violation("structured heap shrank under " + rule);
    }
    --depth_;
    return v;
  }

  void violation(std::string what) {
    if (violations_.size() < 16) violations_.push_back(std::move(what));
  }

  FrameKind bind_kind() const { return cyclic_ ? FrameKind::LetrecBind : FrameKind::LetBind; }

  // Index of the frame just below the maximal trailing run of bind frames.
  std::size_t under_theta(FrameKind expected, std::string_view rule) const {
    std::size_t j = sigma_.size();
    while (j > 0 && sigma_[j - 1].kind == bind_kind()) --j;
    if (j == 0 || sigma_[j - 1].kind != expected)
      throw InvariantFault(std::string(rule) + ": pushed frame not found below the bind frames");
    return j - 1;
  }

  Term dispatch(const Term& t, std::string& rule) {
    switch (t.kind()) {
      case TermKind::Lam:
      case TermKind::BlackHole:
        rule = cyclic_ ? "Val" : "Lam";
        return t;
      case TermKind::App: return app(t, rule);
      case TermKind::Let: {
        rule = "Letin";
        Name x = supply_.fresh(t.name());
        sigma_.push_back(Frame::let_bind(x, t.bound()));
        return eval(subst_var(t.body(), x, t.name()));
      }
      case TermKind::Letrec: {
        rule = "Letrecin";
        std::unordered_map<Name, Name> renaming;
        for (const auto& b : t.bindings()) renaming.emplace(b.name, supply_.fresh(b.name));
        std::vector<Binding> group;
        for (const auto& b : t.bindings())
          group.push_back({renaming.at(b.name), rename_free(b.value, renaming)});
        sigma_.push_back(Frame::letrec_bind(std::move(group)));
        return eval(rename_free(t.body(), renaming));
      }
      case TermKind::Var: return cyclic_ ? var_letrec(t.name(), rule) : var_let(t.name(), rule);
      case TermKind::Pair: {
        if (is_value(t, Mode::LetrecPairs)) {
          rule = "Val";
          return t;
        }
        rule = "Pair";
        sigma_.push_back(Frame::pair_left(t.right()));
        Term l = eval(t.left());
        std::size_t k = under_theta(FrameKind::PairL, rule);
        if (!sigma_[k].term.same_node(t.right())) throw InvariantFault("Pair: frame mismatch");
        sigma_.erase(sigma_.begin() + static_cast<std::ptrdiff_t>(k));
        sigma_.push_back(Frame::pair_right(l));
        Term r = eval(t.right());
        k = under_theta(FrameKind::PairR, rule);
        if (!sigma_[k].term.same_node(l)) throw InvariantFault("Pair: frame mismatch");
        sigma_.erase(sigma_.begin() + static_cast<std::ptrdiff_t>(k));
        return Term::pair(std::move(l), std::move(r));
      }
      case TermKind::Proj: {
        rule = "Projection";
        sigma_.push_back(Frame::proj(t.index()));
        Term p = eval(t.target());
        std::size_t k = under_theta(FrameKind::ProjF, rule);
        sigma_.erase(sigma_.begin() + static_cast<std::ptrdiff_t>(k));
        if (!p.is(TermKind::Pair)) throw Fault{"projection of a non-pair value"};
        return t.index() == 1 ? p.left() : p.right();
      }
    }
    throw InvariantFault("unknown term");
  }

  Term app(const Term& t, std::string& rule) {
    rule = "App";
    sigma_.push_back(Frame::app_arg(t.arg()));
    Term f = eval(t.fn());
    std::size_t k = under_theta(FrameKind::AppArg, rule);
    if (!sigma_[k].term.same_node(t.arg())) throw InvariantFault("App: frame mismatch");
    sigma_.erase(sigma_.begin() + static_cast<std::ptrdiff_t>(k));
    if (f.is(TermKind::BlackHole)) {
      rule = "Err_beta";
      return f;
    }
    if (!f.is(TermKind::Lam)) throw Fault{"application of a pair"};
    Name x = supply_.fresh(f.name());
    if (cyclic_) {
      sigma_.push_back(Frame::letrec_bind({{x, t.arg()}}));
    } else {
      sigma_.push_back(Frame::let_bind(x, t.arg()));
    }
    return eval(subst_var(f.body(), x, f.name()));
  }

  StructuredHeap take_above(std::size_t k) {
    StructuredHeap above(std::make_move_iterator(sigma_.begin() + static_cast<std::ptrdiff_t>(k) + 1),
                         std::make_move_iterator(sigma_.end()));
    sigma_.resize(k);
    return above;
  }

  // Puts back the frames saved in a focus body, moving them when no
  // snapshot shares the body.
  void restore(std::shared_ptr<const FocusBody> body) {
    const StructuredHeap& above = body->above;
    if (body.use_count() == 1) {
      auto& owned = const_cast<StructuredHeap&>(above);
      sigma_.insert(sigma_.end(), std::make_move_iterator(owned.begin()),
                    std::make_move_iterator(owned.end()));
    } else {
      sigma_.insert(sigma_.end(), above.begin(), above.end());
    }
  }

  Term var_let(const Name& x, std::string& rule) {
    rule = "Var";
    std::size_t k = sigma_.size();
    while (k > 0 && !(sigma_[k - 1].kind == FrameKind::LetBind && sigma_[k - 1].name == x)) --k;
    if (k == 0) throw InvariantFault("Var: '" + x + "' is not let-bound in the structured heap");
    --k;
    Term m = sigma_[k].term;
    sigma_.push_back(Frame::let_focus_over(x, take_above(k)));
    auto body = sigma_.back().focus;
    Term v = eval(m);
    std::size_t k2 = under_theta(FrameKind::LetFocus, rule);
    if (sigma_[k2].name != x || sigma_[k2].focus != body)
      throw InvariantFault("Var: focus frame mismatch");
    sigma_.erase(sigma_.begin() + static_cast<std::ptrdiff_t>(k2));
    sigma_.push_back(Frame::let_bind(x, v));
    restore(std::move(body));
    return v;
  }

  // Places flatten(Θ) immediately before x and binds x to v.
  static std::vector<Binding> splice(const std::vector<Binding>& group, const Name& x,
                                     const std::vector<Binding>& theta, const Term& v) {
    std::vector<Binding> out;
    out.reserve(group.size() + theta.size());
    for (const auto& b : group) {
      if (b.name == x) {
        out.insert(out.end(), theta.begin(), theta.end());
        out.push_back({x, v});
      } else {
        out.push_back(b);
      }
    }
    return out;
  }

  Term var_letrec(const Name& x, std::string& rule) {
    std::size_t k = sigma_.size();
    std::size_t idx = 0;
    while (k > 0) {
      const Frame& f = sigma_[k - 1];
      if (f.kind == FrameKind::LetrecBind || f.kind == FrameKind::LetrecFocus) {
        idx = group_index(f.group, x);
        if (idx < f.group.size()) break;
      }
      --k;
    }
    if (k == 0) throw InvariantFault("Var: '" + x + "' is not letrec-bound in the structured heap");
    --k;
    if (sigma_[k].kind == FrameKind::LetrecFocus) {
      const auto& chain = sigma_[k].chain;
      if (std::find(chain.begin(), chain.end(), x) != chain.end()) {
        rule = "Err_var";
        return Term::black_hole();
      }
      return var_env(x, k, idx, rule);
    }
    rule = "Var";
    std::vector<Binding> group = sigma_[k].group;
    Term m = group[idx].value;
    group[idx].value = Term();
    const std::vector<Name> chain{x};
    sigma_.push_back(Frame::letrec_focus_over(std::move(group), chain, take_above(k)));
    auto body = sigma_.back().focus;
    Term v = eval(m);
    std::size_t k2 = under_theta(FrameKind::LetrecFocus, rule);
    if (sigma_[k2].chain != chain || sigma_[k2].focus != body)
      throw InvariantFault("Var: focus frame mismatch");
    StructuredHeap theta(sigma_.begin() + static_cast<std::ptrdiff_t>(k2) + 1, sigma_.end());
    std::vector<Binding> merged = splice(sigma_[k2].group, x, flatten(theta), v);
    sigma_.resize(k2);
    sigma_.push_back(Frame::letrec_bind(std::move(merged)));
    restore(std::move(body));
    return v;
  }

  Term var_env(const Name& x, std::size_t k, std::size_t idx, std::string& rule) {
    rule = "Var_env";
    Frame focus = sigma_[k];
    const Name hole = focus.chain.back();
    Term m = focus.group[idx].value;
    focus.links.resize(focus.chain.size() - 1);
    focus.links.push_back(lazy_body(take_above(k), x));
    auto filled = focus.links.back();
    focus.group[idx].value = Term();
    focus.chain.push_back(x);
    const std::vector<Name> chain = focus.chain;
    const auto body = focus.focus;
    sigma_.resize(k);
    sigma_.push_back(std::move(focus));
    Term v = eval(m);
    std::size_t k2 = under_theta(FrameKind::LetrecFocus, rule);
    Frame& back = sigma_[k2];
    if (back.chain != chain || back.focus != body || back.links.size() + 1 != chain.size() ||
        back.links.back() != filled)
      throw InvariantFault("Var_env: focus frame mismatch");
    StructuredHeap theta(sigma_.begin() + static_cast<std::ptrdiff_t>(k2) + 1, sigma_.end());
    std::vector<Binding> merged = splice(back.group, x, flatten(theta), v);
    merged[group_index(merged, hole)].value = Term();
    std::vector<Name> outer = chain;
    outer.pop_back();
    Frame restored = std::move(back);
    restored.group = std::move(merged);
    restored.chain = std::move(outer);
    restored.links.pop_back();
    sigma_.resize(k2);
    sigma_.push_back(std::move(restored));
    restore(std::move(filled));
    return v;
  }

  StructuredHeap sigma_;
  bool cyclic_;
  const IEvalOptions& opts_;
  NameSupply supply_;
  std::size_t nodes_ = 0;
  std::size_t depth_ = 0;
  std::vector<std::string> violations_;
  std::vector<IEvalEvent> events_;
};

}  // namespace

IEvalOutcome ieval_let(const StructuredHeap& sigma, const Term& t, const IEvalOptions& opts) {
  return IEngine(sigma, false, opts).run(t);
}

IEvalOutcome ieval_letrec(const StructuredHeap& sigma, const Term& t, const IEvalOptions& opts) {
  return IEngine(sigma, true, opts).run(t);
}

}  // namespace needsem
