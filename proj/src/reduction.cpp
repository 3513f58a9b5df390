#include "needsem/reduction.hpp"

#include <algorithm>
#include <array>

namespace needsem {

namespace {
constexpr std::array<std::pair<Rule, std::string_view>, 16> kRuleNames{{
    {Rule::BetaNeed, "beta_need"},
    {Rule::Lift, "lift"},
    {Rule::Deref, "deref"},
    {Rule::Assoc, "assoc"},
    {Rule::DerefEnv, "deref_env"},
    {Rule::AssocEnv, "assoc_env"},
    {Rule::Error, "error"},
    {Rule::ErrorEnv, "error_env"},
    {Rule::ErrorBeta, "error_beta"},
    {Rule::Prj, "prj"},
    {Rule::LiftPi, "lift_pi"},
    {Rule::LiftPair1, "lift_pair1"},
    {Rule::LiftPair2, "lift_pair2"},
    {Rule::BetaValue, "beta_value"},
    {Rule::LiftArg, "lift_arg"},
    {Rule::ErrorArg, "error_arg"},
}};
}  // namespace

std::string_view rule_name(Rule rule) {
  for (const auto& [r, n] : kRuleNames)
    if (r == rule) return n;
  return "?";
}

std::optional<Rule> rule_from_name(std::string_view name) {
  for (const auto& [r, n] : kRuleNames)
    if (n == name) return r;
  return std::nullopt;
}

std::string_view to_string(FaultKind k) {
  switch (k) {
    case FaultKind::None: return "none";
    case FaultKind::FreeVariable: return "free-variable";
    case FaultKind::ProjectNonPair: return "project-non-pair";
    case FaultKind::ApplyPair: return "apply-pair";
    case FaultKind::Malformed: return "malformed";
  }
  return "?";
}

std::string_view to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Answer: return "answer";
    case OutcomeKind::FuelExhausted: return "fuel_exhausted";
    case OutcomeKind::Stuck: return "stuck";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Contexts

namespace {

Term plug_layer(const Layer& layer, Term t) {
  switch (layer.kind) {
    case LayerKind::AppL: return Term::app(std::move(t), layer.other);
    case LayerKind::AppR: return Term::app(layer.other, std::move(t));
    case LayerKind::LetBody: return Term::let(layer.binder, layer.other, std::move(t));
    case LayerKind::LetBind: return Term::let(layer.binder, std::move(t), layer.other);
    case LayerKind::LetrecBody: return Term::letrec(layer.bindings, std::move(t));
    case LayerKind::LetrecBind:
    case LayerKind::LetrecDep: {
      auto bs = layer.bindings;
      bs[layer.focus].value = std::move(t);
      return Term::letrec(std::move(bs), layer.other);
    }
    case LayerKind::PairL: return Term::pair(std::move(t), layer.other);
    case LayerKind::PairR: return Term::pair(layer.other, std::move(t));
    case LayerKind::ProjHole: return Term::proj(std::move(t), layer.index);
  }
  throw InvariantFault("unknown context layer");
}

}  // namespace

Term plug(const EvalContext& ctx, const Term& t) {
  Term cur = t;
  for (auto it = ctx.layers.rbegin(); it != ctx.layers.rend(); ++it) cur = plug_layer(*it, cur);
  return cur;
}

std::vector<std::size_t> hole_path(const EvalContext& ctx) {
  std::vector<std::size_t> path;
  path.reserve(ctx.layers.size());
  for (const auto& l : ctx.layers) {
    switch (l.kind) {
      case LayerKind::AppL:
      case LayerKind::LetBind:
      case LayerKind::PairL:
      case LayerKind::ProjHole: path.push_back(0); break;
      case LayerKind::AppR:
      case LayerKind::LetBody:
      case LayerKind::PairR: path.push_back(1); break;
      case LayerKind::LetrecBody: path.push_back(l.bindings.size()); break;
      case LayerKind::LetrecBind:
      case LayerKind::LetrecDep: path.push_back(l.focus); break;
    }
  }
  return path;
}

// ---------------------------------------------------------------------------
// Decomposition

namespace {

// Result of analysing a subterm. Layers are collected innermost first and
// reversed once the context is complete.
struct Analysis {
  enum class Kind { Answer, Demand, Found, Stuck } kind = Kind::Answer;
  Name var;
  std::vector<Layer> rev;
  Redex redex;
  FaultKind fault = FaultKind::None;
  std::string detail;
};

EvalContext finish(std::vector<Layer> rev) {
  std::reverse(rev.begin(), rev.end());
  return EvalContext{std::move(rev)};
}

Analysis found(Rule rule, const Term& t) {
  Analysis a;
  a.kind = Analysis::Kind::Found;
  a.redex.rule = rule;
  a.redex.term = t;
  return a;
}

Analysis stuck(FaultKind fault, std::string detail) {
  Analysis a;
  a.kind = Analysis::Kind::Stuck;
  a.fault = fault;
  a.detail = std::move(detail);
  return a;
}

bool is_spine(const Term& t) { return t.is(TermKind::Let) || t.is(TermKind::Letrec); }

class Decomposer {
 public:
  explicit Decomposer(Mode mode) : mode_(mode) {}

  Analysis run(const Term& t) {
    switch (t.kind()) {
      case TermKind::Var: {
        Analysis a;
        a.kind = Analysis::Kind::Demand;
        a.var = t.name();
        return a;
      }
      case TermKind::Lam:
      case TermKind::BlackHole: return {};
      case TermKind::App: return app(t);
      case TermKind::Let: return let(t);
      case TermKind::Letrec: return letrec(t);
      case TermKind::Pair: return pair(t);
      case TermKind::Proj: return proj(t);
    }
    return stuck(FaultKind::Malformed, "unknown term");
  }

 private:
  static Analysis wrap(Analysis a, Layer layer) {
    a.rev.push_back(std::move(layer));
    return a;
  }

  Analysis app(const Term& t) {
    Analysis f = run(t.fn());
    if (f.kind != Analysis::Kind::Answer) {
      Layer l;
      l.kind = LayerKind::AppL;
      l.other = t.arg();
      return wrap(std::move(f), std::move(l));
    }
    const Term& fn = t.fn();
    if (is_spine(fn)) return found(Rule::Lift, t);
    if (fn.is(TermKind::BlackHole)) return found(Rule::ErrorBeta, t);
    if (fn.is(TermKind::Pair)) return stuck(FaultKind::ApplyPair, "application of a pair");
    if (mode_ != Mode::Value) return found(Rule::BetaNeed, t);
    Analysis a = run(t.arg());
    if (a.kind != Analysis::Kind::Answer) {
      Layer l;
      l.kind = LayerKind::AppR;
      l.other = fn;
      return wrap(std::move(a), std::move(l));
    }
    const Term& arg = t.arg();
    if (arg.is(TermKind::Lam)) return found(Rule::BetaValue, t);
    if (arg.is(TermKind::BlackHole)) return found(Rule::ErrorArg, t);
    if (is_spine(arg)) return found(Rule::LiftArg, t);
    return stuck(FaultKind::Malformed, "argument is not a by-value answer");
  }

  Analysis let(const Term& t) {
    Analysis b = run(t.body());
    if (b.kind == Analysis::Kind::Answer) return b;
    if (b.kind != Analysis::Kind::Demand || b.var != t.name()) {
      Layer l;
      l.kind = LayerKind::LetBody;
      l.binder = t.name();
      l.other = t.bound();
      return wrap(std::move(b), std::move(l));
    }
    EvalContext body_ctx = finish(std::move(b.rev));
    const Term& m = t.bound();
    if (is_value(m, mode_)) {
      Analysis a = found(Rule::Deref, t);
      a.redex.body_ctx = std::move(body_ctx);
      return a;
    }
    if (is_answer(m, mode_)) {
      Analysis a = found(Rule::Assoc, t);
      a.redex.body_ctx = std::move(body_ctx);
      return a;
    }
    Analysis inner = run(m);
    if (inner.kind == Analysis::Kind::Demand && inner.var == t.name())
      return stuck(FaultKind::Malformed, "let-bound variable '" + t.name() + "' used recursively");
    Layer l;
      l.kind = LayerKind::LetBind;
    l.binder = t.name();
    l.other = t.body();
    l.body_ctx = std::move(body_ctx);
    return wrap(std::move(inner), std::move(l));
  }

  Analysis letrec(const Term& t) {
    const auto& ds = t.bindings();
    Analysis b = run(t.body());
    if (b.kind == Analysis::Kind::Answer) return b;
    std::optional<std::size_t> start;
    if (b.kind == Analysis::Kind::Demand) start = index_of(ds, b.var);
    if (!start) {
      Layer l;
      l.kind = LayerKind::LetrecBody;
      l.bindings = ds;
      return wrap(std::move(b), std::move(l));
    }
    EvalContext body_ctx = finish(std::move(b.rev));
    std::vector<ChainLink> links;
    std::size_t cur = *start;
    for (;;) {
      const Term& m = ds[cur].value;
      if (is_value(m, mode_) || is_answer(m, mode_)) {
        bool value = is_value(m, mode_);
        Rule rule = links.empty() ? (value ? Rule::Deref : Rule::Assoc)
                                  : (value ? Rule::DerefEnv : Rule::AssocEnv);
        Analysis a = found(rule, t);
        a.redex.body_ctx = std::move(body_ctx);
        a.redex.chain = std::move(links);
        a.redex.target = cur;
        return a;
      }
      Analysis inner = run(m);
      std::optional<std::size_t> next;
      if (inner.kind == Analysis::Kind::Demand) next = index_of(ds, inner.var);
      if (!next) {
        Layer l;
        l.kind = links.empty() ? LayerKind::LetrecBind : LayerKind::LetrecDep;
        l.bindings = ds;
        l.focus = cur;
        l.chain = links;
        l.other = t.body();
        l.body_ctx = std::move(body_ctx);
        return wrap(std::move(inner), std::move(l));
      }
      links.push_back(ChainLink{cur, finish(std::move(inner.rev))});
      auto seen = std::find_if(links.begin(), links.end(),
                               [&](const ChainLink& k) { return k.index == *next; });
      if (seen != links.end()) {
        Analysis a = found(seen == links.begin() ? Rule::Error : Rule::ErrorEnv, t);
        a.redex.body_ctx = std::move(body_ctx);
        a.redex.chain = std::move(links);
        a.redex.target = *next;
        return a;
      }
      cur = *next;
    }
  }

  Analysis pair(const Term& t) {
    Analysis l = run(t.left());
    if (l.kind != Analysis::Kind::Answer) {
      Layer layer;
      layer.kind = LayerKind::PairL;
      layer.other = t.right();
      return wrap(std::move(l), std::move(layer));
    }
    if (!is_value(t.left(), mode_)) return found(Rule::LiftPair1, t);
    Analysis r = run(t.right());
    if (r.kind != Analysis::Kind::Answer) {
      Layer layer;
      layer.kind = LayerKind::PairR;
      layer.other = t.left();
      return wrap(std::move(r), std::move(layer));
    }
    if (!is_value(t.right(), mode_)) return found(Rule::LiftPair2, t);
    return {};
  }

  Analysis proj(const Term& t) {
    Analysis a = run(t.target());
    if (a.kind != Analysis::Kind::Answer) {
      Layer layer;
      layer.kind = LayerKind::ProjHole;
      layer.index = t.index();
      return wrap(std::move(a), std::move(layer));
    }
    const Term& m = t.target();
    if (is_spine(m)) return found(Rule::LiftPi, t);
    if (m.is(TermKind::Pair)) return found(Rule::Prj, t);
    return stuck(FaultKind::ProjectNonPair, "projection of a non-pair value");
  }

  static std::optional<std::size_t> index_of(const std::vector<Binding>& ds, const Name& n) {
    for (std::size_t i = 0; i < ds.size(); ++i)
      if (ds[i].name == n) return i;
    return std::nullopt;
  }

  Mode mode_;
};

}  // namespace

Decomposition decompose(const Term& program, Mode mode) {
  Analysis a = Decomposer(mode).run(program);
  Decomposition d;
  switch (a.kind) {
    case Analysis::Kind::Answer: d.kind = Decomposition::Kind::Answer; return d;
    case Analysis::Kind::Demand:
      d.kind = Decomposition::Kind::Stuck;
      d.fault = FaultKind::FreeVariable;
      d.detail = "free variable '" + a.var + "'";
      d.ctx = finish(std::move(a.rev));
      return d;
    case Analysis::Kind::Stuck:
      d.kind = Decomposition::Kind::Stuck;
      d.fault = a.fault;
      d.detail = std::move(a.detail);
      d.ctx = finish(std::move(a.rev));
      return d;
    case Analysis::Kind::Found:
      d.kind = Decomposition::Kind::Redex;
      d.ctx = finish(std::move(a.rev));
      d.redex = std::move(a.redex);
      return d;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Contraction

namespace {

Term copy_value(const Term& v, NameSupply& supply, const ReductionOptions& opts) {
  switch (opts.mutation) {
    case Mutation::None: return freshen_binders(v, supply);
    case Mutation::DerefNoCopy: return v;
    case Mutation::DerefWrongValue: {
      Name z = supply.fresh("z");
      return Term::lam(z, Term::var(z));
    }
  }
  return v;
}

Term wrap_spine_body(const Term& spine, Term new_body) {
  if (spine.is(TermKind::Let)) return Term::let(spine.name(), spine.bound(), std::move(new_body));
  return Term::letrec(spine.bindings(), std::move(new_body));
}

}  // namespace

Term contract(const Redex& r, Mode mode, NameSupply& supply, const ReductionOptions& opts) {
  const Term& t = r.term;
  switch (r.rule) {
    case Rule::BetaNeed: {
      const Term& fn = t.fn();
      if (mode == Mode::Let) return Term::let(fn.name(), t.arg(), fn.body());
      return Term::letrec({{fn.name(), t.arg()}}, fn.body());
    }
    case Rule::BetaValue: return Term::letrec({{t.fn().name(), t.arg()}}, t.fn().body());
    case Rule::Lift: {
      const Term& spine = t.fn();
      return wrap_spine_body(spine, Term::app(spine.body(), t.arg()));
    }
    case Rule::LiftArg: {
      const Term& spine = t.arg();
      return wrap_spine_body(spine, Term::app(t.fn(), spine.body()));
    }
    case Rule::ErrorBeta:
    case Rule::ErrorArg: return Term::black_hole();
    case Rule::Prj: return t.index() == 1 ? t.target().left() : t.target().right();
    case Rule::LiftPi: {
      const Term& spine = t.target();
      return wrap_spine_body(spine, Term::proj(spine.body(), t.index()));
    }
    case Rule::LiftPair1: {
      const Term& spine = t.left();
      return wrap_spine_body(spine, Term::pair(spine.body(), t.right()));
    }
    case Rule::LiftPair2: {
      const Term& spine = t.right();
      return wrap_spine_body(spine, Term::pair(t.left(), spine.body()));
    }
    case Rule::Deref: {
      if (t.is(TermKind::Let))
        return Term::let(t.name(), t.bound(),
                         plug(r.body_ctx, copy_value(t.bound(), supply, opts)));
      const Term& v = t.bindings()[r.target].value;
      return Term::letrec(t.bindings(), plug(r.body_ctx, copy_value(v, supply, opts)));
    }
    case Rule::DerefEnv: {
      auto bs = t.bindings();
      const ChainLink& last = r.chain.back();
      bs[last.index].value = plug(last.ctx, copy_value(bs[r.target].value, supply, opts));
      return Term::letrec(std::move(bs), t.body());
    }
    case Rule::Assoc:
    case Rule::AssocEnv: {
      if (t.is(TermKind::Let)) {
        const Term& inner = t.bound();
        return Term::let(inner.name(), inner.bound(),
                         Term::let(t.name(), inner.body(), t.body()));
      }
      const auto& bs = t.bindings();
      const Term& inner = bs[r.target].value;
      std::vector<Binding> out;
      out.reserve(bs.size() + inner.bindings().size());
      for (std::size_t i = 0; i < bs.size(); ++i) {
        if (i == r.target) {
          for (const auto& b : inner.bindings()) out.push_back(b);
          out.push_back({bs[i].name, inner.body()});
        } else {
          out.push_back(bs[i]);
        }
      }
      return Term::letrec(std::move(out), t.body());
    }
    case Rule::Error:
    case Rule::ErrorEnv: {
      auto bs = t.bindings();
      const ChainLink& last = r.chain.back();
      bs[last.index].value = plug(last.ctx, Term::black_hole());
      return Term::letrec(std::move(bs), t.body());
    }
  }
  throw InvariantFault("unknown rule");
}

std::optional<StepResult> step(const Term& program, Mode mode, NameSupply& supply,
                               const ReductionOptions& opts, Decomposition* stuck_out) {
  Decomposition d = decompose(program, mode);
  if (d.kind == Decomposition::Kind::Answer) return std::nullopt;
  if (d.kind == Decomposition::Kind::Stuck) {
    if (stuck_out) *stuck_out = std::move(d);
    return std::nullopt;
  }
  Term next = plug(d.ctx, contract(*d.redex, mode, supply, opts));
  return StepResult{d.redex->rule, std::move(next)};
}

ReduceResult reduce(const Term& program, Mode mode, const ReduceOptions& opts) {
  NameSupply supply;
  Term cur = canonicalize(program, supply);
  ReduceResult result;
  if (opts.record_trace) result.trace.initial = cur;
  for (;;) {
    Decomposition d = decompose(cur, mode);
    if (d.kind == Decomposition::Kind::Answer) {
      result.outcome = OutcomeKind::Answer;
      break;
    }
    if (d.kind == Decomposition::Kind::Stuck) {
      result.outcome = OutcomeKind::Stuck;
      result.fault = d.fault;
      result.detail = d.detail;
      break;
    }
    if (result.steps >= opts.max_steps) {
      result.outcome = OutcomeKind::FuelExhausted;
      break;
    }
    Term next = plug(d.ctx, contract(*d.redex, mode, supply, opts.reduction));
    if (opts.observer) opts.observer(cur, d, next);
    if (opts.record_trace) result.trace.steps.push_back({d.redex->rule, next});
    ++result.steps;
    cur = std::move(next);
  }
  result.term = cur;
  return result;
}

// ---------------------------------------------------------------------------
// Keys

bool operator<(const DecompositionKey& a, const DecompositionKey& b) {
  if (a.path != b.path) return a.path < b.path;
  if (a.rule != b.rule) return a.rule < b.rule;
  return a.chain < b.chain;
}

DecompositionKey key_of(const Decomposition& d) {
  DecompositionKey k;
  k.path = hole_path(d.ctx);
  k.rule = d.redex->rule;
  const Redex& r = *d.redex;
  switch (r.rule) {
    case Rule::Deref:
    case Rule::Assoc:
    case Rule::DerefEnv:
    case Rule::AssocEnv:
      if (r.term.is(TermKind::Let)) {
        k.chain.push_back(r.term.name());
      } else {
        for (const auto& link : r.chain) k.chain.push_back(r.term.bindings()[link.index].name);
        k.chain.push_back(r.term.bindings()[r.target].name);
      }
      break;
    case Rule::Error:
    case Rule::ErrorEnv:
      for (const auto& link : r.chain) k.chain.push_back(r.term.bindings()[link.index].name);
      break;
    default: break;
  }
  return k;
}

std::string to_string(const DecompositionKey& k) {
  std::string s = std::string(rule_name(k.rule)) + " @[";
  for (std::size_t i = 0; i < k.path.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(k.path[i]);
  }
  s += "]";
  if (!k.chain.empty()) {
    s += " via";
    for (const auto& n : k.chain) s += " " + n;
  }
  return s;
}

}  // namespace needsem
