// Brute-force decomposition by enumeration of context positions, written
// directly from the context grammars and rule patterns.

#include <algorithm>

#include "needsem/reduction.hpp"

namespace needsem {

using Path = std::vector<std::size_t>;

Term subterm_at(const Term& t, const Path& path) {
  Term cur = t;
  for (std::size_t step : path) {
    switch (cur.kind()) {
      case TermKind::Lam: cur = cur.body(); break;
      case TermKind::App: cur = step == 0 ? cur.fn() : cur.arg(); break;
      case TermKind::Let: cur = step == 0 ? cur.bound() : cur.body(); break;
      case TermKind::Letrec:
        cur = step < cur.bindings().size() ? cur.bindings()[step].value : cur.body();
        break;
      case TermKind::Pair: cur = step == 0 ? cur.left() : cur.right(); break;
      case TermKind::Proj: cur = cur.target(); break;
      default: throw std::out_of_range("path leaves the term");
    }
  }
  return cur;
}

namespace {

bool spine_answer(const Term& t, Mode mode) {
  return (t.is(TermKind::Let) || t.is(TermKind::Letrec)) && is_answer(t, mode);
}

bool has(const std::vector<Binding>& ds, const Name& n) {
  return std::any_of(ds.begin(), ds.end(), [&](const Binding& b) { return b.name == n; });
}

std::size_t find(const std::vector<Binding>& ds, const Name& n) {
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (ds[i].name == n) return i;
  return ds.size();
}

class Oracle {
 public:
  explicit Oracle(Mode mode) : mode_(mode) {}

  // Names of variables sitting at some hole position of t.
  NameSet demanded(const Term& t) const {
    NameSet out;
    switch (t.kind()) {
      case TermKind::Var: out.insert(t.name()); break;
      case TermKind::Lam:
      case TermKind::BlackHole: break;
      case TermKind::App:
        out = demanded(t.fn());
        if (arg_is_hole(t)) merge(out, demanded(t.arg()));
        break;
      case TermKind::Let:
        out = demanded(t.body());
        if (out.count(t.name())) merge(out, demanded(t.bound()));
        break;
      case TermKind::Letrec:
        out = demanded(t.body());
        for (std::size_t i : reachable(t, out)) merge(out, demanded(t.bindings()[i].value));
        break;
      case TermKind::Pair:
        out = demanded(t.left());
        if (is_value(t.left(), mode_)) merge(out, demanded(t.right()));
        break;
      case TermKind::Proj: out = demanded(t.target()); break;
    }
    return out;
  }

  // Bindings of a letrec reachable from its body through dependencies.
  std::vector<std::size_t> reachable(const Term& t, const NameSet& from_body) const {
    const auto& ds = t.bindings();
    std::vector<bool> seen(ds.size(), false);
    std::vector<std::size_t> work;
    auto visit = [&](const NameSet& names) {
      for (const auto& n : names) {
        std::size_t i = find(ds, n);
        if (i < ds.size() && !seen[i]) {
          seen[i] = true;
          work.push_back(i);
        }
      }
    };
    visit(from_body);
    for (std::size_t k = 0; k < work.size(); ++k) visit(demanded(ds[work[k]].value));
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < ds.size(); ++i)
      if (seen[i]) out.push_back(i);
    return out;
  }

  void positions(const Term& t, Path& prefix, std::vector<Path>& out) const {
    out.push_back(prefix);
    auto descend = [&](const Term& child, std::size_t step) {
      prefix.push_back(step);
      positions(child, prefix, out);
      prefix.pop_back();
    };
    switch (t.kind()) {
      case TermKind::App:
        descend(t.fn(), 0);
        if (arg_is_hole(t)) descend(t.arg(), 1);
        break;
      case TermKind::Let:
        descend(t.body(), 1);
        if (demanded(t.body()).count(t.name())) descend(t.bound(), 0);
        break;
      case TermKind::Letrec:
        descend(t.body(), t.bindings().size());
        for (std::size_t i : reachable(t, demanded(t.body()))) descend(t.bindings()[i].value, i);
        break;
      case TermKind::Pair:
        descend(t.left(), 0);
        if (is_value(t.left(), mode_)) descend(t.right(), 1);
        break;
      case TermKind::Proj: descend(t.target(), 0); break;
      default: break;
    }
  }

  // All rule instances whose left-hand side is `t` itself.
  void rules_at(const Term& t, const Path& path, std::vector<DecompositionKey>& out) const {
    auto emit = [&](Rule r, std::vector<Name> chain = {}) {
      out.push_back(DecompositionKey{path, r, std::move(chain)});
    };
    switch (t.kind()) {
      case TermKind::App: {
        const Term& fn = t.fn();
        const Term& arg = t.arg();
        if (fn.is(TermKind::Lam)) {
          if (mode_ != Mode::Value) {
            emit(Rule::BetaNeed);
          } else if (arg.is(TermKind::Lam)) {
            emit(Rule::BetaValue);
          } else if (arg.is(TermKind::BlackHole)) {
            emit(Rule::ErrorArg);
          } else if (spine_answer(arg, mode_)) {
            emit(Rule::LiftArg);
          }
        }
        if (spine_answer(fn, mode_)) emit(Rule::Lift);
        if (fn.is(TermKind::BlackHole)) emit(Rule::ErrorBeta);
        break;
      }
      case TermKind::Let: {
        if (!demanded(t.body()).count(t.name())) break;
        if (is_value(t.bound(), mode_)) emit(Rule::Deref, {t.name()});
        if (t.bound().is(TermKind::Let) && is_answer(t.bound(), mode_))
          emit(Rule::Assoc, {t.name()});
        break;
      }
      case TermKind::Letrec: {
        const auto& ds = t.bindings();
        for (const auto& n : demanded(t.body())) {
          if (!has(ds, n)) continue;
          std::vector<std::size_t> chain{find(ds, n)};
          follow(t, chain, emit);
        }
        break;
      }
      case TermKind::Pair:
        if (spine_answer(t.left(), mode_)) emit(Rule::LiftPair1);
        if (is_value(t.left(), mode_) && spine_answer(t.right(), mode_)) emit(Rule::LiftPair2);
        break;
      case TermKind::Proj:
        if (t.target().is(TermKind::Pair) && is_value(t.target(), mode_)) emit(Rule::Prj);
        if (spine_answer(t.target(), mode_)) emit(Rule::LiftPi);
        break;
      default: break;
    }
  }

 private:
  bool arg_is_hole(const Term& app) const {
    return mode_ == Mode::Value && app.fn().is(TermKind::Lam);
  }

  static void merge(NameSet& into, const NameSet& from) { into.insert(from.begin(), from.end()); }

  template <typename Emit>
  void follow(const Term& t, std::vector<std::size_t>& chain, Emit& emit) const {
    const auto& ds = t.bindings();
    auto names = [&] {
      std::vector<Name> out;
      for (std::size_t i : chain) out.push_back(ds[i].name);
      return out;
    };
    const Term& m = ds[chain.back()].value;
    if (is_value(m, mode_)) {
      emit(chain.size() == 1 ? Rule::Deref : Rule::DerefEnv, names());
      return;
    }
    if (spine_answer(m, mode_)) {
      emit(chain.size() == 1 ? Rule::Assoc : Rule::AssocEnv, names());
      return;
    }
    for (const auto& w : demanded(m)) {
      std::size_t j = find(ds, w);
      if (j == ds.size()) continue;
      auto pos = std::find(chain.begin(), chain.end(), j);
      if (pos != chain.end()) {
        emit(pos == chain.begin() ? Rule::Error : Rule::ErrorEnv, names());
        continue;
      }
      chain.push_back(j);
      follow(t, chain, emit);
      chain.pop_back();
    }
  }

  Mode mode_;
};

}  // namespace

std::vector<DecompositionKey> decompose_oracle(const Term& program, Mode mode) {
  Oracle o(mode);
  std::vector<Path> holes;
  Path prefix;
  o.positions(program, prefix, holes);
  std::vector<DecompositionKey> out;
  for (const auto& p : holes) o.rules_at(subterm_at(program, p), p, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool matches_rule(const Term& t, Rule rule, Mode mode) {
  std::vector<DecompositionKey> found;
  Oracle(mode).rules_at(t, {}, found);
  return std::any_of(found.begin(), found.end(),
                     [&](const DecompositionKey& k) { return k.rule == rule; });
}

}  // namespace needsem
