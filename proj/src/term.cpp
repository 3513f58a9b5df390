#include "needsem/term.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <functional>

namespace needsem {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Let: return "let";
    case Mode::Letrec: return "letrec";
    case Mode::LetrecPairs: return "letrec-pairs";
    case Mode::Value: return "value";
  }
  return "?";
}

std::optional<Mode> mode_from_string(std::string_view text) {
  if (text == "let") return Mode::Let;
  if (text == "letrec") return Mode::Letrec;
  if (text == "letrec-pairs" || text == "pairs") return Mode::LetrecPairs;
  if (text == "value") return Mode::Value;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Construction and access

namespace {
std::shared_ptr<Term::Node> make_node(TermKind kind) {
  auto n = std::make_shared<Term::Node>();
  n->kind = kind;
  return n;
}
}  // namespace

Term Term::var(Name name) {
  auto n = make_node(TermKind::Var);
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::lam(Name binder, Term body) {
  auto n = make_node(TermKind::Lam);
  n->name = std::move(binder);
  n->first = std::move(body);
  return Term(std::move(n));
}

Term Term::app(Term fn, Term arg) {
  auto n = make_node(TermKind::App);
  n->first = std::move(fn);
  n->second = std::move(arg);
  return Term(std::move(n));
}

Term Term::let(Name binder, Term bound, Term body) {
  auto n = make_node(TermKind::Let);
  n->name = std::move(binder);
  n->first = std::move(bound);
  n->second = std::move(body);
  return Term(std::move(n));
}

Term Term::letrec(std::vector<Binding> bindings, Term body) {
  for (std::size_t i = 0; i < bindings.size(); ++i)
    for (std::size_t j = i + 1; j < bindings.size(); ++j)
      if (bindings[i].name == bindings[j].name)
        throw std::invalid_argument("letrec binds '" + bindings[i].name + "' twice");
  auto n = make_node(TermKind::Letrec);
  n->bindings = std::move(bindings);
  n->first = std::move(body);
  return Term(std::move(n));
}

Term Term::black_hole() {
  static const Term hole(make_node(TermKind::BlackHole));
  return hole;
}

Term Term::pair(Term left, Term right) {
  auto n = make_node(TermKind::Pair);
  n->first = std::move(left);
  n->second = std::move(right);
  return Term(std::move(n));
}

Term Term::proj(Term target, int index) {
  if (index != 1 && index != 2) throw std::invalid_argument("projection index must be 1 or 2");
  auto n = make_node(TermKind::Proj);
  n->first = std::move(target);
  n->index = index;
  return Term(std::move(n));
}

TermKind Term::kind() const {
  assert(node_);
  return node_->kind;
}

const Name& Term::name() const {
  assert(is(TermKind::Var) || is(TermKind::Lam) || is(TermKind::Let));
  return node_->name;
}

const Term& Term::body() const {
  assert(is(TermKind::Lam) || is(TermKind::Let) || is(TermKind::Letrec));
  return kind() == TermKind::Let ? node_->second : node_->first;
}

const Term& Term::fn() const {
  assert(is(TermKind::App));
  return node_->first;
}

const Term& Term::arg() const {
  assert(is(TermKind::App));
  return node_->second;
}

const Term& Term::bound() const {
  assert(is(TermKind::Let));
  return node_->first;
}

const std::vector<Binding>& Term::bindings() const {
  assert(is(TermKind::Letrec));
  return node_->bindings;
}

const Term& Term::left() const {
  assert(is(TermKind::Pair));
  return node_->first;
}

const Term& Term::right() const {
  assert(is(TermKind::Pair));
  return node_->second;
}

const Term& Term::target() const {
  assert(is(TermKind::Proj));
  return node_->first;
}

int Term::index() const {
  assert(is(TermKind::Proj));
  return node_->index;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.name != y.name || x.index != y.index) return false;
  if (x.bindings.size() != y.bindings.size()) return false;
  for (std::size_t i = 0; i < x.bindings.size(); ++i)
    if (!(x.bindings[i] == y.bindings[i])) return false;
  return x.first == y.first && x.second == y.second;
}

// ---------------------------------------------------------------------------
// Binding analysis

std::size_t size(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::BlackHole: return 1;
    case TermKind::Lam: return 1 + size(t.body());
    case TermKind::App: return 1 + size(t.fn()) + size(t.arg());
    case TermKind::Let: return 1 + size(t.bound()) + size(t.body());
    case TermKind::Letrec: {
      std::size_t n = 1 + size(t.body());
      for (const auto& b : t.bindings()) n += size(b.value);
      return n;
    }
    case TermKind::Pair: return 1 + size(t.left()) + size(t.right());
    case TermKind::Proj: return 1 + size(t.target());
  }
  return 0;
}

namespace {

// Counts how many enclosing binders currently shadow each name.
class Scope {
 public:
  void push(const Name& n) { ++depth_[n]; }
  void pop(const Name& n) {
    auto it = depth_.find(n);
    if (--it->second == 0) depth_.erase(it);
  }
  bool bound(const Name& n) const { return depth_.count(n) != 0; }

 private:
  std::unordered_map<Name, int> depth_;
};

void free_vars_into(const Term& t, Scope& scope, NameSet& out) {
  switch (t.kind()) {
    case TermKind::Var:
      if (!scope.bound(t.name())) out.insert(t.name());
      return;
    case TermKind::BlackHole: return;
    case TermKind::Lam:
      scope.push(t.name());
      free_vars_into(t.body(), scope, out);
      scope.pop(t.name());
      return;
    case TermKind::App:
      free_vars_into(t.fn(), scope, out);
      free_vars_into(t.arg(), scope, out);
      return;
    case TermKind::Let:
      free_vars_into(t.bound(), scope, out);
      scope.push(t.name());
      free_vars_into(t.body(), scope, out);
      scope.pop(t.name());
      return;
    case TermKind::Letrec:
      for (const auto& b : t.bindings()) scope.push(b.name);
      for (const auto& b : t.bindings()) free_vars_into(b.value, scope, out);
      free_vars_into(t.body(), scope, out);
      for (const auto& b : t.bindings()) scope.pop(b.name);
      return;
    case TermKind::Pair:
      free_vars_into(t.left(), scope, out);
      free_vars_into(t.right(), scope, out);
      return;
    case TermKind::Proj:
      free_vars_into(t.target(), scope, out);
      return;
  }
}

}  // namespace

NameSet free_vars(const Term& t) {
  NameSet out;
  Scope scope;
  free_vars_into(t, scope, out);
  return out;
}

bool is_closed(const Term& t) { return free_vars(t).empty(); }

void collect_names(const Term& t, std::unordered_set<Name>& out) {
  switch (t.kind()) {
    case TermKind::Var: out.insert(t.name()); return;
    case TermKind::BlackHole: return;
    case TermKind::Lam:
      out.insert(t.name());
      collect_names(t.body(), out);
      return;
    case TermKind::App:
      collect_names(t.fn(), out);
      collect_names(t.arg(), out);
      return;
    case TermKind::Let:
      out.insert(t.name());
      collect_names(t.bound(), out);
      collect_names(t.body(), out);
      return;
    case TermKind::Letrec:
      for (const auto& b : t.bindings()) {
        out.insert(b.name);
        collect_names(b.value, out);
      }
      collect_names(t.body(), out);
      return;
    case TermKind::Pair:
      collect_names(t.left(), out);
      collect_names(t.right(), out);
      return;
    case TermKind::Proj: collect_names(t.target(), out); return;
  }
}

namespace {
bool binders_distinct_into(const Term& t, std::unordered_set<Name>& seen) {
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::BlackHole: return true;
    case TermKind::Lam:
      return seen.insert(t.name()).second && binders_distinct_into(t.body(), seen);
    case TermKind::App:
      return binders_distinct_into(t.fn(), seen) && binders_distinct_into(t.arg(), seen);
    case TermKind::Let:
      return seen.insert(t.name()).second && binders_distinct_into(t.bound(), seen) &&
             binders_distinct_into(t.body(), seen);
    case TermKind::Letrec:
      for (const auto& b : t.bindings())
        if (!seen.insert(b.name).second || !binders_distinct_into(b.value, seen)) return false;
      return binders_distinct_into(t.body(), seen);
    case TermKind::Pair:
      return binders_distinct_into(t.left(), seen) && binders_distinct_into(t.right(), seen);
    case TermKind::Proj: return binders_distinct_into(t.target(), seen);
  }
  return true;
}
}  // namespace

bool binders_distinct(const Term& t) {
  std::unordered_set<Name> seen;
  return binders_distinct_into(t, seen);
}

// ---------------------------------------------------------------------------
// Renaming

namespace {

class Renamer {
 public:
  explicit Renamer(const std::unordered_map<Name, Name>& renaming) : renaming_(renaming) {
    for (const auto& [from, to] : renaming) targets_.insert(to);
  }

  Term run(const Term& t) {
    switch (t.kind()) {
      case TermKind::Var: {
        check(t.name());
        if (scope_.bound(t.name())) return t;
        auto it = renaming_.find(t.name());
        return it == renaming_.end() ? t : Term::var(it->second);
      }
      case TermKind::BlackHole: return t;
      case TermKind::Lam: {
        check(t.name());
        scope_.push(t.name());
        Term body = run(t.body());
        scope_.pop(t.name());
        return body.same_node(t.body()) ? t : Term::lam(t.name(), std::move(body));
      }
      case TermKind::App: {
        Term fn = run(t.fn());
        Term arg = run(t.arg());
        return fn.same_node(t.fn()) && arg.same_node(t.arg()) ? t : Term::app(fn, arg);
      }
      case TermKind::Let: {
        check(t.name());
        Term bound = run(t.bound());
        scope_.push(t.name());
        Term body = run(t.body());
        scope_.pop(t.name());
        return bound.same_node(t.bound()) && body.same_node(t.body())
                   ? t
                   : Term::let(t.name(), bound, body);
      }
      case TermKind::Letrec: {
        for (const auto& b : t.bindings()) {
          check(b.name);
          scope_.push(b.name);
        }
        bool changed = false;
        std::vector<Binding> bs;
        bs.reserve(t.bindings().size());
        for (const auto& b : t.bindings()) {
          Term v = run(b.value);
          changed |= !v.same_node(b.value);
          bs.push_back({b.name, std::move(v)});
        }
        Term body = run(t.body());
        for (const auto& b : t.bindings()) scope_.pop(b.name);
        changed |= !body.same_node(t.body());
        return changed ? Term::letrec(std::move(bs), std::move(body)) : t;
      }
      case TermKind::Pair: {
        Term l = run(t.left());
        Term r = run(t.right());
        return l.same_node(t.left()) && r.same_node(t.right()) ? t : Term::pair(l, r);
      }
      case TermKind::Proj: {
        Term target = run(t.target());
        return target.same_node(t.target()) ? t : Term::proj(target, t.index());
      }
    }
    return t;
  }

 private:
  void check(const Name& n) const {
    if (targets_.count(n))
      throw InvariantFault("substitution target '" + n + "' already occurs in the term");
  }

  const std::unordered_map<Name, Name>& renaming_;
  std::unordered_set<Name> targets_;
  Scope scope_;
};

}  // namespace

Term subst_var(const Term& t, const Name& fresh, const Name& old_name) {
  std::unordered_map<Name, Name> renaming{{old_name, fresh}};
  return Renamer(renaming).run(t);
}

Term rename_free(const Term& t, const std::unordered_map<Name, Name>& renaming) {
  if (renaming.empty()) return t;
  return Renamer(renaming).run(t);
}

// ---------------------------------------------------------------------------
// Alpha equivalence

namespace {

// Maps bound names to the level of their innermost binder.
class Levels {
 public:
  void push(const Name& n, int level) { stack_[n].push_back(level); }
  void pop(const Name& n) {
    auto it = stack_.find(n);
    it->second.pop_back();
    if (it->second.empty()) stack_.erase(it);
  }
  std::optional<int> find(const Name& n) const {
    auto it = stack_.find(n);
    if (it == stack_.end()) return std::nullopt;
    return it->second.back();
  }

 private:
  std::unordered_map<Name, std::vector<int>> stack_;
};

class AlphaComparer {
 public:
  bool run(const Term& a, const Term& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case TermKind::Var: {
        auto la = left_.find(a.name());
        auto lb = right_.find(b.name());
        if (la || lb) return la == lb;
        return a.name() == b.name();
      }
      case TermKind::BlackHole: return true;
      case TermKind::Lam: {
        bind(a.name(), b.name());
        bool ok = run(a.body(), b.body());
        unbind(a.name(), b.name());
        return ok;
      }
      case TermKind::App: return run(a.fn(), b.fn()) && run(a.arg(), b.arg());
      case TermKind::Let: {
        if (!run(a.bound(), b.bound())) return false;
        bind(a.name(), b.name());
        bool ok = run(a.body(), b.body());
        unbind(a.name(), b.name());
        return ok;
      }
      case TermKind::Letrec: {
        const auto& da = a.bindings();
        const auto& db = b.bindings();
        if (da.size() != db.size()) return false;
        for (std::size_t i = 0; i < da.size(); ++i) bind(da[i].name, db[i].name);
        bool ok = true;
        for (std::size_t i = 0; ok && i < da.size(); ++i) ok = run(da[i].value, db[i].value);
        ok = ok && run(a.body(), b.body());
        for (std::size_t i = da.size(); i-- > 0;) unbind(da[i].name, db[i].name);
        return ok;
      }
      case TermKind::Pair: return run(a.left(), b.left()) && run(a.right(), b.right());
      case TermKind::Proj: return a.index() == b.index() && run(a.target(), b.target());
    }
    return false;
  }

 private:
  void bind(const Name& a, const Name& b) {
    left_.push(a, level_);
    right_.push(b, level_);
    ++level_;
  }
  void unbind(const Name& a, const Name& b) {
    left_.pop(a);
    right_.pop(b);
    --level_;
  }

  Levels left_, right_;
  int level_ = 0;
};

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

class AlphaHasher {
 public:
  explicit AlphaHasher(bool ignore_free) : ignore_free_(ignore_free) {}

  std::size_t run(const Term& t) {
    std::size_t h = static_cast<std::size_t>(t.kind()) * 1315423911u;
    switch (t.kind()) {
      case TermKind::Var: {
        if (auto l = levels_.find(t.name())) return mix(h, static_cast<std::size_t>(level_ - *l));
        return mix(h, ignore_free_ ? 7u : std::hash<Name>{}(t.name()));
      }
      case TermKind::BlackHole: return h;
      case TermKind::Lam: {
        levels_.push(t.name(), level_++);
        h = mix(h, run(t.body()));
        levels_.pop(t.name());
        --level_;
        return h;
      }
      case TermKind::App: return mix(mix(h, run(t.fn())), run(t.arg()));
      case TermKind::Let: {
        h = mix(h, run(t.bound()));
        levels_.push(t.name(), level_++);
        h = mix(h, run(t.body()));
        levels_.pop(t.name());
        --level_;
        return h;
      }
      case TermKind::Letrec: {
        for (const auto& b : t.bindings()) levels_.push(b.name, level_++);
        for (const auto& b : t.bindings()) h = mix(h, run(b.value));
        h = mix(h, run(t.body()));
        for (const auto& b : t.bindings()) {
          levels_.pop(b.name);
          --level_;
        }
        return h;
      }
      case TermKind::Pair: return mix(mix(h, run(t.left())), run(t.right()));
      case TermKind::Proj: return mix(mix(h, static_cast<std::size_t>(t.index())), run(t.target()));
    }
    return h;
  }

 private:
  bool ignore_free_;
  Levels levels_;
  int level_ = 0;
};

}  // namespace

bool alpha_eq(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  return AlphaComparer{}.run(a, b);
}

std::size_t alpha_hash(const Term& t, bool ignore_free) { return AlphaHasher(ignore_free).run(t); }

// ---------------------------------------------------------------------------
// Classification

bool is_value(const Term& t, Mode mode) {
  switch (t.kind()) {
    case TermKind::Lam: return true;
    case TermKind::BlackHole: return mode != Mode::Let;
    case TermKind::Pair:
      return mode == Mode::LetrecPairs && is_value(t.left(), mode) && is_value(t.right(), mode);
    default: return false;
  }
}

bool is_answer(const Term& t, Mode mode) {
  const Term* cur = &t;
  while (cur->is(TermKind::Let) || cur->is(TermKind::Letrec)) cur = &cur->body();
  return is_value(*cur, mode);
}

bool is_good_answer(const Term& t) {
  const Term* cur = &t;
  while (cur->is(TermKind::Let) || cur->is(TermKind::Letrec)) cur = &cur->body();
  return cur->is(TermKind::Lam);
}

Classification classify(const Term& t, Mode mode) {
  if (is_value(t, mode)) return Classification::Value;
  if (mode == Mode::Value && is_good_answer(t)) return Classification::GoodAnswer;
  if (is_answer(t, mode)) return Classification::Answer;
  return Classification::Neither;
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::Value: return "value";
    case Classification::Answer: return "answer";
    case Classification::GoodAnswer: return "good-answer";
    case Classification::Neither: return "neither";
  }
  return "?";
}

std::optional<std::string> validate(const Term& t, Mode mode) {
  auto reject = [&](std::string_view what) -> std::optional<std::string> {
    return std::string(what) + " is not part of the " + std::string(to_string(mode)) + " calculus";
  };
  switch (t.kind()) {
    case TermKind::Var: return std::nullopt;
    case TermKind::BlackHole:
      if (mode == Mode::Let) return reject("black hole '#'");
      return std::nullopt;
    case TermKind::Lam: return validate(t.body(), mode);
    case TermKind::App: {
      if (auto e = validate(t.fn(), mode)) return e;
      return validate(t.arg(), mode);
    }
    case TermKind::Let: {
      if (mode != Mode::Let) return reject("'let'");
      if (auto e = validate(t.bound(), mode)) return e;
      return validate(t.body(), mode);
    }
    case TermKind::Letrec: {
      if (mode == Mode::Let) return reject("'letrec'");
      for (const auto& b : t.bindings())
        if (auto e = validate(b.value, mode)) return e;
      return validate(t.body(), mode);
    }
    case TermKind::Pair: {
      if (mode != Mode::LetrecPairs) return reject("pair");
      if (auto e = validate(t.left(), mode)) return e;
      return validate(t.right(), mode);
    }
    case TermKind::Proj: {
      if (mode != Mode::LetrecPairs) return reject("projection");
      return validate(t.target(), mode);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Fresh names

std::string_view base_name(std::string_view name) {
  auto pos = name.rfind('_');
  if (pos == std::string_view::npos || pos == 0 || pos + 1 == name.size()) return name;
  for (std::size_t i = pos + 1; i < name.size(); ++i)
    if (name[i] < '0' || name[i] > '9') return name;
  return name.substr(0, pos);
}

Name NameSupply::fresh(std::string_view base) {
  static const NameSet none;
  return fresh(base, none);
}

Name NameSupply::fresh(std::string_view base, const NameSet& avoid) {
  const std::string root(base_name(base));
  for (;;) {
    Name candidate = root + "_" + std::to_string(++counter_);
    if (!used_.count(candidate) && !avoid.count(candidate)) {
      used_.insert(candidate);
      return candidate;
    }
  }
}

namespace {

class Freshener {
 public:
  Freshener(NameSupply& supply, bool keep_first) : supply_(supply), keep_first_(keep_first) {}

  Term run(const Term& t) {
    switch (t.kind()) {
      case TermKind::Var: {
        auto it = env_.find(t.name());
        if (it == env_.end() || it->second.empty()) return t;
        const Name& n = it->second.back();
        return n == t.name() ? t : Term::var(n);
      }
      case TermKind::BlackHole: return t;
      case TermKind::Lam: {
        Name n = pick(t.name());
        Term body = run(t.body());
        release(t.name());
        return Term::lam(std::move(n), std::move(body));
      }
      case TermKind::App: {
        Term fn = run(t.fn());
        return Term::app(std::move(fn), run(t.arg()));
      }
      case TermKind::Let: {
        Term bound = run(t.bound());
        Name n = pick(t.name());
        Term body = run(t.body());
        release(t.name());
        return Term::let(std::move(n), std::move(bound), std::move(body));
      }
      case TermKind::Letrec: {
        std::vector<Binding> bs;
        bs.reserve(t.bindings().size());
        for (const auto& b : t.bindings()) bs.push_back({pick(b.name), Term()});
        for (std::size_t i = 0; i < bs.size(); ++i) bs[i].value = run(t.bindings()[i].value);
        Term body = run(t.body());
        for (const auto& b : t.bindings()) release(b.name);
        return Term::letrec(std::move(bs), std::move(body));
      }
      case TermKind::Pair: {
        Term l = run(t.left());
        return Term::pair(std::move(l), run(t.right()));
      }
      case TermKind::Proj: return Term::proj(run(t.target()), t.index());
    }
    return t;
  }

 private:
  Name pick(const Name& original) {
    Name chosen;
    if (keep_first_ && !seen_.count(original)) {
      chosen = original;
    } else {
      chosen = supply_.fresh(original);
    }
    seen_.insert(original);
    seen_.insert(chosen);
    env_[original].push_back(chosen);
    return chosen;
  }
  void release(const Name& original) { env_[original].pop_back(); }

  NameSupply& supply_;
  bool keep_first_;
  std::unordered_set<Name> seen_;
  std::unordered_map<Name, std::vector<Name>> env_;
};

}  // namespace

Term canonicalize(const Term& t, NameSupply& supply) {
  supply.reserve(t);
  if (binders_distinct(t)) return t;
  return Freshener(supply, true).run(t);
}

Term freshen_binders(const Term& t, NameSupply& supply) { return Freshener(supply, false).run(t); }

}  // namespace needsem
