#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace needsem {

using Name = std::string;
using NameSet = std::set<Name>;

/// Which calculus a term is read in. Each mode fixes the grammar, the
/// value/answer predicates, the evaluation contexts and the redex rules.
enum class Mode { Let, Letrec, LetrecPairs, Value };

std::string_view to_string(Mode mode);
std::optional<Mode> mode_from_string(std::string_view text);

/// Raised when an engine reaches a state its invariants rule out.
class InvariantFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class TermKind { Var, Lam, App, Let, Letrec, BlackHole, Pair, Proj };

class Term;

struct Binding;

/// Immutable, shared lambda term covering all four calculi.
class Term {
 public:
  struct Node;

  Term() = default;

  static Term var(Name name);
  static Term lam(Name binder, Term body);
  static Term app(Term fn, Term arg);
  static Term let(Name binder, Term bound, Term body);
  /// Throws std::invalid_argument when two binders coincide.
  static Term letrec(std::vector<Binding> bindings, Term body);
  static Term black_hole();
  static Term pair(Term left, Term right);
  /// `index` must be 1 or 2.
  static Term proj(Term target, int index);

  explicit operator bool() const { return node_ != nullptr; }

  TermKind kind() const;
  bool is(TermKind k) const { return node_ && kind() == k; }

  // Var name, or the binder of Lam / Let.
  const Name& name() const;
  // Body of Lam, Let and Letrec.
  const Term& body() const;
  const Term& fn() const;
  const Term& arg() const;
  const Term& bound() const;
  const std::vector<Binding>& bindings() const;
  const Term& left() const;
  const Term& right() const;
  const Term& target() const;
  int index() const;

  bool same_node(const Term& other) const { return node_ == other.node_; }

  /// Exact structural equality (names included).
  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Binding {
  Name name;
  Term value;

  friend bool operator==(const Binding& a, const Binding& b) {
    return a.name == b.name && a.value == b.value;
  }
};

struct Term::Node {
  TermKind kind;
  Name name;
  Term first;   // Lam body, App fn, Let bound, Letrec body, Pair left, Proj target
  Term second;  // App arg, Let body, Pair right
  std::vector<Binding> bindings;
  int index = 0;
};

/// Number of AST nodes.
std::size_t size(const Term& t);

NameSet free_vars(const Term& t);
bool is_closed(const Term& t);
/// Every name occurring in the term, free or binding.
void collect_names(const Term& t, std::unordered_set<Name>& out);
/// True iff no name is bound twice anywhere in the term.
bool binders_distinct(const Term& t);

/// Replaces free occurrences of `old_name` with `fresh`. `fresh` must not
/// occur in `t` at all; an occurrence raises InvariantFault.
Term subst_var(const Term& t, const Name& fresh, const Name& old_name);
/// Simultaneous variant of subst_var for a whole renaming.
Term rename_free(const Term& t, const std::unordered_map<Name, Name>& renaming);

/// Equality up to consistent renaming of bound variables. Letrec binding
/// groups are compared position by position.
bool alpha_eq(const Term& a, const Term& b);
/// Hash invariant under alpha_eq; free variables hash by name unless
/// `ignore_free` is set, in which case they all hash alike.
std::size_t alpha_hash(const Term& t, bool ignore_free = false);

enum class Classification { Value, Answer, GoodAnswer, Neither };

bool is_value(const Term& t, Mode mode);
bool is_answer(const Term& t, Mode mode);
/// An abstraction under a (possibly empty) let/letrec spine.
bool is_good_answer(const Term& t);
Classification classify(const Term& t, Mode mode);
std::string_view to_string(Classification c);

/// Empty when `t` conforms to the grammar of `mode`, otherwise a message
/// naming the offending construct.
std::optional<std::string> validate(const Term& t, Mode mode);

/// Fresh-name source. Names are `root_counter` where root is the base name
/// with any trailing `_digits` suffix stripped; the counter is shared by all
/// requests, and every emitted name avoids all reserved and emitted names.
class NameSupply {
 public:
  NameSupply() = default;

  void reserve(const Name& name) { used_.insert(name); }
  void reserve(const Term& t) { collect_names(t, used_); }
  bool is_used(const Name& name) const { return used_.count(name) != 0; }

  Name fresh(std::string_view base);
  /// As fresh(), additionally avoiding `avoid`.
  Name fresh(std::string_view base, const NameSet& avoid);

  std::size_t counter() const { return counter_; }

 private:
  std::size_t counter_ = 0;
  std::unordered_set<Name> used_;
};

/// Strips a trailing `_digits` suffix.
std::string_view base_name(std::string_view name);

/// Renames binders so that every binder in the result is distinct; the first
/// occurrence of each name is kept.
Term canonicalize(const Term& t, NameSupply& supply);
/// Renames every binder of `t` to a fresh name. Free variables are kept.
Term freshen_binders(const Term& t, NameSupply& supply);

}  // namespace needsem
