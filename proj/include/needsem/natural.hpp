#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "needsem/term.hpp"

namespace needsem {

/// Sequence of bindings; each right-hand side may mention only earlier names.
using OrderedHeap = std::vector<Binding>;

/// Finite mapping kept in insertion order so that output is deterministic.
/// Equality of cyclic heaps ignores the order.
class CyclicHeap {
 public:
  CyclicHeap() = default;
  explicit CyclicHeap(const std::vector<Binding>& bindings);

  bool contains(const Name& n) const { return index_.count(n) != 0; }
  const Term& at(const Name& n) const;
  /// Updates in place, or appends a new binding.
  void set(const Name& n, Term t);
  /// Leaves the slot in place, so a later `set` restores the name's position.
  void erase(const Name& n);
  std::size_t size() const { return index_.size(); }
  std::vector<Binding> bindings() const;

 private:
  std::vector<Binding> entries_;  // erased slots hold a null Term
  std::unordered_map<Name, std::size_t> index_;
  std::unordered_map<Name, std::size_t> erased_;
};

enum class EvalStatus { Value, BudgetExhausted, StuckCycle, TypeFault };
std::string_view to_string(EvalStatus s);

struct DerivationEvent {
  std::string rule;
  std::size_t depth = 0;
  std::size_t heap_in = 0;
  std::size_t heap_out = 0;
};

struct EvalOptions {
  /// Maximum number of derivation-tree nodes.
  std::size_t budget = 10000;
  /// Check per-judgment invariants and collect violations.
  bool audit = false;
  bool record_rules = false;
};

struct EvalOutcome {
  EvalStatus status = EvalStatus::Value;
  std::vector<Binding> heap;
  Term value;
  Name stuck_on;       // StuckCycle
  std::string detail;  // TypeFault
  std::size_t nodes = 0;
  std::vector<std::string> violations;
  std::vector<DerivationEvent> events;

  bool ok() const { return status == EvalStatus::Value; }
};

/// Acyclic natural semantics with avoid-set X.
EvalOutcome eval_let(const OrderedHeap& heap, const Term& t, const NameSet& avoid,
                     const EvalOptions& opts = {});

/// Cyclic natural semantics: Variable blackholes the binding while it is
/// evaluated. Pairs and projections are supported.
EvalOutcome eval_letrec(const std::vector<Binding>& heap, const Term& t,
                        const EvalOptions& opts = {});
/// Variable removes the binding while it is evaluated; demanding an absent
/// variable is StuckCycle.
EvalOutcome eval_letrec_stuck(const std::vector<Binding>& heap, const Term& t,
                              const EvalOptions& opts = {});
/// Call-by-name: Variable re-evaluates the binding and never updates it.
EvalOutcome eval_name(const std::vector<Binding>& heap, const Term& t,
                      const EvalOptions& opts = {});
/// Call-by-value application (argument evaluated before the body), lazy
/// letrec bindings.
EvalOutcome eval_value(const std::vector<Binding>& heap, const Term& t,
                       const EvalOptions& opts = {});

}  // namespace needsem
