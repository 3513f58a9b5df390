#pragma once

#include <memory>
#include <string>
#include <vector>

#include "needsem/natural.hpp"
#include "needsem/reduction.hpp"
#include "needsem/term.hpp"

namespace needsem {

enum class FrameKind {
  AppArg,       // [] M
  LetBind,      // let x = M in []
  LetFocus,     // let x = [] in E[x]
  LetrecBind,   // letrec D in []
  LetrecFocus,  // letrec Dx, D in E[x]
  PairL,        // <[], M>
  PairR,        // <V, []>
  ProjF,        // [].i
};

struct Frame;
using StructuredHeap = std::vector<Frame>;

/// Body E[x] of a focus frame, kept as the frames of E until it is needed.
struct FocusBody {
  StructuredHeap above;
  Name demanded;
  mutable Term term;

  const Term& get() const;
};

/// One frame of a structured heap. Holes are positional: a LetrecFocus
/// group keeps a null Term at the binder that ends the dependency chain.
struct Frame {
  FrameKind kind = FrameKind::AppArg;
  Term term;    // AppArg/LetBind/PairL: M. PairR: V.
  std::shared_ptr<const FocusBody> focus;  // LetFocus/LetrecFocus
  Name name;    // LetBind, LetFocus
  std::vector<Binding> group;  // LetrecBind, LetrecFocus
  std::vector<Name> chain;     // LetrecFocus: head (demanded by the body) first, hole last
  /// LetrecFocus: when links[i] is set, the binding of chain[i] is its body
  /// and the group keeps a null Term in that slot.
  std::vector<std::shared_ptr<const FocusBody>> links;
  int index = 0;               // ProjF

  static Frame app_arg(Term m);
  static Frame let_bind(Name x, Term m);
  static Frame let_focus(Name x, Term body);
  static Frame letrec_bind(std::vector<Binding> d);
  static Frame letrec_focus(std::vector<Binding> group, std::vector<Name> chain, Term body);
  /// Focus frames over the frames `above` the demanded binding.
  static Frame let_focus_over(Name x, StructuredHeap above);
  static Frame letrec_focus_over(std::vector<Binding> group, std::vector<Name> chain,
                                 StructuredHeap above);
  static Frame pair_left(Term right);
  static Frame pair_right(Term left);
  static Frame proj(int index);

  const Term& body() const { return focus->get(); }
  /// Bound term of a group entry, filling lazy chain links; null at the hole.
  Term slot(std::size_t i) const;
  bool is_bind() const { return kind == FrameKind::LetBind || kind == FrameKind::LetrecBind; }
  /// Exact equality, holes included.
  friend bool operator==(const Frame& a, const Frame& b);
};

std::string print_frame(const Frame& f);
std::string print_heap(const StructuredHeap& sigma);

/// ⌈Σ⌉: the evaluation context denoted by a structured heap.
EvalContext comp(const StructuredHeap& sigma);
/// ⌊Σ⌋: acyclic, the bindings of LetBind frames in order; cyclic, the
/// bindings of every letrec frame with chain binders mapped to •.
std::vector<Binding> decomp(const StructuredHeap& sigma);
/// Concatenation of the groups of a sequence of LetrecBind frames.
std::vector<Binding> flatten(const StructuredHeap& theta);

/// Let-bound variables of the whole heap.
NameSet lbv(const StructuredHeap& sigma);

/// Checks the well-formedness conditions of structured configurations.
/// `cyclic` selects the letrec variant of the conditions.
bool well_formed(const StructuredHeap& sigma, const Term& t, bool cyclic,
                 std::string* why = nullptr);

/// ≤_H by greedy left-to-right search for the order-preserving injection.
bool heap_leq(const StructuredHeap& a, const StructuredHeap& b, bool cyclic);

struct IEvalOptions {
  std::size_t budget = 10000;
  /// Check well-formedness and growth at every judgment.
  bool audit = false;
  bool record_rules = false;
};

struct IEvalEvent {
  std::string rule;
  std::size_t depth = 0;
  std::string sigma_in;
  std::string sigma_out;
};

struct IEvalOutcome {
  EvalStatus status = EvalStatus::Value;
  StructuredHeap sigma;
  Term value;
  std::string detail;
  std::size_t nodes = 0;
  std::vector<std::string> violations;
  std::vector<IEvalEvent> events;

  bool ok() const { return status == EvalStatus::Value; }
};

IEvalOutcome ieval_let(const StructuredHeap& sigma, const Term& t, const IEvalOptions& opts = {});
/// Cyclic calculus, with pair frames for letrec-pairs programs.
IEvalOutcome ieval_letrec(const StructuredHeap& sigma, const Term& t,
                          const IEvalOptions& opts = {});

}  // namespace needsem
