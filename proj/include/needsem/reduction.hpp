#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "needsem/term.hpp"

namespace needsem {

enum class Rule {
  BetaNeed,
  Lift,
  Deref,
  Assoc,
  DerefEnv,
  AssocEnv,
  Error,
  ErrorEnv,
  ErrorBeta,
  Prj,
  LiftPi,
  LiftPair1,
  LiftPair2,
  BetaValue,
  LiftArg,
  ErrorArg,
};

std::string_view rule_name(Rule rule);
std::optional<Rule> rule_from_name(std::string_view name);

enum class LayerKind {
  AppL,
  AppR,
  LetBody,
  LetBind,
  LetrecBody,
  LetrecBind,
  LetrecDep,
  PairL,
  PairR,
  ProjHole,
};

struct Layer;

/// Outermost layer first. The empty context is the hole.
struct EvalContext {
  std::vector<Layer> layers;

  bool empty() const { return layers.empty(); }
};

/// One element of a dependency chain: binding `index` of the enclosing
/// letrec is `ctx` filled with the next variable of the chain.
struct ChainLink {
  std::size_t index = 0;
  EvalContext ctx;
};

struct Layer {
  LayerKind kind = LayerKind::AppL;
  // AppL: the argument. AppR/PairR: the value on the left. PairL: the right
  // component. LetBody: the bound term. LetBind/LetrecBind/LetrecDep: the
  // body E'[x] demanding the focused binding.
  Term other;
  Name binder;                    // LetBody, LetBind
  std::vector<Binding> bindings;  // Letrec layers; the focused entry is stale
  std::size_t focus = 0;          // LetrecBind, LetrecDep
  std::vector<ChainLink> chain;   // LetrecDep, head first
  EvalContext body_ctx;           // LetBind, LetrecBind, LetrecDep: E' in E'[x]
  int index = 0;                  // ProjHole
};

Term plug(const EvalContext& ctx, const Term& t);
/// Subterm path of the hole: one child index per layer.
std::vector<std::size_t> hole_path(const EvalContext& ctx);

/// The located redex. For the binding rules (deref, assoc, error and their
/// env forms) `term` is the whole let/letrec and the fields below describe
/// how the demand reaches the target binding.
struct Redex {
  Rule rule;
  Term term;
  EvalContext body_ctx;          // E in E[x] for the demanding body
  std::vector<ChainLink> chain;  // dependency links, head first; empty for deref and assoc
  std::size_t target = 0;        // binding whose value is used, or the demanded one
};

enum class FaultKind { None, FreeVariable, ProjectNonPair, ApplyPair, Malformed };
std::string_view to_string(FaultKind k);

struct Decomposition {
  enum class Kind { Answer, Redex, Stuck } kind = Kind::Answer;
  EvalContext ctx;
  std::optional<Redex> redex;
  FaultKind fault = FaultKind::None;
  std::string detail;
};

/// Unique decomposition of a program into context and redex.
Decomposition decompose(const Term& program, Mode mode);

/// Deliberate faults, used to validate the testing harness.
enum class Mutation { None, DerefNoCopy, DerefWrongValue };

struct ReductionOptions {
  Mutation mutation = Mutation::None;
};

Term contract(const Redex& redex, Mode mode, NameSupply& supply,
              const ReductionOptions& opts = {});

struct StepResult {
  Rule rule;
  Term term;
};

/// Throws no exceptions for stuck programs; a stuck program yields the fault
/// through `stuck`.
std::optional<StepResult> step(const Term& program, Mode mode, NameSupply& supply,
                               const ReductionOptions& opts = {},
                               Decomposition* stuck = nullptr);

enum class OutcomeKind { Answer, FuelExhausted, Stuck };
std::string_view to_string(OutcomeKind k);

struct TraceStep {
  Rule rule;
  Term term;
};

struct Trace {
  Term initial;
  std::vector<TraceStep> steps;
};

struct ReduceResult {
  OutcomeKind outcome;
  Term term;  // final term
  FaultKind fault = FaultKind::None;
  std::string detail;
  std::size_t steps = 0;
  Trace trace;  // filled only when recording
};

/// Observer sees every (predecessor, decomposition, successor) triple.
using StepObserver =
    std::function<void(const Term& before, const Decomposition& d, const Term& after)>;

struct ReduceOptions {
  std::size_t max_steps = 10000;
  bool record_trace = true;
  ReductionOptions reduction;
  StepObserver observer;
};

/// Canonicalizes binder names, then steps until an answer, a stuck term, or
/// the step budget is spent.
ReduceResult reduce(const Term& program, Mode mode, const ReduceOptions& opts = {});

// ---------------------------------------------------------------------------
// Brute-force oracle

/// Identity of a decomposition: hole path, rule, and the binders of any
/// dependency chain followed by the target binder.
struct DecompositionKey {
  std::vector<std::size_t> path;
  Rule rule;
  std::vector<Name> chain;

  friend bool operator==(const DecompositionKey& a, const DecompositionKey& b) {
    return a.path == b.path && a.rule == b.rule && a.chain == b.chain;
  }
  friend bool operator<(const DecompositionKey& a, const DecompositionKey& b);
};

DecompositionKey key_of(const Decomposition& d);
std::string to_string(const DecompositionKey& k);

/// Every position whose path is derivable from the context grammar and whose
/// subterm matches a rule, found by exhaustive enumeration independent of
/// decompose().
std::vector<DecompositionKey> decompose_oracle(const Term& program, Mode mode);

/// The subterm at a path (numbering as by hole_path).
Term subterm_at(const Term& t, const std::vector<std::size_t>& path);

/// True iff the left-hand side of `rule` matches `t` for some choice of
/// context and dependency chain.
bool matches_rule(const Term& t, Rule rule, Mode mode);

}  // namespace needsem
