#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "needsem/instrumented.hpp"
#include "needsem/natural.hpp"
#include "needsem/reduction.hpp"
#include "needsem/term.hpp"

namespace needsem {

struct GenConfig {
  std::uint64_t seed = 0;
  std::size_t max_size = 30;
  Mode mode = Mode::Letrec;
  /// Chance that a variable occurrence reuses a let/letrec-bound name.
  double reuse_bias = 0.6;
  /// Chance that a variable inside a letrec group refers back into the group.
  double recursion_bias = 0.5;
};

/// Closed, mode-valid and black-hole free; deterministic in the config.
Term gen_program(const GenConfig& cfg);

struct Budgets {
  std::size_t steps = 10000;  // reduction steps
  std::size_t depth = 10000;  // derivation nodes
  std::size_t margin = 10;    // retry factor when only one side finished
};

struct CheckOptions {
  Budgets budgets;
  /// Run engine audits, the binder-distinctness check after each step and
  /// the unique-decomposition sweep over every reduct.
  bool audit = false;
  ReductionOptions reduction;
};

enum class VerdictStatus { Agree, Disagree, Inconclusive };
std::string_view to_string(VerdictStatus s);

struct EngineRun {
  std::string engine;
  std::string outcome;
  std::size_t cost = 0;  // steps or derivation nodes
  std::string heap;
  std::string value;
};

struct Verdict {
  std::string check;
  Term program;
  VerdictStatus status = VerdictStatus::Agree;
  std::vector<EngineRun> runs;
  std::string detail;
  /// Invariant failures seen by the audits; any entry makes the verdict fail.
  std::vector<std::string> violations;
  std::size_t decompositions_checked = 0;
  Term witness;

  bool agree() const { return status == VerdictStatus::Agree && violations.empty(); }
  bool failed() const { return status == VerdictStatus::Disagree || !violations.empty(); }
};

Verdict check_equiv_acyclic(const Term& t, const CheckOptions& opts = {});
Verdict check_equiv_cyclic(const Term& t, Mode mode, const CheckOptions& opts = {});
Verdict check_instrumented(const Term& t, Mode mode, const CheckOptions& opts = {});
Verdict check_cbv_implies_cbn(const Term& t, const CheckOptions& opts = {});
Verdict check_adequacy_oracles(const Term& t, const CheckOptions& opts = {});

/// Every check applicable to the mode, in a fixed order.
std::vector<Verdict> check_all(const Term& t, Mode mode, const CheckOptions& opts = {});

/// Greedy subterm replacement and binding removal while `fails` holds.
/// Every candidate tried is closed.
Term shrink(const Term& t, const std::function<bool(const Term&)>& fails);

/// α-equivalence of an answer letrec spine with a natural-semantics result,
/// ignoring the order of bindings.
bool cyclic_result_match(const Term& answer, const std::vector<Binding>& heap, const Term& value);
/// Reads the heap in order as a let spine around the value.
Term let_spine(const std::vector<Binding>& heap, const Term& value);
/// Collapses nested letrec spines of an answer into one group.
void answer_spine(const Term& answer, std::vector<Binding>& heap, Term& value);

/// One JSON object on one line.
std::string encode_verdict(const Verdict& v);

/// Runs fn on a thread with a large stack; rethrows its exception.
void run_with_stack(const std::function<void()>& fn, std::size_t bytes = std::size_t{512} << 20);

}  // namespace needsem
