// Acceptance run: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "needsem/harness.hpp"
#include "needsem/instrumented.hpp"
#include "needsem/natural.hpp"
#include "needsem/reduction.hpp"
#include "needsem/textio.hpp"

using namespace needsem;

namespace {

constexpr const char* kShared = "let x = (\\y.y) (\\y.y) in x";
constexpr const char* kChain = "letrec x = f x, f = \\y.y in x";
constexpr const char* kCycle = "letrec x = x in x";
constexpr const char* kByValue = "letrec x = (\\y.\\z.y) x in x";
constexpr std::size_t kPrograms = 1000;

struct Result {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Best of several runs, in milliseconds.
double best_ms(const std::function<void()>& fn) {
  double best = 1e9;
  for (int i = 0; i < 20; ++i) {
    auto t0 = Clock::now();
    fn();
    best = std::min(best, seconds_since(t0) * 1000.0);
  }
  return best;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Term lam_id() { return Term::lam("y", Term::var("y")); }

std::vector<Rule> rules_of(const ReduceResult& r) {
  std::vector<Rule> out;
  for (const auto& s : r.trace.steps) out.push_back(s.rule);
  return out;
}

Result golden_reduction() {
  Result res;
  Term t = parse(kShared, Mode::Let);
  ReduceResult r = reduce(t, Mode::Let);
  res.require(r.outcome == OutcomeKind::Answer && r.steps == 4, "expected 4 steps to an answer");
  res.require(rules_of(r) == std::vector<Rule>{Rule::BetaNeed, Rule::Deref, Rule::Assoc, Rule::Deref},
              "rule sequence");
  Term last = parse("let y = \\y.y in let x = \\y'.y' in \\y''.y''", Mode::Let);
  res.require(alpha_eq(r.term, last), "final term " + print(r.term));
  double ms = best_ms([&] { reduce(t, Mode::Let); });
  res.require(ms < 1.0, "took " + fmt(ms) + " ms");
  if (res.ok) res.detail = "4 steps, " + fmt(ms) + " ms";
  return res;
}

Result golden_natural() {
  Result res;
  Term t = parse(kShared, Mode::Let);
  EvalOutcome e = eval_let({}, t, {});
  res.require(e.ok(), "eval_let failed");
  if (!e.ok()) return res;
  res.require(e.heap.size() == 2, "heap size");
  if (e.heap.size() == 2) {
    res.require(base_name(e.heap[0].name) == "y" && base_name(e.heap[1].name) == "x",
                "heap order " + print_bindings(e.heap));
    res.require(alpha_eq(e.heap[0].value, lam_id()) && alpha_eq(e.heap[1].value, lam_id()),
                "heap values");
  }
  res.require(alpha_eq(e.value, lam_id()), "value " + print(e.value));
  double ms = best_ms([&] { eval_let({}, t, {}); });
  res.require(ms < 1.0, "took " + fmt(ms) + " ms");
  if (res.ok) res.detail = "heap " + print_bindings(e.heap) + ", value " + print(e.value);
  return res;
}

Result golden_instrumented() {
  Result res;
  Term t = parse(kShared, Mode::Let);
  IEvalOutcome r = ieval_let({}, t);
  EvalOutcome e = eval_let({}, t, {});
  res.require(r.ok() && e.ok(), "engine failed");
  if (!r.ok() || !e.ok()) return res;
  Term hole = Term::var("hole");
  Term ctx = plug(comp(r.sigma), hole);
  res.require(alpha_eq(ctx, parse("let y = \\y.y in let x = \\y.y in hole", Mode::Let)),
              "context " + print(ctx));
  res.require(decomp(r.sigma) == e.heap, "decomp " + print_bindings(decomp(r.sigma)));
  double ms = best_ms([&] { ieval_let({}, t); });
  res.require(ms < 1.0, "took " + fmt(ms) + " ms");
  if (res.ok) res.detail = "sigma " + print_heap(r.sigma);
  return res;
}

Result golden_cyclic() {
  Result res;
  Term t = parse(kChain, Mode::Letrec);
  ReduceResult r = reduce(t, Mode::Letrec);
  res.require(r.outcome == OutcomeKind::Answer && r.steps == 6, "expected 6 steps");
  res.require(alpha_eq(r.term, parse("letrec y = #, x = #, f = \\y.y in #", Mode::Letrec)),
              "final term " + print(r.term));
  EvalOutcome e = eval_letrec({}, t);
  res.require(e.ok() && e.heap.size() == 3, "eval_letrec heap");
  if (e.ok() && e.heap.size() == 3) {
    int holes = 0, lams = 0;
    for (const auto& b : e.heap) {
      holes += b.value.is(TermKind::BlackHole);
      lams += alpha_eq(b.value, lam_id());
    }
    res.require(holes == 2 && lams == 1, "heap " + print_bindings(e.heap));
    res.require(e.value.is(TermKind::BlackHole), "value " + print(e.value));
    res.require(cyclic_result_match(r.term, e.heap, e.value), "answer and heap differ");
  }
  double ms = best_ms([&] {
    reduce(t, Mode::Letrec);
    eval_letrec({}, t);
  });
  res.require(ms < 1.0, "took " + fmt(ms) + " ms");
  if (res.ok) res.detail = "6 steps, heap " + print_bindings(e.heap);
  return res;
}

Result direct_cycle() {
  Result res;
  Term t = parse(kCycle, Mode::Letrec);
  EvalOutcome e = eval_letrec({}, t);
  res.require(e.ok() && e.heap.size() == 1 && base_name(e.heap[0].name) == "x" &&
                  e.heap[0].value.is(TermKind::BlackHole) && e.value.is(TermKind::BlackHole),
              "eval_letrec");
  EvalOutcome s = eval_letrec_stuck({}, t);
  res.require(s.status == EvalStatus::StuckCycle, "eval_letrec_stuck " +
                                                       std::string(to_string(s.status)));
  ReduceResult r = reduce(t, Mode::Letrec);
  auto rules = rules_of(r);
  res.require(std::find(rules.begin(), rules.end(), Rule::Error) != rules.end(), "no error step");
  if (res.ok) res.detail = "heap " + print_bindings(e.heap) + ", stuck on " + s.stuck_on;
  return res;
}

struct Tally {
  std::size_t programs = 0, verdicts = 0, agree = 0, disagree = 0, inconclusive = 0;
  std::size_t decompositions = 0;
  std::vector<std::string> decomposition_faults, hygiene_faults, failures;

  void add(const Verdict& v) {
    ++verdicts;
    decompositions += v.decompositions_checked;
    if (v.status == VerdictStatus::Agree) ++agree;
    if (v.status == VerdictStatus::Disagree) {
      ++disagree;
      if (failures.size() < 3) failures.push_back(encode_verdict(v));
    }
    if (v.status == VerdictStatus::Inconclusive) ++inconclusive;
    for (const auto& s : v.violations) {
      bool decomp = s.find("decomposition") != std::string::npos ||
                    s.find("oracle") != std::string::npos;
      auto& bucket = decomp ? decomposition_faults : hygiene_faults;
      if (bucket.size() < 3) bucket.push_back(print(v.program) + ": " + s);
      else bucket.emplace_back();
    }
  }
  double inconclusive_rate() const { return verdicts ? double(inconclusive) / verdicts : 0.0; }
};

Term program(Mode m, std::uint64_t seed) {
  GenConfig g;
  g.seed = seed;
  g.mode = m;
  return gen_program(g);
}

// Equivalence and instrumented checks for one mode.
Tally sweep(Mode m, bool audit) {
  CheckOptions o;
  o.audit = audit;
  Tally t;
  for (std::size_t i = 0; i < kPrograms; ++i) {
    Term p = program(m, i);
    ++t.programs;
    t.add(m == Mode::Let ? check_equiv_acyclic(p, o) : check_equiv_cyclic(p, m, o));
    t.add(check_instrumented(p, m, o));
  }
  return t;
}

const Mode kSweepModes[] = {Mode::Let, Mode::Letrec, Mode::LetrecPairs};

Result equivalence_suite() {
  Result res;
  auto t0 = Clock::now();
  std::string summary;
  for (Mode m : kSweepModes) {
    Tally t = sweep(m, false);
    res.require(t.programs >= kPrograms, "too few programs");
    res.require(t.disagree == 0, std::string(to_string(m)) + ": " + std::to_string(t.disagree) +
                                     " disagreements" + (t.failures.empty() ? "" : " " + t.failures[0]));
    res.require(t.inconclusive_rate() < 0.2, std::string(to_string(m)) + " inconclusive rate");
    summary += std::string(to_string(m)) + " " + std::to_string(t.agree) + "/" +
               std::to_string(t.verdicts) + " agree, " + std::to_string(t.inconclusive) +
               " inconclusive; ";
  }
  double s = seconds_since(t0);
  res.require(s < 60.0, "took " + fmt(s) + " s");
  if (res.ok) res.detail = summary + fmt(s) + " s";
  return res;
}

struct Audit {
  Tally let, letrec, pairs;
};

Audit audited() {
  return {sweep(Mode::Let, true), sweep(Mode::Letrec, true), sweep(Mode::LetrecPairs, true)};
}

Result unique_decomposition(const Audit& a) {
  Result res;
  for (const Tally* t : {&a.let, &a.letrec}) {
    res.require(t->decomposition_faults.empty(),
                std::to_string(t->decomposition_faults.size()) + " faults, first " +
                    (t->decomposition_faults.empty() ? "" : t->decomposition_faults[0]));
  }
  std::size_t n = a.let.decompositions + a.letrec.decompositions;
  res.require(n > 0, "nothing checked");
  if (res.ok) res.detail = std::to_string(n) + " terms checked";
  return res;
}

Result hygiene(const Audit& a) {
  Result res;
  for (const Tally* t : {&a.let, &a.letrec, &a.pairs}) {
    res.require(t->hygiene_faults.empty(),
                std::to_string(t->hygiene_faults.size()) + " violations, first " +
                    (t->hygiene_faults.empty() ? "" : t->hygiene_faults[0]));
    res.require(t->disagree == 0, "audited run disagreed");
  }
  if (res.ok) res.detail = std::to_string(a.let.verdicts + a.letrec.verdicts + a.pairs.verdicts) +
                           " audited verdicts";
  return res;
}

Result cbv_cbn() {
  Result res;
  Tally t;
  for (std::size_t i = 0; i < kPrograms; ++i) t.add(check_cbv_implies_cbn(program(Mode::Value, i)));
  res.require(t.verdicts >= kPrograms, "too few programs");
  res.require(t.disagree == 0 && t.hygiene_faults.empty() && t.decomposition_faults.empty(),
              std::to_string(t.disagree) + " violations" + (t.failures.empty() ? "" : " " + t.failures[0]));
  Term ce = parse(kByValue, Mode::Value);
  EvalOutcome v = eval_value({}, ce);
  EvalOutcome n = eval_name({}, ce);
  res.require(v.ok() && v.value.is(TermKind::BlackHole), "cbv result");
  res.require(n.ok() && n.value.is(TermKind::Lam), "cbn result");
  if (res.ok)
    res.detail = std::to_string(t.agree) + "/" + std::to_string(t.verdicts) + " agree, " +
                 std::to_string(t.inconclusive) + " inconclusive; counterexample cbv " +
                 print(v.value) + " vs cbn " + print(n.value);
  return res;
}

Result adequacy() {
  Result res;
  Tally t;
  for (std::size_t i = 0; i < kPrograms; ++i) t.add(check_adequacy_oracles(program(Mode::Letrec, i)));
  res.require(t.verdicts >= kPrograms, "too few programs");
  res.require(t.disagree == 0, std::to_string(t.disagree) + " violations" +
                                   (t.failures.empty() ? "" : " " + t.failures[0]));
  res.require(t.inconclusive_rate() < 0.2, "inconclusive rate " + fmt(t.inconclusive_rate()));
  if (res.ok)
    res.detail = std::to_string(t.agree) + "/" + std::to_string(t.verdicts) + " agree, " +
                 std::to_string(t.inconclusive) + " inconclusive";
  return res;
}

Result round_trip() {
  Result res;
  const Mode modes[] = {Mode::Let, Mode::Letrec, Mode::LetrecPairs, Mode::Value};
  std::size_t bad = 0, nondet = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    Mode m = modes[i % 4];
    GenConfig g;
    g.seed = 1000003 + i;
    g.mode = m;
    Term t = gen_program(g);
    std::string s = print(t);
    auto back = try_parse(s, m);
    if (!std::holds_alternative<Term>(back) || !(std::get<Term>(back) == t) ||
        print(std::get<Term>(back)) != s)
      ++bad;
    if (print(gen_program(g)) != s) ++nondet;
  }
  res.require(bad == 0, std::to_string(bad) + " unstable");
  res.require(nondet == 0, std::to_string(nondet) + " nondeterministic");
  if (res.ok) res.detail = "10000 terms stable";
  return res;
}

}  // namespace

int main() {
  bool all = true;
  auto line = [&](int n, const Result& r) {
    std::printf("criterion %2d: %s  %s\n", n, r.ok ? "PASS" : "FAIL", r.detail.c_str());
    std::fflush(stdout);
    all = all && r.ok;
  };
  run_with_stack([&] {
    line(1, golden_reduction());
    line(2, golden_natural());
    line(3, golden_instrumented());
    line(4, golden_cyclic());
    line(5, direct_cycle());
    line(6, equivalence_suite());
    Audit a = audited();
    line(7, unique_decomposition(a));
    line(8, hygiene(a));
    line(9, cbv_cbn());
    line(10, adequacy());
    line(11, round_trip());
  });
  return all ? 0 : 1;
}
