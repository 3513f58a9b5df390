// needsem: command-line driver for the call-by-need workbench.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "needsem/harness.hpp"
#include "needsem/instrumented.hpp"
#include "needsem/natural.hpp"
#include "needsem/reduction.hpp"
#include "needsem/textio.hpp"

using namespace needsem;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kFault = 2, kDisagree = 3, kInconclusive = 4 };

struct Settings {
  std::string mode_name = "letrec";
  std::string engine = "need-nat";
  std::size_t steps = 10000;
  std::size_t depth = 10000;
  std::uint64_t seed = 0;
  std::string format = "text";
  std::string input = "-";
  std::size_t count = 0;
  std::size_t size = 30;
  bool derivation = false;
  bool audit = false;
  bool shrink = false;
  Mode mode = Mode::Letrec;
  bool json() const { return format == "json"; }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Prints the parse error in the selected format; returns the exit status.
int report_parse_error(const Settings& s, const ParseError& e) {
  if (s.json()) {
    ojson j;
    j["error"] = {{"start", e.span.start}, {"end", e.span.end}, {"message", e.message},
                  {"expected", e.expected}};
    std::cout << j.dump() << "\n";
  } else {
    std::cerr << "parse error: " << e.describe() << "\n";
  }
  return kUsage;
}

// Engines run closed programs only; `parse` also accepts open terms.
std::optional<Term> load(const Settings& s, int& status, bool closed = true) {
  auto r = try_parse(read_input(s.input), s.mode);
  if (auto* e = std::get_if<ParseError>(&r)) {
    status = report_parse_error(s, *e);
    return std::nullopt;
  }
  Term t = std::get<Term>(r);
  if (closed && !is_closed(t)) {
    std::cerr << "error: program is not closed (free " << *free_vars(t).begin() << ")\n";
    status = kUsage;
    return std::nullopt;
  }
  return t;
}

int cmd_parse(const Settings& s) {
  int status = kOk;
  auto t = load(s, status, false);
  if (!t) return status;
  if (s.json()) {
    std::cout << ojson{{"mode", to_string(s.mode)}, {"term", print(*t)}}.dump() << "\n";
  } else {
    std::cout << print(*t) << "\n";
  }
  return kOk;
}

int cmd_reduce(const Settings& s) {
  int status = kOk;
  auto t = load(s, status);
  if (!t) return status;
  ReduceOptions ro;
  ro.max_steps = s.steps;
  ReduceResult r = reduce(*t, s.mode, ro);
  if (s.json()) {
    TraceView v;
    v.mode = to_string(s.mode);
    v.engine = "need-red";
    for (const auto& st : r.trace.steps) v.steps.emplace_back(rule_name(st.rule), st.term);
    v.outcome = to_string(r.outcome);
    v.term = r.term;
    v.detail = r.detail;
    std::cout << encode_trace(v) << "\n";
  } else {
    std::cout << "   " << print(r.trace.initial) << "\n";
    for (const auto& st : r.trace.steps)
      std::cout << "-> " << print(st.term) << "   [" << rule_name(st.rule) << "]\n";
    switch (r.outcome) {
      case OutcomeKind::Answer: std::cout << "answer after " << r.steps << " steps\n"; break;
      case OutcomeKind::FuelExhausted: std::cout << "step budget exhausted after " << r.steps << " steps\n"; break;
      case OutcomeKind::Stuck:
        std::cout << "stuck after " << r.steps << " steps: " << to_string(r.fault) << " (" << r.detail << ")\n";
        break;
    }
  }
  return r.outcome == OutcomeKind::Answer ? kOk : kFault;
}

struct EvalReport {
  std::string outcome;
  bool ok = false;
  std::vector<Binding> heap;
  Term value;
  std::string detail;
  std::string sigma;
  ojson derivation = ojson::array();
};

EvalReport eval_with(const Settings& s, const Term& t) {
  EvalReport rep;
  const bool cyclic = s.mode != Mode::Let;
  EvalOptions eo;
  eo.budget = s.depth;
  eo.record_rules = s.derivation;
  auto from_natural = [&](const EvalOutcome& e) {
    rep.outcome = to_string(e.status);
    rep.ok = e.ok();
    rep.heap = e.heap;
    rep.value = e.value;
    rep.detail = e.status == EvalStatus::StuckCycle ? "demanded '" + e.stuck_on + "' while evaluating it" : e.detail;
    for (const auto& ev : e.events)
      rep.derivation.push_back(ojson{{"rule", ev.rule}, {"depth", ev.depth}, {"heap_in", ev.heap_in},
                                     {"heap_out", ev.heap_out}});
  };
  const std::string& engine = s.engine;
  if (engine == "need-nat") {
    from_natural(cyclic ? eval_letrec({}, t, eo) : eval_let({}, t, {}, eo));
  } else if (engine == "stuck" || engine == "name" || engine == "value") {
    if (!cyclic) throw UsageError("engine '" + engine + "' needs a letrec mode");
    if (engine == "value" && s.mode == Mode::LetrecPairs) throw UsageError("engine 'value' has no pairs");
    if (engine == "stuck") from_natural(eval_letrec_stuck({}, t, eo));
    if (engine == "name") from_natural(eval_name({}, t, eo));
    if (engine == "value") from_natural(eval_value({}, t, eo));
  } else if (engine == "need-inst") {
    IEvalOptions io;
    io.budget = s.depth;
    io.record_rules = s.derivation;
    IEvalOutcome e = cyclic ? ieval_letrec({}, t, io) : ieval_let({}, t, io);
    rep.outcome = to_string(e.status);
    rep.ok = e.ok();
    rep.detail = e.detail;
    if (e.ok()) {
      rep.heap = decomp(e.sigma);
      rep.value = e.value;
      rep.sigma = print_heap(e.sigma);
    }
    for (const auto& ev : e.events)
      rep.derivation.push_back(ojson{{"rule", ev.rule}, {"depth", ev.depth}, {"sigma_in", ev.sigma_in},
                                     {"sigma_out", ev.sigma_out}});
  } else if (engine == "need-red") {
    ReduceOptions ro;
    ro.max_steps = s.steps;
    ro.record_trace = false;
    ReduceResult r = reduce(t, s.mode, ro);
    rep.outcome = to_string(r.outcome);
    rep.ok = r.outcome == OutcomeKind::Answer;
    rep.detail = r.detail;
    if (rep.ok) answer_spine(r.term, rep.heap, rep.value);
  } else {
    throw UsageError("unknown engine '" + engine + "'");
  }
  return rep;
}

int cmd_eval(const Settings& s) {
  int status = kOk;
  auto t = load(s, status);
  if (!t) return status;
  EvalReport rep = eval_with(s, *t);
  if (s.json()) {
    TraceView v;
    v.mode = to_string(s.mode);
    v.engine = s.engine;
    v.outcome = rep.outcome;
    if (rep.ok) {
      v.heap = rep.heap;
      v.value = rep.value;
    }
    v.detail = rep.detail;
    ojson j = ojson::parse(encode_trace(v));
    if (!rep.sigma.empty()) j["sigma"] = rep.sigma;
    if (s.derivation) j["derivation"] = rep.derivation;
    std::cout << j.dump() << "\n";
  } else if (rep.ok) {
    if (!rep.sigma.empty()) std::cout << "sigma: " << rep.sigma << "\n";
    std::cout << "heap: " << print_bindings(rep.heap) << "\n";
    std::cout << "value: " << print(rep.value) << "\n";
  } else {
    std::cout << rep.outcome << (rep.detail.empty() ? "" : ": " + rep.detail) << "\n";
  }
  return rep.ok ? kOk : kFault;
}

GenConfig gen_config(const Settings& s, std::size_t i) {
  GenConfig g;
  g.seed = s.seed + i;
  g.max_size = s.size;
  g.mode = s.mode;
  return g;
}

int cmd_gen(const Settings& s) {
  const std::size_t n = s.count ? s.count : 10;
  for (std::size_t i = 0; i < n; ++i) {
    GenConfig g = gen_config(s, i);
    Term t = gen_program(g);
    if (s.json()) {
      std::cout << ojson{{"seed", g.seed}, {"program", print(t)}}.dump() << "\n";
    } else {
      std::cout << print(t) << "\n";
    }
  }
  return kOk;
}

int cmd_check(const Settings& s) {
  CheckOptions opts;
  opts.budgets.steps = s.steps;
  opts.budgets.depth = s.depth;
  opts.audit = s.audit;
  std::vector<Term> programs;
  if (s.count) {
    for (std::size_t i = 0; i < s.count; ++i) programs.push_back(gen_program(gen_config(s, i)));
  } else {
    int status = kOk;
    auto t = load(s, status);
    if (!t) return status;
    if (!is_closed(*t)) throw UsageError("check needs a closed program");
    programs.push_back(*t);
  }
  std::size_t agree = 0, disagree = 0, inconclusive = 0;
  for (const auto& p : programs) {
    for (auto& v : check_all(p, s.mode, opts)) {
      if (v.failed()) {
        ++disagree;
        if (s.shrink) {
          const std::string name = v.check;
          v.witness = needsem::shrink(p, [&](const Term& c) {
            for (const auto& w : check_all(c, s.mode, opts))
              if (w.check == name && w.failed()) return true;
            return false;
          });
        }
      } else if (v.status == VerdictStatus::Inconclusive) {
        ++inconclusive;
      } else {
        ++agree;
      }
      if (s.json()) {
        std::cout << encode_verdict(v) << "\n";
      } else {
        std::cout << (v.failed() ? "FAIL" : to_string(v.status)) << " " << v.check << " "
                  << print(v.program);
        if (v.failed()) {
          std::cout << "\n  " << v.detail;
          for (const auto& x : v.violations) std::cout << "\n  " << x;
          if (v.witness) std::cout << "\n  witness: " << print(v.witness);
        }
        std::cout << "\n";
      }
    }
  }
  if (!s.json())
    std::cout << "agree " << agree << ", disagree " << disagree << ", inconclusive " << inconclusive << "\n";
  if (disagree) return kDisagree;
  if (inconclusive && !agree) return kInconclusive;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Call-by-need semantics workbench"};
  app.require_subcommand(1);
  Settings s;
  auto common = [&](CLI::App* sub, bool with_input) {
    sub->add_option("--mode", s.mode_name, "let, letrec, letrec-pairs or value")
        ->check(CLI::IsMember({"let", "letrec", "letrec-pairs", "value"}));
    sub->add_option("--steps", s.steps, "reduction step budget");
    sub->add_option("--depth", s.depth, "derivation node budget");
    sub->add_option("--seed", s.seed, "generator seed (NEEDSEM_SEED overrides)");
    sub->add_option("--format", s.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    if (with_input) sub->add_option("input", s.input, "program file, '-' for stdin");
  };
  auto* parse_cmd = app.add_subcommand("parse", "print the normalized program");
  common(parse_cmd, true);
  auto* reduce_cmd = app.add_subcommand("reduce", "small-step reduction trace");
  common(reduce_cmd, true);
  auto* eval_cmd = app.add_subcommand("eval", "big-step evaluation");
  common(eval_cmd, true);
  eval_cmd->add_option("--engine,--semantics", s.engine, "need-nat, need-inst, need-red, stuck, name or value")
      ->check(CLI::IsMember({"need-nat", "need-inst", "need-red", "stuck", "name", "value"}));
  eval_cmd->add_flag("--derivation", s.derivation, "record every rule application (json)");
  auto* check_cmd = app.add_subcommand("check", "differential checks, one verdict per line");
  common(check_cmd, true);
  check_cmd->add_option("--count", s.count, "check this many generated programs instead of the input");
  check_cmd->add_option("--size", s.size, "maximum generated size");
  check_cmd->add_flag("--audit", s.audit, "also run the invariant audits");
  check_cmd->add_flag("--shrink", s.shrink, "shrink failing programs");
  auto* gen_cmd = app.add_subcommand("gen", "print generated programs");
  common(gen_cmd, false);
  gen_cmd->add_option("--count", s.count, "number of programs (default 10)");
  gen_cmd->add_option("--size", s.size, "maximum size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (const char* env = std::getenv("NEEDSEM_SEED")) {
    try {
      s.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "NEEDSEM_SEED must be an unsigned integer\n";
      return kUsage;
    }
  }
  s.mode = *mode_from_string(s.mode_name);

  int status = kOk;
  try {
    run_with_stack([&] {
      if (*parse_cmd) status = cmd_parse(s);
      if (*reduce_cmd) status = cmd_reduce(s);
      if (*eval_cmd) status = cmd_eval(s);
      if (*check_cmd) status = cmd_check(s);
      if (*gen_cmd) status = cmd_gen(s);
    });
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvariantFault& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kFault;
  }
  return status;
}
