#include <doctest.h>

#include <vector>

#include "needsem/reduction.hpp"
#include "needsem/textio.hpp"

using namespace needsem;

namespace {

std::vector<Rule> rules_of(const ReduceResult& r) {
  std::vector<Rule> out;
  for (const auto& s : r.trace.steps) out.push_back(s.rule);
  return out;
}

Rule first_rule(const char* src, Mode m) {
  Decomposition d = decompose(parse(src, m), m);
  REQUIRE(d.kind == Decomposition::Kind::Redex);
  return d.redex->rule;
}

}  // namespace

TEST_CASE("shared argument reduces as in the worked example") {
  Term t = parse("let x = (\\y.y) (\\y.y) in x", Mode::Let);
  ReduceResult r = reduce(t, Mode::Let);
  CHECK(r.outcome == OutcomeKind::Answer);
  CHECK(rules_of(r) == std::vector<Rule>{Rule::BetaNeed, Rule::Deref, Rule::Assoc, Rule::Deref});
  Term last = parse("let y = \\y.y in let x = \\y'.y' in \\y''.y''", Mode::Let);
  CHECK(alpha_eq(r.term, last));
}

TEST_CASE("rule selection") {
  CHECK(first_rule("(\\x.x) (\\y.y)", Mode::Let) == Rule::BetaNeed);
  CHECK(first_rule("(let x = \\y.y in \\z.z) (\\w.w)", Mode::Let) == Rule::Lift);
  CHECK(first_rule("let x = \\y.y in x", Mode::Let) == Rule::Deref);
  CHECK(first_rule("let x = (let y = \\z.z in \\w.w) in x", Mode::Let) == Rule::Assoc);
  CHECK(first_rule("letrec x = x in x", Mode::Letrec) == Rule::Error);
  CHECK(first_rule("letrec x = y, y = \\z.z in x", Mode::Letrec) == Rule::DerefEnv);
  CHECK(first_rule("letrec x = y, y = y in x", Mode::Letrec) == Rule::ErrorEnv);
  CHECK(first_rule("letrec x = # in x \\y.y", Mode::Letrec) == Rule::Deref);
  CHECK(first_rule("# (\\y.y)", Mode::Letrec) == Rule::ErrorBeta);
  CHECK(first_rule("<\\x.x, \\y.y>.2", Mode::LetrecPairs) == Rule::Prj);
  CHECK(first_rule("(\\x.x) ((\\y.y) (\\z.z))", Mode::Value) == Rule::BetaValue);
  CHECK(first_rule("(\\x.x) (letrec y = \\z.z in \\w.w)", Mode::Value) == Rule::LiftArg);
}

TEST_CASE("chain program") {
  Term t = parse("letrec x = f x, f = \\y.y in x", Mode::Letrec);
  ReduceResult r = reduce(t, Mode::Letrec);
  CHECK(r.steps == 6);
  CHECK(alpha_eq(r.term, parse("letrec y = #, x = #, f = \\y.y in #", Mode::Letrec)));
}

TEST_CASE("stuck and exhausted outcomes") {
  ReduceResult r = reduce(parse("<\\x.x, #> (\\y.y)", Mode::LetrecPairs), Mode::LetrecPairs);
  CHECK(r.outcome == OutcomeKind::Stuck);
  CHECK(r.fault == FaultKind::ApplyPair);
  r = reduce(parse("(\\x.x x) (\\x.x x)", Mode::Let), Mode::Let, {.max_steps = 50});
  CHECK(r.outcome == OutcomeKind::FuelExhausted);
  CHECK(r.steps == 50);
}

TEST_CASE("every reduct keeps binders distinct") {
  Term t = parse("let f = \\x.x in let g = \\y.f y in g (g f)", Mode::Let);
  ReduceOptions o;
  std::size_t checked = 0;
  o.observer = [&](const Term&, const Decomposition&, const Term& after) {
    CHECK(binders_distinct(after));
    ++checked;
  };
  ReduceResult r = reduce(t, Mode::Let, o);
  CHECK(r.outcome == OutcomeKind::Answer);
  CHECK(checked == r.steps);
}

TEST_CASE("oracle agrees with decompose") {
  const char* progs[] = {"letrec x = (\\y.y) (\\y.y) in x", "letrec x = f x, f = \\y.y in x",
                         "letrec x = x in x", "(\\x.x) (letrec y = \\z.z in y)"};
  for (const char* p : progs) {
    Mode m = Mode::Letrec;
    Term t = parse(p, m);
    NameSupply s;
    s.reserve(t);
    t = canonicalize(t, s);
    for (;;) {
      Decomposition d = decompose(t, m);
      auto keys = decompose_oracle(t, m);
      if (d.kind == Decomposition::Kind::Answer) {
        CHECK(keys.empty());
        break;
      }
      REQUIRE(keys.size() == 1);
      CHECK(keys[0] == key_of(d));
      auto st = step(t, m, s);
      REQUIRE(st);
      t = st->term;
    }
  }
}

TEST_CASE("contexts plug back") {
  Term t = parse("let x = (\\y.y) (\\y.y) in x", Mode::Let);
  Decomposition d = decompose(t, Mode::Let);
  REQUIRE(d.redex);
  CHECK(plug(d.ctx, d.redex->term) == t);
  CHECK(subterm_at(t, hole_path(d.ctx)) == d.redex->term);
}

TEST_CASE("rule names round trip") {
  for (int i = 0; i <= static_cast<int>(Rule::ErrorArg); ++i) {
    Rule r = static_cast<Rule>(i);
    CHECK(rule_from_name(rule_name(r)) == r);
  }
}
