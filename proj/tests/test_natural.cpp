#include <doctest.h>

#include "needsem/natural.hpp"
#include "needsem/textio.hpp"

using namespace needsem;

TEST_CASE("eval_let on the shared argument") {
  EvalOptions o;
  o.audit = true;
  EvalOutcome e = eval_let({}, parse("let x = (\\y.y) (\\y.y) in x", Mode::Let), {}, o);
  REQUIRE(e.ok());
  REQUIRE(e.heap.size() == 2);
  CHECK(base_name(e.heap[0].name) == "y");
  CHECK(base_name(e.heap[1].name) == "x");
  CHECK(alpha_eq(e.heap[0].value, parse("\\y.y", Mode::Let)));
  CHECK(alpha_eq(e.value, parse("\\y.y", Mode::Let)));
  CHECK(e.violations.empty());
}

TEST_CASE("eval_let respects the avoid set") {
  NameSet avoid{"x_1", "x_2"};
  EvalOutcome e = eval_let({}, parse("let x = \\y.y in x", Mode::Let), avoid);
  REQUIRE(e.ok());
  CHECK(avoid.count(e.heap[0].name) == 0);
}

TEST_CASE("eval_letrec chain") {
  EvalOutcome e = eval_letrec({}, parse("letrec x = f x, f = \\y.y in x", Mode::Letrec));
  REQUIRE(e.ok());
  REQUIRE(e.heap.size() == 3);
  int holes = 0;
  for (const auto& b : e.heap) holes += b.value.is(TermKind::BlackHole);
  CHECK(holes == 2);
  CHECK(e.value.is(TermKind::BlackHole));
}

TEST_CASE("direct cycle") {
  Term t = parse("letrec x = x in x", Mode::Letrec);
  EvalOutcome e = eval_letrec({}, t);
  REQUIRE(e.ok());
  REQUIRE(e.heap.size() == 1);
  CHECK(e.heap[0].value.is(TermKind::BlackHole));
  CHECK(e.value.is(TermKind::BlackHole));
  EvalOutcome s = eval_letrec_stuck({}, t);
  CHECK(s.status == EvalStatus::StuckCycle);
  CHECK(base_name(s.stuck_on) == "x");
}

TEST_CASE("by-name re-evaluates") {
  Term t = parse("letrec f = \\y.y in f f", Mode::Letrec);
  EvalOutcome n = eval_name({}, t);
  EvalOutcome d = eval_letrec({}, t);
  REQUIRE(n.ok());
  REQUIRE(d.ok());
  CHECK(alpha_eq(n.value, d.value));
}

TEST_CASE("by-value counterexample") {
  Term t = parse("letrec x = (\\y.\\z.y) x in x", Mode::Value);
  EvalOutcome v = eval_value({}, t);
  EvalOutcome n = eval_name({}, t);
  REQUIRE(v.ok());
  REQUIRE(n.ok());
  CHECK(v.value.is(TermKind::BlackHole));
  CHECK(n.value.is(TermKind::Lam));
}

TEST_CASE("budget and faults") {
  EvalOutcome e = eval_letrec({}, parse("(\\x.x x) (\\x.x x)", Mode::Letrec), {.budget = 100});
  CHECK(e.status == EvalStatus::BudgetExhausted);
  e = eval_letrec({}, parse("<#, #> (\\x.x)", Mode::LetrecPairs));
  CHECK(e.status == EvalStatus::TypeFault);
  e = eval_letrec({}, parse("<\\x.x, #>.1", Mode::LetrecPairs));
  REQUIRE(e.ok());
  CHECK(e.value.is(TermKind::Lam));
}

TEST_CASE("cyclic heap keeps slots") {
  CyclicHeap h({{"a", Term::black_hole()}, {"b", Term::black_hole()}});
  h.erase("a");
  CHECK_FALSE(h.contains("a"));
  CHECK(h.size() == 1);
  h.set("c", Term::black_hole());
  h.set("a", Term::lam("z", Term::var("z")));
  auto bs = h.bindings();
  REQUIRE(bs.size() == 3);
  CHECK(bs[0].name == "a");
  CHECK(bs[2].name == "c");
}
