#include <doctest.h>

#include "needsem/instrumented.hpp"
#include "needsem/textio.hpp"

using namespace needsem;

TEST_CASE("ieval_let on the shared argument") {
  IEvalOptions o;
  o.audit = true;
  Term t = parse("let x = (\\y.y) (\\y.y) in x", Mode::Let);
  IEvalOutcome r = ieval_let({}, t, o);
  REQUIRE(r.ok());
  CHECK(r.violations.empty());
  Term hole = Term::var("hole");
  Term ctx = plug(comp(r.sigma), hole);
  CHECK(alpha_eq(ctx, parse("let y = \\y.y in let x = \\y.y in hole", Mode::Let)));
  EvalOutcome e = eval_let({}, t, {});
  auto d = decomp(r.sigma);
  REQUIRE(d.size() == e.heap.size());
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(alpha_eq(d[i].value, e.heap[i].value));
  CHECK(alpha_eq(r.value, e.value));
}

TEST_CASE("ieval_letrec chain runs Var_env and Err_var") {
  IEvalOptions o;
  o.audit = true;
  o.record_rules = true;
  IEvalOutcome r = ieval_letrec({}, parse("letrec x = f x, f = \\y.y in x", Mode::Letrec), o);
  REQUIRE(r.ok());
  CHECK(r.violations.empty());
  CHECK(r.value.is(TermKind::BlackHole));
  bool env = false, err = false;
  for (const auto& ev : r.events) {
    env = env || ev.rule == "Var_env";
    err = err || ev.rule == "Err_var";
  }
  CHECK(env);
  CHECK(err);
  auto d = decomp(r.sigma);
  CHECK(d.size() == 3);
}

TEST_CASE("direct cycle") {
  IEvalOutcome r = ieval_letrec({}, parse("letrec x = x in x", Mode::Letrec));
  REQUIRE(r.ok());
  CHECK(r.value.is(TermKind::BlackHole));
  auto d = decomp(r.sigma);
  REQUIRE(d.size() == 1);
  CHECK(d[0].value.is(TermKind::BlackHole));
}

TEST_CASE("comp and decomp of hand-built heaps") {
  StructuredHeap s{Frame::let_bind("a", parse("\\z.z", Mode::Let)),
                   Frame::app_arg(Term::var("a"))};
  CHECK(print(plug(comp(s), Term::var("h"))) == "let a = \\z.z in h a");
  CHECK(decomp(s).size() == 1);
  CHECK(lbv(s) == NameSet{"a"});
  CHECK(well_formed(s, parse("\\w.w", Mode::Let), false));
  StructuredHeap t{Frame::letrec_bind({{"p", Term::black_hole()}}),
                   Frame::letrec_bind({{"q", Term::var("p")}})};
  CHECK(flatten(t).size() == 2);
}

TEST_CASE("heap growth preorder") {
  Frame a = Frame::let_bind("a", parse("\\z.z", Mode::Let));
  Frame b = Frame::let_bind("b", parse("\\z.z", Mode::Let));
  CHECK(heap_leq({}, {a}, false));
  CHECK(heap_leq({a}, {a, b}, false));
  CHECK(heap_leq({a}, {b, a}, false));
  CHECK_FALSE(heap_leq({a, b}, {a}, false));
  Frame arg = Frame::app_arg(Term::var("a"));
  CHECK_FALSE(heap_leq({arg}, {a}, false));
  Frame g1 = Frame::letrec_bind({{"p", Term::black_hole()}});
  Frame g2 = Frame::letrec_bind({{"p", Term::black_hole()}, {"q", Term::black_hole()}});
  CHECK(heap_leq({g1}, {g2}, true));
  CHECK_FALSE(heap_leq({g2}, {g1}, true));
}

TEST_CASE("pairs") {
  IEvalOptions o;
  o.audit = true;
  IEvalOutcome r = ieval_letrec({}, parse("letrec p = <\\x.x, \\y.y> in p.2", Mode::LetrecPairs), o);
  REQUIRE(r.ok());
  CHECK(r.violations.empty());
  CHECK(r.value.is(TermKind::Lam));
}
