#include <doctest.h>

#include <json.hpp>

#include "needsem/harness.hpp"
#include "needsem/textio.hpp"

using namespace needsem;

TEST_CASE("generator is deterministic, closed and sized") {
  for (Mode m : {Mode::Let, Mode::Letrec, Mode::LetrecPairs, Mode::Value}) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      GenConfig g;
      g.seed = seed;
      g.mode = m;
      Term t = gen_program(g);
      CHECK(is_closed(t));
      CHECK(size(t) <= g.max_size);
      CHECK_FALSE(validate(t, m).has_value());
      CHECK(print(gen_program(g)) == print(t));
    }
  }
}

TEST_CASE("checks agree on the worked examples") {
  CheckOptions o;
  o.audit = true;
  Term a = parse("let x = (\\y.y) (\\y.y) in x", Mode::Let);
  CHECK(check_equiv_acyclic(a, o).agree());
  CHECK(check_instrumented(a, Mode::Let, o).agree());
  Term c = parse("letrec x = f x, f = \\y.y in x", Mode::Letrec);
  for (const auto& v : check_all(c, Mode::Letrec, o)) CHECK_MESSAGE(v.agree(), encode_verdict(v));
}

TEST_CASE("divergence is inconclusive, never a disagreement") {
  Term t = parse("(\\x.x x) (\\x.x x)", Mode::Letrec);
  CheckOptions o;
  o.budgets.steps = o.budgets.depth = 200;
  Verdict v = check_equiv_cyclic(t, Mode::Letrec, o);
  CHECK(v.status == VerdictStatus::Inconclusive);
  CHECK_FALSE(v.failed());
}

TEST_CASE("by-value counterexample satisfies the implication") {
  Verdict v = check_cbv_implies_cbn(parse("letrec x = (\\y.\\z.y) x in x", Mode::Value));
  CHECK(v.agree());
}

TEST_CASE("cyclic result match ignores binding order") {
  Term ans = parse("letrec a = \\z.z, b = # in a", Mode::Letrec);
  std::vector<Binding> heap{{"q", Term::black_hole()}, {"p", parse("\\w.w", Mode::Letrec)}};
  CHECK(cyclic_result_match(ans, heap, Term::var("p")));
  CHECK_FALSE(cyclic_result_match(ans, heap, Term::var("q")));
}

TEST_CASE("seeded bug is found and shrunk") {
  CheckOptions o;
  o.audit = true;
  o.reduction.mutation = Mutation::DerefWrongValue;
  auto fails = [&](const Term& t) { return check_equiv_acyclic(t, o).failed(); };
  Term found;
  for (std::uint64_t seed = 0; seed < 500 && !found; ++seed) {
    GenConfig g;
    g.seed = seed;
    g.mode = Mode::Let;
    Term t = gen_program(g);
    if (fails(t)) found = t;
  }
  REQUIRE(found);
  Term w = shrink(found, fails);
  CHECK(fails(w));
  CHECK(is_closed(w));
  CHECK(size(w) <= 10);
}

TEST_CASE("copy-free deref breaks hygiene") {
  CheckOptions o;
  o.audit = true;
  o.reduction.mutation = Mutation::DerefNoCopy;
  Verdict v = check_equiv_acyclic(parse("let f = \\x.x in f f", Mode::Let), o);
  CHECK(v.failed());
}

TEST_CASE("verdict json") {
  Verdict v = check_equiv_acyclic(parse("let x = \\y.y in x", Mode::Let));
  auto j = nlohmann::json::parse(encode_verdict(v));
  CHECK(j["status"] == "agree");
  CHECK(j["agree"] == true);
  CHECK(j["runs"].size() >= 2);
}
