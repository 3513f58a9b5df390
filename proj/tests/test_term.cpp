#include <doctest.h>

#include "needsem/term.hpp"
#include "needsem/textio.hpp"

using namespace needsem;

namespace {
Term lr(const char* s) { return parse(s, Mode::Letrec); }
}

TEST_CASE("free variables and closedness") {
  CHECK(free_vars(lr("\\x.x y")) == NameSet{"y"});
  CHECK(free_vars(lr("letrec f = g, g = f in f")).empty());
  CHECK(free_vars(parse("let x = x in x", Mode::Let)) == NameSet{"x"});
  CHECK(is_closed(lr("\\x.x")));
  CHECK_FALSE(is_closed(lr("x")));
  CHECK(size(lr("(\\x.x) y")) == 4);
}

TEST_CASE("letrec rejects duplicate binders") {
  CHECK_THROWS_AS(Term::letrec({{"x", Term::black_hole()}, {"x", Term::black_hole()}},
                               Term::var("x")),
                  std::invalid_argument);
}

TEST_CASE("alpha equivalence") {
  CHECK(alpha_eq(lr("\\x.x"), lr("\\y.y")));
  CHECK_FALSE(alpha_eq(lr("\\x.\\y.x"), lr("\\x.\\y.y")));
  CHECK(alpha_eq(lr("letrec a = b, b = a in a"), lr("letrec p = q, q = p in p")));
  CHECK_FALSE(alpha_eq(lr("letrec a = b, b = a in a"), lr("letrec p = q, q = p in q")));
  CHECK_FALSE(alpha_eq(lr("\\x.y"), lr("\\x.z")));
  CHECK(alpha_hash(lr("\\x.x x")) == alpha_hash(lr("\\z.z z")));
  CHECK(alpha_hash(lr("\\x.y"), true) == alpha_hash(lr("\\x.z"), true));
}

TEST_CASE("substitution refuses capture") {
  Term t = lr("\\y.x y");
  CHECK(print(subst_var(t, "w", "x")) == "\\y.w y");
  CHECK_THROWS_AS(subst_var(t, "y", "x"), InvariantFault);
}

TEST_CASE("classification per mode") {
  CHECK(classify(lr("\\x.x"), Mode::Letrec) == Classification::Value);
  CHECK(classify(lr("letrec x = \\y.y in \\z.z"), Mode::Letrec) == Classification::Answer);
  CHECK(is_good_answer(lr("letrec x = \\y.y in \\z.z")));
  CHECK_FALSE(is_good_answer(lr("letrec x = # in #")));
  CHECK(classify(lr("letrec x = # in #"), Mode::Letrec) == Classification::Answer);
  CHECK(classify(lr("x"), Mode::Letrec) == Classification::Neither);
  CHECK(is_value(parse("<\\x.x, #>", Mode::LetrecPairs), Mode::LetrecPairs));
  CHECK_FALSE(is_value(parse("<x, #>", Mode::LetrecPairs), Mode::LetrecPairs));
}

TEST_CASE("mode validation") {
  CHECK(validate(lr("letrec x = x in x"), Mode::Let).has_value());
  CHECK_FALSE(validate(parse("let x = x in x", Mode::Let), Mode::Let).has_value());
  CHECK(validate(parse("<#, #>", Mode::LetrecPairs), Mode::Letrec).has_value());
}

TEST_CASE("fresh names share the counter and avoid reserved names") {
  NameSupply s;
  s.reserve(lr("\\x_1.x_1"));
  Name a = s.fresh("x");
  Name b = s.fresh("y_7");
  CHECK(a != "x_1");
  CHECK(base_name(a) == "x");
  CHECK(base_name(b) == "y");
  CHECK(a != b);
  CHECK(s.fresh("x", NameSet{"x_3", "x_4"}) != "x_3");
}

TEST_CASE("canonicalize makes binders distinct") {
  NameSupply s;
  Term t = lr("(\\x.x) (\\x.x)");
  s.reserve(t);
  CHECK_FALSE(binders_distinct(t));
  Term c = canonicalize(t, s);
  CHECK(binders_distinct(c));
  CHECK(alpha_eq(c, t));
  CHECK(print(c).rfind("(\\x.x) \\x_", 0) == 0);
}

TEST_CASE("freshen renames every binder") {
  NameSupply s;
  Term t = lr("\\x.x z");
  s.reserve(t);
  Term f = freshen_binders(t, s);
  CHECK(f.name() != "x");
  CHECK(alpha_eq(f, t));
  CHECK(free_vars(f) == NameSet{"z"});
}
