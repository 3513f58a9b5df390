#include <doctest.h>

#include <json.hpp>

#include "needsem/textio.hpp"

using namespace needsem;

TEST_CASE("precedence and associativity") {
  Term t = parse("f x y", Mode::Letrec);
  CHECK(t.is(TermKind::App));
  CHECK(t.fn().is(TermKind::App));
  CHECK(print(parse("\\x.x y", Mode::Letrec)) == "\\x.x y");
  CHECK(print(parse("(\\x.x) y", Mode::Letrec)) == "(\\x.x) y");
  CHECK(print(parse("f (g x)", Mode::Letrec)) == "f (g x)");
  CHECK(print(parse("let x = \\y.y in x x", Mode::Let)) == "let x = \\y.y in x x");
  CHECK(print(parse("f (let x = y in x)", Mode::Let)) == "f let x = y in x");
}

TEST_CASE("pairs and projections") {
  Term t = parse("<\\x.x, #>.1", Mode::LetrecPairs);
  CHECK(t.is(TermKind::Proj));
  CHECK(t.index() == 1);
  CHECK(print(t) == "<\\x.x, #>.1");
  CHECK(print(parse("(f x).2", Mode::LetrecPairs)) == "(f x).2");
}

TEST_CASE("comments and whitespace") {
  Term t = parse("-- heading\nletrec x = f x,\n  f = \\y.y -- tail\nin x", Mode::Letrec);
  CHECK(print(t) == "letrec x = f x, f = \\y.y in x");
}

TEST_CASE("parse errors carry spans") {
  auto r = try_parse("", Mode::Letrec);
  REQUIRE(std::holds_alternative<ParseError>(r));
  r = try_parse("\\x. ", Mode::Letrec);
  REQUIRE(std::holds_alternative<ParseError>(r));
  r = try_parse("let in = x in x", Mode::Let);
  REQUIRE(std::holds_alternative<ParseError>(r));
  r = try_parse("x )", Mode::Letrec);
  REQUIRE(std::holds_alternative<ParseError>(r));
  auto e = std::get<ParseError>(r);
  CHECK(e.span.start == 2);
  CHECK(e.describe().find("offset 2") == 0);
  CHECK_THROWS_AS(parse("letrec x = x, x = x in x", Mode::Letrec), ParseFailure);
  CHECK_THROWS_AS(parse("<x, x>", Mode::Letrec), ParseFailure);
}

TEST_CASE("identifiers") {
  CHECK(is_identifier("x'"));
  CHECK(is_identifier("fooBar_2"));
  CHECK_FALSE(is_identifier("Foo"));
  CHECK_FALSE(is_identifier("in"));
  CHECK(is_keyword("letrec"));
}

TEST_CASE("trace json") {
  TraceView v;
  v.mode = "let";
  v.engine = "reduce";
  v.steps.push_back({"beta_need", parse("let y = \\z.z in y", Mode::Let)});
  v.outcome = "answer";
  v.term = parse("\\z.z", Mode::Let);
  auto j = nlohmann::json::parse(encode_trace(v));
  CHECK(j["steps"].size() == 1);
  CHECK(j["steps"][0]["rule"] == "beta_need");
  CHECK(j["outcome"] == "answer");
  CHECK(encode_trace(v) == encode_trace(v));
}
