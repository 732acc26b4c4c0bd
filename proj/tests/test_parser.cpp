#include <random>

#include "doctest.h"
#include "stlcbf/parser.hpp"
#include "test_helpers.hpp"

using namespace stlcbf;

TEST_CASE("parse eventually over a ball goal") {
  const Formula f = parse_formula("F[0,10](ball([9,3], 0.2))");
  CHECK(f.kind() == Formula::Kind::Eventually);
  CHECK(f.interval() == Interval(0, 10));
  const Formula body = f.left();
  REQUIRE(body.kind() == Formula::Kind::Pred);
  CHECK(body.predicate().kind == Predicate::Kind::BallReach);
  CHECK(body.predicate().center == Eigen::Vector2d(9, 3));
  CHECK(body.predicate().epsilon == doctest::Approx(0.2));
}

TEST_CASE("parse true") {
  CHECK(parse_formula("true").kind() == Formula::Kind::True);
}

TEST_CASE("parse conjunction of temporal formulas") {
  const Formula f = parse_formula("G[0,5](!ball([0,0],1)) && F[2,4](ball([1,1],0.5))");
  REQUIRE(f.kind() == Formula::Kind::And);
  CHECK(f.left().kind() == Formula::Kind::Always);
  CHECK(f.left().left().kind() == Formula::Kind::NotPred);
  CHECK(f.right().kind() == Formula::Kind::Eventually);
}

TEST_CASE("parse until") {
  const Formula f = parse_formula("(half([0,1], 5)) U[1,3] (ball([2,2], 0.5))");
  REQUIRE(f.kind() == Formula::Kind::Until);
  CHECK(f.interval() == Interval(1, 3));
  CHECK(f.left().kind() == Formula::Kind::Pred);
  CHECK(f.right().kind() == Formula::Kind::Pred);
}

TEST_CASE("whitespace and scientific notation") {
  const Formula f = parse_formula("  F [ 0 , 1e1 ] ( ball( [ 9 , 3 ] , 2e-1 ) ) ");
  CHECK(f.interval().b == doctest::Approx(10.0));
  CHECK(f.left().predicate().epsilon == doctest::Approx(0.2));
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_formula("F[0,10](ball([9,3], 0.2)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() > 1);
  }
  try {
    parse_formula("F[0,10](\n  ball([9,3] 0.2))");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("fragment violations name the offending node") {
  CHECK_THROWS_WITH_AS(parse_formula("!F[0,1](ball([0,0],1))"),
                       doctest::Contains("negation of temporal operator F"),
                       FragmentError);
  CHECK_THROWS_AS(parse_formula("F[0,1](G[0,1](ball([0,0],1)))"), FragmentError);
  CHECK_THROWS_AS(parse_formula("!(ball([0,0],1))"), FragmentError);
  // Mixing a bare predicate with a temporal conjunct is outside the fragment.
  CHECK_THROWS_AS(parse_formula("ball([0,0],1) && F[0,1](ball([1,1],1))"),
                  FragmentError);
}

TEST_CASE("interval validation") {
  CHECK_THROWS_AS(parse_formula("F[5,2](ball([0,0],1))"), ParseError);
  CHECK_THROWS_AS(parse_formula("F[-1,2](ball([0,0],1))"), ParseError);
  CHECK_THROWS_AS(parse_formula("F[0,1e999](ball([0,0],1))"), ParseError);
}

TEST_CASE("predicate argument validation") {
  CHECK_THROWS_AS(parse_formula("F[0,1](ball([0,0],0))"), ParseError);
  CHECK_THROWS_AS(parse_formula("F[0,1](half([3,4],1))"), ParseError);  // not unit
  CHECK_NOTHROW(parse_formula("F[0,1](half([0.6,0.8],1))"));
  CHECK_NOTHROW(parse_formula("F[0,1](clear(obs1, 0.5))"));
}

TEST_CASE("format round-trips the worked example") {
  const std::string text = "F[0,10](ball([9,3], 0.2))";
  CHECK(format_formula(parse_formula(text)) == text);
  CHECK(format_formula(Formula::boolean_true()) == "true");
  const Formula a = parse_formula("F[0,1](ball([0,0],1))");
  const Formula b = parse_formula("G[2,3](ball([1,1],1))");
  CHECK(format_formula(Formula::conj(a, b)) ==
        "(F[0,1](ball([0,0], 1))) && (G[2,3](ball([1,1], 1)))");
}

TEST_CASE("parse-format round trip on random fragment formulas") {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    const Formula f = testutil::random_fragment_formula(rng);
    const Formula back = parse_formula(format_formula(f));
    CHECK(back == f);
  }
}

TEST_CASE("horizon") {
  CHECK(horizon(parse_formula("F[0,10](ball([9,3],0.2))")) == doctest::Approx(10));
  CHECK(horizon(parse_formula("ball([9,3],0.2)")) == doctest::Approx(0));
  CHECK(horizon(parse_formula("F[0,10](ball([9,3],1)) && F[50,60](ball([1,1],1))")) ==
        doctest::Approx(60));
  // horizon of a conjunction is the max over the conjuncts
  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Formula f1 = testutil::random_fragment_formula(rng, 1);
    const Formula f2 = testutil::random_fragment_formula(rng, 1);
    CHECK(horizon(Formula::conj(f1, f2)) ==
          doctest::Approx(std::max(horizon(f1), horizon(f2))));
  }
}
