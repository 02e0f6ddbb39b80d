#include <cmath>
#include <string>

#include "doctest.h"
#include "swgame/expression.hpp"
#include "swgame/random.hpp"

using swgame::EvaluationError;
using swgame::ParseError;
using swgame::ScalarField;

TEST_CASE("parse: constant zero") {
  const ScalarField f = ScalarField::parse("0");
  for (double t : {0.0, 0.5, 1.0}) {
    for (double x : {-3.0, 0.0, 7.5}) CHECK(f(t, x) == 0.0);
  }
  CHECK(f.is_constant());
  CHECK(f.constant_value() == 0.0);
}

TEST_CASE("parse: identity in x") {
  const ScalarField f = ScalarField::parse("x");
  CHECK(f(0.3, 2.5) == 2.5);
  CHECK(f.depends_on_x());
  CHECK_FALSE(f.depends_on_t());
}

TEST_CASE("parse: arithmetic") {
  CHECK(ScalarField::parse("1 + 0.5*x*x")(0.0, 2.0) == 3.0);
  CHECK(ScalarField::parse("t - x / 4")(1.0, 2.0) == 0.5);
  CHECK(ScalarField::parse("2^3^2")(0, 0) == 512.0);
  CHECK(ScalarField::parse("-x^2")(0, 3.0) == -9.0);
  CHECK(ScalarField::parse("(1 + 2) * 3")(0, 0) == 9.0);
  CHECK(ScalarField::parse("1e-3 * 2")(0, 0) == doctest::Approx(2e-3));
}

TEST_CASE("parse: functions and pi") {
  CHECK(ScalarField::parse("sin(x)")(0, 0.7) == std::sin(0.7));
  CHECK(ScalarField::parse("cos(t)")(0.7, 0) == std::cos(0.7));
  CHECK(ScalarField::parse("exp(x)")(0, 1.3) == std::exp(1.3));
  CHECK(ScalarField::parse("log(x)")(0, 1.3) == std::log(1.3));
  CHECK(ScalarField::parse("sqrt(x)")(0, 2.0) == std::sqrt(2.0));
  CHECK(ScalarField::parse("tanh(x)")(0, 0.4) == std::tanh(0.4));
  CHECK(ScalarField::parse("abs(x)")(0, -2.5) == 2.5);
  CHECK(ScalarField::parse("min(x, t)")(1.0, 2.0) == 1.0);
  CHECK(ScalarField::parse("max(x, t)")(1.0, 2.0) == 2.0);
  CHECK(ScalarField::parse("pow(x, 3)")(0, 2.0) == 8.0);
  CHECK(ScalarField::parse("pi")(0, 0) == doctest::Approx(3.141592653589793));
}

TEST_CASE("parse errors carry a position") {
  const auto position_of = [](const char* text) -> std::size_t {
    try {
      ScalarField::parse(text);
    } catch (const ParseError& e) {
      return e.position();
    }
    FAIL("no parse error for " << text);
    return 0;
  };
  CHECK(position_of("1 + * 2") == 4);
  CHECK(position_of("y + 1") == 0);
  CHECK_THROWS_AS(ScalarField::parse(""), ParseError);
  CHECK_THROWS_AS(ScalarField::parse("sin(x"), ParseError);
  CHECK_THROWS_AS(ScalarField::parse("foo(x)"), ParseError);
  CHECK_THROWS_AS(ScalarField::parse("1 2"), ParseError);
  CHECK_THROWS_AS(ScalarField::parse("min(x)"), ParseError);
}

TEST_CASE("evaluation errors") {
  CHECK_THROWS_AS(ScalarField::parse("1 / x")(0, 0.0), EvaluationError);
  CHECK_THROWS_AS(ScalarField::parse("log(x)")(0, -1.0), EvaluationError);
  CHECK_THROWS_AS(ScalarField::parse("exp(x)")(0, 1000.0), EvaluationError);
  CHECK_THROWS_AS(ScalarField::parse("sqrt(x)")(0, -1.0), EvaluationError);
}

TEST_CASE("composition helpers") {
  const ScalarField a = ScalarField::parse("sin(x)");
  const ScalarField b = ScalarField::parse("t*t");
  const ScalarField sum = a + b;
  CHECK(sum(0.5, 0.3) == std::sin(0.3) + 0.25);
  const ScalarField scaled = 2.0 * a;
  CHECK(scaled(0.0, 0.3) == 2.0 * std::sin(0.3));
}

namespace {

// Random expression text from a small grammar.
std::string random_expression(swgame::Rng& rng, int depth) {
  if (depth == 0 || rng.uniform() < 0.25) {
    switch (rng.uniform_int(0, 3)) {
      case 0: return "x";
      case 1: return "t";
      case 2: return std::to_string(rng.uniform_int(1, 9));
      default: return "0.37";
    }
  }
  const std::string a = random_expression(rng, depth - 1);
  const std::string b = random_expression(rng, depth - 1);
  switch (rng.uniform_int(0, 8)) {
    case 0: return a + " + " + b;
    case 1: return a + " - " + b;
    case 2: return a + " * " + b;
    case 3: return "(" + a + ") / (2 + abs(" + b + "))";
    case 4: return "sin(" + a + ")";
    case 5: return "cos(" + a + ") ^ 2";
    case 6: return "max(" + a + ", " + b + ")";
    case 7: return "-(" + a + ")";
    default: return "tanh(" + a + ")";
  }
}

}  // namespace

TEST_CASE("canonical form round-trips") {
  swgame::Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::string text = random_expression(rng, 4);
    const ScalarField f = ScalarField::parse(text);
    const std::string canonical = f.to_string();
    const ScalarField g = ScalarField::parse(canonical);
    CHECK(g.to_string() == canonical);
    for (double x : {-1.3, 0.0, 0.8}) {
      for (double t : {0.0, 0.6}) {
        CHECK(f(t, x) == g(t, x));
      }
    }
  }
}

TEST_CASE("negative and extreme constants round-trip") {
  for (double v : {-0.1, -3.0, 1e-300, 0.1 + 0.2, -1.0 / 3.0}) {
    const ScalarField f = ScalarField::constant(v);
    CHECK(ScalarField::parse(f.to_string())(0, 0) == v);
  }
}
