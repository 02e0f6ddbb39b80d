#include <cmath>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "swgame/corpus.hpp"
#include "swgame/obstacle_solver.hpp"
#include "swgame/oracle.hpp"
#include "swgame/validation.hpp"

using namespace swgame;
using support::blank;
using support::expr;
using support::num;

TEST_CASE("single-player max: the two-mode instance") {
  // Hand iteration backwards from h = 0 with dt = 1/8:
  //   C = (Y1, Y2 + 0.25); Y2 = max(C2, C1 - 0.5), Y1 = max(C1, C2 - 0.5)
  //   n = 7: (0, 0.25) -> Y = (0, 0.25)
  //   n = 6: C = (0, 0.5) -> Y = (0, 0.5); ...; n = 0: C = (0, 2) -> Y = (1.5, 2).
  const GameSpec spec = support::two_mode_spec();
  const auto lat = support::grid(spec, 8, 3);
  const ValueGrid y = oracle::solve_single_player_max(spec, *lat);
  CHECK(y.at(0, 1, 0) == 1.5);
  CHECK(y.at(0, 1, 1) == 2.0);
  CHECK(y.at(7, 1, 0) == 0.0);
  CHECK(y.at(7, 1, 1) == 0.25);
  CHECK(y.at(2, 1, 0) == 1.0);
  CHECK(y.at(0, 1, 0) == support::enumerate_single_player(spec, 8, 0, true));
}

TEST_CASE("single-player max with one mode is a plain expectation") {
  GameSpecData d = blank(1, 1);
  d.reward = {{num(0.5)}};
  d.terminal = {{num(2.0)}};
  d.volatility = num(0.4);
  const GameSpec spec(d);
  const ValueGrid y = oracle::solve_single_player_max(spec, *support::grid(spec, 16, 21));
  for (int k = 0; k < 21; ++k) CHECK(y.at(0, k, 0) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("single-player oracles return zeros for a zero game") {
  GameSpecData d = blank(3, 1);
  d.volatility = num(0.3);
  const GameSpec spec(d);
  const ValueGrid up = oracle::solve_single_player_max(spec, *support::grid(spec, 10, 11));
  for (double v : up.raw()) CHECK(v == 0.0);
  GameSpecData e = blank(1, 3);
  e.volatility = num(0.3);
  const GameSpec spec2(e);
  const ValueGrid down = oracle::solve_single_player_min(spec2, *support::grid(spec2, 10, 11));
  for (double v : down.raw()) CHECK(v == 0.0);
}

TEST_CASE("single-player min: minimizer leaves the expensive mode") {
  GameSpecData d = blank(1, 2);
  d.reward = {{num(2.0), num(0.0)}};
  d.gcheck = constant_cost_matrix(2, 0.5);
  const GameSpec spec(d);
  const ValueGrid y = oracle::solve_single_player_min(spec, *support::grid(spec, 8, 3));
  const double y1 = support::enumerate_single_player(spec, 8, 0, false);
  const double y2 = support::enumerate_single_player(spec, 8, 1, false);
  CHECK(y1 == 0.5);
  CHECK(y2 == 0.0);
  CHECK(y.at(0, 1, 0) == y1);
  CHECK(y.at(0, 1, 1) == y2);
}

TEST_CASE("single-player min with one mode is a plain expectation") {
  GameSpecData d = blank(1, 1);
  d.reward = {{num(-1.0)}};
  d.terminal = {{num(0.25)}};
  const GameSpec spec(d);
  const ValueGrid y = oracle::solve_single_player_min(spec, *support::grid(spec, 4, 3));
  CHECK(y.at(0, 1, 0) == -0.75);
}

TEST_CASE("single-player oracles reject the wrong shape and free loops") {
  const GameSpec both(blank(2, 2));
  const auto lat = support::grid(both, 4, 3);
  CHECK_THROWS_AS(oracle::solve_single_player_max(both, *lat), std::invalid_argument);
  CHECK_THROWS_AS(oracle::solve_single_player_min(both, *lat), std::invalid_argument);
  GameSpecData d = blank(2, 1);
  d.ghat = constant_cost_matrix(2, 0.0);
  const GameSpec free(d);
  try {
    oracle::solve_single_player_max(free, *support::grid(free, 4, 3));
    FAIL("expected a free-loop error");
  } catch (const oracle::FixedPointError& e) {
    CHECK(e.kind() == oracle::FixedPointError::Kind::free_loop);
  }
}

TEST_CASE("single-player reductions agree with the solver") {
  Rng rng(31);
  int checked = 0;
  for (int k = 0; k < 60; ++k) {
    const corpus::Case c = corpus::random_tiny(rng, "tiny");
    const auto lat = c.lattice();
    const ValueField f = solve(c.spec, lat);
    if (c.spec.modes().m2() == 1) {
      CHECK(support::max_abs_diff(f.y, oracle::solve_single_player_max(c.spec, *lat)) <= 1e-12);
      ++checked;
    }
    if (c.spec.modes().m1() == 1) {
      CHECK(support::max_abs_diff(f.y, oracle::solve_single_player_min(c.spec, *lat)) <= 1e-12);
      ++checked;
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("separated: zero parts compose to zero") {
  GameSpecData d = blank(2, 2);
  d.gcheck = constant_cost_matrix(2, 2.0);
  d.volatility = num(0.3);
  const GameSpec spec(d);
  oracle::SeparatedParts parts{{num(0), num(0)}, {num(0), num(0)}, {num(0), num(0)}, {num(0), num(0)}};
  const ValueGrid y = oracle::solve_separated(spec, *support::grid(spec, 10, 11), parts);
  for (double v : y.raw()) CHECK(v == 0.0);
}

TEST_CASE("separated: prohibitive player-2 costs leave player 1's values") {
  GameSpecData d = blank(2, 2);
  d.reward = {{num(0.0), num(0.0)}, {num(2.0), num(2.0)}};
  d.ghat = constant_cost_matrix(2, 0.5);
  d.gcheck = constant_cost_matrix(2, 10.0);
  const GameSpec spec(d);
  const auto lat = support::grid(spec, 8, 3);
  oracle::SeparatedParts parts{{num(0), num(2)}, {num(0), num(0)}, {num(0), num(0)}, {num(0), num(0)}};
  const ValueGrid y = oracle::solve_separated(spec, *lat, parts);
  // Player 1 alone on (f1, h1, ghat), by enumeration.
  const GameSpec alone = support::two_mode_spec();
  const double e1 = support::enumerate_single_player(alone, 8, 0, true);
  const double e2 = support::enumerate_single_player(alone, 8, 1, true);
  for (int j = 0; j < 2; ++j) {
    CHECK(y.at(0, 1, spec.modes().index({0, j})) == e1);
    CHECK(y.at(0, 1, spec.modes().index({1, j})) == e2);
  }
  CHECK(e1 == 1.5);
  CHECK(e2 == 2.0);
}

TEST_CASE("separated: declared parts must match the spec") {
  GameSpecData d = blank(2, 2);
  d.reward = {{num(0.0), num(0.0)}, {num(2.0), num(2.1)}};
  const GameSpec spec(d);
  oracle::SeparatedParts parts{{num(0), num(2)}, {num(0), num(0)}, {num(0), num(0)}, {num(0), num(0)}};
  CHECK_THROWS_AS(oracle::solve_separated(spec, *support::grid(spec, 4, 3), parts), std::invalid_argument);
}

TEST_CASE("separated composition agrees with the solver") {
  Rng rng(17);
  for (int k = 0; k < 12; ++k) {
    const corpus::SeparatedCase sc = corpus::random_separated(rng, "sep");
    const auto lat = sc.instance.lattice();
    const ValueField f = solve(sc.instance.spec, lat);
    CHECK(support::max_abs_diff(f.y, oracle::solve_separated(sc.instance.spec, *lat, sc.parts)) <= 1e-8);
  }
}

TEST_CASE("exhaustive solver agrees with the solver on tiny instances") {
  Rng rng(23);
  for (int k = 0; k < 30; ++k) {
    const corpus::Case c = corpus::random_tiny(rng, "tiny");
    CAPTURE(k);
    const auto lat = c.lattice();
    CHECK(support::max_abs_diff(solve(c.spec, lat).y, oracle::exhaustive_tree_value(c.spec, *lat)) <= 1e-12);
  }
}

TEST_CASE("exhaustive solver without active obstacles is a plain expectation") {
  GameSpecData d = blank(2, 2);
  d.reward = {{expr("x"), num(0.1)}, {expr("-x"), expr("0.2*x*x")}};
  d.terminal = {{expr("tanh(x)"), num(0.0)}, {num(0.0), num(0.3)}};
  d.ghat = constant_cost_matrix(2, 50.0);
  d.gcheck = constant_cost_matrix(2, 60.0);
  d.volatility = num(0.5);
  const GameSpec spec(d);
  const auto lat = support::grid(spec, 4, 5, Domain{-1, 1});
  const ValueGrid y = oracle::exhaustive_tree_value(spec, *lat);
  // Independent backward expectation straight from the stencils.
  const int N = lat->steps();
  const int M = lat->nodes();
  for (ModePair p : spec.modes().pairs()) {
    std::vector<double> v(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k) v[static_cast<std::size_t>(k)] = spec.terminal(p)(spec.horizon(), lat->state(k));
    for (int n = N - 1; n >= 0; --n) {
      std::vector<double> next(static_cast<std::size_t>(M));
      for (int k = 0; k < M; ++k) {
        const Stencil& s = lat->stencil(n, k);
        const double lo = v[static_cast<std::size_t>(std::max(k - 1, 0))];
        const double hi = v[static_cast<std::size_t>(std::min(k + 1, M - 1))];
        next[static_cast<std::size_t>(k)] =
            s.down * lo + s.stay * v[static_cast<std::size_t>(k)] + s.up * hi + spec.reward(p)(lat->time(n), lat->state(k)) * lat->dt();
      }
      v = next;
    }
    for (int k = 0; k < M; ++k) {
      CHECK(y.at(0, k, spec.modes().index(p)) == doctest::Approx(v[static_cast<std::size_t>(k)]).epsilon(1e-13));
    }
  }
}

TEST_CASE("exhaustive solver exposes the free loop") {
  const corpus::Case c = corpus::free_loop();
  const auto samples = grid_samples(c.spec, c.steps, c.nodes, c.domain);
  CHECK_FALSE(validate_no_free_loop(c.spec, samples).passed());
  try {
    oracle::exhaustive_tree_value(c.spec, *c.lattice());
    FAIL("expected the exhaustive solver to fail");
  } catch (const oracle::FixedPointError& e) {
    CHECK(e.kind() != oracle::FixedPointError::Kind::free_loop);
  }
}

TEST_CASE("exhaustive solver enforces the tiny bounds") {
  const GameSpec spec(blank(2, 2));
  CHECK_THROWS_AS(oracle::exhaustive_tree_value(spec, *support::grid(spec, 5, 3)), std::invalid_argument);
  CHECK_THROWS_AS(oracle::exhaustive_tree_value(spec, *support::grid(spec, 4, 7)), std::invalid_argument);
  const GameSpec big(blank(3, 2));
  CHECK_THROWS_AS(oracle::exhaustive_tree_value(big, *support::grid(big, 2, 3)), std::invalid_argument);
}

TEST_CASE("corpus instances pass the validators") {
  for (const corpus::Case& c : corpus::standard(3, 25)) {
    CAPTURE(c.name);
    const auto samples = grid_samples(c.spec, c.steps, c.nodes, c.domain);
    CHECK(validate_assumptions(c.spec, samples).passed());
    CHECK_NOTHROW(c.lattice());
  }
}
