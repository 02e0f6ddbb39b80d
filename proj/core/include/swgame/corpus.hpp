#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "swgame/game.hpp"
#include "swgame/lattice.hpp"
#include "swgame/oracle.hpp"
#include "swgame/random.hpp"

// Generators for the instances used by the tests, the acceptance suite, the
// benchmarks and the oracle-check command.
namespace swgame::corpus {

struct Case {
  std::string name;
  GameSpec spec;
  int steps;
  int nodes;
  Domain domain;

  std::shared_ptr<const Lattice> lattice() const;
};

struct SeparatedCase {
  Case instance;
  oracle::SeparatedParts parts;
};

// Small stochastic or deterministic game within the exhaustive solver's
// bounds (N <= 4, M <= 5, m1 m2 <= 4). Costs are constants in [0.1, 1],
// rewards lie in [-1, 1]; draws failing the assumption validators are
// redrawn, and the terminal reward falls back to 0 when no draw fits.
Case random_tiny(Rng& rng, const std::string& name);

// Up to 3 x 3 modes on a 40-step lattice.
Case random_medium(Rng& rng, const std::string& name);

// Game whose rewards split as f1^i + f2^j and h1^i + h2^j.
SeparatedCase random_separated(Rng& rng, const std::string& name);

// m1 = 2, m2 = 1, frozen state, f = (0, 2), h = 0, ghat = 0.5, T = 1, N = 8
// (dyadic step, so the sums involved are exact).
// Values 1.5 and 2.0 at t = 0.
Case deterministic_two_mode();

// 2 x 2 game with ghat = gcheck = 1 and terminal rewards that make the
// per-node iteration cycle.
Case free_loop();

// f = h = 0 with positive costs.
Case zero_game();

// The 2 x 2 Ornstein-Uhlenbeck instance used for the Monte Carlo checks:
// b = -x, sigma = 0.5, ghat = 0.3, gcheck = 0.5, N = 200, M = 201.
Case stochastic_acceptance();

// Hand instances plus `random_count` tiny and a few medium random cases.
std::vector<Case> standard(std::uint64_t seed, int random_count);

}  // namespace swgame::corpus
