#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "swgame/game.hpp"
#include "swgame/lattice.hpp"
#include "swgame/value_field.hpp"

namespace support {

using namespace swgame;

inline ScalarField expr(const char* text) { return ScalarField::parse(text); }
inline ScalarField num(double v) { return ScalarField::constant(v); }

// Zero rewards, unit costs, frozen state on [0, 1].
inline GameSpecData blank(int m1, int m2) {
  GameSpecData d;
  d.modes = ModeSpace(m1, m2);
  d.reward = constant_matrix(m1, m2, 0.0);
  d.terminal = constant_matrix(m1, m2, 0.0);
  d.ghat = constant_cost_matrix(m1, 1.0);
  d.gcheck = constant_cost_matrix(m2, 1.0);
  d.drift = num(0.0);
  d.volatility = num(0.0);
  return d;
}

inline std::shared_ptr<const Lattice> grid(const GameSpec& spec, int steps, int nodes,
                                           std::optional<Domain> domain = std::nullopt) {
  return std::make_shared<const Lattice>(build_lattice(spec, steps, nodes, domain));
}

inline double max_abs_diff(const ValueGrid& a, const ValueGrid& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.raw().size(); ++k) worst = std::max(worst, std::fabs(a.raw()[k] - b.raw()[k]));
  return worst;
}

// The 1.5 / 2.0 instance: player 1 alone, f = (0, 2), h = 0, ghat = 0.5.
inline GameSpec two_mode_spec() {
  GameSpecData d = blank(2, 1);
  d.reward = {{num(0.0)}, {num(2.0)}};
  d.ghat = constant_cost_matrix(2, 0.5);
  return GameSpec(std::move(d));
}

// Value of a frozen-state single-player game by enumerating every mode
// sequence u_0 .. u_{N-1} (u_n in force on (t_n, t_{n+1}]). Direct switching
// costs only, which is exact for two modes.
inline double enumerate_single_player(const GameSpec& spec, int steps, int start_mode, bool maximize) {
  const int m = maximize ? spec.modes().m1() : spec.modes().m2();
  const double x = spec.x0();
  const double dt = (spec.horizon() - spec.start_time()) / steps;
  const auto pair = [&](int mode) { return maximize ? ModePair{mode, 0} : ModePair{0, mode}; };
  std::optional<double> best;
  std::vector<int> u(static_cast<std::size_t>(steps), 0);
  for (;;) {
    double payoff = 0.0;
    int prev = start_mode;
    for (int n = 0; n < steps; ++n) {
      const double t = spec.start_time() + n * dt;
      const int cur = u[static_cast<std::size_t>(n)];
      if (cur != prev) payoff += maximize ? -spec.ghat(prev, cur)(t, x) : spec.gcheck(prev, cur)(t, x);
      payoff += spec.reward(pair(cur))(t, x) * dt;
      prev = cur;
    }
    payoff += spec.terminal(pair(prev))(spec.horizon(), x);
    if (!best || (maximize ? payoff > *best : payoff < *best)) best = payoff;
    int k = 0;
    while (k < steps && ++u[static_cast<std::size_t>(k)] == m) u[static_cast<std::size_t>(k++)] = 0;
    if (k == steps) break;
  }
  return *best;
}

}  // namespace support
