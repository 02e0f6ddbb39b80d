#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "swgame/lattice.hpp"
#include "swgame/random.hpp"
#include "swgame/strategies.hpp"
#include "swgame/value_field.hpp"

namespace swgame {

enum class Mover { none, player1, player2 };

struct CoupledEntry {
  int step = 0;
  ModePair mode;
  Mover mover = Mover::none;
  bool operator==(const CoupledEntry&) const = default;
};

// Merged joint control. entries[0] is (start, initial pair); r[k] and s[k]
// count the player-1 and player-2 switches among entries 1..k.
struct CoupledControl {
  int horizon = 0;
  std::vector<CoupledEntry> entries;
  std::vector<int> r;
  std::vector<int> s;

  int start() const { return entries.front().step; }
  int switches() const { return static_cast<int>(entries.size()) - 1; }
};

// Player 1's switch goes first when both controls switch at the same step.
// Throws std::invalid_argument on mismatched start steps or horizons.
CoupledControl couple(const SwitchingControl& alpha, const SwitchingControl& beta);

// Joint mode in force on (t_{n-1}, t_n]: the mode after the last switch
// strictly before step n, and the initial pair at the start step.
ModePair mode_at(const CoupledControl& c, int n);

// Sum over the first `upto` switches of ghat - gcheck at (t_rho, x_rho).
// upto < 0 means all switches.
double cumulative_cost(const GameSpec& spec, const CoupledControl& c, const Path& path, int upto = -1);

// Largest |partial cost sum| over the switch sequence.
double admissibility_check(const GameSpec& spec, const CoupledControl& c, const Path& path);

// sum_n f^{u(n+1)}(t_n, x_n) dt - total cost + h^{u(N)}(x_N), from the
// control's start step.
double pathwise_payoff(const GameSpec& spec, const Path& path, const CoupledControl& c);

struct SimulationOptions {
  int paths = 1000;
  std::uint64_t seed = 1;
  int workers = 1;
  int max_switches = 0;  // 0 selects 10 * m1 * m2
};

struct ValueEstimate {
  ModePair start;
  double value = 0.0;  // solved Y at (s, x0)
  double mean = 0.0;
  double std_error = 0.0;
  int paths = 0;
  std::uint64_t seed = 0;
  std::map<int, int> switch_histogram;  // switches per path -> paths
  double max_abs_cost = 0.0;            // worst admissibility figure
};

// Averages the equilibrium payoff over independent Euler paths. Path k uses
// seed stream_seed(options.seed, k). Results do not depend on the worker
// count. Throws SwitchCapError naming the first offending path.
ValueEstimate mc_value_estimate(const GameSpec& spec, const ValueField& field, ModePair start,
                                const SimulationOptions& options);

enum class Perturbation { remove, delay, insert };

const char* to_string(Perturbation kind) noexcept;

// One deviation applied to an equilibrium control, with parameters drawn
// from `rng`. Falls back to insertion when there is nothing to remove or
// delay. Returns a valid control.
SwitchingControl perturb(const SwitchingControl& control, Perturbation kind, int modes, Rng& rng);

struct DeviationOutcome {
  Side side = Side::player1;
  int trial = 0;
  Perturbation kind = Perturbation::remove;
  double mean = 0.0;
  double std_error = 0.0;
  double bound = 0.0;   // Y + 3 se + tol for player 1, Y - 3 se - tol for player 2
  double margin = 0.0;  // >= 0 when the assertion holds
  bool passed = false;
};

struct DeviationReport {
  ModePair start;
  double value = 0.0;
  double tolerance = 0.0;
  std::vector<DeviationOutcome> outcomes;
  double worst_margin_player1 = 0.0;
  double worst_margin_player2 = 0.0;
  int failures = 0;
};

// For each trial, perturbs the equilibrium control of one player path by
// path and plays it against the opponent's non-anticipative best response.
// Player-1 deviations must score at most Y + 3 se + tolerance, player-2
// deviations at least Y - 3 se - tolerance. tolerance < 0 selects
// 0.02 (1 + |Y|).
DeviationReport deviation_battery(const GameSpec& spec, const ValueField& field, ModePair start, int trials,
                                  const SimulationOptions& options, double tolerance = -1.0);

}  // namespace swgame
