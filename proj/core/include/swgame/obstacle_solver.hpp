#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "swgame/game.hpp"
#include "swgame/lattice.hpp"
#include "swgame/value_field.hpp"

namespace swgame {

// The per-node fixed point did not settle within the sweep cap. Usually a
// free switching loop or near-zero costs.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int layer, int node, double residual)
      : std::runtime_error(what), layer_(layer), node_(node), residual_(residual) {}
  int layer() const noexcept { return layer_; }  // -1 when not known
  int node() const noexcept { return node_; }
  double residual() const noexcept { return residual_; }

 private:
  int layer_;
  int node_;
  double residual_;
};

// Best switch for one player: the barrier value and the chosen target mode
// (lowest index among ties), or an infinite sentinel and target -1 when the
// player has a single mode.
struct BarrierChoice {
  double value;
  int target;
};

// values: all mode-pair values at one node, indexed by ModeSpace::index.
BarrierChoice lower_choice(std::span<const double> values, const CostTable& costs, const ModeSpace& modes, ModePair p);
BarrierChoice upper_choice(std::span<const double> values, const CostTable& costs, const ModeSpace& modes, ModePair p);

// max_{k != i} (Y^{k,j} - ghat^{i,k}), -inf when m1 = 1.
inline double lower_obstacle(std::span<const double> values, const CostTable& costs, const ModeSpace& modes,
                             ModePair p) {
  return lower_choice(values, costs, modes, p).value;
}
// min_{l != j} (Y^{i,l} + gcheck^{j,l}), +inf when m2 = 1.
inline double upper_obstacle(std::span<const double> values, const CostTable& costs, const ModeSpace& modes,
                             ModePair p) {
  return upper_choice(values, costs, modes, p).value;
}

struct FixedPointOptions {
  double tolerance = 1e-12;
  int max_sweeps = 0;  // 0 selects 10 * m1 * m2
};

struct LayerSolution {
  std::vector<double> values;  // node-major, pairs inner
  std::vector<double> dk_plus;
  std::vector<double> dk_minus;
  double residual = 0.0;  // worst node
  int sweeps = 0;         // worst node
  std::size_t slow_nodes = 0;
};

// Solves W = max(L(W), min(U(W), C)) independently at every node by
// synchronous sweeps started from W = C. `continuation` holds C node-major
// (nodes * pairs entries); `costs` has one table per node.
// Throws ConvergenceError (layer -1) naming the worst node.
LayerSolution solve_layer_fixed_point(const ModeSpace& modes, std::span<const double> continuation,
                                      std::span<const CostTable> costs, const FixedPointOptions& options = {});

// Backward induction from Y_N = h with C = E_n[Y_{n+1}] + f(t_n, x) dt.
ValueField solve(const GameSpec& spec, std::shared_ptr<const Lattice> lattice, const FixedPointOptions& options = {});

// Re-solves component p alone between the cached barriers of `field` and
// returns the largest deviation from the stored values.
double dynkin_consistency_check(const ValueField& field, ModePair p);

struct SkorokhodResiduals {
  double lower = 0.0;  // max dK+ (Y - L)
  double upper = 0.0;  // max dK- (U - Y)
};

SkorokhodResiduals skorokhod_residuals(const ValueField& field);

// max over the grid of L - Y and Y - U (<= 0 when the sandwich holds).
double barrier_sandwich_excess(const ValueField& field);

}  // namespace swgame
