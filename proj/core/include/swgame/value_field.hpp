#pragma once

#include <memory>
#include <span>
#include <vector>

#include "swgame/game.hpp"
#include "swgame/lattice.hpp"

namespace swgame {

// Dense (layer, node, mode pair) table; layers run 0..steps inclusive.
class ValueGrid {
 public:
  ValueGrid() = default;
  ValueGrid(int steps, int nodes, int pairs, double fill = 0.0);

  int steps() const noexcept { return steps_; }
  int nodes() const noexcept { return nodes_; }
  int pairs() const noexcept { return pairs_; }

  double& at(int n, int node, int pair) { return data_[offset(n, node, pair)]; }
  double at(int n, int node, int pair) const { return data_[offset(n, node, pair)]; }

  // All mode-pair values at one node.
  std::span<const double> node_values(int n, int node) const {
    return {data_.data() + offset(n, node, 0), static_cast<std::size_t>(pairs_)};
  }
  std::span<double> node_values(int n, int node) {
    return {data_.data() + offset(n, node, 0), static_cast<std::size_t>(pairs_)};
  }

  const std::vector<double>& raw() const noexcept { return data_; }

 private:
  std::size_t offset(int n, int node, int pair) const noexcept {
    return (static_cast<std::size_t>(n) * static_cast<std::size_t>(nodes_) + static_cast<std::size_t>(node)) *
               static_cast<std::size_t>(pairs_) +
           static_cast<std::size_t>(pair);
  }

  int steps_ = 0;
  int nodes_ = 0;
  int pairs_ = 0;
  std::vector<double> data_;
};

// Solved value surface of the switching game on a lattice.
//
// lower/upper cache the switching barriers evaluated at the final values
// (-inf / +inf where a player has a single mode). dk_plus/dk_minus hold the
// per node-step clamp corrections of the backward step; they are zero on the
// terminal layer.
struct ValueField {
  ValueField(GameSpec spec, std::shared_ptr<const Lattice> lattice);

  GameSpec spec;
  std::shared_ptr<const Lattice> lattice;
  ValueGrid y;
  ValueGrid lower;
  ValueGrid upper;
  ValueGrid dk_plus;
  ValueGrid dk_minus;
  std::vector<double> residual;  // per layer, final fixed-point residual
  std::vector<int> sweeps;       // per layer, max sweeps over nodes
  // Node solves that needed more than m1 * m2 + 2 sweeps. Informational.
  std::size_t slow_nodes = 0;

  const ModeSpace& modes() const noexcept { return spec.modes(); }
  int steps() const noexcept { return lattice->steps(); }
  int nodes() const noexcept { return lattice->nodes(); }

  double value(int n, int node, ModePair p) const { return y.at(n, node, modes().index(p)); }
  // Value at the initial time and state node.
  double initial_value(ModePair p) const { return value(0, lattice->origin_node(), p); }
};

}  // namespace swgame
