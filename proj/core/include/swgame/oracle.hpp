#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "swgame/game.hpp"
#include "swgame/lattice.hpp"
#include "swgame/value_field.hpp"

// Reference solvers that share no code with the obstacle solver. They are
// used to certify it on special cases.
namespace swgame::oracle {

class FixedPointError : public std::runtime_error {
 public:
  enum class Kind { none, non_unique, free_loop };
  FixedPointError(const std::string& what, Kind kind, int layer, int node)
      : std::runtime_error(what), kind_(kind), layer_(layer), node_(node) {}
  Kind kind() const noexcept { return kind_; }
  int layer() const noexcept { return layer_; }
  int node() const noexcept { return node_; }

 private:
  Kind kind_;
  int layer_;
  int node_;
};

// Player 1 alone (m2 = 1). Each layer is closed in one pass:
// Y^i = max_k (C^k - D^{ik}), D the cheapest switching cost from i to k.
ValueGrid solve_single_player_max(const GameSpec& spec, const Lattice& lattice);

// Player 2 alone (m1 = 1): Y^j = min_l (C^l + D^{jl}).
ValueGrid solve_single_player_min(const GameSpec& spec, const Lattice& lattice);

struct SeparatedParts {
  std::vector<ScalarField> f1;  // m1 entries
  std::vector<ScalarField> f2;  // m2 entries
  std::vector<ScalarField> h1;
  std::vector<ScalarField> h2;
};

// Solves each player's problem on its own parts and returns Y1^i + Y2^j.
// Throws std::invalid_argument when f or h differ from the declared sums by
// more than 1e-12 at a lattice node.
ValueGrid solve_separated(const GameSpec& spec, const Lattice& lattice, const SeparatedParts& parts);

// Tiny-instance bounds for the exhaustive solver.
inline constexpr int tiny_max_steps = 4;
inline constexpr int tiny_max_nodes = 5;
inline constexpr int tiny_max_pairs = 4;

// At every node, tries every assignment of a move (stay, player-1 switch to
// some mode, player-2 switch to some mode) to each pair, resolves the values
// it implies and keeps those satisfying W = max(L(W), min(U(W), C)).
// Throws FixedPointError when a node has no such W or more than one.
ValueGrid exhaustive_tree_value(const GameSpec& spec, const Lattice& lattice);

}  // namespace swgame::oracle
