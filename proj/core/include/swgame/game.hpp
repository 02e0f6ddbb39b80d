#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

#include "swgame/expression.hpp"

namespace swgame {

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Joint operating mode. Indices are 0-based internally; files and reports
// print them 1-based.
struct ModePair {
  int i = 0;
  int j = 0;
  auto operator<=>(const ModePair&) const = default;
};

class ModeSpace {
 public:
  ModeSpace(int m1, int m2);

  int m1() const noexcept { return m1_; }
  int m2() const noexcept { return m2_; }
  int size() const noexcept { return m1_ * m2_; }

  int index(ModePair p) const noexcept { return p.i * m2_ + p.j; }
  ModePair pair(int index) const noexcept { return {index / m2_, index % m2_}; }
  bool contains(ModePair p) const noexcept {
    return p.i >= 0 && p.i < m1_ && p.j >= 0 && p.j < m2_;
  }
  // Lexicographic (i, j) order.
  std::vector<ModePair> pairs() const;

 private:
  int m1_;
  int m2_;
};

using FieldMatrix = std::vector<std::vector<ScalarField>>;

struct GameSpecData {
  ModeSpace modes{1, 1};
  double horizon = 1.0;
  double start_time = 0.0;
  double x0 = 0.0;
  FieldMatrix reward;    // f[i][j](t, x), running reward to player 1
  FieldMatrix terminal;  // h[i][j](x)
  FieldMatrix ghat;      // player-1 switching cost ghat[from][to](t, x)
  FieldMatrix gcheck;    // player-2 switching cost gcheck[from][to](t, x)
  ScalarField drift;
  ScalarField volatility;
};

// Immutable description of a two-player zero-sum switching game driven by a
// one-dimensional diffusion dX = b(t, X) dt + sigma(t, X) dB.
class GameSpec {
 public:
  // Throws SpecError on shape mismatch, non-zero diagonal costs, terminal
  // rewards depending on t, or an invalid horizon.
  explicit GameSpec(GameSpecData data);

  const ModeSpace& modes() const noexcept { return data_.modes; }
  double horizon() const noexcept { return data_.horizon; }
  double start_time() const noexcept { return data_.start_time; }
  double x0() const noexcept { return data_.x0; }

  const ScalarField& reward(ModePair p) const { return data_.reward[p.i][p.j]; }
  const ScalarField& terminal(ModePair p) const { return data_.terminal[p.i][p.j]; }
  const ScalarField& ghat(int from, int to) const { return data_.ghat[from][to]; }
  const ScalarField& gcheck(int from, int to) const { return data_.gcheck[from][to]; }
  const ScalarField& drift() const noexcept { return data_.drift; }
  const ScalarField& volatility() const noexcept { return data_.volatility; }

  const GameSpecData& data() const noexcept { return data_; }

 private:
  GameSpecData data_;
};

// Switching costs of both players evaluated at one (t, x).
struct CostTable {
  int m1 = 1;
  int m2 = 1;
  std::vector<double> ghat;    // m1 x m1, row = from
  std::vector<double> gcheck;  // m2 x m2, row = from

  double player1(int from, int to) const { return ghat[static_cast<std::size_t>(from * m1 + to)]; }
  double player2(int from, int to) const { return gcheck[static_cast<std::size_t>(from * m2 + to)]; }
};

CostTable evaluate_costs(const GameSpec& spec, double t, double x);

// Square matrix of identical off-diagonal constants with a zero diagonal.
FieldMatrix constant_cost_matrix(int size, double off_diagonal);
FieldMatrix constant_matrix(int rows, int cols, double value);

// Scales f, h, ghat and gcheck by lambda > 0; dynamics unchanged.
GameSpec scaled(const GameSpec& spec, double lambda);
// Adds `shift` to every running reward f[i][j].
GameSpec with_reward_shift(const GameSpec& spec, double shift);

}  // namespace swgame
