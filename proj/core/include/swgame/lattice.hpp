#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "swgame/game.hpp"

namespace swgame {

// Raised when the explicit scheme would have negative transition weights.
class StabilityError : public std::runtime_error {
 public:
  StabilityError(const std::string& what, int required_steps, double ratio)
      : std::runtime_error(what), required_steps_(required_steps), ratio_(ratio) {}
  // Smallest step count that satisfies the bound at the requested spacing.
  int required_steps() const noexcept { return required_steps_; }
  // Worst observed sigma^2 dt / dx^2 + |b| dt / dx.
  double ratio() const noexcept { return ratio_; }

 private:
  int required_steps_;
  double ratio_;
};

// Transition weights to {node - 1, node, node + 1}.
struct Stencil {
  double down = 0.0;
  double stay = 1.0;
  double up = 0.0;
};

struct Domain {
  double x_min = 0.0;
  double x_max = 0.0;
};

// Time-space grid with one-step trinomial transition weights approximating
// the state diffusion. Upwind moment matching:
//   up   = (sigma^2 / 2 + dx * max(b, 0)) dt / dx^2
//   down = (sigma^2 / 2 + dx * max(-b, 0)) dt / dx^2
// so the first moment is exact and the second is off by |b| dt dx. Boundary
// nodes mirror the outward weight back inside (zero flux).
class Lattice {
 public:
  Lattice(double start_time, double horizon, int steps, Domain domain, int nodes,
          std::vector<Stencil> stencils, double x0);

  int steps() const noexcept { return steps_; }
  int nodes() const noexcept { return nodes_; }
  double start_time() const noexcept { return start_time_; }
  double horizon() const noexcept { return horizon_; }
  double dt() const noexcept { return dt_; }
  double dx() const noexcept { return dx_; }
  double x_min() const noexcept { return domain_.x_min; }
  double x_max() const noexcept { return domain_.x_max; }

  // t_n = s + n dt, with t_N pinned to the horizon.
  double time(int n) const noexcept { return n == steps_ ? horizon_ : start_time_ + n * dt_; }
  double state(int node) const noexcept { return domain_.x_min + node * dx_; }
  int nearest_node(double x) const noexcept;

  const Stencil& stencil(int n, int node) const {
    return stencils_[static_cast<std::size_t>(n) * static_cast<std::size_t>(nodes_) + static_cast<std::size_t>(node)];
  }

  // Node nearest to the initial state, and x0 minus that node.
  int origin_node() const noexcept { return origin_node_; }
  double origin_offset() const noexcept { return origin_offset_; }
  bool origin_snapped() const noexcept { return origin_offset_ != 0.0; }

 private:
  double start_time_;
  double horizon_;
  int steps_;
  Domain domain_;
  int nodes_;
  double dt_;
  double dx_;
  std::vector<Stencil> stencils_;
  int origin_node_;
  double origin_offset_;
};

// x0 +/- (6 max sigma sqrt(T - s) + max |b| (T - s)). The maxima are taken
// over a sample of the window itself, after a first pass that evaluates the
// coefficients at x0 only.
Domain default_domain(const GameSpec& spec);

// Throws StabilityError, or std::invalid_argument on bad sizes or a domain
// that does not contain x0.
Lattice build_lattice(const GameSpec& spec, int steps, int nodes, std::optional<Domain> domain = std::nullopt);

// Stencil-weighted average of `layer` (one value per node) around `node`.
double expected_continuation(std::span<const double> layer, const Lattice& lattice, int n, int node);

// One simulated state trajectory x[0..N] on the uniform time grid of [s, T].
struct Path {
  std::vector<double> x;
  double start_time = 0.0;
  double horizon = 1.0;
  std::uint64_t seed = 0;

  int steps() const noexcept { return static_cast<int>(x.size()) - 1; }
  double dt() const noexcept { return (horizon - start_time) / steps(); }
  double time(int n) const noexcept { return n == steps() ? horizon : start_time + n * dt(); }
};

// Euler-Maruyama: x[n+1] = x[n] + b dt + sigma sqrt(dt) xi_n, xi_n from Rng(seed).
Path simulate_path(const GameSpec& spec, int steps, std::uint64_t seed);

// Deterministic path of the given states (tests and replay).
Path make_path(const GameSpec& spec, std::vector<double> states);

}  // namespace swgame
