#include "swgame/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swgame/random.hpp"

namespace swgame {

Lattice::Lattice(double start_time, double horizon, int steps, Domain domain, int nodes,
                 std::vector<Stencil> stencils, double x0)
    : start_time_(start_time),
      horizon_(horizon),
      steps_(steps),
      domain_(domain),
      nodes_(nodes),
      dt_((horizon - start_time) / steps),
      dx_((domain.x_max - domain.x_min) / (nodes - 1)),
      stencils_(std::move(stencils)) {
  if (stencils_.size() != static_cast<std::size_t>(steps) * static_cast<std::size_t>(nodes)) {
    throw std::invalid_argument("stencil table has the wrong size");
  }
  origin_node_ = nearest_node(x0);
  origin_offset_ = x0 - state(origin_node_);
  if (std::fabs(origin_offset_) <= 1e-9 * dx_) origin_offset_ = 0.0;
}

int Lattice::nearest_node(double x) const noexcept {
  const double k = std::round((x - domain_.x_min) / dx_);
  if (!(k > 0.0)) return 0;
  if (k >= nodes_ - 1) return nodes_ - 1;
  return static_cast<int>(k);
}

Domain default_domain(const GameSpec& spec) {
  const double s = spec.start_time();
  const double T = spec.horizon();
  const double tau = T - s;
  const double x0 = spec.x0();
  const double times[] = {s, 0.5 * (s + T), T};

  const auto width_over = [&](double lo, double hi, int samples) {
    double max_sigma = 0.0;
    double max_drift = 0.0;
    for (double t : times) {
      for (int k = 0; k < samples; ++k) {
        const double x = samples == 1 ? x0 : lo + (hi - lo) * k / (samples - 1);
        max_sigma = std::max(max_sigma, std::fabs(spec.volatility()(t, x)));
        max_drift = std::max(max_drift, std::fabs(spec.drift()(t, x)));
      }
    }
    return 6.0 * max_sigma * std::sqrt(tau) + max_drift * tau;
  };

  const double first = width_over(x0, x0, 1);
  double width = first > 0.0 ? width_over(x0 - first, x0 + first, 65) : 0.0;
  // Frozen dynamics still need a non-degenerate grid.
  if (width <= 0.0) width = 1.0;
  return {x0 - width, x0 + width};
}

Lattice build_lattice(const GameSpec& spec, int steps, int nodes, std::optional<Domain> domain) {
  if (steps < 2 || nodes < 2) throw std::invalid_argument("lattice needs at least 2 steps and 2 nodes");
  const Domain dom = domain.value_or(default_domain(spec));
  if (!(dom.x_min < spec.x0() && spec.x0() < dom.x_max)) {
    throw std::invalid_argument("state domain must strictly contain the initial state");
  }
  const double s = spec.start_time();
  const double T = spec.horizon();
  const double dt = (T - s) / steps;
  const double dx = (dom.x_max - dom.x_min) / (nodes - 1);

  std::vector<Stencil> stencils(static_cast<std::size_t>(steps) * static_cast<std::size_t>(nodes));
  double worst = 0.0;
  for (int n = 0; n < steps; ++n) {
    const double t = s + n * dt;
    for (int k = 0; k < nodes; ++k) {
      const double x = dom.x_min + k * dx;
      const double sigma = spec.volatility()(t, x);
      const double b = spec.drift()(t, x);
      if (sigma < 0.0) throw std::invalid_argument("volatility must be non-negative");
      const double diffusion = 0.5 * sigma * sigma * dt / (dx * dx);
      Stencil st;
      st.up = diffusion + std::max(b, 0.0) * dt / dx;
      st.down = diffusion + std::max(-b, 0.0) * dt / dx;
      worst = std::max(worst, st.up + st.down);
      if (k == 0) {
        st.up += st.down;
        st.down = 0.0;
      } else if (k == nodes - 1) {
        st.down += st.up;
        st.up = 0.0;
      }
      st.stay = 1.0 - st.up - st.down;
      stencils[static_cast<std::size_t>(n) * static_cast<std::size_t>(nodes) + static_cast<std::size_t>(k)] = st;
    }
  }
  if (worst > 1.0) {
    const int required = static_cast<int>(std::ceil(steps * worst));
    throw StabilityError("explicit scheme unstable: sigma^2 dt/dx^2 + |b| dt/dx reaches " + std::to_string(worst) +
                             " > 1; use at least " + std::to_string(required) + " steps or fewer space nodes",
                         required, worst);
  }
  return Lattice(s, T, steps, dom, nodes, std::move(stencils), spec.x0());
}

double expected_continuation(std::span<const double> layer, const Lattice& lattice, int n, int node) {
  if (layer.size() != static_cast<std::size_t>(lattice.nodes())) {
    throw std::invalid_argument("layer size does not match the lattice");
  }
  const Stencil& st = lattice.stencil(n, node);
  const auto k = static_cast<std::size_t>(node);
  double v = st.stay * layer[k];
  if (st.down != 0.0) v += st.down * layer[k - 1];
  if (st.up != 0.0) v += st.up * layer[k + 1];
  return v;
}

Path simulate_path(const GameSpec& spec, int steps, std::uint64_t seed) {
  if (steps < 1) throw std::invalid_argument("path needs at least one step");
  Path path{std::vector<double>(static_cast<std::size_t>(steps) + 1), spec.start_time(), spec.horizon(), seed};
  const double dt = path.dt();
  const double sqrt_dt = std::sqrt(dt);
  const bool noisy = !(spec.volatility().is_constant() && *spec.volatility().constant_value() == 0.0);
  Rng rng(seed);
  double x = spec.x0();
  path.x[0] = x;
  for (int n = 0; n < steps; ++n) {
    const double t = path.time(n);
    double next = x + spec.drift()(t, x) * dt;
    if (noisy) next += spec.volatility()(t, x) * sqrt_dt * rng.normal();
    if (!std::isfinite(next)) {
      throw EvaluationError("simulated state became non-finite at step " + std::to_string(n + 1));
    }
    x = next;
    path.x[static_cast<std::size_t>(n) + 1] = x;
  }
  return path;
}

Path make_path(const GameSpec& spec, std::vector<double> states) {
  if (states.size() < 2) throw std::invalid_argument("path needs at least one step");
  return Path{std::move(states), spec.start_time(), spec.horizon(), 0};
}

}  // namespace swgame
