#include "swgame/obstacle_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swgame {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::size_t idx(const ModeSpace& modes, ModePair p) { return static_cast<std::size_t>(modes.index(p)); }

// Per-node work buffers reused across the layer.
struct NodeScratch {
  std::vector<double> w;
  std::vector<double> next;
};

struct NodeResult {
  double residual;
  int sweeps;
};

// Picard iteration at one node. `out` receives the final iterate.
NodeResult iterate_node(const ModeSpace& modes, std::span<const double> c, const CostTable& costs, int max_sweeps,
                        double tolerance, NodeScratch& scratch, std::span<double> out) {
  const auto P = static_cast<std::size_t>(modes.size());
  scratch.w.assign(c.begin(), c.end());
  scratch.next.resize(P);
  double residual = inf;
  int sweeps = 0;
  while (sweeps < max_sweeps) {
    ++sweeps;
    residual = 0.0;
    for (std::size_t q = 0; q < P; ++q) {
      const ModePair p = modes.pair(static_cast<int>(q));
      const double lo = lower_obstacle(scratch.w, costs, modes, p);
      const double hi = upper_obstacle(scratch.w, costs, modes, p);
      const double v = std::max(lo, std::min(hi, c[q]));
      scratch.next[q] = v;
      residual = std::max(residual, std::fabs(v - scratch.w[q]));
    }
    scratch.w.swap(scratch.next);
    if (residual <= tolerance) break;
  }
  std::copy(scratch.w.begin(), scratch.w.end(), out.begin());
  return {residual, sweeps};
}

}  // namespace

BarrierChoice lower_choice(std::span<const double> values, const CostTable& costs, const ModeSpace& modes,
                           ModePair p) {
  BarrierChoice best{-inf, -1};
  for (int k = 0; k < modes.m1(); ++k) {
    if (k == p.i) continue;
    const double v = values[idx(modes, {k, p.j})] - costs.player1(p.i, k);
    if (best.target < 0 || v > best.value) best = {v, k};
  }
  return best;
}

BarrierChoice upper_choice(std::span<const double> values, const CostTable& costs, const ModeSpace& modes,
                           ModePair p) {
  BarrierChoice best{inf, -1};
  for (int l = 0; l < modes.m2(); ++l) {
    if (l == p.j) continue;
    const double v = values[idx(modes, {p.i, l})] + costs.player2(p.j, l);
    if (best.target < 0 || v < best.value) best = {v, l};
  }
  return best;
}

LayerSolution solve_layer_fixed_point(const ModeSpace& modes, std::span<const double> continuation,
                                      std::span<const CostTable> costs, const FixedPointOptions& options) {
  const auto P = static_cast<std::size_t>(modes.size());
  if (P == 0 || continuation.size() % P != 0 || continuation.size() / P != costs.size()) {
    throw std::invalid_argument("continuation values and cost tables disagree on the node count");
  }
  const int max_sweeps = options.max_sweeps > 0 ? options.max_sweeps : 10 * modes.size();
  const int guard = modes.size() + 2;
  const std::size_t nodes = costs.size();

  LayerSolution out;
  out.values.assign(continuation.size(), 0.0);
  out.dk_plus.assign(continuation.size(), 0.0);
  out.dk_minus.assign(continuation.size(), 0.0);

  NodeScratch scratch;
  int worst_node = 0;
  double worst_residual = 0.0;
  for (std::size_t k = 0; k < nodes; ++k) {
    const auto c = continuation.subspan(k * P, P);
    for (double v : c) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("continuation value is not finite at node " + std::to_string(k));
      }
    }
    const auto w = std::span<double>(out.values).subspan(k * P, P);
    const NodeResult r = iterate_node(modes, c, costs[k], max_sweeps, options.tolerance, scratch, w);
    if (r.sweeps > guard) ++out.slow_nodes;
    out.sweeps = std::max(out.sweeps, r.sweeps);
    if (k == 0 || r.residual > worst_residual) {
      worst_residual = r.residual;
      worst_node = static_cast<int>(k);
    }
    if (!(r.residual <= options.tolerance)) continue;

    // Clamp corrections of the final update, read against the final iterate.
    for (std::size_t q = 0; q < P; ++q) {
      const ModePair p = modes.pair(static_cast<int>(q));
      const double lo = lower_obstacle(std::span<const double>(w), costs[k], modes, p);
      const double hi = upper_obstacle(std::span<const double>(w), costs[k], modes, p);
      const double inner = std::min(hi, c[q]);
      if (lo > inner) {
        out.dk_plus[k * P + q] = std::max(w[q] - c[q], 0.0);
      } else if (hi < c[q]) {
        out.dk_minus[k * P + q] = std::max(c[q] - w[q], 0.0);
      }
    }
  }
  out.residual = worst_residual;
  if (!(worst_residual <= options.tolerance)) {
    throw ConvergenceError("fixed point did not converge within " + std::to_string(max_sweeps) +
                               " sweeps at node " + std::to_string(worst_node) +
                               " (residual " + std::to_string(worst_residual) + ")",
                           -1, worst_node, worst_residual);
  }
  return out;
}

ValueField solve(const GameSpec& spec, std::shared_ptr<const Lattice> lattice, const FixedPointOptions& options) {
  ValueField field(spec, lattice);
  const Lattice& lat = *lattice;
  const ModeSpace& modes = spec.modes();
  const auto P = static_cast<std::size_t>(modes.size());
  const int N = lat.steps();
  const int M = lat.nodes();
  const auto pairs = modes.pairs();

  std::vector<CostTable> costs(static_cast<std::size_t>(M));
  const auto fill_barriers = [&](int n) {
    for (int k = 0; k < M; ++k) {
      const auto y = field.y.node_values(n, k);
      for (std::size_t q = 0; q < P; ++q) {
        field.lower.at(n, k, static_cast<int>(q)) = lower_obstacle(y, costs[static_cast<std::size_t>(k)], modes, pairs[q]);
        field.upper.at(n, k, static_cast<int>(q)) = upper_obstacle(y, costs[static_cast<std::size_t>(k)], modes, pairs[q]);
      }
    }
  };

  // Terminal layer.
  const double T = lat.time(N);
  for (int k = 0; k < M; ++k) {
    const double x = lat.state(k);
    costs[static_cast<std::size_t>(k)] = evaluate_costs(spec, T, x);
    for (std::size_t q = 0; q < P; ++q) field.y.at(N, k, static_cast<int>(q)) = spec.terminal(pairs[q])(T, x);
  }
  fill_barriers(N);
  field.sweeps[static_cast<std::size_t>(N)] = 0;

  std::vector<double> column(static_cast<std::size_t>(M));
  std::vector<double> continuation(static_cast<std::size_t>(M) * P);
  for (int n = N - 1; n >= 0; --n) {
    const double t = lat.time(n);
    for (std::size_t q = 0; q < P; ++q) {
      for (int k = 0; k < M; ++k) column[static_cast<std::size_t>(k)] = field.y.at(n + 1, k, static_cast<int>(q));
      for (int k = 0; k < M; ++k) {
        const double x = lat.state(k);
        continuation[static_cast<std::size_t>(k) * P + q] =
            expected_continuation(column, lat, n, k) + spec.reward(pairs[q])(t, x) * lat.dt();
      }
    }
    for (int k = 0; k < M; ++k) costs[static_cast<std::size_t>(k)] = evaluate_costs(spec, t, lat.state(k));

    LayerSolution layer;
    try {
      layer = solve_layer_fixed_point(modes, continuation, costs, options);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("layer " + std::to_string(n) + ": " + e.what(), n, e.node(), e.residual());
    }
    for (int k = 0; k < M; ++k) {
      for (std::size_t q = 0; q < P; ++q) {
        const std::size_t at = static_cast<std::size_t>(k) * P + q;
        field.y.at(n, k, static_cast<int>(q)) = layer.values[at];
        field.dk_plus.at(n, k, static_cast<int>(q)) = layer.dk_plus[at];
        field.dk_minus.at(n, k, static_cast<int>(q)) = layer.dk_minus[at];
      }
    }
    field.residual[static_cast<std::size_t>(n)] = layer.residual;
    field.sweeps[static_cast<std::size_t>(n)] = layer.sweeps;
    field.slow_nodes += layer.slow_nodes;
    fill_barriers(n);
  }
  return field;
}

double dynkin_consistency_check(const ValueField& field, ModePair p) {
  const Lattice& lat = *field.lattice;
  const ModeSpace& modes = field.modes();
  if (!modes.contains(p)) throw std::invalid_argument("mode pair out of range");
  const int q = modes.index(p);
  const int N = lat.steps();
  const int M = lat.nodes();
  const ScalarField& f = field.spec.reward(p);
  const ScalarField& h = field.spec.terminal(p);

  std::vector<double> next(static_cast<std::size_t>(M));
  std::vector<double> cur(static_cast<std::size_t>(M));
  double worst = 0.0;
  const double T = lat.time(N);
  for (int k = 0; k < M; ++k) {
    next[static_cast<std::size_t>(k)] = h(T, lat.state(k));
    worst = std::max(worst, std::fabs(next[static_cast<std::size_t>(k)] - field.y.at(N, k, q)));
  }
  for (int n = N - 1; n >= 0; --n) {
    const double t = lat.time(n);
    for (int k = 0; k < M; ++k) {
      const double c = expected_continuation(next, lat, n, k) + f(t, lat.state(k)) * lat.dt();
      const double v = std::max(field.lower.at(n, k, q), std::min(field.upper.at(n, k, q), c));
      cur[static_cast<std::size_t>(k)] = v;
      worst = std::max(worst, std::fabs(v - field.y.at(n, k, q)));
    }
    next.swap(cur);
  }
  return worst;
}

SkorokhodResiduals skorokhod_residuals(const ValueField& field) {
  SkorokhodResiduals r;
  const int P = field.modes().size();
  for (int n = 0; n <= field.steps(); ++n) {
    for (int k = 0; k < field.nodes(); ++k) {
      for (int q = 0; q < P; ++q) {
        const double y = field.y.at(n, k, q);
        const double plus = field.dk_plus.at(n, k, q);
        const double minus = field.dk_minus.at(n, k, q);
        // A zero increment contributes nothing even against an infinite sentinel.
        if (plus != 0.0) r.lower = std::max(r.lower, plus * (y - field.lower.at(n, k, q)));
        if (minus != 0.0) r.upper = std::max(r.upper, minus * (field.upper.at(n, k, q) - y));
      }
    }
  }
  return r;
}

double barrier_sandwich_excess(const ValueField& field) {
  double worst = -inf;
  const int P = field.modes().size();
  for (int n = 0; n <= field.steps(); ++n) {
    for (int k = 0; k < field.nodes(); ++k) {
      for (int q = 0; q < P; ++q) {
        const double y = field.y.at(n, k, q);
        worst = std::max({worst, field.lower.at(n, k, q) - y, y - field.upper.at(n, k, q)});
      }
    }
  }
  return worst;
}

}  // namespace swgame
