#include "swgame/corpus.hpp"

#include <array>
#include <cstdio>
#include <functional>
#include <utility>

#include "swgame/validation.hpp"

namespace swgame::corpus {

std::shared_ptr<const Lattice> Case::lattice() const {
  return std::make_shared<const Lattice>(build_lattice(spec, steps, nodes, domain));
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double draw(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

ScalarField expr(const std::string& text) { return ScalarField::parse(text); }

FieldMatrix random_costs(Rng& rng, int m) {
  FieldMatrix g = constant_matrix(m, m, 0.0);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (a != b) g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = ScalarField::constant(draw(rng, 0.1, 1.0));
    }
  }
  return g;
}

// Smooth bounded reward in [-1, 1].
ScalarField random_reward(Rng& rng) {
  const double a = draw(rng, -0.5, 0.5);
  const double b = draw(rng, -0.5, 0.5);
  const double w = draw(rng, 0.5, 2.0);
  switch (rng.uniform_int(0, 2)) {
    case 0: return expr(num(a) + " + " + num(b) + "*sin(" + num(w) + "*x)");
    case 1: return expr(num(a) + " + " + num(b) + "*cos(x + " + num(w) + "*t)");
    default: return ScalarField::constant(a);
  }
}

ScalarField random_terminal(Rng& rng) {
  const double a = draw(rng, -0.3, 0.3);
  const double b = draw(rng, -0.1, 0.1);
  return rng.uniform() < 0.5 ? ScalarField::constant(a) : expr(num(a) + " + " + num(b) + "*tanh(x)");
}

bool terminal_fits(const GameSpec& spec, const std::vector<Sample>& samples) {
  return validate_consistency(spec, samples).passed();
}

// Draws terminal rewards until the terminal ordering holds; zeros if none fit.
bool draw_terminal(Rng& rng, GameSpecData& data, const std::vector<Sample>& samples,
                   const std::function<FieldMatrix(Rng&)>& make) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    data.terminal = make(rng);
    if (terminal_fits(GameSpec(data), samples)) return true;
  }
  data.terminal = constant_matrix(data.modes.m1(), data.modes.m2(), 0.0);
  return false;
}

Domain centred(double x0, int nodes, double dx) {
  const double lo = x0 - dx * ((nodes - 1) / 2);
  return {lo, lo + dx * (nodes - 1)};
}

struct Dynamics {
  ScalarField b;
  ScalarField sigma;
};

Dynamics random_dynamics(Rng& rng, bool stochastic, double drift_scale) {
  Dynamics d;
  const double c1 = draw(rng, -0.2, 0.2);
  const double c2 = draw(rng, -drift_scale, drift_scale);
  d.b = rng.uniform() < 0.5 ? ScalarField::constant(c1) : expr(num(c1) + " + " + num(c2) + "*x");
  d.sigma = stochastic ? ScalarField::constant(draw(rng, 0.2, 0.6)) : ScalarField::constant(0.0);
  return d;
}

// Random game on the given grid; redrawn until it passes the validators.
Case random_case(Rng& rng, const std::string& name, std::pair<int, int> shape, int steps, int nodes, double dx,
                 double drift_scale) {
  for (;;) {
    const auto [m1, m2] = shape;
    GameSpecData data;
    data.modes = ModeSpace(m1, m2);
    data.horizon = 1.0;
    data.start_time = 0.0;
    data.x0 = draw(rng, -0.5, 0.5);
    const Dynamics dyn = random_dynamics(rng, rng.uniform() < 0.8, drift_scale);
    data.drift = dyn.b;
    data.volatility = dyn.sigma;
    data.ghat = random_costs(rng, m1);
    data.gcheck = random_costs(rng, m2);
    data.reward = constant_matrix(m1, m2, 0.0);
    for (auto& row : data.reward) {
      for (auto& f : row) f = random_reward(rng);
    }
    data.terminal = constant_matrix(m1, m2, 0.0);
    const Domain domain = centred(data.x0, nodes, dx);
    const auto samples = grid_samples(GameSpec(data), steps, nodes, domain);
    if (!validate_assumptions(GameSpec(data), samples).passed()) continue;  // costs break the triangle
    draw_terminal(rng, data, samples, [&](Rng& r) {
      FieldMatrix h = constant_matrix(m1, m2, 0.0);
      for (auto& row : h) {
        for (auto& v : row) v = random_terminal(r);
      }
      return h;
    });
    GameSpec spec(std::move(data));
    if (!validate_assumptions(spec, samples).passed()) continue;
    return {name, std::move(spec), steps, nodes, domain};
  }
}

GameSpecData base_data(int m1, int m2) {
  GameSpecData d;
  d.modes = ModeSpace(m1, m2);
  d.reward = constant_matrix(m1, m2, 0.0);
  d.terminal = constant_matrix(m1, m2, 0.0);
  d.ghat = constant_cost_matrix(m1, 1.0);
  d.gcheck = constant_cost_matrix(m2, 1.0);
  return d;
}

}  // namespace

Case random_tiny(Rng& rng, const std::string& name) {
  static constexpr std::array<std::pair<int, int>, 8> shapes{
      {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {1, 3}, {3, 1}, {1, 4}, {4, 1}}};
  const auto shape = shapes[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(shapes.size()) - 1))];
  const int steps = rng.uniform_int(2, oracle::tiny_max_steps);
  const int nodes = rng.uniform_int(3, oracle::tiny_max_nodes);
  // dx = 1 keeps sigma^2 dt / dx^2 + |b| dt / dx below 0.5 for these draws.
  return random_case(rng, name, shape, steps, nodes, 1.0, 0.1);
}

Case random_medium(Rng& rng, const std::string& name) {
  const int m1 = rng.uniform_int(1, 3);
  const int m2 = rng.uniform_int(1, 3);
  return random_case(rng, name, {m1, m2}, 40, 41, 0.15, 0.1);
}

SeparatedCase random_separated(Rng& rng, const std::string& name) {
  for (;;) {
    int m1 = rng.uniform_int(1, 3);
    int m2 = rng.uniform_int(1, 3);
    if (m1 == 1 && m2 == 1) m2 = 2;
    const int steps = 20;
    const int nodes = 21;
    GameSpecData data;
    data.modes = ModeSpace(m1, m2);
    data.x0 = draw(rng, -0.5, 0.5);
    const Dynamics dyn = random_dynamics(rng, true, 0.05);
    data.drift = dyn.b;
    data.volatility = dyn.sigma;
    data.ghat = random_costs(rng, m1);
    data.gcheck = random_costs(rng, m2);

    oracle::SeparatedParts parts;
    for (int i = 0; i < m1; ++i) parts.f1.push_back(random_reward(rng));
    for (int j = 0; j < m2; ++j) parts.f2.push_back(random_reward(rng));
    data.reward = constant_matrix(m1, m2, 0.0);
    for (int i = 0; i < m1; ++i) {
      for (int j = 0; j < m2; ++j) {
        data.reward[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            parts.f1[static_cast<std::size_t>(i)] + parts.f2[static_cast<std::size_t>(j)];
      }
    }
    data.terminal = constant_matrix(m1, m2, 0.0);
    const Domain domain = centred(data.x0, nodes, 0.2);
    const auto samples = grid_samples(GameSpec(data), steps, nodes, domain);
    if (!validate_assumptions(GameSpec(data), samples).passed()) continue;

    const bool fitted = draw_terminal(rng, data, samples, [&](Rng& r) {
      parts.h1.clear();
      parts.h2.clear();
      for (int i = 0; i < m1; ++i) parts.h1.push_back(random_terminal(r));
      for (int j = 0; j < m2; ++j) parts.h2.push_back(random_terminal(r));
      FieldMatrix h = constant_matrix(m1, m2, 0.0);
      for (int i = 0; i < m1; ++i) {
        for (int j = 0; j < m2; ++j) {
          h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              parts.h1[static_cast<std::size_t>(i)] + parts.h2[static_cast<std::size_t>(j)];
        }
      }
      return h;
    });
    if (!fitted) {
      parts.h1.assign(static_cast<std::size_t>(m1), ScalarField::constant(0.0));
      parts.h2.assign(static_cast<std::size_t>(m2), ScalarField::constant(0.0));
    }
    GameSpec spec(std::move(data));
    if (!validate_assumptions(spec, samples).passed()) continue;
    return {{name, std::move(spec), steps, nodes, domain}, std::move(parts)};
  }
}

Case deterministic_two_mode() {
  GameSpecData d = base_data(2, 1);
  d.reward = {{ScalarField::constant(0.0)}, {ScalarField::constant(2.0)}};
  d.ghat = constant_cost_matrix(2, 0.5);
  d.drift = ScalarField::constant(0.0);
  d.volatility = ScalarField::constant(0.0);
  GameSpec spec(std::move(d));
  const Domain domain = default_domain(spec);
  return {"deterministic_two_mode", std::move(spec), 8, 3, domain};
}

Case free_loop() {
  GameSpecData d = base_data(2, 2);
  d.terminal = {{ScalarField::constant(0.0), ScalarField::constant(10.0)},
                {ScalarField::constant(10.0), ScalarField::constant(0.0)}};
  d.drift = ScalarField::constant(0.0);
  d.volatility = ScalarField::constant(0.0);
  GameSpec spec(std::move(d));
  const Domain domain = default_domain(spec);
  return {"free_loop", std::move(spec), 4, 5, domain};
}

Case zero_game() {
  GameSpecData d = base_data(2, 2);
  d.gcheck = constant_cost_matrix(2, 2.0);
  d.drift = ScalarField::constant(0.0);
  d.volatility = ScalarField::constant(0.3);
  GameSpec spec(std::move(d));
  const Domain domain = default_domain(spec);
  return {"zero_game", std::move(spec), 20, 21, domain};
}

Case stochastic_acceptance() {
  GameSpecData d = base_data(2, 2);
  d.reward = {{expr("sin(2*x)"), expr("0.5 + 0.5*cos(x)")}, {expr("-sin(x)"), expr("0.3*cos(3*x) - 0.2")}};
  d.ghat = constant_cost_matrix(2, 0.3);
  d.gcheck = constant_cost_matrix(2, 0.5);
  d.drift = expr("-x");
  d.volatility = ScalarField::constant(0.5);
  GameSpec spec(std::move(d));
  const Domain domain = default_domain(spec);
  return {"stochastic_acceptance", std::move(spec), 200, 201, domain};
}

std::vector<Case> standard(std::uint64_t seed, int random_count) {
  std::vector<Case> out{deterministic_two_mode(), zero_game(), stochastic_acceptance()};
  Rng rng(seed);
  for (int k = 0; k < random_count; ++k) out.push_back(random_tiny(rng, "tiny_" + std::to_string(k)));
  for (int k = 0; k < 5; ++k) out.push_back(random_medium(rng, "medium_" + std::to_string(k)));
  return out;
}

}  // namespace swgame::corpus
