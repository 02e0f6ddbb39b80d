#include <cmath>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "swgame/lattice.hpp"
#include "swgame/random.hpp"

using namespace swgame;
using support::blank;
using support::expr;
using support::num;

namespace {

GameSpec diffusion(double b, double sigma, double x0 = 0.0) {
  GameSpecData d = blank(1, 1);
  d.drift = num(b);
  d.volatility = num(sigma);
  d.x0 = x0;
  return GameSpec(std::move(d));
}

}  // namespace

TEST_CASE("frozen state gives identity stencils") {
  const Lattice lat = build_lattice(diffusion(0, 0), 5, 7, Domain{-1, 1});
  for (int n = 0; n < 5; ++n) {
    for (int k = 0; k < 7; ++k) {
      const Stencil& s = lat.stencil(n, k);
      CHECK(s.stay == 1.0);
      CHECK(s.up == 0.0);
      CHECK(s.down == 0.0);
    }
  }
}

TEST_CASE("pure diffusion at unit ratio splits evenly") {
  // sigma^2 dt / dx^2 = 1 with dt = 0.25, dx = 0.5.
  const Lattice lat = build_lattice(diffusion(0, 1), 4, 5, Domain{-1, 1});
  for (int k = 1; k < 4; ++k) {
    CHECK(lat.stencil(0, k).down == 0.5);
    CHECK(lat.stencil(0, k).stay == 0.0);
    CHECK(lat.stencil(0, k).up == 0.5);
  }
}

TEST_CASE("pure drift with dt = dx moves right") {
  const Lattice lat = build_lattice(diffusion(1, 0), 4, 5, Domain{-0.5, 0.5});
  for (int k = 0; k < 4; ++k) {
    CHECK(lat.stencil(1, k).down == 0.0);
    CHECK(lat.stencil(1, k).stay == 0.0);
    CHECK(lat.stencil(1, k).up == 1.0);
  }
}

TEST_CASE("stencils are probability vectors with matched moments") {
  GameSpecData d = blank(1, 1);
  d.drift = expr("-x + 0.3*sin(t)");
  d.volatility = expr("0.4 + 0.1*cos(x)");
  const GameSpec spec(d);
  const Lattice lat = build_lattice(spec, 80, 41);
  const double dt = lat.dt();
  const double dx = lat.dx();
  for (int n = 0; n < lat.steps(); ++n) {
    for (int k = 0; k < lat.nodes(); ++k) {
      const Stencil& s = lat.stencil(n, k);
      CHECK(s.down >= 0.0);
      CHECK(s.stay >= 0.0);
      CHECK(s.up >= 0.0);
      CHECK(std::fabs(s.down + s.stay + s.up - 1.0) <= 1e-14);
      if (k == 0 || k == lat.nodes() - 1) continue;
      const double t = lat.time(n);
      const double x = lat.state(k);
      const double b = spec.drift()(t, x);
      const double sig = spec.volatility()(t, x);
      const double mean = (s.up - s.down) * dx;
      const double second = (s.up + s.down) * dx * dx;
      CHECK(std::fabs(mean - b * dt) <= 1e-14);
      CHECK(std::fabs(second - sig * sig * dt) <= std::fabs(b) * dt * dx + 1e-14);
    }
  }
}

TEST_CASE("martingale property of the stencil") {
  const GameSpec spec = diffusion(0, 0.7);
  const Lattice lat = build_lattice(spec, 50, 31);
  std::vector<double> layer;
  for (int k = 0; k < lat.nodes(); ++k) layer.push_back(lat.state(k));
  for (int n = 0; n < lat.steps(); n += 7) {
    for (int k = 1; k + 1 < lat.nodes(); ++k) {
      CHECK(std::fabs(expected_continuation(layer, lat, n, k) - lat.state(k)) <= 1e-12);
    }
  }
}

TEST_CASE("expected continuation examples") {
  const Lattice frozen = build_lattice(diffusion(0, 0), 2, 3, Domain{-1, 1});
  const std::vector<double> layer{1, 5, 3};
  CHECK(expected_continuation(layer, frozen, 0, 1) == 5.0);

  // dt = 0.25, dx = 0.5: stencil (1/2, 0, 1/2).
  const Lattice half = build_lattice(diffusion(0, 1), 4, 3, Domain{-0.5, 0.5});
  CHECK(expected_continuation(layer, half, 0, 1) == 2.0);

  const std::vector<double> flat(3, 4.25);
  for (int k = 0; k < 3; ++k) CHECK(expected_continuation(flat, half, 1, k) == 4.25);
  CHECK_THROWS_AS(expected_continuation(std::vector<double>{1, 2}, half, 0, 1), std::invalid_argument);
}

TEST_CASE("stability violation reports a sufficient step count") {
  const GameSpec spec = diffusion(0.5, 1.0);
  try {
    build_lattice(spec, 10, 41, Domain{-2, 2});
    FAIL("expected a stability error");
  } catch (const StabilityError& e) {
    CHECK(e.ratio() > 1.0);
    CHECK(e.required_steps() > 10);
    CHECK_NOTHROW(build_lattice(spec, e.required_steps(), 41, Domain{-2, 2}));
    CHECK_THROWS_AS(build_lattice(spec, e.required_steps() - 1, 41, Domain{-2, 2}), StabilityError);
  }
}

TEST_CASE("off-grid initial state snaps to the nearest node") {
  const Lattice lat = build_lattice(diffusion(0, 0, 0.26), 2, 5, Domain{-1, 1});
  CHECK(lat.origin_node() == 3);
  CHECK(lat.origin_snapped());
  CHECK(lat.origin_offset() == doctest::Approx(-0.24));
  const Lattice on = build_lattice(diffusion(0, 0, 0.5), 2, 5, Domain{-1, 1});
  CHECK_FALSE(on.origin_snapped());
}

TEST_CASE("lattice argument checks") {
  const GameSpec spec = diffusion(0, 0);
  CHECK_THROWS_AS(build_lattice(spec, 1, 5, Domain{-1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(build_lattice(spec, 4, 1, Domain{-1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(build_lattice(spec, 4, 5, Domain{0.5, 1}), std::invalid_argument);
}

TEST_CASE("default domain brackets the initial state") {
  const GameSpec spec = diffusion(0.2, 0.5, 1.0);
  const Domain d = default_domain(spec);
  CHECK(d.x_min == doctest::Approx(1.0 - 3.2));
  CHECK(d.x_max == doctest::Approx(1.0 + 3.2));
}

TEST_CASE("paths: frozen and deterministic drift") {
  const Path still = simulate_path(diffusion(0, 0, 0.3), 6, 1);
  for (double x : still.x) CHECK(x == 0.3);
  const Path drift = simulate_path(diffusion(1, 0, 0.5), 4, 1);
  REQUIRE(drift.x.size() == 5);
  for (int n = 0; n <= 4; ++n) CHECK(drift.x[static_cast<std::size_t>(n)] == doctest::Approx(0.5 + 0.25 * n));
  CHECK(drift.time(4) == 1.0);
}

TEST_CASE("paths are reproducible per seed") {
  const GameSpec spec = diffusion(0, 1);
  const Path a = simulate_path(spec, 50, 42);
  const Path b = simulate_path(spec, 50, 42);
  const Path c = simulate_path(spec, 50, 43);
  CHECK(a.x == b.x);
  CHECK(a.x != c.x);
  CHECK(a.seed == 42);
}

TEST_CASE("path moments of Brownian motion") {
  const GameSpec spec = diffusion(0, 1);
  constexpr int paths = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int k = 0; k < paths; ++k) {
    const double x = simulate_path(spec, 10, stream_seed(7, static_cast<std::uint64_t>(k))).x.back();
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / paths;
  const double var = (sum_sq - paths * mean * mean) / (paths - 1);
  CHECK(std::fabs(mean) <= 4.0 * std::sqrt(var / paths));
  CHECK(std::fabs(var - 1.0) <= 0.05);
}

TEST_CASE("non-finite states are errors") {
  GameSpecData d = blank(1, 1);
  d.drift = expr("exp(x*x*x)");
  d.x0 = 2.0;
  CHECK_THROWS(simulate_path(GameSpec(d), 50, 1));
}

TEST_CASE("random streams") {
  CHECK(stream_seed(1, 0) != stream_seed(1, 1));
  CHECK(stream_seed(1, 5) == stream_seed(1, 5));
  Rng r(3);
  for (int k = 0; k < 1000; ++k) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const int v = r.uniform_int(2, 4);
    CHECK(v >= 2);
    CHECK(v <= 4);
  }
}
