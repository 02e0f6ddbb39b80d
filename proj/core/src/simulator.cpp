#include "swgame/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

namespace swgame {

CoupledControl couple(const SwitchingControl& alpha, const SwitchingControl& beta) {
  if (alpha.entries.empty() || beta.entries.empty()) throw std::invalid_argument("controls need an initial entry");
  if (alpha.start() != beta.start()) throw std::invalid_argument("controls start at different steps");
  if (alpha.horizon != beta.horizon) throw std::invalid_argument("controls have different horizons");
  const int N = alpha.horizon;

  CoupledControl c;
  c.horizon = N;
  ModePair mode{alpha.entries[0].mode, beta.entries[0].mode};
  c.entries.push_back({alpha.start(), mode, Mover::none});
  c.r.push_back(0);
  c.s.push_back(0);

  std::size_t r = 0;
  std::size_t s = 0;
  for (;;) {
    const int sigma = r + 1 < alpha.entries.size() ? std::min(alpha.entries[r + 1].step, N) : N;
    const int tau = s + 1 < beta.entries.size() ? std::min(beta.entries[s + 1].step, N) : N;
    if (sigma <= tau && sigma < N) {
      ++r;
      mode.i = alpha.entries[r].mode;
      c.entries.push_back({sigma, mode, Mover::player1});
    } else if (tau < sigma) {
      ++s;
      mode.j = beta.entries[s].mode;
      c.entries.push_back({tau, mode, Mover::player2});
    } else {
      break;
    }
    c.r.push_back(static_cast<int>(r));
    c.s.push_back(static_cast<int>(s));
  }
  return c;
}

ModePair mode_at(const CoupledControl& c, int n) {
  if (c.entries.empty()) throw std::invalid_argument("empty coupled control");
  if (n < c.start() || n > c.horizon) throw std::out_of_range("step outside the control's range");
  ModePair mode = c.entries[0].mode;
  for (std::size_t k = 1; k < c.entries.size() && c.entries[k].step < n; ++k) mode = c.entries[k].mode;
  return mode;
}

namespace {

// Signed cost of the k-th coupled switch as borne by player 1.
double switch_cost(const GameSpec& spec, const CoupledControl& c, const Path& path, std::size_t k) {
  const CoupledEntry& prev = c.entries[k - 1];
  const CoupledEntry& cur = c.entries[k];
  const double t = path.time(cur.step);
  const double x = path.x[static_cast<std::size_t>(cur.step)];
  double v = 0.0;
  if (prev.mode.i != cur.mode.i) v += spec.ghat(prev.mode.i, cur.mode.i)(t, x);
  if (prev.mode.j != cur.mode.j) v -= spec.gcheck(prev.mode.j, cur.mode.j)(t, x);
  return v;
}

void check_path(const CoupledControl& c, const Path& path) {
  if (c.entries.empty()) throw std::invalid_argument("empty coupled control");
  if (path.steps() != c.horizon) throw std::invalid_argument("path and control horizons differ");
}

}  // namespace

double cumulative_cost(const GameSpec& spec, const CoupledControl& c, const Path& path, int upto) {
  check_path(c, path);
  const std::size_t last = upto < 0 ? c.entries.size() - 1
                                    : std::min(c.entries.size() - 1, static_cast<std::size_t>(upto));
  double total = 0.0;
  for (std::size_t k = 1; k <= last; ++k) total += switch_cost(spec, c, path, k);
  return total;
}

double admissibility_check(const GameSpec& spec, const CoupledControl& c, const Path& path) {
  check_path(c, path);
  double total = 0.0;
  double worst = 0.0;
  for (std::size_t k = 1; k < c.entries.size(); ++k) {
    total += switch_cost(spec, c, path, k);
    worst = std::max(worst, std::fabs(total));
  }
  return worst;
}

double pathwise_payoff(const GameSpec& spec, const Path& path, const CoupledControl& c) {
  check_path(c, path);
  const int N = c.horizon;
  const double dt = path.dt();
  double running = 0.0;
  std::size_t k = 0;
  for (int n = c.start(); n < N; ++n) {
    // Mode on (t_n, t_{n+1}]: every switch made at or before step n.
    while (k + 1 < c.entries.size() && c.entries[k + 1].step <= n) ++k;
    const ModePair mode = c.entries[k].mode;
    running += spec.reward(mode)(path.time(n), path.x[static_cast<std::size_t>(n)]) * dt;
  }
  const ModePair last = mode_at(c, N);
  const double terminal = spec.terminal(last)(path.horizon, path.x.back());
  return running - cumulative_cost(spec, c, path) + terminal;
}

namespace {

// Runs job(k) for k in [0, count) on `workers` threads, each result in its
// own slot. Rethrows the exception of the lowest failing index.
template <class Result, class Job>
std::vector<Result> run_indexed(int count, int workers, Job job) {
  std::vector<Result> results(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  const auto work = [&](int first, int stride) {
    for (int k = first; k < count; k += stride) {
      try {
        results[static_cast<std::size_t>(k)] = job(k);
      } catch (...) {
        errors[static_cast<std::size_t>(k)] = std::current_exception();
        return;
      }
    }
  };
  const int w = std::clamp(workers, 1, std::max(count, 1));
  if (w == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    for (int t = 0; t < w; ++t) pool.emplace_back(work, t, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

struct Moments {
  double mean;
  double std_error;
};

// Shifted two-pass moments: identical samples give the sample itself and an
// exactly zero standard error.
Moments moments(const std::vector<double>& v) {
  const auto n = static_cast<double>(v.size());
  const double base = v.front();
  double sum = 0.0;
  for (double x : v) sum += x - base;
  const double shift = sum / n;
  double sq = 0.0;
  for (double x : v) {
    const double d = x - base - shift;
    sq += d * d;
  }
  const double var = v.size() > 1 ? sq / (n - 1.0) : 0.0;
  return {base + shift, std::sqrt(var / n)};
}

struct PathResult {
  double payoff = 0.0;
  int switches = 0;
  double abs_cost = 0.0;
};

void check_options(const ValueField& field, ModePair start, const SimulationOptions& options) {
  if (options.paths < 2) throw std::invalid_argument("Monte Carlo needs at least 2 paths");
  if (!field.modes().contains(start)) throw std::invalid_argument("start pair out of range");
}

}  // namespace

ValueEstimate mc_value_estimate(const GameSpec& spec, const ValueField& field, ModePair start,
                                const SimulationOptions& options) {
  check_options(field, start, options);
  const int N = field.steps();
  const auto results = run_indexed<PathResult>(options.paths, options.workers, [&](int k) {
    const Path path = simulate_path(spec, N, stream_seed(options.seed, static_cast<std::uint64_t>(k)));
    const PlayOutcome game = equilibrium_controls(field, path, 0, start, options.max_switches);
    const CoupledControl c = couple(game.alpha, game.beta);
    return PathResult{pathwise_payoff(spec, path, c), c.switches(), admissibility_check(spec, c, path)};
  });

  ValueEstimate est;
  est.start = start;
  est.value = field.initial_value(start);
  est.paths = options.paths;
  est.seed = options.seed;
  std::vector<double> payoffs;
  payoffs.reserve(results.size());
  for (const PathResult& r : results) {
    payoffs.push_back(r.payoff);
    ++est.switch_histogram[r.switches];
    est.max_abs_cost = std::max(est.max_abs_cost, r.abs_cost);
  }
  const Moments m = moments(payoffs);
  est.mean = m.mean;
  est.std_error = m.std_error;
  return est;
}

const char* to_string(Perturbation kind) noexcept {
  switch (kind) {
    case Perturbation::remove: return "remove";
    case Perturbation::delay: return "delay";
    case Perturbation::insert: return "insert";
  }
  return "unknown";
}

namespace {

SwitchingControl perturb_once(const SwitchingControl& control, Perturbation kind, int modes, Rng& rng) {
  SwitchingControl out = control;
  const int N = out.horizon;
  const int K = out.switches();
  if (K == 0) kind = Perturbation::insert;

  switch (kind) {
    case Perturbation::remove: {
      const int k = rng.uniform_int(1, K);
      out.entries.erase(out.entries.begin() + k);
      break;
    }
    case Perturbation::delay: {
      const int k = rng.uniform_int(1, K);
      const int d = rng.uniform_int(1, std::max(1, N / 10));
      auto& e = out.entries[static_cast<std::size_t>(k)];
      e.step = std::min(e.step + d, N);
      break;
    }
    case Perturbation::insert: {
      const int n = rng.uniform_int(out.start(), N - 1);
      // Own mode in force after everything scheduled up to step n.
      std::size_t pos = 1;
      while (pos < out.entries.size() && out.entries[pos].step <= n) ++pos;
      const int current = out.entries[pos - 1].mode;
      int target = rng.uniform_int(0, modes - 2);
      if (target >= current) ++target;
      out.entries.insert(out.entries.begin() + static_cast<std::ptrdiff_t>(pos), ControlEntry{n, target});
      break;
    }
  }
  return normalized(out);
}

}  // namespace

SwitchingControl perturb(const SwitchingControl& control, Perturbation kind, int modes, Rng& rng) {
  if (modes < 2 || control.entries.empty() || control.start() >= control.horizon) return normalized(control);
  const SwitchingControl base = normalized(control);
  // An insert on an occupied step normalizes away; redraw a few times.
  SwitchingControl out = base;
  for (int attempt = 0; attempt < 16 && out == base; ++attempt) out = perturb_once(base, kind, modes, rng);
  return out;
}

DeviationReport deviation_battery(const GameSpec& spec, const ValueField& field, ModePair start, int trials,
                                  const SimulationOptions& options, double tolerance) {
  check_options(field, start, options);
  if (trials < 0) throw std::invalid_argument("trial count must be non-negative");
  const int N = field.steps();
  DeviationReport report;
  report.start = start;
  report.value = field.initial_value(start);
  report.tolerance = tolerance >= 0.0 ? tolerance : 0.02 * (1.0 + std::fabs(report.value));
  report.worst_margin_player1 = std::numeric_limits<double>::infinity();
  report.worst_margin_player2 = std::numeric_limits<double>::infinity();

  const int m1 = field.modes().m1();
  const int m2 = field.modes().m2();
  for (Side side : {Side::player1, Side::player2}) {
    const bool p1 = side == Side::player1;
    // Separate streams for the two sides, for trial kinds, and for per-path draws.
    const std::uint64_t side_seed = stream_seed(options.seed, p1 ? 0x51de01 : 0x51de02);
    for (int trial = 0; trial < trials; ++trial) {
      const std::uint64_t trial_seed = stream_seed(side_seed, static_cast<std::uint64_t>(trial));
      Rng kind_rng(trial_seed);
      const auto kind = static_cast<Perturbation>(kind_rng.uniform_int(0, 2));

      const auto payoffs = run_indexed<double>(options.paths, options.workers, [&](int k) {
        const Path path = simulate_path(spec, N, stream_seed(options.seed, static_cast<std::uint64_t>(k)));
        const PlayOutcome eq = equilibrium_controls(field, path, 0, start, options.max_switches);
        Rng draw(stream_seed(trial_seed ^ 0xa5a5a5a5a5a5a5a5ULL, static_cast<std::uint64_t>(k)));
        const SwitchingControl deviant = p1 ? perturb(eq.alpha, kind, m1, draw) : perturb(eq.beta, kind, m2, draw);
        const PlayOutcome game = respond(field, path, start, deviant, p1 ? Side::player2 : Side::player1,
                                         options.max_switches);
        return pathwise_payoff(spec, path, couple(game.alpha, game.beta));
      });

      const Moments m = moments(payoffs);
      DeviationOutcome o;
      o.side = side;
      o.trial = trial;
      o.kind = kind;
      o.mean = m.mean;
      o.std_error = m.std_error;
      if (p1) {
        o.bound = report.value + 3.0 * m.std_error + report.tolerance;
        o.margin = o.bound - m.mean;
        report.worst_margin_player1 = std::min(report.worst_margin_player1, o.margin);
      } else {
        o.bound = report.value - 3.0 * m.std_error - report.tolerance;
        o.margin = m.mean - o.bound;
        report.worst_margin_player2 = std::min(report.worst_margin_player2, o.margin);
      }
      o.passed = o.margin >= 0.0;
      if (!o.passed) ++report.failures;
      report.outcomes.push_back(o);
    }
  }
  if (trials == 0) {
    report.worst_margin_player1 = 0.0;
    report.worst_margin_player2 = 0.0;
  }
  return report;
}

}  // namespace swgame
