#include "swgame/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace swgame {

const char* to_string(CheckStatus status) noexcept {
  switch (status) {
    case CheckStatus::passed: return "passed";
    case CheckStatus::violated: return "violated";
    case CheckStatus::vacuous: return "vacuous";
  }
  return "unknown";
}

void ValidationReport::record(std::string check, CheckStatus status, std::size_t violation_count) {
  checks_.push_back({std::move(check), status, violation_count});
}

void ValidationReport::merge(const ValidationReport& other) {
  checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
  violations_.insert(violations_.end(), other.violations_.begin(), other.violations_.end());
}

namespace {

std::string pair_label(ModePair p) {
  return "(" + std::to_string(p.i + 1) + "," + std::to_string(p.j + 1) + ")";
}

std::string loop_label(const std::vector<ModePair>& members) {
  std::string out;
  for (std::size_t q = 0; q < members.size(); ++q) {
    if (q) out += "->";
    out += pair_label(members[q]);
  }
  return out;
}

// Re-throws evaluation failures with the sample attached.
template <class F>
auto at_sample(const Sample& s, F&& f) {
  try {
    return f();
  } catch (const EvaluationError& e) {
    std::ostringstream msg;
    msg.precision(17);
    msg << e.what() << " at t=" << s.t << ", x=" << s.x;
    throw EvaluationError(msg.str());
  }
}

CheckStatus status_of(std::size_t before, std::size_t after) {
  return after > before ? CheckStatus::violated : CheckStatus::passed;
}

// Net cost of one switch from `a` to `b` as seen by player 1.
double step_cost(const CostTable& c, ModePair a, ModePair b) {
  double phi = 0.0;
  if (a.i != b.i) phi -= c.player1(a.i, b.i);
  if (a.j != b.j) phi += c.player2(a.j, b.j);
  return phi;
}

}  // namespace

std::vector<Sample> grid_samples(const GameSpec& spec, int steps, int nodes, Domain domain) {
  if (steps < 1 || nodes < 2) throw std::invalid_argument("sample grid needs steps >= 1 and nodes >= 2");
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(steps + 1) * static_cast<std::size_t>(nodes));
  const double s = spec.start_time();
  const double T = spec.horizon();
  const double dx = (domain.x_max - domain.x_min) / (nodes - 1);
  for (int n = 0; n <= steps; ++n) {
    const double t = n == steps ? T : s + n * (T - s) / steps;
    for (int k = 0; k < nodes; ++k) out.push_back({t, domain.x_min + k * dx});
  }
  return out;
}

ValidationReport validate_nonnegativity(const GameSpec& spec, const std::vector<Sample>& samples) {
  ValidationReport report;
  const int m1 = spec.modes().m1();
  const int m2 = spec.modes().m2();
  for (const Sample& s : samples) {
    const CostTable c = at_sample(s, [&] { return evaluate_costs(spec, s.t, s.x); });
    for (int a = 0; a < m1; ++a) {
      for (int b = 0; b < m1; ++b) {
        const double g = c.player1(a, b);
        if (a != b && g < 0.0) {
          report.add_violation({"nonnegativity", s, "ghat " + std::to_string(a + 1) + "->" + std::to_string(b + 1), -g});
        }
      }
    }
    for (int a = 0; a < m2; ++a) {
      for (int b = 0; b < m2; ++b) {
        const double g = c.player2(a, b);
        if (a != b && g < 0.0) {
          report.add_violation(
              {"nonnegativity", s, "gcheck " + std::to_string(a + 1) + "->" + std::to_string(b + 1), -g});
        }
      }
    }
  }
  report.record("nonnegativity", status_of(0, report.violations().size()), report.violations().size());
  return report;
}

ValidationReport validate_consistency(const GameSpec& spec, const std::vector<Sample>& samples,
                                      const ValidationOptions& options) {
  ValidationReport report;
  const int m1 = spec.modes().m1();
  const int m2 = spec.modes().m2();

  // Triangle part over distinct triples.
  if (m1 < 3 && m2 < 3) {
    report.record("triangle", CheckStatus::vacuous, 0);
  } else {
    const auto triangle = [&](const Sample& s, int m, auto cost, const char* name) {
      for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
          for (int c = 0; c < m; ++c) {
            if (a == b || b == c || a == c) continue;
            const double slack = cost(a, b) + cost(b, c) - cost(a, c);
            if (!(slack > options.strict_slack)) {
              report.add_violation({"triangle", s,
                                    std::string(name) + " " + std::to_string(a + 1) + "->" + std::to_string(b + 1) +
                                        "->" + std::to_string(c + 1),
                                    options.strict_slack - slack});
            }
          }
        }
      }
    };
    for (const Sample& s : samples) {
      const CostTable c = at_sample(s, [&] { return evaluate_costs(spec, s.t, s.x); });
      triangle(s, m1, [&](int a, int b) { return c.player1(a, b); }, "ghat");
      triangle(s, m2, [&](int a, int b) { return c.player2(a, b); }, "gcheck");
    }
    report.record("triangle", status_of(0, report.violations().size()), report.violations().size());
  }

  // Terminal order at t = T.
  const std::size_t before = report.violations().size();
  std::vector<double> xs;
  xs.reserve(samples.size());
  for (const Sample& s : samples) xs.push_back(s.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const double T = spec.horizon();
  const ModeSpace& modes = spec.modes();
  std::vector<double> h(static_cast<std::size_t>(modes.size()));
  for (double x : xs) {
    const Sample s{T, x};
    const CostTable c = at_sample(s, [&] { return evaluate_costs(spec, T, x); });
    at_sample(s, [&] {
      for (ModePair p : modes.pairs()) h[static_cast<std::size_t>(modes.index(p))] = spec.terminal(p)(T, x);
      return 0;
    });
    for (ModePair p : modes.pairs()) {
      const double v = h[static_cast<std::size_t>(modes.index(p))];
      double lo = -std::numeric_limits<double>::infinity();
      double hi = std::numeric_limits<double>::infinity();
      for (int k = 0; k < m1; ++k) {
        if (k != p.i) lo = std::max(lo, h[static_cast<std::size_t>(modes.index({k, p.j}))] - c.player1(p.i, k));
      }
      for (int l = 0; l < m2; ++l) {
        if (l != p.j) hi = std::min(hi, h[static_cast<std::size_t>(modes.index({p.i, l}))] + c.player2(p.j, l));
      }
      if (lo > v) report.add_violation({"terminal_order", s, "lower at " + pair_label(p), lo - v});
      if (v > hi) report.add_violation({"terminal_order", s, "upper at " + pair_label(p), v - hi});
    }
  }
  report.record("terminal_order", status_of(before, report.violations().size()),
                report.violations().size() - before);
  return report;
}

std::vector<Loop> enumerate_loops(const ModeSpace& modes, int max_length) {
  if (max_length < 2) throw std::invalid_argument("max loop length must be at least 2");
  const int V = modes.size();
  std::vector<Loop> loops;
  const auto neighbours = [&](int v) {
    const ModePair p = modes.pair(v);
    std::vector<int> out;
    for (int k = 0; k < modes.m1(); ++k) {
      if (k != p.i) out.push_back(modes.index({k, p.j}));
    }
    for (int l = 0; l < modes.m2(); ++l) {
      if (l != p.j) out.push_back(modes.index({p.i, l}));
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  std::vector<std::vector<int>> adj(static_cast<std::size_t>(V));
  for (int v = 0; v < V; ++v) adj[static_cast<std::size_t>(v)] = neighbours(v);

  std::vector<int> stack;
  std::vector<char> on_path(static_cast<std::size_t>(V), 0);
  const auto emit = [&] {
    Loop loop;
    for (int v : stack) loop.members.push_back(modes.pair(v));
    loop.members.push_back(modes.pair(stack.front()));
    loops.push_back(std::move(loop));
  };

  // Cycles are rooted at their smallest vertex; for length >= 3 the second
  // vertex must be smaller than the last so each orientation appears once.
  std::function<void(int, int)> extend = [&](int start, int v) {
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (w == start) {
        const auto len = static_cast<int>(stack.size());
        if (len == 2 || (len >= 3 && stack[1] < stack.back())) emit();
        continue;
      }
      if (w < start || on_path[static_cast<std::size_t>(w)]) continue;
      if (static_cast<int>(stack.size()) >= max_length) continue;
      stack.push_back(w);
      on_path[static_cast<std::size_t>(w)] = 1;
      extend(start, w);
      on_path[static_cast<std::size_t>(w)] = 0;
      stack.pop_back();
    }
  };
  for (int start = 0; start < V; ++start) {
    stack.assign(1, start);
    on_path[static_cast<std::size_t>(start)] = 1;
    extend(start, start);
    on_path[static_cast<std::size_t>(start)] = 0;
  }

  std::stable_sort(loops.begin(), loops.end(), [](const Loop& a, const Loop& b) {
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    return a.members < b.members;
  });
  return loops;
}

ValidationReport validate_no_free_loop(const GameSpec& spec, const std::vector<Sample>& samples,
                                       const ValidationOptions& options) {
  ValidationReport report;
  const ModeSpace& modes = spec.modes();
  const int cap = options.max_loop_length > 0 ? options.max_loop_length : 2 * modes.size();
  const std::vector<Loop> loops = enumerate_loops(modes, std::max(cap, 2));
  if (loops.empty()) {
    report.record("no_free_loop", CheckStatus::vacuous, 0);
    return report;
  }
  for (const Sample& s : samples) {
    const CostTable c = at_sample(s, [&] { return evaluate_costs(spec, s.t, s.x); });
    for (const Loop& loop : loops) {
      const auto& m = loop.members;
      double forward = 0.0;
      double backward = 0.0;
      for (std::size_t q = 0; q + 1 < m.size(); ++q) {
        forward += step_cost(c, m[q], m[q + 1]);
        backward += step_cost(c, m[q + 1], m[q]);
      }
      if (std::fabs(forward) <= options.zero_tolerance) {
        report.add_violation({"no_free_loop", s, loop_label(m), std::fabs(forward)});
      }
      if (std::fabs(backward) <= options.zero_tolerance) {
        std::vector<ModePair> reversed(m.rbegin(), m.rend());
        report.add_violation({"no_free_loop", s, loop_label(reversed), std::fabs(backward)});
      }
    }
  }
  report.record("no_free_loop", status_of(0, report.violations().size()), report.violations().size());
  return report;
}

ValidationReport check_mokobodski_feasibility(const GameSpec& spec, const ValueField* candidate,
                                              const std::vector<Sample>& samples,
                                              const ValidationOptions& options) {
  const ModeSpace& modes = spec.modes();
  if (candidate && (candidate->modes().m1() != modes.m1() || candidate->modes().m2() != modes.m2())) {
    throw std::invalid_argument("candidate field modes do not match the specification");
  }
  ValidationReport report;
  std::vector<double> zero(static_cast<std::size_t>(modes.size()), 0.0);
  for (const Sample& sample : samples) {
    Sample at = sample;
    std::span<const double> w(zero);
    if (candidate) {
      const Lattice& lat = *candidate->lattice;
      int n = static_cast<int>(std::lround((sample.t - lat.start_time()) / lat.dt()));
      n = std::clamp(n, 0, lat.steps());
      const int node = lat.nearest_node(sample.x);
      w = candidate->y.node_values(n, node);
      at = {lat.time(n), lat.state(node)};
    }
    const CostTable c = at_sample(at, [&] { return evaluate_costs(spec, at.t, at.x); });
    for (ModePair p : modes.pairs()) {
      const double v = w[static_cast<std::size_t>(modes.index(p))];
      for (int k = 0; k < modes.m1(); ++k) {
        if (k == p.i) continue;
        const double excess = w[static_cast<std::size_t>(modes.index({k, p.j}))] - c.player1(p.i, k) - v;
        if (excess > options.feasibility_tolerance) {
          report.add_violation({"mokobodski", at, "lower at " + pair_label(p), excess});
        }
      }
      for (int l = 0; l < modes.m2(); ++l) {
        if (l == p.j) continue;
        const double excess = v - (w[static_cast<std::size_t>(modes.index({p.i, l}))] + c.player2(p.j, l));
        if (excess > options.feasibility_tolerance) {
          report.add_violation({"mokobodski", at, "upper at " + pair_label(p), excess});
        }
      }
    }
  }
  report.record("mokobodski", status_of(0, report.violations().size()), report.violations().size());
  return report;
}

ValidationReport validate_assumptions(const GameSpec& spec, const std::vector<Sample>& samples,
                                      const ValidationOptions& options) {
  ValidationReport report = validate_nonnegativity(spec, samples);
  report.merge(validate_consistency(spec, samples, options));
  report.merge(validate_no_free_loop(spec, samples, options));
  return report;
}

}  // namespace swgame
