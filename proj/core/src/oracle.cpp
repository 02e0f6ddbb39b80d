#include "swgame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swgame::oracle {

namespace {

// Stencil average written out separately from the solver's version.
double average(const Lattice& lat, int n, int k, const std::vector<double>& next) {
  const Stencil& w = lat.stencil(n, k);
  const double left = k > 0 ? next[static_cast<std::size_t>(k - 1)] : 0.0;
  const double right = k + 1 < lat.nodes() ? next[static_cast<std::size_t>(k + 1)] : 0.0;
  return w.down * left + w.stay * next[static_cast<std::size_t>(k)] + w.up * right;
}

// Cheapest cost of going from a to b through any chain of switches.
std::vector<std::vector<double>> cheapest_paths(const std::vector<std::vector<double>>& direct) {
  auto d = direct;
  const std::size_t m = d.size();
  for (std::size_t via = 0; via < m; ++via) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) d[a][b] = std::min(d[a][b], d[a][via] + d[via][b]);
    }
  }
  return d;
}

// One player with `m` modes; `reward(q, t, x)`, `terminal(q, x)`,
// `cost(a, b, t, x)`. sign = +1 maximizes, -1 minimizes.
template <class Reward, class Terminal, class Cost>
ValueGrid single_player(const Lattice& lat, int m, int sign, Reward reward, Terminal terminal, Cost cost) {
  const int N = lat.steps();
  const int M = lat.nodes();
  ValueGrid y(N, M, m);
  for (int k = 0; k < M; ++k) {
    for (int q = 0; q < m; ++q) y.at(N, k, q) = terminal(q, lat.state(k));
  }
  std::vector<std::vector<double>> next(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(M)));
  std::vector<double> c(static_cast<std::size_t>(m));
  std::vector<std::vector<double>> direct(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m)));
  for (int n = N - 1; n >= 0; --n) {
    const double t = lat.time(n);
    for (int q = 0; q < m; ++q) {
      for (int k = 0; k < M; ++k) next[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)] = y.at(n + 1, k, q);
    }
    for (int k = 0; k < M; ++k) {
      const double x = lat.state(k);
      for (int q = 0; q < m; ++q) {
        c[static_cast<std::size_t>(q)] = average(lat, n, k, next[static_cast<std::size_t>(q)]) + lat.dt() * reward(q, t, x);
        for (int r = 0; r < m; ++r) {
          direct[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)] = q == r ? 0.0 : cost(q, r, t, x);
        }
      }
      const auto d = cheapest_paths(direct);
      for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
          if (d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +
                  d[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] <=
              1e-12) {
            throw FixedPointError("costless switching cycle between modes " + std::to_string(a + 1) + " and " +
                                      std::to_string(b + 1),
                                  FixedPointError::Kind::free_loop, n, k);
          }
        }
      }
      for (int q = 0; q < m; ++q) {
        double best = c[static_cast<std::size_t>(q)];
        for (int r = 0; r < m; ++r) {
          if (r == q) continue;
          const double via = c[static_cast<std::size_t>(r)] -
                             sign * d[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)];
          best = sign > 0 ? std::max(best, via) : std::min(best, via);
        }
        y.at(n, k, q) = best;
      }
    }
  }
  return y;
}

}  // namespace

ValueGrid solve_single_player_max(const GameSpec& spec, const Lattice& lattice) {
  if (spec.modes().m2() != 1) throw std::invalid_argument("single-player max needs m2 = 1");
  return single_player(
      lattice, spec.modes().m1(), +1, [&](int q, double t, double x) { return spec.reward({q, 0})(t, x); },
      [&](int q, double x) { return spec.terminal({q, 0})(lattice.horizon(), x); },
      [&](int a, int b, double t, double x) { return spec.ghat(a, b)(t, x); });
}

ValueGrid solve_single_player_min(const GameSpec& spec, const Lattice& lattice) {
  if (spec.modes().m1() != 1) throw std::invalid_argument("single-player min needs m1 = 1");
  return single_player(
      lattice, spec.modes().m2(), -1, [&](int q, double t, double x) { return spec.reward({0, q})(t, x); },
      [&](int q, double x) { return spec.terminal({0, q})(lattice.horizon(), x); },
      [&](int a, int b, double t, double x) { return spec.gcheck(a, b)(t, x); });
}

ValueGrid solve_separated(const GameSpec& spec, const Lattice& lattice, const SeparatedParts& parts) {
  const int m1 = spec.modes().m1();
  const int m2 = spec.modes().m2();
  if (parts.f1.size() != static_cast<std::size_t>(m1) || parts.h1.size() != static_cast<std::size_t>(m1) ||
      parts.f2.size() != static_cast<std::size_t>(m2) || parts.h2.size() != static_cast<std::size_t>(m2)) {
    throw std::invalid_argument("separated parts do not match the mode counts");
  }
  const int N = lattice.steps();
  const int M = lattice.nodes();
  const double T = lattice.horizon();
  for (int k = 0; k < M; ++k) {
    const double x = lattice.state(k);
    for (int i = 0; i < m1; ++i) {
      for (int j = 0; j < m2; ++j) {
        for (int n = 0; n < N; ++n) {
          const double t = lattice.time(n);
          const double gap = spec.reward({i, j})(t, x) - (parts.f1[static_cast<std::size_t>(i)](t, x) +
                                                          parts.f2[static_cast<std::size_t>(j)](t, x));
          if (!(std::fabs(gap) <= 1e-12)) throw std::invalid_argument("running reward is not separated");
        }
        const double gap = spec.terminal({i, j})(T, x) - (parts.h1[static_cast<std::size_t>(i)](T, x) +
                                                          parts.h2[static_cast<std::size_t>(j)](T, x));
        if (!(std::fabs(gap) <= 1e-12)) throw std::invalid_argument("terminal reward is not separated");
      }
    }
  }

  const ValueGrid a = single_player(
      lattice, m1, +1, [&](int q, double t, double x) { return parts.f1[static_cast<std::size_t>(q)](t, x); },
      [&](int q, double x) { return parts.h1[static_cast<std::size_t>(q)](T, x); },
      [&](int p, int q, double t, double x) { return spec.ghat(p, q)(t, x); });
  const ValueGrid b = single_player(
      lattice, m2, -1, [&](int q, double t, double x) { return parts.f2[static_cast<std::size_t>(q)](t, x); },
      [&](int q, double x) { return parts.h2[static_cast<std::size_t>(q)](T, x); },
      [&](int p, int q, double t, double x) { return spec.gcheck(p, q)(t, x); });

  ValueGrid y(N, M, m1 * m2);
  for (int n = 0; n <= N; ++n) {
    for (int k = 0; k < M; ++k) {
      for (int i = 0; i < m1; ++i) {
        for (int j = 0; j < m2; ++j) y.at(n, k, i * m2 + j) = a.at(n, k, i) + b.at(n, k, j);
      }
    }
  }
  return y;
}

namespace {

// A pair's move in a candidate assignment: stay (who = 0), switch player 1
// to `target` (who = 1) or player 2 to `target` (who = 2).
struct Move {
  int who;
  int target;
};

}  // namespace

ValueGrid exhaustive_tree_value(const GameSpec& spec, const Lattice& lattice) {
  const int m1 = spec.modes().m1();
  const int m2 = spec.modes().m2();
  const int P = m1 * m2;
  const int N = lattice.steps();
  const int M = lattice.nodes();
  if (N > tiny_max_steps || M > tiny_max_nodes || P > tiny_max_pairs) {
    throw std::invalid_argument("instance exceeds the exhaustive solver's bounds");
  }
  const auto id = [m2](int i, int j) { return i * m2 + j; };

  std::vector<std::vector<Move>> options(static_cast<std::size_t>(P));
  for (int i = 0; i < m1; ++i) {
    for (int j = 0; j < m2; ++j) {
      auto& o = options[static_cast<std::size_t>(id(i, j))];
      o.push_back({0, 0});
      for (int k = 0; k < m1; ++k) {
        if (k != i) o.push_back({1, k});
      }
      for (int l = 0; l < m2; ++l) {
        if (l != j) o.push_back({2, l});
      }
    }
  }

  ValueGrid y(N, M, P);
  const double T = lattice.horizon();
  for (int k = 0; k < M; ++k) {
    for (int i = 0; i < m1; ++i) {
      for (int j = 0; j < m2; ++j) y.at(N, k, id(i, j)) = spec.terminal({i, j})(T, lattice.state(k));
    }
  }

  std::vector<std::vector<double>> next(static_cast<std::size_t>(P), std::vector<double>(static_cast<std::size_t>(M)));
  std::vector<double> c(static_cast<std::size_t>(P));
  std::vector<double> g1(static_cast<std::size_t>(m1 * m1));
  std::vector<double> g2(static_cast<std::size_t>(m2 * m2));
  std::vector<std::size_t> choice(static_cast<std::size_t>(P));
  std::vector<double> w(static_cast<std::size_t>(P));
  std::vector<int> state(static_cast<std::size_t>(P));

  for (int n = N - 1; n >= 0; --n) {
    const double t = lattice.time(n);
    for (int q = 0; q < P; ++q) {
      for (int k = 0; k < M; ++k) next[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)] = y.at(n + 1, k, q);
    }
    for (int k = 0; k < M; ++k) {
      const double x = lattice.state(k);
      for (int i = 0; i < m1; ++i) {
        for (int j = 0; j < m2; ++j) {
          c[static_cast<std::size_t>(id(i, j))] =
              average(lattice, n, k, next[static_cast<std::size_t>(id(i, j))]) + lattice.dt() * spec.reward({i, j})(t, x);
        }
      }
      for (int a = 0; a < m1; ++a) {
        for (int b = 0; b < m1; ++b) g1[static_cast<std::size_t>(a * m1 + b)] = a == b ? 0.0 : spec.ghat(a, b)(t, x);
      }
      for (int a = 0; a < m2; ++a) {
        for (int b = 0; b < m2; ++b) g2[static_cast<std::size_t>(a * m2 + b)] = a == b ? 0.0 : spec.gcheck(a, b)(t, x);
      }

      // Value implied by the assignment for pair q; false on a cycle.
      const auto resolve = [&](auto&& self, int q) -> bool {
        auto& st = state[static_cast<std::size_t>(q)];
        if (st == 2) return true;
        if (st == 1) return false;
        st = 1;
        const Move mv = options[static_cast<std::size_t>(q)][choice[static_cast<std::size_t>(q)]];
        const int i = q / m2;
        const int j = q % m2;
        double v = c[static_cast<std::size_t>(q)];
        if (mv.who == 1) {
          const int to = id(mv.target, j);
          if (!self(self, to)) return false;
          v = w[static_cast<std::size_t>(to)] - g1[static_cast<std::size_t>(i * m1 + mv.target)];
        } else if (mv.who == 2) {
          const int to = id(i, mv.target);
          if (!self(self, to)) return false;
          v = w[static_cast<std::size_t>(to)] + g2[static_cast<std::size_t>(j * m2 + mv.target)];
        }
        w[static_cast<std::size_t>(q)] = v;
        st = 2;
        return true;
      };

      std::vector<std::vector<double>> found;
      std::fill(choice.begin(), choice.end(), 0);
      for (;;) {
        std::fill(state.begin(), state.end(), 0);
        bool ok = true;
        for (int q = 0; q < P && ok; ++q) ok = resolve(resolve, q);
        if (ok) {
          bool fixed = true;
          for (int i = 0; i < m1 && fixed; ++i) {
            for (int j = 0; j < m2 && fixed; ++j) {
              double lo = -std::numeric_limits<double>::infinity();
              double hi = std::numeric_limits<double>::infinity();
              for (int a = 0; a < m1; ++a) {
                if (a != i) lo = std::max(lo, w[static_cast<std::size_t>(id(a, j))] - g1[static_cast<std::size_t>(i * m1 + a)]);
              }
              for (int b = 0; b < m2; ++b) {
                if (b != j) hi = std::min(hi, w[static_cast<std::size_t>(id(i, b))] + g2[static_cast<std::size_t>(j * m2 + b)]);
              }
              const double rhs = std::max(lo, std::min(hi, c[static_cast<std::size_t>(id(i, j))]));
              const double lhs = w[static_cast<std::size_t>(id(i, j))];
              fixed = std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(lhs));
            }
          }
          if (fixed) {
            const bool seen = std::any_of(found.begin(), found.end(), [&](const std::vector<double>& f) {
              for (int q = 0; q < P; ++q) {
                if (std::fabs(f[static_cast<std::size_t>(q)] - w[static_cast<std::size_t>(q)]) > 1e-12) return false;
              }
              return true;
            });
            if (!seen) found.push_back(w);
          }
        }
        // Next assignment, odometer style.
        int q = 0;
        while (q < P && ++choice[static_cast<std::size_t>(q)] == options[static_cast<std::size_t>(q)].size()) {
          choice[static_cast<std::size_t>(q)] = 0;
          ++q;
        }
        if (q == P) break;
      }

      if (found.empty()) {
        throw FixedPointError("no fixed point at layer " + std::to_string(n) + ", node " + std::to_string(k),
                              FixedPointError::Kind::none, n, k);
      }
      if (found.size() > 1) {
        throw FixedPointError(std::to_string(found.size()) + " distinct fixed points at layer " + std::to_string(n) +
                                  ", node " + std::to_string(k),
                              FixedPointError::Kind::non_unique, n, k);
      }
      for (int q = 0; q < P; ++q) y.at(n, k, q) = found.front()[static_cast<std::size_t>(q)];
    }
  }
  return y;
}

}  // namespace swgame::oracle
