#include "swgame/strategies.hpp"

#include <cmath>

#include "swgame/obstacle_solver.hpp"

namespace swgame {

const char* to_string(Side side) noexcept { return side == Side::player1 ? "player1" : "player2"; }

ValidationReport validate_control(const SwitchingControl& c) {
  ValidationReport report;
  const auto add = [&](std::size_t k, const std::string& what) {
    report.add_violation({"control", {}, "entry " + std::to_string(k) + ": " + what, 1.0});
  };
  if (c.entries.empty()) {
    add(0, "control has no initial entry");
  } else {
    const int N = c.horizon;
    if (c.entries[0].step < 0 || c.entries[0].step > N) add(0, "start step outside [0, N]");
    for (std::size_t k = 1; k < c.entries.size(); ++k) {
      const ControlEntry& prev = c.entries[k - 1];
      const ControlEntry& cur = c.entries[k];
      if (cur.step > N) add(k, "step beyond the horizon");
      if (cur.step < prev.step) add(k, "steps decrease");
      if (cur.step < N) {
        if (k >= 2 && cur.step <= prev.step) add(k, "switch steps not strictly increasing");
        if (cur.mode == prev.mode) add(k, "switch keeps the same mode");
      } else if (cur.mode != prev.mode) {
        add(k, "mode changes at the horizon");
      }
    }
  }
  report.record("control", report.passed() ? CheckStatus::passed : CheckStatus::violated, report.violations().size());
  return report;
}

SwitchingControl normalized(SwitchingControl control) {
  if (control.entries.empty()) return control;
  std::vector<ControlEntry> kept{control.entries.front()};
  for (std::size_t k = 1; k < control.entries.size(); ++k) {
    const ControlEntry& e = control.entries[k];
    const ControlEntry& last = kept.back();
    if (e.step >= control.horizon || e.mode == last.mode) continue;
    const bool forward = kept.size() == 1 ? e.step >= last.step : e.step > last.step;
    if (forward) kept.push_back(e);
  }
  control.entries = std::move(kept);
  return control;
}

namespace {

CostTable costs_at_node(const ValueField& field, int n, int node) {
  return evaluate_costs(field.spec, field.lattice->time(n), field.lattice->state(node));
}

}  // namespace

bool lower_contact(const ValueField& field, int n, int node, ModePair p) {
  if (field.modes().m1() < 2) return false;
  const int q = field.modes().index(p);
  return std::fabs(field.y.at(n, node, q) - field.lower.at(n, node, q)) <= contact_tolerance;
}

bool upper_contact(const ValueField& field, int n, int node, ModePair p) {
  if (field.modes().m2() < 2) return false;
  const int q = field.modes().index(p);
  return std::fabs(field.y.at(n, node, q) - field.upper.at(n, node, q)) <= contact_tolerance;
}

ModeSelection mode_selectors(const ValueField& field, int n, int node, ModePair p) {
  ModeSelection out;
  const ModeSpace& modes = field.modes();
  if (modes.m1() < 2 && modes.m2() < 2) return out;
  const CostTable costs = costs_at_node(field, n, node);
  const auto y = field.y.node_values(n, node);
  if (modes.m1() >= 2) out.player1 = lower_choice(y, costs, modes, p).target;
  if (modes.m2() >= 2) out.player2 = upper_choice(y, costs, modes, p).target;
  return out;
}

ContactSteps contact_events(const ValueField& field, const Path& path, int start_step, ModePair p) {
  const int N = field.steps();
  if (path.steps() != N) throw std::invalid_argument("path and lattice step counts differ");
  ContactSteps out{N, N};
  for (int n = start_step; n < N; ++n) {
    const int node = field.lattice->nearest_node(path.x[static_cast<std::size_t>(n)]);
    if (out.player1 == N && lower_contact(field, n, node, p)) out.player1 = n;
    if (out.player2 == N && upper_contact(field, n, node, p)) out.player2 = n;
    if (out.player1 < N && out.player2 < N) break;
  }
  return out;
}

ReactiveStrategy::ReactiveStrategy(const ValueField& field, Side side) : field_(&field), side_(side) {}

std::optional<int> ReactiveStrategy::proposal(const PlayState& s) {
  const ModeSpace& modes = field_->modes();
  if (side_ == Side::player1) {
    if (!lower_contact(*field_, s.step, s.node, s.mode)) return std::nullopt;
    return lower_choice(field_->y.node_values(s.step, s.node), costs_at_node(*field_, s.step, s.node), modes, s.mode)
        .target;
  }
  if (!upper_contact(*field_, s.step, s.node, s.mode)) return std::nullopt;
  return upper_choice(field_->y.node_values(s.step, s.node), costs_at_node(*field_, s.step, s.node), modes, s.mode)
      .target;
}

ScheduledMoves::ScheduledMoves(const SwitchingControl& control) : control_(&control) {}

std::optional<int> ScheduledMoves::proposal(const PlayState& s) {
  // Moves the play loop declined (already in that mode) are stale by now.
  while (next_ < control_->entries.size() && control_->entries[next_].step < s.step) ++next_;
  if (next_ >= control_->entries.size()) return std::nullopt;
  const ControlEntry& e = control_->entries[next_];
  if (e.step != s.step) return std::nullopt;
  return e.mode;
}

PlayOutcome play(const ValueField& field, const Path& path, int start_step, ModePair initial, Agent& player1,
                 Agent& player2, int max_switches) {
  const ModeSpace& modes = field.modes();
  const int N = field.steps();
  if (path.steps() != N) throw std::invalid_argument("path and lattice step counts differ");
  if (start_step < 0 || start_step > N) throw std::invalid_argument("start step out of range");
  if (!modes.contains(initial)) throw std::invalid_argument("initial mode pair out of range");
  const int cap = max_switches > 0 ? max_switches : 10 * modes.size();

  PlayOutcome out;
  out.alpha = {Side::player1, N, {{start_step, initial.i}}};
  out.beta = {Side::player2, N, {{start_step, initial.j}}};
  out.joint.push_back({start_step, initial});

  ModePair mode = initial;
  int count = 0;
  const auto note_switch = [&](int n) {
    out.joint.push_back({n, mode});
    if (++count > cap) {
      throw SwitchCapError("switch cap of " + std::to_string(cap) + " exceeded at step " + std::to_string(n) +
                               " on path with seed " + std::to_string(path.seed),
                           path.seed);
    }
  };

  for (int n = start_step; n < N; ++n) {
    const double x = path.x[static_cast<std::size_t>(n)];
    const int node = field.lattice->nearest_node(x);
    // One switch per player per step keeps each control strictly increasing; a
    // reaction to the opponent's same-step move waits for the next step.
    bool moved1 = false;
    bool moved2 = false;
    for (;;) {
      const PlayState state{n, node, x, mode};
      if (!moved1) {
        if (const auto target = player1.proposal(state); target && *target != mode.i) {
          player1.accept(state);
          mode.i = *target;
          moved1 = true;
          out.alpha.entries.push_back({n, mode.i});
          note_switch(n);
          continue;
        }
      }
      if (!moved2) {
        if (const auto target = player2.proposal(state); target && *target != mode.j) {
          player2.accept(state);
          mode.j = *target;
          moved2 = true;
          out.beta.entries.push_back({n, mode.j});
          note_switch(n);
          continue;
        }
      }
      break;
    }
  }
  return out;
}

PlayOutcome equilibrium_controls(const ValueField& field, const Path& path, int start_step, ModePair initial,
                                 int max_switches) {
  ReactiveStrategy p1(field, Side::player1);
  ReactiveStrategy p2(field, Side::player2);
  return play(field, path, start_step, initial, p1, p2, max_switches);
}

ReactiveStrategy robust_best_response(const ValueField& field, Side side) { return ReactiveStrategy(field, side); }

PlayOutcome respond(const ValueField& field, const Path& path, ModePair initial, const SwitchingControl& opponent,
                    Side responder, int max_switches) {
  if (opponent.entries.empty()) throw std::invalid_argument("opponent control is empty");
  if (opponent.side == responder) throw std::invalid_argument("opponent control belongs to the responder");
  const int start = opponent.start();
  const int own = responder == Side::player1 ? initial.j : initial.i;
  if (opponent.entries.front().mode != own) {
    throw std::invalid_argument("opponent control starts in a different mode");
  }
  ReactiveStrategy reactive = robust_best_response(field, responder);
  ScheduledMoves fixed(opponent);
  if (responder == Side::player1) return play(field, path, start, initial, reactive, fixed, max_switches);
  return play(field, path, start, initial, fixed, reactive, max_switches);
}

std::vector<PolicyRow> policy_table(const ValueField& field) {
  std::vector<PolicyRow> rows;
  const auto pairs = field.modes().pairs();
  rows.reserve(static_cast<std::size_t>(field.steps()) * static_cast<std::size_t>(field.nodes()) * pairs.size());
  for (int n = 0; n < field.steps(); ++n) {
    for (int k = 0; k < field.nodes(); ++k) {
      for (ModePair p : pairs) {
        PolicyRow row{n, k, p, std::nullopt, std::nullopt};
        const bool c1 = lower_contact(field, n, k, p);
        const bool c2 = upper_contact(field, n, k, p);
        if (c1 || c2) {
          const ModeSelection sel = mode_selectors(field, n, k, p);
          if (c1) row.action1 = sel.player1;
          if (c2) row.action2 = sel.player2;
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace swgame
