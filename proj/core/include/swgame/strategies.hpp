#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swgame/lattice.hpp"
#include "swgame/validation.hpp"
#include "swgame/value_field.hpp"

namespace swgame {

enum class Side { player1, player2 };

const char* to_string(Side side) noexcept;

// Contact with a barrier when |Y - barrier| is at most this.
inline constexpr double contact_tolerance = 1e-9;

// A path needed more switches than the per-path cap.
class SwitchCapError : public std::runtime_error {
 public:
  SwitchCapError(const std::string& what, std::uint64_t path_seed)
      : std::runtime_error(what), path_seed_(path_seed) {}
  std::uint64_t path_seed() const noexcept { return path_seed_; }

 private:
  std::uint64_t path_seed_;
};

struct ControlEntry {
  int step = 0;
  int mode = 0;
  bool operator==(const ControlEntry&) const = default;
};

// One player's control: entries[0] is (start step, initial mode), later
// entries are switches (step, new mode). Steps index the lattice time grid;
// `horizon` is the terminal step N.
struct SwitchingControl {
  Side side = Side::player1;
  int horizon = 0;
  std::vector<ControlEntry> entries;

  int start() const { return entries.front().step; }
  int switches() const { return static_cast<int>(entries.size()) - 1; }
  bool operator==(const SwitchingControl&) const = default;
};

ValidationReport validate_control(const SwitchingControl& control);

// Drops entries at or past the horizon, entries that repeat the previous mode
// and entries that do not move forward in time, so the result is valid.
SwitchingControl normalized(SwitchingControl control);

struct ModeSelection {
  std::optional<int> player1;  // argmax target, lowest index on ties
  std::optional<int> player2;  // argmin target, lowest index on ties
};

ModeSelection mode_selectors(const ValueField& field, int n, int node, ModePair p);

// Is the value at (n, node, p) touching the lower (player 1) or upper
// (player 2) barrier.
bool lower_contact(const ValueField& field, int n, int node, ModePair p);
bool upper_contact(const ValueField& field, int n, int node, ModePair p);

struct ContactSteps {
  int player1 = 0;  // N when never
  int player2 = 0;
};

// First steps >= start at which the path, frozen in mode p, touches each
// barrier. States map to their nearest lattice node.
ContactSteps contact_events(const ValueField& field, const Path& path, int start_step, ModePair p);

// What one player sees when deciding at a step.
struct PlayState {
  int step;
  int node;
  double x;
  ModePair mode;
};

// A player inside the step-wise play loop. proposal() is asked repeatedly
// within a step until both players pass; accept() is called when the
// proposal was carried out.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::optional<int> proposal(const PlayState& state) = 0;
  virtual void accept(const PlayState&) {}
};

// Barrier-contact player read off a solved field: switches to the selector
// target whenever the current pair touches its own barrier. One instance per
// path; it keeps no memory beyond the current pair, so its output up to a
// step depends only on the path and the opponent's moves up to that step.
class ReactiveStrategy : public Agent {
 public:
  ReactiveStrategy(const ValueField& field, Side side);
  std::optional<int> proposal(const PlayState& state) override;
  Side side() const noexcept { return side_; }

 private:
  const ValueField* field_;
  Side side_;
};

// Plays the switches of a fixed control.
class ScheduledMoves : public Agent {
 public:
  explicit ScheduledMoves(const SwitchingControl& control);
  std::optional<int> proposal(const PlayState& state) override;
  void accept(const PlayState&) override { ++next_; }

 private:
  const SwitchingControl* control_;
  std::size_t next_ = 1;
};

struct JointEntry {
  int step = 0;
  ModePair mode;
  bool operator==(const JointEntry&) const = default;
};

struct PlayOutcome {
  SwitchingControl alpha;
  SwitchingControl beta;
  std::vector<JointEntry> joint;  // in the order the switches happened
};

// Runs both agents along the path from `start_step` in pair `initial`.
// At each step player 1 is asked first; after any switch both are asked
// again. Throws SwitchCapError past max_switches (0 selects 10 * m1 * m2).
PlayOutcome play(const ValueField& field, const Path& path, int start_step, ModePair initial, Agent& player1,
                 Agent& player2, int max_switches = 0);

// Both players follow their barrier-contact rules.
PlayOutcome equilibrium_controls(const ValueField& field, const Path& path, int start_step, ModePair initial,
                                 int max_switches = 0);

// The non-anticipative best response of `side` to whatever the opponent plays.
ReactiveStrategy robust_best_response(const ValueField& field, Side side);

// `responder` reacts to the fixed control `opponent`.
PlayOutcome respond(const ValueField& field, const Path& path, ModePair initial, const SwitchingControl& opponent,
                    Side responder, int max_switches = 0);

struct PolicyRow {
  int n;
  int node;
  ModePair mode;
  std::optional<int> action1;  // switch target, none = stay
  std::optional<int> action2;
};

// Decision table for steps 0..N-1, every node and pair.
std::vector<PolicyRow> policy_table(const ValueField& field);

}  // namespace swgame
