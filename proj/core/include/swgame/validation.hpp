#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swgame/game.hpp"
#include "swgame/lattice.hpp"
#include "swgame/value_field.hpp"

namespace swgame {

struct Sample {
  double t = 0.0;
  double x = 0.0;
};

enum class CheckStatus { passed, violated, vacuous };

const char* to_string(CheckStatus status) noexcept;

struct Violation {
  std::string check;
  Sample at;
  std::string detail;  // which modes / loop
  double magnitude = 0.0;
};

struct CheckOutcome {
  std::string check;
  CheckStatus status = CheckStatus::passed;
  std::size_t violations = 0;
};

class ValidationReport {
 public:
  void record(std::string check, CheckStatus status, std::size_t violation_count);
  void add_violation(Violation v) { violations_.push_back(std::move(v)); }
  void merge(const ValidationReport& other);

  bool passed() const noexcept { return violations_.empty(); }
  const std::vector<CheckOutcome>& checks() const noexcept { return checks_; }
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<CheckOutcome> checks_;
  std::vector<Violation> violations_;
};

// A closed walk (first == last) in the mode graph where each step changes
// exactly one player's mode and the interior members are distinct.
struct Loop {
  std::vector<ModePair> members;
  int length() const noexcept { return static_cast<int>(members.size()) - 1; }
};

struct ValidationOptions {
  // Strict inequalities need slack strictly greater than this.
  double strict_slack = 0.0;
  // |loop sum| at or below this counts as a free loop.
  double zero_tolerance = 1e-12;
  // 0 selects the default cap 2 * m1 * m2.
  int max_loop_length = 0;
  // Allowed excess in the Mokobodski sandwich.
  double feasibility_tolerance = 1e-10;
};

// Grid nodes (t_n, x_k) of a uniform N x M grid over [s, T] x domain.
std::vector<Sample> grid_samples(const GameSpec& spec, int steps, int nodes, Domain domain);

ValidationReport validate_nonnegativity(const GameSpec& spec, const std::vector<Sample>& samples);

// Strict triangle inequality for distinct triples of each player (vacuous
// with fewer than three modes) and the terminal ordering at t = T over the
// distinct sample states.
ValidationReport validate_consistency(const GameSpec& spec, const std::vector<Sample>& samples,
                                      const ValidationOptions& options = {});

// All loops of length 2..max_length, one representative per cycle up to
// rotation and reversal, sorted by length then members.
std::vector<Loop> enumerate_loops(const ModeSpace& modes, int max_length);

// Every enumerated loop is tested in both traversal directions.
ValidationReport validate_no_free_loop(const GameSpec& spec, const std::vector<Sample>& samples,
                                       const ValidationOptions& options = {});

// Mokobodski sandwich for `candidate` (nearest lattice node to each sample),
// or for the null process when no candidate is given.
ValidationReport check_mokobodski_feasibility(const GameSpec& spec, const ValueField* candidate,
                                              const std::vector<Sample>& samples,
                                              const ValidationOptions& options = {});

// Non-negativity, consistency and non-free-loop together.
ValidationReport validate_assumptions(const GameSpec& spec, const std::vector<Sample>& samples,
                                      const ValidationOptions& options = {});

}  // namespace swgame
