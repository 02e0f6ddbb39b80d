// Acceptance suite: one PASS/FAIL line per criterion. Optional arguments
// select criteria by id, e.g. `acceptance AC-6 AC-10`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "swgame/corpus.hpp"
#include "swgame/obstacle_solver.hpp"
#include "swgame/oracle.hpp"
#include "swgame/simulator.hpp"
#include "swgame/spec_io.hpp"
#include "swgame/strategies.hpp"
#include "swgame/validation.hpp"

using namespace swgame;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t corpus_seed = 2024;
constexpr int corpus_random = 25;
constexpr std::uint64_t mc_seed = 20240601;
constexpr int mc_paths = 50000;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Solved {
  corpus::Case instance;
  std::shared_ptr<const Lattice> lattice;
  ValueField field;
};

const std::vector<Solved>& solved_corpus() {
  static const std::vector<Solved> cases = [] {
    std::vector<Solved> out;
    for (corpus::Case& c : corpus::standard(corpus_seed, corpus_random)) {
      auto lat = c.lattice();
      ValueField f = solve(c.spec, lat);
      out.push_back({std::move(c), lat, std::move(f)});
    }
    return out;
  }();
  return cases;
}

double max_abs_diff(const ValueGrid& a, const ValueGrid& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.raw().size(); ++k) worst = std::max(worst, std::fabs(a.raw()[k] - b.raw()[k]));
  return worst;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("swgame_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_spec(const fs::path& dir, const GameSpec& spec) {
  const fs::path file = dir / "spec.json";
  std::ofstream(file, std::ios::binary) << spec_to_json(spec);
  return file;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  return tools::run_cli(args, out, err);
}

Outcome ac1() {
  double sandwich = -1e300;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t misplaced = 0;
  const auto& cases = solved_corpus();
  for (const Solved& s : cases) {
    const ValueField& f = s.field;
    sandwich = std::max(sandwich, barrier_sandwich_excess(f));
    const SkorokhodResiduals sk = skorokhod_residuals(f);
    lower = std::max(lower, sk.lower);
    upper = std::max(upper, sk.upper);
    for (std::size_t k = 0; k < f.y.raw().size(); ++k) {
      if (f.dk_plus.raw()[k] < 0.0 || f.dk_minus.raw()[k] < 0.0) ++misplaced;
      if (f.dk_plus.raw()[k] > 0.0 && f.y.raw()[k] - f.lower.raw()[k] > 1e-9) ++misplaced;
      if (f.dk_minus.raw()[k] > 0.0 && f.upper.raw()[k] - f.y.raw()[k] > 1e-9) ++misplaced;
    }
  }
  const bool ok = sandwich <= 1e-10 && lower <= 1e-10 && upper <= 1e-10 && misplaced == 0;
  return {ok, std::to_string(cases.size()) + " specs; sandwich excess " + sci(sandwich) + ", Skorokhod " + sci(lower) +
                  " / " + sci(upper) + ", misplaced increments " + std::to_string(misplaced)};
}

Outcome ac2() {
  std::size_t mismatches = 0;
  std::size_t checked = 0;
  for (const Solved& s : solved_corpus()) {
    const Lattice& lat = *s.lattice;
    for (int k = 0; k < lat.nodes(); ++k) {
      for (ModePair p : s.instance.spec.modes().pairs()) {
        const double h = s.instance.spec.terminal(p)(s.instance.spec.horizon(), lat.state(k));
        mismatches += s.field.value(lat.steps(), k, p) != h;
        ++checked;
      }
    }
  }
  return {mismatches == 0, std::to_string(checked) + " terminal entries, " + std::to_string(mismatches) + " differ"};
}

Outcome ac3() {
  const corpus::Case c = corpus::deterministic_two_mode();
  const auto lat = c.lattice();
  const ValueField f = solve(c.spec, lat);
  const ValueGrid reference = oracle::solve_single_player_max(c.spec, *lat);
  const int node = lat->origin_node();
  const double y1 = f.initial_value({0, 0});
  const double y2 = f.initial_value({1, 0});
  const bool values = std::fabs(y1 - 1.5) <= 1e-10 && std::fabs(y2 - 2.0) <= 1e-10 &&
                      std::fabs(y1 - reference.at(0, node, 0)) <= 1e-10 &&
                      std::fabs(y2 - reference.at(0, node, 1)) <= 1e-10;
  SimulationOptions opts;
  opts.paths = 1000;
  opts.seed = mc_seed;
  const ValueEstimate e = mc_value_estimate(c.spec, f, {0, 0}, opts);
  const bool sim = e.mean == 1.5 && e.std_error == 0.0;
  return {values && sim, "Y = (" + format_double(y1) + ", " + format_double(y2) + "), oracle (" +
                             format_double(reference.at(0, node, 0)) + ", " + format_double(reference.at(0, node, 1)) +
                             "), MC mean " + format_double(e.mean) + " stderr " + format_double(e.std_error)};
}

Outcome ac4() {
  Rng rng(corpus_seed);
  double exhaustive = 0.0;
  int tiny = 0;
  for (int k = 0; k < corpus_random; ++k) {
    const corpus::Case c = corpus::random_tiny(rng, "tiny");
    const auto lat = c.lattice();
    exhaustive = std::max(exhaustive, max_abs_diff(solve(c.spec, lat).y, oracle::exhaustive_tree_value(c.spec, *lat)));
    ++tiny;
  }
  double single = 0.0;
  int reductions = 0;
  for (const Solved& s : solved_corpus()) {
    if (s.instance.spec.modes().m2() == 1) {
      single = std::max(single, max_abs_diff(s.field.y, oracle::solve_single_player_max(s.instance.spec, *s.lattice)));
      ++reductions;
    }
    if (s.instance.spec.modes().m1() == 1) {
      single = std::max(single, max_abs_diff(s.field.y, oracle::solve_single_player_min(s.instance.spec, *s.lattice)));
      ++reductions;
    }
  }
  double separated = 0.0;
  int sep = 0;
  for (int k = 0; k < 12; ++k) {
    const corpus::SeparatedCase sc = corpus::random_separated(rng, "separated");
    const auto lat = sc.instance.lattice();
    separated = std::max(separated, max_abs_diff(solve(sc.instance.spec, lat).y,
                                                 oracle::solve_separated(sc.instance.spec, *lat, sc.parts)));
    ++sep;
  }
  const bool ok = tiny >= 25 && sep >= 10 && reductions > 0 && exhaustive <= 1e-12 && single <= 1e-12 &&
                  separated <= 1e-8;
  return {ok, "exhaustive " + sci(exhaustive) + " on " + std::to_string(tiny) + " tiny, single-player " + sci(single) +
                  " on " + std::to_string(reductions) + " reductions, separated " + sci(separated) + " on " +
                  std::to_string(sep)};
}

Outcome ac5() {
  double worst = 0.0;
  int checks = 0;
  for (const Solved& s : solved_corpus()) {
    for (ModePair p : s.instance.spec.modes().pairs()) {
      worst = std::max(worst, dynkin_consistency_check(s.field, p));
      ++checks;
    }
  }
  return {worst <= 1e-10, std::to_string(checks) + " re-solves, worst residual " + sci(worst)};
}

Outcome ac6() {
  const corpus::Case c = corpus::stochastic_acceptance();
  const auto samples = grid_samples(c.spec, c.steps, c.nodes, c.domain);
  if (!validate_assumptions(c.spec, samples).passed()) return {false, "instance fails the validators"};
  const ValueField f = solve(c.spec, c.lattice());
  SimulationOptions opts;
  opts.paths = mc_paths;
  opts.seed = mc_seed;
  bool ok = true;
  std::string detail;
  for (ModePair p : c.spec.modes().pairs()) {
    const ValueEstimate e = mc_value_estimate(c.spec, f, p, opts);
    const double gap = std::fabs(e.mean - e.value);
    const double bound = 3.0 * e.std_error + 0.02 * (1.0 + std::fabs(e.value));
    ok = ok && gap <= bound;
    detail += "(" + std::to_string(p.i + 1) + "," + std::to_string(p.j + 1) + ") |" + sci(e.mean) + " - " +
              sci(e.value) + "| = " + sci(gap) + " <= " + sci(bound) + "; ";
  }
  return {ok, detail};
}

Outcome ac7() {
  const corpus::Case c = corpus::stochastic_acceptance();
  const ValueField f = solve(c.spec, c.lattice());
  SimulationOptions opts;
  opts.paths = 10000;
  opts.seed = mc_seed;
  int failures = 0;
  int trials = 0;
  double worst1 = 1e300;
  double worst2 = 1e300;
  for (ModePair p : c.spec.modes().pairs()) {
    const DeviationReport r = deviation_battery(c.spec, f, p, 20, opts);
    failures += r.failures;
    trials += static_cast<int>(r.outcomes.size());
    worst1 = std::min(worst1, r.worst_margin_player1);
    worst2 = std::min(worst2, r.worst_margin_player2);
  }
  return {failures == 0, std::to_string(trials) + " deviations, " + std::to_string(failures) +
                             " failures, worst margins " + sci(worst1) + " (player 1) / " + sci(worst2) +
                             " (player 2)"};
}

Outcome ac8() {
  const corpus::Case c = corpus::free_loop();
  const auto samples = grid_samples(c.spec, c.steps, c.nodes, c.domain);
  const ValidationReport v = validate_no_free_loop(c.spec, samples);
  bool converged = false;
  try {
    solve(c.spec, c.lattice());
    converged = true;
  } catch (const ConvergenceError&) {
  }
  const fs::path dir = scratch("ac8");
  const std::string spec = write_spec(dir, c.spec).string();
  const std::vector<std::string> base{"solve", "--spec", spec, "--steps", std::to_string(c.steps), "--space",
                                      std::to_string(c.nodes), "--out", dir.string()};
  const int refused = cli(base);
  auto forced = base;
  forced.push_back("--force");
  const int status = cli(forced);
  const bool ok = !v.passed() && !converged && refused == 1 && status == 3 && !fs::exists(dir / "values.csv");
  return {ok, std::to_string(v.violations().size()) + " free-loop violations; solver " +
                  (converged ? "converged" : "raised non-convergence") + "; CLI status " + std::to_string(refused) +
                  " without --force, " + std::to_string(status) + " with"};
}

bool same_selectors(const ValueField& a, const ValueField& b) {
  for (int n = 0; n < a.steps(); ++n) {
    for (int k = 0; k < a.nodes(); ++k) {
      for (ModePair p : a.modes().pairs()) {
        const ModeSelection x = mode_selectors(a, n, k, p);
        const ModeSelection y = mode_selectors(b, n, k, p);
        if (x.player1 != y.player1 || x.player2 != y.player2) return false;
        if (lower_contact(a, n, k, p) != lower_contact(b, n, k, p)) return false;
        if (upper_contact(a, n, k, p) != upper_contact(b, n, k, p)) return false;
      }
    }
  }
  return true;
}

Outcome ac9() {
  double homogeneity = 0.0;
  bool selectors = true;
  std::size_t decreases = 0;
  for (const Solved& s : solved_corpus()) {
    const ValueField g = solve(scaled(s.instance.spec, 2.0), s.lattice);
    for (std::size_t k = 0; k < g.y.raw().size(); ++k) {
      const double want = 2.0 * s.field.y.raw()[k];
      homogeneity = std::max(homogeneity, std::fabs(g.y.raw()[k] - want) / std::max(1.0, std::fabs(want)));
    }
    selectors = selectors && same_selectors(s.field, g);
    const ValueField up = solve(with_reward_shift(s.instance.spec, 0.1), s.lattice);
    for (std::size_t k = 0; k < up.y.raw().size(); ++k) decreases += up.y.raw()[k] < s.field.y.raw()[k];
  }

  const corpus::Case c = corpus::stochastic_acceptance();
  std::vector<ValueField> fields;
  for (int scale : {1, 2, 4}) {
    fields.push_back(solve(c.spec, std::make_shared<const Lattice>(build_lattice(c.spec, 50 * scale, 50 * scale + 1, c.domain))));
  }
  double d1 = 0.0;
  double d2 = 0.0;
  for (ModePair p : c.spec.modes().pairs()) {
    d1 = std::max(d1, std::fabs(fields[1].initial_value(p) - fields[0].initial_value(p)));
    d2 = std::max(d2, std::fabs(fields[2].initial_value(p) - fields[1].initial_value(p)));
  }
  const bool ok = homogeneity <= 1e-12 && selectors && decreases == 0 && d2 < d1;
  return {ok, "homogeneity " + sci(homogeneity) + (selectors ? ", selectors identical" : ", selectors differ") +
                  ", " + std::to_string(decreases) + " decreases under +0.1, refinement gaps " + sci(d1) + " -> " +
                  sci(d2)};
}

Outcome ac10() {
  const corpus::Case c = corpus::stochastic_acceptance();
  const fs::path dir = scratch("ac10");
  const std::string spec = write_spec(dir, c.spec).string();
  std::vector<std::string> base{"report", "--spec", spec, "--steps", std::to_string(c.steps), "--space",
                                std::to_string(c.nodes), "--paths", std::to_string(mc_paths), "--seed",
                                std::to_string(mc_seed)};
  auto one = base;
  one.insert(one.end(), {"--workers", "1", "--out", (dir / "w1").string()});
  auto two = base;
  two.insert(two.end(), {"--workers", "2", "--out", (dir / "w2").string()});
  const int s1 = cli(one);
  const int s2 = cli(two);
  const std::string a = slurp(dir / "w1" / "report.json");
  const std::string b = slurp(dir / "w2" / "report.json");
  const bool ok = s1 == 0 && s2 == 0 && !a.empty() && a == b;
  return {ok, "statuses " + std::to_string(s1) + "/" + std::to_string(s2) + ", report " + std::to_string(a.size()) +
                  " bytes, " + (a == b ? "identical" : "different")};
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"AC-1", "barrier sandwich and Skorokhod conditions", ac1},
      {"AC-2", "terminal exactness", ac2},
      {"AC-3", "deterministic two-mode instance", ac3},
      {"AC-4", "oracle equivalence", ac4},
      {"AC-5", "Dynkin consistency", ac5},
      {"AC-6", "Monte Carlo value verification", ac6},
      {"AC-7", "saddle property under deviations", ac7},
      {"AC-8", "assumption enforcement", ac8},
      {"AC-9", "scheme properties", ac9},
      {"AC-10", "reproducibility across worker counts", ac10},
  };
  std::set<std::string> selected(argv + 1, argv + argc);
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.passed;
    std::printf("%-5s %s  %s: %s [%.1f s]\n", c.id, o.passed ? "PASS" : "FAIL", c.title, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
