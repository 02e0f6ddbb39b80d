#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "json_out.hpp"
#include "swgame/corpus.hpp"
#include "swgame/obstacle_solver.hpp"
#include "swgame/oracle.hpp"
#include "swgame/simulator.hpp"
#include "swgame/spec_io.hpp"
#include "swgame/strategies.hpp"
#include "swgame/validation.hpp"

namespace swgame::tools {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunConfig {
  std::string spec_path;
  std::string out_dir = "out";
  std::uint64_t seed = 12345;
  int steps = 200;
  int space = 201;
  std::optional<double> xmin;
  std::optional<double> xmax;
  int paths = 10000;
  int deviations = 0;
  int deviation_paths = 10000;
  int pairs = 0;
  int corpus_size = 25;
  int workers = 1;
  int trace_paths = 0;
  int export_paths = 0;
  int max_switches = 0;
  bool force = false;
  bool include_free_loop = false;
  double fixed_point_tolerance = 1e-12;
  double zero_tolerance = 1e-12;
};

// Failure that maps straight to an exit status.
struct Failure {
  int status;
  std::string message;
};

json pair_json(ModePair p) { return {{"i", p.i + 1}, {"j", p.j + 1}}; }

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Failure{exit_input, "cannot write " + file.string()};
  out << text;
}

fs::path output_dir(const RunConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{exit_input, "cannot create output directory " + dir.string() + ": " + ec.message()};
  return dir;
}

void check_config(const RunConfig& cfg) {
  if (cfg.steps < 1 || cfg.space < 1 || cfg.paths < 1) throw Failure{exit_input, "steps, space and paths must be >= 1"};
  if (!(cfg.fixed_point_tolerance > 0.0) || !(cfg.zero_tolerance > 0.0)) {
    throw Failure{exit_input, "tolerances must be positive"};
  }
  if (cfg.deviations < 0 || cfg.pairs < 0 || cfg.corpus_size < 0 || cfg.trace_paths < 0 || cfg.export_paths < 0 ||
      cfg.max_switches < 0) {
    throw Failure{exit_input, "counts must be non-negative"};
  }
  if (cfg.deviation_paths < 2) throw Failure{exit_input, "deviation paths must be >= 2"};
}

GameSpec load(const RunConfig& cfg) {
  if (cfg.spec_path.empty()) throw Failure{exit_input, "--spec is required"};
  return load_spec(cfg.spec_path);
}

Domain resolve_domain(const RunConfig& cfg, const GameSpec& spec) {
  Domain d = default_domain(spec);
  if (cfg.xmin) d.x_min = *cfg.xmin;
  if (cfg.xmax) d.x_max = *cfg.xmax;
  return d;
}

// Full resolved configuration; the worker count is left out because it
// does not influence any result.
json config_json(const RunConfig& cfg, const GameSpec& spec, const Domain& domain) {
  return {{"spec_file", cfg.spec_path},
          {"spec", json::parse(spec_to_json(spec))},
          {"steps", cfg.steps},
          {"space", cfg.space},
          {"xmin", domain.x_min},
          {"xmax", domain.x_max},
          {"seed", cfg.seed},
          {"paths", cfg.paths},
          {"deviations", cfg.deviations},
          {"deviation_paths", cfg.deviation_paths},
          {"pairs", cfg.pairs},
          {"force", cfg.force},
          {"max_switches", cfg.max_switches},
          {"fixed_point_tolerance", cfg.fixed_point_tolerance},
          {"contact_tolerance", contact_tolerance},
          {"zero_tolerance", cfg.zero_tolerance}};
}

json validation_json(const ValidationReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks()) {
    checks.push_back({{"check", c.check}, {"status", to_string(c.status)}, {"violations", c.violations}});
  }
  json violations = json::array();
  // First few of each check, so one noisy check cannot hide the others.
  constexpr int shown_per_check = 50;
  std::map<std::string, int> shown;
  for (const Violation& v : report.violations()) {
    if (shown[v.check]++ >= shown_per_check) continue;
    violations.push_back(
        {{"check", v.check}, {"t", v.at.t}, {"x", v.at.x}, {"detail", v.detail}, {"magnitude", v.magnitude}});
  }
  return {{"passed", report.passed()},
          {"checks", checks},
          {"violation_count", report.violations().size()},
          {"violations", violations}};
}

ValidationReport run_validation(const RunConfig& cfg, const GameSpec& spec, const Domain& domain) {
  ValidationOptions opts;
  opts.zero_tolerance = cfg.zero_tolerance;
  const auto samples = grid_samples(spec, std::max(cfg.steps, 1), std::max(cfg.space, 2), domain);
  ValidationReport report = validate_assumptions(spec, samples, opts);
  report.merge(check_mokobodski_feasibility(spec, nullptr, samples, opts));
  return report;
}

struct Solved {
  std::shared_ptr<const Lattice> lattice;
  std::optional<ValueField> field;
  json summary;
};

// Validation gate, lattice and backward induction. Writes validation.json.
Solved solve_stage(const RunConfig& cfg, const GameSpec& spec, const Domain& domain, const fs::path& dir,
                   std::ostream& err) {
  const ValidationReport validation = run_validation(cfg, spec, domain);
  write_text(dir / "validation.json", dump(validation_json(validation)));
  if (!validation.passed()) {
    if (!cfg.force) {
      throw Failure{exit_validation, "specification violates the standing assumptions (" +
                                         std::to_string(validation.violations().size()) +
                                         " violations, see validation.json); use --force to solve anyway"};
    }
    err << "warning: solving despite " << validation.violations().size() << " assumption violations\n";
  }

  Solved s;
  s.lattice = std::make_shared<const Lattice>(build_lattice(spec, cfg.steps, cfg.space, domain));
  FixedPointOptions fp;
  fp.tolerance = cfg.fixed_point_tolerance;
  s.field.emplace(solve(spec, s.lattice, fp));
  const ValueField& f = *s.field;

  json values = json::array();
  json dynkin = json::array();
  double worst_dynkin = 0.0;
  for (ModePair p : spec.modes().pairs()) {
    json v = pair_json(p);
    v["Y"] = f.initial_value(p);
    values.push_back(v);
    const double r = dynkin_consistency_check(f, p);
    worst_dynkin = std::max(worst_dynkin, r);
    json d = pair_json(p);
    d["residual"] = r;
    dynkin.push_back(d);
  }
  const SkorokhodResiduals sk = skorokhod_residuals(f);
  const double sandwich = barrier_sandwich_excess(f);
  const Lattice& lat = *s.lattice;
  s.summary = {
      {"values", values},
      {"initial", {{"s", spec.start_time()}, {"x0", spec.x0()}, {"node", lat.origin_node()},
                   {"node_state", lat.state(lat.origin_node())}, {"snapped", lat.origin_snapped()}}},
      {"lattice", {{"steps", lat.steps()}, {"nodes", lat.nodes()}, {"dt", lat.dt()}, {"dx", lat.dx()}}},
      {"max_residual", *std::max_element(f.residual.begin(), f.residual.end())},
      {"max_sweeps", *std::max_element(f.sweeps.begin(), f.sweeps.end())},
      {"slow_nodes", f.slow_nodes},
      {"barrier_sandwich", {{"max_excess", sandwich}, {"passed", sandwich <= 1e-10}}},
      {"skorokhod", {{"lower", sk.lower}, {"upper", sk.upper}, {"passed", sk.lower <= 1e-10 && sk.upper <= 1e-10}}},
      {"dynkin", {{"per_pair", dynkin}, {"max_residual", worst_dynkin}, {"passed", worst_dynkin <= 1e-10}}},
      {"validation_passed", validation.passed()}};
  if (lat.origin_snapped()) {
    err << "note: x0 is off the grid; values are read at the nearest node x = " << format_double(lat.state(lat.origin_node()))
        << "\n";
  }
  if (f.slow_nodes > 0) {
    err << "note: " << f.slow_nodes << " node solves needed more than m1*m2+2 sweeps\n";
  }
  return s;
}

std::vector<ModePair> selected_pairs(const RunConfig& cfg, const GameSpec& spec) {
  auto pairs = spec.modes().pairs();
  if (cfg.pairs > 0 && static_cast<std::size_t>(cfg.pairs) < pairs.size()) pairs.resize(static_cast<std::size_t>(cfg.pairs));
  return pairs;
}

std::string actions_text(const std::vector<ControlEntry>& entries, int n) {
  std::string out;
  for (std::size_t k = 1; k < entries.size(); ++k) {
    if (entries[k].step != n) continue;
    if (!out.empty()) out += '|';
    out += std::to_string(entries[k].mode + 1);
  }
  return out.empty() ? "stay" : out;
}

void write_trace(std::ostream& out, const GameSpec& spec, const Path& path, const PlayOutcome& game) {
  const CoupledControl c = couple(game.alpha, game.beta);
  const int N = path.steps();
  out << "n,t,x,i,j,action1,action2,cashflow\n";
  std::size_t k = 0;
  for (int n = 0; n <= N; ++n) {
    const double t = path.time(n);
    const double x = path.x[static_cast<std::size_t>(n)];
    ModePair mode;
    double cash = 0.0;
    if (n < N) {
      double cost = 0.0;
      while (k + 1 < c.entries.size() && c.entries[k + 1].step <= n) {
        const CoupledEntry& prev = c.entries[k];
        const CoupledEntry& cur = c.entries[k + 1];
        if (prev.mode.i != cur.mode.i) cost += spec.ghat(prev.mode.i, cur.mode.i)(t, x);
        if (prev.mode.j != cur.mode.j) cost -= spec.gcheck(prev.mode.j, cur.mode.j)(t, x);
        ++k;
      }
      mode = c.entries[k].mode;
      cash = spec.reward(mode)(t, x) * path.dt() - cost;
    } else {
      mode = mode_at(c, N);
      cash = spec.terminal(mode)(t, x);
    }
    out << n << ',' << format_double(t) << ',' << format_double(x) << ',' << mode.i + 1 << ',' << mode.j + 1 << ','
        << actions_text(game.alpha.entries, n) << ',' << actions_text(game.beta.entries, n) << ','
        << format_double(cash) << '\n';
  }
}

json estimate_json(const ValueEstimate& e) {
  json hist = json::object();
  for (const auto& [switches, paths] : e.switch_histogram) hist[std::to_string(switches)] = paths;
  const double gap = std::fabs(e.mean - e.value);
  const double bound = 3.0 * e.std_error + 0.02 * (1.0 + std::fabs(e.value));
  json out = pair_json(e.start);
  out.update({{"Y", e.value},
              {"mean", e.mean},
              {"std_error", e.std_error},
              {"paths", e.paths},
              {"seed", e.seed},
              {"abs_error", gap},
              {"acceptance_bound", bound},
              {"within_bound", gap <= bound},
              {"switch_histogram", hist},
              {"max_abs_cumulative_cost", e.max_abs_cost}});
  return out;
}

json deviations_json(const DeviationReport& d) {
  json trials = json::array();
  for (const DeviationOutcome& o : d.outcomes) {
    trials.push_back({{"side", to_string(o.side)},
                      {"trial", o.trial},
                      {"kind", to_string(o.kind)},
                      {"mean", o.mean},
                      {"std_error", o.std_error},
                      {"bound", o.bound},
                      {"margin", o.margin},
                      {"passed", o.passed}});
  }
  json out = pair_json(d.start);
  out.update({{"Y", d.value},
              {"tolerance", d.tolerance},
              {"worst_margin_player1", d.worst_margin_player1},
              {"worst_margin_player2", d.worst_margin_player2},
              {"failures", d.failures},
              {"trials", trials}});
  return out;
}

// Monte Carlo and deviation stage over the selected pairs.
json simulate_stage(const RunConfig& cfg, const GameSpec& spec, const ValueField& field, const fs::path& dir) {
  SimulationOptions opts;
  opts.paths = cfg.paths;
  opts.seed = cfg.seed;
  opts.workers = cfg.workers;
  opts.max_switches = cfg.max_switches;
  json estimates = json::array();
  json deviations = json::array();
  bool all_within = true;
  int failures = 0;
  for (ModePair p : selected_pairs(cfg, spec)) {
    const ValueEstimate e = mc_value_estimate(spec, field, p, opts);
    const json ej = estimate_json(e);
    all_within = all_within && ej["within_bound"].get<bool>();
    estimates.push_back(ej);
    if (cfg.deviations > 0) {
      SimulationOptions dev = opts;
      dev.paths = cfg.deviation_paths;
      const DeviationReport d = deviation_battery(spec, field, p, cfg.deviations, dev);
      failures += d.failures;
      deviations.push_back(deviations_json(d));
    }
    for (int k = 0; k < cfg.trace_paths; ++k) {
      const Path path = simulate_path(spec, field.steps(), stream_seed(cfg.seed, static_cast<std::uint64_t>(k)));
      std::ostringstream csv;
      write_trace(csv, spec, path, equilibrium_controls(field, path, 0, p, cfg.max_switches));
      write_text(dir / ("trace_" + std::to_string(p.i + 1) + "_" + std::to_string(p.j + 1) + "_" + std::to_string(k) +
                        ".csv"),
                 csv.str());
    }
  }
  for (int k = 0; k < cfg.export_paths; ++k) {
    std::ostringstream csv;
    write_path_csv(csv, simulate_path(spec, field.steps(), stream_seed(cfg.seed, static_cast<std::uint64_t>(k))));
    write_text(dir / ("path_" + std::to_string(k) + ".csv"), csv.str());
  }
  return {{"estimates", estimates},
          {"all_within_bound", all_within},
          {"deviations", deviations},
          {"deviation_failures", failures}};
}

void write_metadata(const fs::path& dir, const std::string& command, const RunConfig& cfg, double seconds) {
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  write_text(dir / "metadata.json",
             dump({{"command", command}, {"timestamp", stamp}, {"workers", cfg.workers}, {"wall_seconds", seconds}}));
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const GameSpec spec = load(cfg);
  const fs::path dir = output_dir(cfg);
  const Domain domain = resolve_domain(cfg, spec);
  const ValidationReport report = run_validation(cfg, spec, domain);
  json doc = validation_json(report);
  doc["config"] = config_json(cfg, spec, domain);
  write_text(dir / "validation.json", dump(doc));
  out << (report.passed() ? "valid" : "invalid") << ": " << report.violations().size() << " violations\n";
  for (const auto& c : report.checks()) {
    out << "  " << c.check << ": " << to_string(c.status) << " (" << c.violations << ")\n";
  }
  return report.passed() ? exit_ok : exit_validation;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const GameSpec spec = load(cfg);
  const fs::path dir = output_dir(cfg);
  const Domain domain = resolve_domain(cfg, spec);
  Solved s = solve_stage(cfg, spec, domain, dir, err);
  std::ostringstream csv;
  write_value_csv(csv, *s.field);
  write_text(dir / "values.csv", csv.str());
  json summary = s.summary;
  summary["config"] = config_json(cfg, spec, domain);
  write_text(dir / "summary.json", dump(summary));
  for (const auto& v : summary["values"]) {
    out << "Y(" << v["i"].get<int>() << "," << v["j"].get<int>() << ") = " << format_double(v["Y"].get<double>())
        << "\n";
  }
  return exit_ok;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err, bool full_report) {
  const auto started = std::chrono::steady_clock::now();
  const GameSpec spec = load(cfg);
  const fs::path dir = output_dir(cfg);
  const Domain domain = resolve_domain(cfg, spec);
  Solved s = solve_stage(cfg, spec, domain, dir, err);
  json doc;
  doc["config"] = config_json(cfg, spec, domain);
  doc["simulation"] = simulate_stage(cfg, spec, *s.field, dir);
  if (full_report) {
    doc["solve"] = s.summary;
    doc["validation"] = validation_json(run_validation(cfg, spec, domain));
  }
  write_text(dir / (full_report ? "report.json" : "simulation.json"), dump(doc));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_metadata(dir, full_report ? "report" : "simulate", cfg, seconds);

  for (const auto& e : doc["simulation"]["estimates"]) {
    out << "(" << e["i"].get<int>() << "," << e["j"].get<int>() << ") Y = " << format_double(e["Y"].get<double>())
        << "  MC = " << format_double(e["mean"].get<double>()) << " +/- "
        << format_double(e["std_error"].get<double>()) << (e["within_bound"].get<bool>() ? "  ok" : "  OUTSIDE")
        << "\n";
  }
  if (cfg.deviations > 0) {
    out << "deviation failures: " << doc["simulation"]["deviation_failures"].get<int>() << "\n";
  }
  return exit_ok;
}

int cmd_policy(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const GameSpec spec = load(cfg);
  const fs::path dir = output_dir(cfg);
  const Domain domain = resolve_domain(cfg, spec);
  Solved s = solve_stage(cfg, spec, domain, dir, err);
  const Lattice& lat = *s.lattice;
  std::ostringstream csv;
  csv << "n,t,node,x,i,j,action1,action2\n";
  const auto act = [](const std::optional<int>& a) { return a ? std::to_string(*a + 1) : std::string("stay"); };
  std::size_t switching = 0;
  for (const PolicyRow& r : policy_table(*s.field)) {
    if (r.action1 || r.action2) ++switching;
    csv << r.n << ',' << format_double(lat.time(r.n)) << ',' << r.node << ',' << format_double(lat.state(r.node)) << ','
        << r.mode.i + 1 << ',' << r.mode.j + 1 << ',' << act(r.action1) << ',' << act(r.action2) << '\n';
  }
  write_text(dir / "policy.csv", csv.str());
  out << "policy rows with a switch: " << switching << "\n";
  return exit_ok;
}

double max_gap(const ValueGrid& a, const ValueGrid& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.raw().size(); ++k) worst = std::max(worst, std::fabs(a.raw()[k] - b.raw()[k]));
  return worst;
}

int cmd_oracle_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const fs::path dir = output_dir(cfg);
  constexpr double exhaustive_tol = 1e-12;
  constexpr double single_tol = 1e-12;
  constexpr double separated_tol = 1e-8;

  json instances = json::array();
  json excluded = json::array();
  json warnings = json::array();
  double worst_exhaustive = 0.0;
  double worst_single = 0.0;
  double worst_separated = 0.0;
  int single_count = 0;
  bool ok = true;

  std::vector<corpus::Case> cases;
  Rng rng(cfg.seed);
  for (int k = 0; k < cfg.corpus_size; ++k) cases.push_back(corpus::random_tiny(rng, "tiny_" + std::to_string(k)));
  if (cfg.include_free_loop) cases.push_back(corpus::free_loop());

  for (const corpus::Case& c : cases) {
    const auto samples = grid_samples(c.spec, c.steps, c.nodes, c.domain);
    const ValidationReport v = validate_assumptions(c.spec, samples);
    const auto lattice = c.lattice();
    if (!v.passed()) {
      std::string oracle_verdict = "fixed point found";
      try {
        oracle::exhaustive_tree_value(c.spec, *lattice);
      } catch (const oracle::FixedPointError& e) {
        oracle_verdict = e.what();
      }
      excluded.push_back({{"name", c.name}, {"violations", v.violations().size()}, {"exhaustive", oracle_verdict}});
      err << "excluded " << c.name << ": fails the assumption validators (" << oracle_verdict << ")\n";
      continue;
    }
    const ValueField field = solve(c.spec, lattice);
    const double gap = max_gap(field.y, oracle::exhaustive_tree_value(c.spec, *lattice));
    worst_exhaustive = std::max(worst_exhaustive, gap);
    json entry = {{"name", c.name},
                  {"m1", c.spec.modes().m1()},
                  {"m2", c.spec.modes().m2()},
                  {"steps", c.steps},
                  {"nodes", c.nodes},
                  {"exhaustive_gap", gap}};
    if (c.spec.modes().m2() == 1) {
      const double g = max_gap(field.y, oracle::solve_single_player_max(c.spec, *lattice));
      worst_single = std::max(worst_single, g);
      entry["single_player_max_gap"] = g;
      ++single_count;
    }
    if (c.spec.modes().m1() == 1) {
      const double g = max_gap(field.y, oracle::solve_single_player_min(c.spec, *lattice));
      worst_single = std::max(worst_single, g);
      entry["single_player_min_gap"] = g;
      ++single_count;
    }
    instances.push_back(entry);
  }

  json separated = json::array();
  for (int k = 0; k < cfg.corpus_size; ++k) {
    const corpus::SeparatedCase sc = corpus::random_separated(rng, "separated_" + std::to_string(k));
    const auto lattice = sc.instance.lattice();
    const ValueField field = solve(sc.instance.spec, lattice);
    const double gap = max_gap(field.y, oracle::solve_separated(sc.instance.spec, *lattice, sc.parts));
    worst_separated = std::max(worst_separated, gap);
    separated.push_back({{"name", sc.instance.name},
                         {"m1", sc.instance.spec.modes().m1()},
                         {"m2", sc.instance.spec.modes().m2()},
                         {"gap", gap}});
  }

  if (cfg.corpus_size == 0) warnings.push_back("empty corpus: nothing was checked");
  ok = worst_exhaustive <= exhaustive_tol && worst_single <= single_tol && worst_separated <= separated_tol;
  const json doc = {{"passed", ok},
                    {"seed", cfg.seed},
                    {"corpus_size", cfg.corpus_size},
                    {"worst", {{"exhaustive", worst_exhaustive}, {"single_player", worst_single}, {"separated", worst_separated}}},
                    {"tolerances", {{"exhaustive", exhaustive_tol}, {"single_player", single_tol}, {"separated", separated_tol}}},
                    {"single_player_checks", single_count},
                    {"instances", instances},
                    {"separated", separated},
                    {"excluded", excluded},
                    {"warnings", warnings}};
  write_text(dir / "oracle_check.json", dump(doc));
  for (const auto& w : warnings) err << "warning: " << w.get<std::string>() << "\n";
  out << (ok ? "oracle check passed" : "oracle check FAILED") << ": exhaustive " << format_double(worst_exhaustive)
      << ", single " << format_double(worst_single) << ", separated " << format_double(worst_separated) << "\n";
  return ok ? exit_ok : exit_solver;
}

void add_common(CLI::App& app, RunConfig& cfg) {
  app.add_option("--spec", cfg.spec_path, "game specification (JSON)");
  app.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", cfg.seed, "master random seed")->capture_default_str();
  app.add_option("--steps", cfg.steps, "time steps N")->capture_default_str();
  app.add_option("--space", cfg.space, "space nodes M")->capture_default_str();
  app.add_option("--xmin", cfg.xmin, "lower state bound (default from the dynamics)");
  app.add_option("--xmax", cfg.xmax, "upper state bound (default from the dynamics)");
  app.add_option("--paths", cfg.paths, "Monte Carlo paths per mode pair")->capture_default_str();
  app.add_option("--deviations", cfg.deviations, "perturbed controls per side")->capture_default_str();
  app.add_option("--deviation-paths", cfg.deviation_paths, "paths per perturbed control")->capture_default_str();
  app.add_option("--pairs", cfg.pairs, "simulate only the first K mode pairs (0 = all)")->capture_default_str();
  app.add_option("--corpus-size", cfg.corpus_size, "random instances for oracle-check")->capture_default_str();
  app.add_option("--workers", cfg.workers, "simulation threads")->capture_default_str();
  app.add_option("--trace-paths", cfg.trace_paths, "per-path trace CSVs per simulated pair")->capture_default_str();
  app.add_option("--export-paths", cfg.export_paths, "state path CSVs to export")->capture_default_str();
  app.add_option("--max-switches", cfg.max_switches, "per-path switch cap (0 = 10 m1 m2)")->capture_default_str();
  app.add_option("--fp-tol", cfg.fixed_point_tolerance, "fixed-point tolerance")->capture_default_str();
  app.add_option("--zero-tol", cfg.zero_tolerance, "free-loop zero tolerance")->capture_default_str();
  app.add_flag("--force", cfg.force, "solve even when validation fails");
  app.add_flag("--include-free-loop", cfg.include_free_loop, "add a free-loop instance to the oracle corpus");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  CLI::App app("Two-player zero-sum switching games: validate, solve, simulate", "swgame");
  app.require_subcommand(1);
  auto* validate = app.add_subcommand("validate", "check the standing assumptions on grid samples");
  auto* solve_cmd = app.add_subcommand("solve", "solve the value surface");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo verification of the equilibrium");
  auto* policy = app.add_subcommand("policy", "dump the switching policy table");
  auto* oracle_cmd = app.add_subcommand("oracle-check", "compare the solver with the reference solvers");
  auto* report = app.add_subcommand("report", "validate, solve and simulate into one report");
  for (CLI::App* sub : {validate, solve_cmd, simulate, policy, oracle_cmd, report}) add_common(*sub, cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  }

  try {
    check_config(cfg);
    if (validate->parsed()) return cmd_validate(cfg, out);
    if (solve_cmd->parsed()) return cmd_solve(cfg, out, err);
    if (simulate->parsed()) return cmd_simulate(cfg, out, err, false);
    if (policy->parsed()) return cmd_policy(cfg, out, err);
    if (oracle_cmd->parsed()) return cmd_oracle_check(cfg, out, err);
    if (report->parsed()) return cmd_simulate(cfg, out, err, true);
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
    return f.status;
  } catch (const StabilityError& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const ConvergenceError& e) {
    err << "error: solver did not converge: " << e.what() << "\n";
    return exit_solver;
  } catch (const SwitchCapError& e) {
    err << "error: simulation aborted: " << e.what() << "\n";
    return exit_simulation;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const EvaluationError& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}

}  // namespace swgame::tools
