// gtpslam: command-line driver for planning, simulation, estimation and the
// Monte Carlo noise sweep.
//
//   gtpslam plan     --scenario s.json --out dir
//   gtpslam simulate --scenario s.json --seed 7 --levels 0.5 --out dir
//   gtpslam estimate --scenario dir/scenario.json --measurements dir/measurements.json
//                    [--ground-truth dir/ground_truth.json] --out dir
//   gtpslam sweep    --scenario s.json --profile desk --seed 1 --out dir
//   gtpslam check    --scenario s.json
//
// Exit codes: 0 success, 1 runtime failure or failed check, 2 configuration error.

#include "gtpslam/baseline/bundle_adjustment.hpp"
#include "gtpslam/core/errors.hpp"
#include "gtpslam/core/io.hpp"
#include "gtpslam/core/scenario.hpp"
#include "gtpslam/game/ibr.hpp"
#include "gtpslam/game/initial_guess.hpp"
#include "gtpslam/game/nash_check.hpp"
#include "gtpslam/game/player_problem.hpp"
#include "gtpslam/game/potential.hpp"
#include "gtpslam/graph/graph_dump.hpp"
#include "gtpslam/harness/csv_output.hpp"
#include "gtpslam/harness/metrics.hpp"
#include "gtpslam/harness/sweep.hpp"
#include "gtpslam/sim/ground_truth.hpp"
#include "gtpslam/sim/measurements.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace gtpslam;

namespace {

struct CommonFlags {
  std::string scenario;
  std::string levels;
  std::optional<int> trials;
  std::uint64_t seed = 0;
  std::string profile;
  std::string out = "out";
  int workers = 0;
  std::string ibr_order;
};

template <typename T>
std::vector<T> parse_csv_list(const std::string& text, const char* flag) {
  std::vector<T> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      T v;
      if constexpr (std::is_same_v<T, double>) {
        v = std::stod(item, &used);
      } else {
        v = static_cast<T>(std::stoi(item, &used));
      }
      if (used != item.size()) throw std::invalid_argument(item);
      values.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError(std::string(flag) + ": cannot parse '" + item + "'");
    }
  }
  return values;
}

/// Loads the scenario and applies --profile and --ibr-order.
Scenario load_with_overrides(const CommonFlags& flags) {
  if (flags.scenario.empty()) throw ConfigError("--scenario is required");
  Scenario scn = load_scenario(flags.scenario);
  if (!flags.profile.empty()) {
    if (flags.profile != "desk" && flags.profile != "paper") throw ConfigError("--profile must be desk or paper");
    scn.horizon = harness::profile_defaults(flags.profile == "desk" ? harness::Profile::desk : harness::Profile::paper)
                      .horizon;
  }
  if (!flags.ibr_order.empty()) scn.ibr.order = parse_csv_list<PlayerId>(flags.ibr_order, "--ibr-order");
  validate(scn);
  return scn;
}

double noise_level(const CommonFlags& flags, const Scenario& scn) {
  if (flags.levels.empty()) return scn.noise_std;
  const auto levels = parse_csv_list<double>(flags.levels, "--levels");
  if (levels.empty() || !(levels.front() > 0.0)) throw ConfigError("--levels: noise level must be > 0");
  return levels.front();
}

nlohmann::json solution_json(const game::GameSolution& sol, const std::string& status) {
  nlohmann::json trajectories = nlohmann::json::array();
  for (const auto& t : sol.trajectories) trajectories.push_back(to_json(t));
  nlohmann::json landmarks = nlohmann::json::array();
  for (const auto& l : sol.landmarks) landmarks.push_back({l.x(), l.y()});
  return {{"status", status},
          {"ibr_rounds", sol.ibr_iterations},
          {"converged", sol.converged},
          {"trajectories", trajectories},
          {"landmarks", landmarks}};
}

int run_plan(const CommonFlags& flags) {
  const Scenario scn = load_with_overrides(flags);
  game::GameSolution sol;
  const sim::GroundTruth gt = sim::plan_ground_truth(scn, &sol);
  write_json_file(sim::to_json(gt), fs::path(flags.out) / "ground_truth.json");
  game::write_ibr_trace_csv(sol, fs::path(flags.out) / "trace" / "plan.csv");
  std::cout << "planned " << scn.num_players << " players over " << scn.horizon << " stages: " << gt.ibr_rounds
            << " IBR rounds, converged=" << std::boolalpha << gt.converged << ", potential=" << gt.potential << '\n';
  return 0;
}

int run_simulate(const CommonFlags& flags) {
  const Scenario base = load_with_overrides(flags);
  const double sigma = noise_level(flags, base);
  const Scenario scn = sim::perturb_initials(base, harness::perturbation_seed(flags.seed, 0));
  game::GameSolution sol;
  const sim::GroundTruth gt = sim::plan_ground_truth(scn, &sol);
  const MeasurementSet meas = sim::synthesize_measurements(scn, gt, {harness::measurement_seed(flags.seed, 0, 0), sigma, 1.0});
  const fs::path out(flags.out);
  save_scenario(scn, out / "scenario.json");
  write_json_file(sim::to_json(gt), out / "ground_truth.json");
  write_json_file(to_json(meas), out / "measurements.json");
  game::write_ibr_trace_csv(sol, out / "trace" / "plan.csv");
  std::cout << "simulated sigma=" << sigma << ": " << meas.landmark_meas.size() << " landmark and "
            << meas.interplayer_meas.size() << " inter-player measurements\n";
  return 0;
}

int run_estimate(const CommonFlags& flags, const std::string& measurements_path, const std::string& truth_path,
                 const std::string& dump_path) {
  const Scenario scn = load_with_overrides(flags);
  if (measurements_path.empty()) throw ConfigError("--measurements is required");
  const MeasurementSet meas = measurements_from_json(read_json_file(measurements_path));
  validate(meas, scn);
  std::optional<sim::GroundTruth> truth;
  if (!truth_path.empty()) truth = sim::ground_truth_from_json(read_json_file(truth_path));

  const Eigen::VectorXd init = game::initial_guess(scn, meas);
  const fs::path out(flags.out);
  int exit_code = 0;

  auto report = [&](const char* name, const game::GameSolution& sol) {
    std::cout << name;
    if (truth) {
      std::cout << ": vehicle RMSE " << harness::vehicle_rmse(sol.trajectories, truth->trajectories)
                << " m, landmark RMSE " << harness::landmark_rmse(sol.landmarks, truth->landmarks) << " m";
    }
    std::cout << '\n';
  };

  try {
    const game::GameSolution sol = game::solve_ibr(scn, meas, init);
    write_json_file(solution_json(sol, "success"), out / "gtpslam.json");
    game::write_ibr_trace_csv(sol, out / "trace" / "estimate.csv");
    report("gtpslam", sol);
    if (!dump_path.empty()) {
      graph::write_graph_dump(game::build_player_problem(scn, meas, sol.values, kEgo).graph, sol.values, dump_path);
    }
  } catch (const game::IbrError& e) {
    std::cerr << "gtpslam: " << e.what() << '\n';
    write_json_file(solution_json(e.partial(), "lambda_overflow"), out / "gtpslam.json");
    exit_code = 1;
  }

  const baseline::BaResult ba = baseline::solve_ba(scn, meas, init);
  const std::string status = ba.success() ? "success" : "lambda_overflow";
  nlohmann::json ba_json = solution_json(ba.solution, status);
  ba_json["termination"] = std::string(graph::to_string(ba.report.termination));
  ba_json["lm_iterations"] = ba.report.iterations;
  ba_json["initial_cost"] = ba.report.initial_cost;
  ba_json["final_cost"] = ba.report.final_cost;
  write_json_file(ba_json, out / "ba.json");
  if (ba.success()) {
    report("ba", ba.solution);
  } else {
    std::cerr << "ba: damping overflow\n";
    exit_code = 1;
  }
  return exit_code;
}

int run_sweep(const CommonFlags& flags) {
  const Scenario scn = load_with_overrides(flags);
  harness::ProfileDefaults defaults = harness::profile_defaults(
      flags.profile == "paper" ? harness::Profile::paper : harness::Profile::desk);
  harness::SweepOptions options;
  options.levels = flags.levels.empty() ? defaults.levels : parse_csv_list<double>(flags.levels, "--levels");
  options.trials_per_level = flags.trials.value_or(defaults.trials);
  options.seed0 = flags.seed;
  options.workers = flags.workers;

  const auto start = std::chrono::steady_clock::now();
  const harness::SweepOutput output = harness::run_sweep(scn, options);
  harness::write_sweep_outputs(output, options.levels, flags.out);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::cout << "sweep: " << options.levels.size() << " levels x " << options.trials_per_level << " trials in "
            << elapsed << " s -> " << flags.out << '\n';
  if (!output.results.empty()) std::cout << harness::summary_csv(harness::summarize(output.results));
  return 0;
}

int run_check(const CommonFlags& flags) {
  const Scenario scn = load_with_overrides(flags);
  std::cout << "scenario '" << scn.name << "' is valid: N=" << scn.num_players << " K=" << scn.horizon
            << " landmarks=" << scn.num_landmarks() << '\n';

  game::GameSolution sol;
  const sim::GroundTruth gt = sim::plan_ground_truth(scn, &sol);
  bool ok = gt.converged;
  std::cout << "planning IBR: " << gt.ibr_rounds << " rounds, converged=" << std::boolalpha << gt.converged << '\n';

  int increases = 0;
  for (std::size_t i = 1; i < sol.potential_trace.size(); ++i) {
    const double prev = sol.potential_trace[i - 1];
    if (sol.potential_trace[i] > prev + 1e-9 * std::abs(prev)) ++increases;
  }
  std::cout << "potential increases across updates: " << increases << '\n';
  ok = ok && increases == 0;

  const MeasurementSet none;
  Scenario planning = scn;
  planning.landmarks_truth.clear();
  const game::NashReport nash = game::nash_check(planning, none, sol.values, {100, 1e-3, 1e-6, flags.seed});
  for (const auto& p : nash.players) {
    std::cout << "nash player " << p.player << ": L=" << p.base_cost << " worst decrease=" << p.worst_decrease
              << " violations=" << p.violations << '\n';
  }
  ok = ok && nash.passed();

  std::mt19937_64 rng(flags.seed);
  std::normal_distribution<double> normal(0.0, 1e-2);
  const VariableLayout layout = game::make_layout(planning);
  int identity_failures = 0;
  for (PlayerId r = 0; r < scn.num_players; ++r) {
    Eigen::VectorXd dev = Eigen::VectorXd::Zero(layout.total_dim());
    for (int k = 1; k <= scn.horizon; ++k) {
      const int o = layout.offset(layout.state(r, k));
      for (int d = 0; d < 3; ++d) dev[o + d] = normal(rng);
    }
    for (int k = 0; k < scn.horizon; ++k) dev[layout.offset(layout.control(r, k))] = normal(rng);
    if (!game::potential_identity_check(planning, none, sol.values, r, dev).holds()) ++identity_failures;
  }
  std::cout << "potential identity failures: " << identity_failures << '\n';
  ok = ok && identity_failures == 0;

  std::cout << (ok ? "check passed" : "check FAILED") << '\n';
  return ok ? 0 : 1;
}

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--scenario", flags.scenario, "Scenario JSON file")->required();
  cmd->add_option("--levels", flags.levels, "Comma-separated noise standard deviations");
  cmd->add_option("--trials", flags.trials, "Trials per noise level");
  cmd->add_option("--seed", flags.seed, "Base random seed");
  cmd->add_option("--profile", flags.profile, "Experiment size preset: desk or paper");
  cmd->add_option("--out", flags.out, "Output directory");
  cmd->add_option("--workers", flags.workers, "Worker threads (0 = hardware concurrency)");
  cmd->add_option("--ibr-order", flags.ibr_order, "Comma-separated player update order, e.g. 1,2,3,0");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GTP-SLAM: multi-player SLAM with game-theoretic priors"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string measurements_path, truth_path, dump_path;

  auto* plan = app.add_subcommand("plan", "Plan ground-truth equilibrium trajectories");
  auto* simulate = app.add_subcommand("simulate", "Perturb, plan and synthesize one noisy measurement set");
  auto* estimate = app.add_subcommand("estimate", "Run GTP-SLAM and bundle adjustment on a measurement set");
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo noise sweep");
  auto* check = app.add_subcommand("check", "Validate a scenario and self-check the planned equilibrium");
  for (auto* cmd : {plan, simulate, estimate, sweep, check}) add_common(cmd, flags);
  estimate->add_option("--measurements", measurements_path, "Measurement set JSON")->required();
  estimate->add_option("--ground-truth", truth_path, "Ground truth JSON for RMSE reporting");
  estimate->add_option("--dump-graph", dump_path, "Write the ego factor graph at the estimate as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*plan) return run_plan(flags);
    if (*simulate) return run_simulate(flags);
    if (*estimate) return run_estimate(flags, measurements_path, truth_path, dump_path);
    if (*sweep) return run_sweep(flags);
    if (*check) return run_check(flags);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
