#pragma once

#include "gtpslam/core/scenario.hpp"
#include "gtpslam/game/ibr.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gtpslam::harness {

enum class Method { gtpslam, ba };

std::string_view to_string(Method method);

struct TrialResult {
  double sigma = 0.0;
  /// Seed of this trial's measurement noise.
  std::uint64_t seed = 0;
  int trial = 0;
  Method method = Method::gtpslam;
  /// Present iff status == "success".
  std::optional<double> vehicle_rmse;
  std::optional<double> landmark_rmse;
  /// "success", "lambda_overflow", "domain_error" or "planning_failed".
  std::string status = "success";
  double wall_time_s = 0.0;
  int ibr_rounds = 0;

  bool success() const { return status == "success"; }
};

struct SweepOptions {
  std::vector<double> levels;
  int trials_per_level = 10;
  std::uint64_t seed0 = 0;
  /// 0 picks the hardware concurrency.
  int workers = 0;
};

struct SweepOutput {
  /// Ordered by (level, trial, method) regardless of the worker count.
  std::vector<TrialResult> results;
  /// IBR update trace of each GTP-SLAM result, aligned with `results`
  /// (empty for the baseline).
  std::vector<std::vector<game::IbrUpdate>> traces;
};

/// Seeds derived from seed0. The perturbation seed depends on the trial
/// only, so every noise level sees the same perturbed initial conditions.
std::uint64_t perturbation_seed(std::uint64_t seed0, int trial);
std::uint64_t measurement_seed(std::uint64_t seed0, int level_index, int trial);

/// Monte Carlo sweep. Per trial: perturb initial conditions, plan the ground
/// truth, then per noise level synthesize measurements and run GTP-SLAM and
/// bundle adjustment from the same initial guess. Trial failures are
/// recorded, never thrown. Throws ConfigError for empty levels or
/// non-positive noise levels.
SweepOutput run_sweep(const Scenario& scenario, const SweepOptions& options);

enum class Profile { desk, paper };

/// Experiment size presets. Desk: K=40, 10 trials, levels {0.1, 0.5, 1.0}.
/// Paper: K=167, 50 trials, levels {0.05, 0.10, ..., 1.0}.
struct ProfileDefaults {
  int horizon = 40;
  int trials = 10;
  std::vector<double> levels;
};

ProfileDefaults profile_defaults(Profile profile);

/// Per (sigma, method, metric) aggregate over successful trials.
struct SummaryRow {
  double sigma = 0.0;
  Method method = Method::gtpslam;
  /// "vehicle" or "landmark".
  std::string metric;
  std::optional<double> median;
  std::optional<double> q1;
  std::optional<double> q3;
  int failures = 0;
};

/// Rows ordered by sigma, then method, then metric (vehicle before
/// landmark). Throws std::invalid_argument for an empty input.
std::vector<SummaryRow> summarize(const std::vector<TrialResult>& results);

}  // namespace gtpslam::harness
