#pragma once

#include "gtpslam/core/types.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace gtpslam {

enum class Integrator { euler, exact_arc };

/// Which inter-player measurements are simulated and used: both
/// directions between ego and each non-ego player, or only the ego's.
enum class InterplayerMode { both, ego_only };

struct IbrParams {
  int max_iterations = 50;
  double tolerance = 1e-4;
  /// Player update order within a round. Empty means ego first, then
  /// ascending id.
  std::vector<PlayerId> order;

  bool operator==(const IbrParams&) const = default;
};

struct SolverParams {
  int max_iterations = 100;
  double ftol = 1e-8;
  double xtol = 1e-8;
  double lambda0 = 1e-4;

  bool operator==(const SolverParams&) const = default;
};

/// Standard deviations of the initial-condition perturbation applied per
/// Monte Carlo trial, in the road frame.
struct PerturbationStd {
  double longitudinal = 0.0;
  double lateral = 0.5;
  double heading = 0.05;

  bool operator==(const PerturbationStd&) const = default;
};

struct Scenario {
  std::string name = "scenario";
  int num_players = 1;
  int horizon = 1;
  double dt = 0.2;
  double speed = 30.0;
  std::vector<Eigen::Vector2d> landmarks_truth;
  std::vector<double> lane_targets;
  std::vector<State> initial_states;
  CovarianceSet covariances;
  IbrParams ibr;
  SolverParams solver;
  double noise_std = 0.5;
  PerturbationStd perturbation;
  Integrator integrator = Integrator::euler;
  InterplayerMode interplayer_mode = InterplayerMode::both;
  double max_sensor_range = std::numeric_limits<double>::infinity();

  int num_landmarks() const { return static_cast<int>(landmarks_truth.size()); }

  /// The configured IBR order, or the default order when none is set.
  std::vector<PlayerId> update_order() const;

  bool operator==(const Scenario&) const = default;
};

/// Throws ConfigError naming the first violated invariant.
void validate(const Scenario& scenario);

/// Parses and validates a scenario document. `source` is used in error
/// messages only.
Scenario parse_scenario(std::string_view text, std::string_view source = "<memory>");
Scenario load_scenario(const std::filesystem::path& path);

/// Checks stage/landmark/player indices against the scenario, that only
/// ego-involving pairs appear, that bearings are wrapped and that no key is
/// duplicated. Throws ConfigError.
void validate(const MeasurementSet& meas, const Scenario& scenario);

std::string serialize_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// Lane centers of the bundled scenarios sit at 0, 3.7 and 7.4 m.
inline constexpr double kLaneWidth = 3.7;

}  // namespace gtpslam
