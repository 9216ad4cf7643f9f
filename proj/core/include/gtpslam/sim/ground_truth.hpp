#pragma once

#include "gtpslam/core/scenario.hpp"
#include "gtpslam/core/types.hpp"
#include "gtpslam/game/ibr.hpp"

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <vector>

namespace gtpslam::sim {

struct GroundTruth {
  std::vector<Trajectory> trajectories;
  std::vector<Eigen::Vector2d> landmarks;
  int ibr_rounds = 0;
  double potential = 0.0;
  bool converged = false;
};

/// Finds a local Nash equilibrium of the measurement-free game (priors,
/// dynamics and interactions only) from the straight-line guess, then
/// re-rolls the equilibrium controls through the exact dynamics so the
/// returned states are dynamically feasible. No process noise is added.
/// `solution`, when given, receives the raw IBR output before the re-roll.
GroundTruth plan_ground_truth(const Scenario& scenario, game::GameSolution* solution = nullptr);

/// States obtained by integrating each trajectory's controls from its
/// initial state.
std::vector<Trajectory> rollout(const Scenario& scenario, const std::vector<Trajectory>& trajectories);

/// Adds zero-mean Gaussian noise with standard deviations
/// scale * scenario.perturbation to every player's initial state.
/// Deterministic in `seed`; scale 0 returns the scenario unchanged.
Scenario perturb_initials(const Scenario& scenario, std::uint64_t seed, double scale = 1.0);

/// Flat variable vector holding the ground-truth trajectories and landmarks.
Eigen::VectorXd pack(const Scenario& scenario, const GroundTruth& truth);

nlohmann::json to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const nlohmann::json& j);

}  // namespace gtpslam::sim
