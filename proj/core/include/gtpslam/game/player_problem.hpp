#pragma once

#include "gtpslam/core/layout.hpp"
#include "gtpslam/core/scenario.hpp"
#include "gtpslam/core/types.hpp"
#include "gtpslam/graph/factor_graph.hpp"

#include <Eigen/Core>

namespace gtpslam::game {

/// Layout covering every player's states and controls plus all landmarks.
VariableLayout make_layout(const Scenario& scenario);

/// One player's MAP problem with everyone else's variables held constant.
///
/// The ego problem holds its own priors and dynamics, its interaction terms
/// with every other player, all landmark measurements, and the inter-player
/// measurements in both directions. A non-ego problem holds its own priors
/// and dynamics, its interaction terms, and the measurements exchanged with
/// the ego player. Pair terms therefore appear identically in both players'
/// objectives, which is what makes the game a potential game.
struct PlayerProblem {
  PlayerId player = kEgo;
  graph::FactorGraph graph;
};

/// Throws std::out_of_range for an unknown player and std::invalid_argument
/// when `all_vars` does not match the scenario layout.
PlayerProblem build_player_problem(const Scenario& scenario, const MeasurementSet& meas,
                                   const Eigen::VectorXd& all_vars, PlayerId player);

/// L^i at `all_vars`, including terms whose blocks are all frozen.
double evaluate_cost(const PlayerProblem& problem, const Eigen::VectorXd& all_vars);

}  // namespace gtpslam::game
