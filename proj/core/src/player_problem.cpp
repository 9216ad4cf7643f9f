#include "gtpslam/game/player_problem.hpp"

#include "gtpslam/graph/factor.hpp"

#include <stdexcept>
#include <string>

namespace gtpslam::game {

using graph::FactorGraph;

VariableLayout make_layout(const Scenario& scenario) {
  return VariableLayout(scenario.num_players, scenario.horizon, scenario.num_landmarks());
}

PlayerProblem build_player_problem(const Scenario& scn, const MeasurementSet& meas, const Eigen::VectorXd& all_vars,
                                   PlayerId player) {
  if (player < 0 || player >= scn.num_players) {
    throw std::out_of_range("unknown player id " + std::to_string(player) + " (scenario has " +
                            std::to_string(scn.num_players) + " players)");
  }
  VariableLayout layout = make_layout(scn);
  if (all_vars.size() != layout.total_dim()) {
    throw std::invalid_argument("variable vector does not match the scenario layout");
  }
  const CovarianceSet& cov = scn.covariances;
  const double lane = scn.lane_targets[static_cast<std::size_t>(player)];

  PlayerProblem problem{player, FactorGraph(layout)};
  FactorGraph& g = problem.graph;
  g.free_player(player);
  if (player == kEgo) g.free_landmarks();

  for (int k = 0; k < scn.horizon; ++k) {
    g.add(graph::make_prior_state(layout, player, k, lane, cov.sigma_g));
    g.add(graph::make_prior_control(layout, player, k, cov.sigma_g_hat));
    g.add(graph::make_dynamics(layout, player, k, scn.speed, scn.dt, scn.integrator, cov.sigma_f));
  }
  for (PlayerId j = 0; j < scn.num_players; ++j) {
    if (j == player) continue;
    for (int k = 0; k < scn.horizon; ++k) g.add(graph::make_interaction(layout, player, j, k, cov.sigma_b));
  }
  if (player == kEgo) {
    for (const auto& z : meas.landmark_meas) {
      g.add(graph::make_landmark_meas(layout, z.stage, z.landmark, z.z, meas.sigma_h));
    }
  }
  for (const auto& z : meas.interplayer_meas) {
    const bool involves_player = player == kEgo || z.observer == player || z.target == player;
    if (!involves_player) continue;
    g.add(graph::make_interplayer_meas(layout, z.observer, z.target, z.stage, z.z, meas.sigma_h_bar));
  }
  return problem;
}

double evaluate_cost(const PlayerProblem& problem, const Eigen::VectorXd& all_vars) {
  return graph::evaluate_cost(problem.graph, all_vars);
}

}  // namespace gtpslam::game
