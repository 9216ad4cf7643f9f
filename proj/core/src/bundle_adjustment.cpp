#include "gtpslam/baseline/bundle_adjustment.hpp"

#include "gtpslam/game/player_problem.hpp"
#include "gtpslam/graph/factor.hpp"

#include <set>
#include <stdexcept>
#include <utility>

namespace gtpslam::baseline {

BaGraph build_ba_graph(const Scenario& scn, const MeasurementSet& meas, const Eigen::VectorXd& init_vars) {
  const VariableLayout layout = game::make_layout(scn);
  if (init_vars.size() != layout.total_dim()) throw std::invalid_argument("init_vars does not match the scenario layout");
  const CovarianceSet& cov = scn.covariances;

  BaGraph ba{graph::FactorGraph(layout), {}};
  graph::FactorGraph& g = ba.graph;
  g.free_player(kEgo);
  for (PlayerId j = 1; j < scn.num_players; ++j) g.free_player_states(j);
  g.free_landmarks();

  for (int k = 0; k < scn.horizon; ++k) {
    g.add(graph::make_prior_state(layout, kEgo, k, scn.lane_targets[kEgo], cov.sigma_g));
    g.add(graph::make_prior_control(layout, kEgo, k, cov.sigma_g_hat));
    g.add(graph::make_dynamics(layout, kEgo, k, scn.speed, scn.dt, scn.integrator, cov.sigma_f));
  }
  for (const auto& z : meas.landmark_meas) g.add(graph::make_landmark_meas(layout, z.stage, z.landmark, z.z, meas.sigma_h));

  // A non-ego heading is only observable through that player's own view of the ego.
  std::set<std::pair<PlayerId, int>> self_observed;
  for (const auto& z : meas.interplayer_meas) {
    g.add(graph::make_interplayer_meas(layout, z.observer, z.target, z.stage, z.z, meas.sigma_h_bar));
    if (z.observer != kEgo) self_observed.insert({z.observer, z.stage});
  }

  const Eigen::Matrix3d anchor_cov = Eigen::Matrix3d::Identity() * (kAnchorStd * kAnchorStd);
  for (PlayerId j = 1; j < scn.num_players; ++j) {
    for (int k = 1; k <= scn.horizon; ++k) {
      if (self_observed.contains({j, k})) continue;
      g.add(graph::make_anchor(layout, j, k, get_state(layout, init_vars, j, k), anchor_cov));
      ba.anchored.push_back(layout.state(j, k));
    }
  }
  return ba;
}

BaResult solve_ba(const Scenario& scn, const MeasurementSet& meas, const Eigen::VectorXd& init_vars) {
  BaGraph ba = build_ba_graph(scn, meas, init_vars);
  graph::SolveResult result = graph::solve_lm(ba.graph, init_vars, graph::LmOptions::from(scn.solver));

  BaResult out;
  out.report = result.report;
  out.anchored = std::move(ba.anchored);
  const VariableLayout& layout = ba.graph.layout();
  out.solution.values = std::move(result.values);
  out.solution.trajectories = unpack_trajectories(layout, out.solution.values);
  out.solution.landmarks = unpack_landmarks(layout, out.solution.values);
  out.solution.converged = result.report.termination == graph::Termination::converged;
  return out;
}

}  // namespace gtpslam::baseline
