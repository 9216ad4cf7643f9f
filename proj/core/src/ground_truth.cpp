#include "gtpslam/sim/ground_truth.hpp"

#include "gtpslam/core/angle.hpp"
#include "gtpslam/core/io.hpp"
#include "gtpslam/core/layout.hpp"
#include "gtpslam/game/ibr.hpp"
#include "gtpslam/game/initial_guess.hpp"
#include "gtpslam/game/player_problem.hpp"
#include "gtpslam/game/potential.hpp"
#include "gtpslam/models/models.hpp"

#include <random>

namespace gtpslam::sim {

std::vector<Trajectory> rollout(const Scenario& scn, const std::vector<Trajectory>& trajectories) {
  std::vector<Trajectory> out = trajectories;
  for (Trajectory& t : out) {
    for (std::size_t k = 0; k < t.controls.size(); ++k) {
      t.states[k + 1] = models::dubins_step(t.states[k], t.controls[k], scn.speed, scn.dt, scn.integrator);
    }
  }
  return out;
}

GroundTruth plan_ground_truth(const Scenario& scn, game::GameSolution* solution) {
  Scenario planning = scn;
  planning.landmarks_truth.clear();
  const MeasurementSet none;
  const game::GameSolution sol =
      game::solve_ibr(planning, none, game::initial_guess(planning, none), game::IbrOptions::from(planning));

  GroundTruth gt;
  gt.trajectories = rollout(planning, sol.trajectories);
  gt.landmarks = scn.landmarks_truth;
  gt.ibr_rounds = sol.ibr_iterations;
  gt.converged = sol.converged;
  const VariableLayout layout = game::make_layout(planning);
  gt.potential = game::evaluate_potential(planning, none, gtpslam::pack(layout, gt.trajectories, {}));
  if (solution) *solution = sol;
  return gt;
}

Scenario perturb_initials(const Scenario& scn, std::uint64_t seed, double scale) {
  Scenario out = scn;
  if (scale == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (State& x : out.initial_states) {
    const double dlon = normal(rng) * scale * scn.perturbation.longitudinal;
    const double dlat = normal(rng) * scale * scn.perturbation.lateral;
    const double dhead = normal(rng) * scale * scn.perturbation.heading;
    x.px += dlon;
    x.py += dlat;
    x.theta = wrap_angle(x.theta + dhead);
  }
  return out;
}

Eigen::VectorXd pack(const Scenario& scn, const GroundTruth& truth) {
  return gtpslam::pack(game::make_layout(scn), truth.trajectories, truth.landmarks);
}

nlohmann::json to_json(const GroundTruth& truth) {
  nlohmann::json trajectories = nlohmann::json::array();
  for (const Trajectory& t : truth.trajectories) trajectories.push_back(gtpslam::to_json(t));
  nlohmann::json landmarks = nlohmann::json::array();
  for (const auto& l : truth.landmarks) landmarks.push_back({l.x(), l.y()});
  return {{"trajectories", trajectories},
          {"landmarks", landmarks},
          {"planning", {{"ibr_rounds", truth.ibr_rounds}, {"potential", truth.potential}, {"converged", truth.converged}}}};
}

GroundTruth ground_truth_from_json(const nlohmann::json& j) {
  GroundTruth gt;
  for (const auto& t : j.at("trajectories")) gt.trajectories.push_back(trajectory_from_json(t));
  for (const auto& l : j.at("landmarks")) gt.landmarks.emplace_back(l.at(0).get<double>(), l.at(1).get<double>());
  const auto& p = j.at("planning");
  gt.ibr_rounds = p.at("ibr_rounds").get<int>();
  gt.potential = p.at("potential").get<double>();
  gt.converged = p.at("converged").get<bool>();
  return gt;
}

}  // namespace gtpslam::sim
