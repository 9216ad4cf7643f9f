#include "gtpslam/game/nash_check.hpp"

#include "gtpslam/core/angle.hpp"
#include "gtpslam/core/layout.hpp"
#include "gtpslam/game/player_problem.hpp"
#include "gtpslam/models/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace gtpslam::game {

int NashReport::total_violations() const {
  int total = 0;
  for (const auto& p : players) total += p.violations;
  return total;
}

Eigen::VectorXd residual_consistent_rollout(const Scenario& scn, const Eigen::VectorXd& vars, PlayerId player,
                                            const Eigen::VectorXd& controls) {
  const VariableLayout layout = make_layout(scn);
  if (controls.size() != scn.horizon) throw std::invalid_argument("rollout: need one control per stage");
  Eigen::VectorXd out = vars;
  State x_new = get_state(layout, vars, player, 0);
  for (int k = 0; k < scn.horizon; ++k) {
    const State x_old = get_state(layout, vars, player, k);
    const Control u_old = get_control(layout, vars, player, k);
    const State next_old = get_state(layout, vars, player, k + 1);
    Eigen::Vector3d residual =
        models::dubins_step(x_old, u_old, scn.speed, scn.dt, scn.integrator).vector() - next_old.vector();
    residual[2] = wrap_angle(residual[2]);

    const Control u_new{controls[k]};
    Eigen::Vector3d next = models::dubins_step(x_new, u_new, scn.speed, scn.dt, scn.integrator).vector() - residual;
    next[2] = wrap_angle(next[2]);
    set_control(layout, out, player, k, u_new);
    x_new = State::from_vector(next);
    set_state(layout, out, player, k + 1, x_new);
  }
  return out;
}

NashReport nash_check(const Scenario& scn, const MeasurementSet& meas, const Eigen::VectorXd& vars,
                      const NashCheckOptions& options) {
  const VariableLayout layout = make_layout(scn);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  NashReport report;
  for (PlayerId i = 0; i < scn.num_players; ++i) {
    const PlayerProblem problem = build_player_problem(scn, meas, vars, i);
    PlayerNashResult result;
    result.player = i;
    result.base_cost = evaluate_cost(problem, vars);
    result.worst_decrease = -std::numeric_limits<double>::infinity();
    const double tol = options.relative_tolerance * (1.0 + std::abs(result.base_cost));

    Eigen::VectorXd base_controls(scn.horizon);
    for (int k = 0; k < scn.horizon; ++k) base_controls[k] = get_control(layout, vars, i, k).omega;

    for (int p = 0; p < options.num_probes; ++p) {
      Eigen::VectorXd direction(scn.horizon);
      for (int k = 0; k < scn.horizon; ++k) direction[k] = normal(rng);
      const double norm = direction.norm();
      if (norm == 0.0) continue;
      const Eigen::VectorXd probe =
          residual_consistent_rollout(scn, vars, i, base_controls + direction * (options.probe_scale / norm));
      const double decrease = result.base_cost - evaluate_cost(problem, probe);
      result.worst_decrease = std::max(result.worst_decrease, decrease);
      if (decrease > tol) ++result.violations;
    }
    report.players.push_back(result);
  }
  return report;
}

}  // namespace gtpslam::game
