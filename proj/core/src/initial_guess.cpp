#include "gtpslam/game/initial_guess.hpp"

#include "gtpslam/core/layout.hpp"
#include "gtpslam/game/player_problem.hpp"

#include <cmath>
#include <vector>

namespace gtpslam::game {

Eigen::VectorXd initial_guess(const Scenario& scn, const MeasurementSet& meas) {
  const VariableLayout layout = make_layout(scn);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(layout.total_dim());
  for (PlayerId i = 0; i < scn.num_players; ++i) {
    const State& x0 = scn.initial_states[static_cast<std::size_t>(i)];
    set_state(layout, v, i, 0, x0);
    for (int k = 1; k <= scn.horizon; ++k) {
      set_state(layout, v, i, k, {x0.px + scn.speed * scn.dt * k, scn.lane_targets[static_cast<std::size_t>(i)], 0.0});
    }
  }

  const State& ego0 = scn.initial_states[kEgo];
  for (int a = 0; a < scn.num_landmarks(); ++a) set_landmark(layout, v, a, ego0.position());
  // Closest-range measurement per landmark; ties go to the earliest stage.
  std::vector<const LandmarkMeasurement*> best(static_cast<std::size_t>(scn.num_landmarks()), nullptr);
  for (const auto& z : meas.landmark_meas) {
    if (!(z.z[0] > 0.0)) continue;
    const LandmarkMeasurement*& b = best[static_cast<std::size_t>(z.landmark)];
    if (b == nullptr || z.z[0] < b->z[0] || (z.z[0] == b->z[0] && z.stage < b->stage)) b = &z;
  }
  for (const LandmarkMeasurement* z : best) {
    if (z == nullptr) continue;
    const State x = get_state(layout, v, kEgo, z->stage);
    const double heading = x.theta + z->z[1];
    set_landmark(layout, v, z->landmark, {x.px + z->z[0] * std::cos(heading), x.py + z->z[0] * std::sin(heading)});
  }
  return v;
}

}  // namespace gtpslam::game
