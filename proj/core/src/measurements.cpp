#include "gtpslam/sim/measurements.hpp"

#include "gtpslam/core/angle.hpp"
#include "gtpslam/models/models.hpp"

#include <Eigen/Cholesky>

#include <random>
#include <stdexcept>

namespace gtpslam::sim {

MeasurementSet synthesize_measurements(const Scenario& scn, const GroundTruth& gt, const TrialSpec& spec) {
  if (!(spec.noise_std > 0.0)) throw std::invalid_argument("synthesize_measurements: noise_std must be > 0");
  const double var = spec.noise_std * spec.noise_std;

  MeasurementSet meas;
  meas.sigma_h = var * scn.covariances.sigma_h;
  meas.sigma_h_bar = var * scn.covariances.sigma_h_bar;
  const Eigen::Matrix2d L_h = meas.sigma_h.llt().matrixL();
  const Eigen::Matrix2d L_h_bar = meas.sigma_h_bar.llt().matrixL();

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](const Eigen::Matrix2d& L) -> Eigen::Vector2d {
    const double a = normal(rng);
    const double b = normal(rng);
    return L * Eigen::Vector2d(a, b);
  };

  const Trajectory& ego = gt.trajectories.at(kEgo);
  for (int k = 0; k < scn.horizon; ++k) {
    const State& xe = ego.states.at(static_cast<std::size_t>(k));
    for (int a = 0; a < static_cast<int>(gt.landmarks.size()); ++a) {
      const Eigen::Vector2d& l = gt.landmarks[static_cast<std::size_t>(a)];
      if ((l - xe.position()).norm() > scn.max_sensor_range) continue;
      Eigen::Vector2d z = models::landmark_meas(xe, l) + draw(L_h);
      z[1] = wrap_angle(z[1]);
      meas.landmark_meas.push_back({k, a, z});
    }
    for (PlayerId j = 1; j < scn.num_players; ++j) {
      const State& xj = gt.trajectories.at(static_cast<std::size_t>(j)).states.at(static_cast<std::size_t>(k));
      meas.interplayer_meas.push_back({k, kEgo, j, models::interplayer_meas(xe, xj) + draw(L_h_bar)});
      if (scn.interplayer_mode == InterplayerMode::both) {
        meas.interplayer_meas.push_back({k, j, kEgo, models::interplayer_meas(xj, xe) + draw(L_h_bar)});
      }
    }
  }
  return meas;
}

}  // namespace gtpslam::sim
