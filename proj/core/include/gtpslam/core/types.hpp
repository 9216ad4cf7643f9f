#pragma once

#include <Eigen/Core>

#include <vector>

namespace gtpslam {

/// Player 0 is the ego player; players 1..N-1 are non-ego.
using PlayerId = int;
inline constexpr PlayerId kEgo = 0;

inline constexpr int kStateDim = 3;
inline constexpr int kControlDim = 1;
inline constexpr int kLandmarkDim = 2;

struct State {
  double px = 0.0;
  double py = 0.0;
  double theta = 0.0;

  Eigen::Vector2d position() const { return {px, py}; }
  Eigen::Vector3d vector() const { return {px, py, theta}; }
  static State from_vector(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

  bool operator==(const State&) const = default;
};

struct Control {
  double omega = 0.0;

  bool operator==(const Control&) const = default;
};

/// K+1 states and K controls of one player.
struct Trajectory {
  PlayerId player_id = 0;
  std::vector<State> states;
  std::vector<Control> controls;

  int horizon() const { return static_cast<int>(controls.size()); }
  bool operator==(const Trajectory&) const = default;
};

/// Covariances of every factor family. The measurement entries double as
/// unit-scale noise shapes when measurements are synthesized at a given
/// noise level.
struct CovarianceSet {
  Eigen::Matrix3d sigma_f = Eigen::Matrix3d::Identity();
  Eigen::Matrix2d sigma_g = Eigen::Matrix2d::Identity();
  double sigma_g_hat = 1.0;
  Eigen::Matrix2d sigma_h = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d sigma_h_bar = Eigen::Matrix2d::Identity();
  double sigma_b = 1.0;

  bool operator==(const CovarianceSet&) const = default;
};

/// Range/bearing observation of one landmark by the ego player.
struct LandmarkMeasurement {
  int stage = 0;
  int landmark = 0;
  Eigen::Vector2d z = Eigen::Vector2d::Zero();

  bool operator==(const LandmarkMeasurement&) const = default;
};

/// Position of `target` expressed in the body frame of `observer`.
struct InterplayerMeasurement {
  int stage = 0;
  PlayerId observer = 0;
  PlayerId target = 0;
  Eigen::Vector2d z = Eigen::Vector2d::Zero();

  bool operator==(const InterplayerMeasurement&) const = default;
};

/// Measurements plus the covariances they were generated with. Stages are
/// 0-based and span [0, K-1]. Only ego-involving inter-player pairs exist.
struct MeasurementSet {
  std::vector<LandmarkMeasurement> landmark_meas;
  std::vector<InterplayerMeasurement> interplayer_meas;
  Eigen::Matrix2d sigma_h = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d sigma_h_bar = Eigen::Matrix2d::Identity();

  bool empty() const { return landmark_meas.empty() && interplayer_meas.empty(); }
  bool operator==(const MeasurementSet&) const = default;
};

}  // namespace gtpslam
