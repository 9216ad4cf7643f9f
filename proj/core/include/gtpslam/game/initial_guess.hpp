#pragma once

#include "gtpslam/core/scenario.hpp"
#include "gtpslam/core/types.hpp"

#include <Eigen/Core>

namespace gtpslam::game {

/// Straight-line rollouts: every player keeps the fixed initial state at
/// stage 0, then advances along the road axis at constant speed in its
/// target lane with zero yaw rate. Landmarks start at the inverse projection
/// of their closest-range measurement (earliest on ties) from the guessed ego
/// pose at that stage, or at the ego's initial position when never observed
/// at positive range.
Eigen::VectorXd initial_guess(const Scenario& scenario, const MeasurementSet& meas);

}  // namespace gtpslam::game
