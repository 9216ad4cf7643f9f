#pragma once

#include "gtpslam/core/types.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gtpslam::harness {

/// Root-mean-square planar position error over every player and every
/// stage. Headings are ignored. Throws std::invalid_argument on shape
/// mismatch.
double vehicle_rmse(std::span<const Trajectory> estimate, std::span<const Trajectory> truth);

/// Root-mean-square landmark position error; indices correspond.
double landmark_rmse(std::span<const Eigen::Vector2d> estimate, std::span<const Eigen::Vector2d> truth);

/// Linear-interpolation quantile (q in [0, 1]) of a non-empty sample.
double quantile(std::vector<double> values, double q);

}  // namespace gtpslam::harness
