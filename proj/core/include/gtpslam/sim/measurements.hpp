#pragma once

#include "gtpslam/core/scenario.hpp"
#include "gtpslam/core/types.hpp"
#include "gtpslam/sim/ground_truth.hpp"

#include <cstdint>

namespace gtpslam::sim {

struct TrialSpec {
  std::uint64_t seed = 0;
  /// Measurement noise standard deviation, applied to every measurement
  /// component through the unit-scale shapes in the scenario covariances.
  double noise_std = 0.5;
  /// Multiplier on the scenario's initial-condition perturbation.
  double perturbation_scale = 1.0;
};

/// Noisy range/bearing measurements of every landmark within sensor range
/// and inter-player measurements between the ego and each non-ego player
/// (both directions unless the scenario is ego-only), at stages 0..K-1.
/// The returned covariances are noise_std^2 times the scenario shapes.
/// Pure in (scenario, truth, spec). Throws std::invalid_argument for
/// noise_std <= 0.
MeasurementSet synthesize_measurements(const Scenario& scenario, const GroundTruth& truth, const TrialSpec& spec);

}  // namespace gtpslam::sim
