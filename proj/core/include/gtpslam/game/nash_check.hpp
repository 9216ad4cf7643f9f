#pragma once

#include "gtpslam/core/scenario.hpp"
#include "gtpslam/core/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace gtpslam::game {

struct NashCheckOptions {
  int num_probes = 100;
  /// Euclidean norm of every control deviation.
  double probe_scale = 1e-3;
  /// A probe violates when it lowers L^i by more than tol * (1 + |L^i|).
  double relative_tolerance = 1e-6;
  std::uint64_t seed = 0;
};

struct PlayerNashResult {
  PlayerId player = 0;
  double base_cost = 0.0;
  /// Largest decrease L^i(base) - L^i(probe) over all probes. Negative when
  /// every probe increased the cost.
  double worst_decrease = 0.0;
  int violations = 0;
};

struct NashReport {
  std::vector<PlayerNashResult> players;

  int total_violations() const;
  bool passed() const { return total_violations() == 0; }
};

/// Local open-loop Nash test. Each probe perturbs one player's controls and
/// re-rolls that player's states so every dynamics residual keeps its
/// current value; the player's objective must not drop.
NashReport nash_check(const Scenario& scenario, const MeasurementSet& meas, const Eigen::VectorXd& vars,
                      const NashCheckOptions& options = {});

/// Replaces player `player`'s controls by `controls` and rolls its states
/// forward, preserving every dynamics residual of `vars`.
Eigen::VectorXd residual_consistent_rollout(const Scenario& scenario, const Eigen::VectorXd& vars, PlayerId player,
                                            const Eigen::VectorXd& controls);

}  // namespace gtpslam::game
