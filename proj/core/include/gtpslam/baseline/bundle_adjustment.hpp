#pragma once

#include "gtpslam/core/layout.hpp"
#include "gtpslam/core/scenario.hpp"
#include "gtpslam/core/types.hpp"
#include "gtpslam/game/ibr.hpp"
#include "gtpslam/graph/factor_graph.hpp"
#include "gtpslam/graph/lm_solver.hpp"

#include <Eigen/Core>

#include <vector>

namespace gtpslam::baseline {

/// Standard deviation of the weak anchor placed on non-ego states whose
/// heading no measurement constrains.
inline constexpr double kAnchorStd = 1e4;

struct BaGraph {
  graph::FactorGraph graph;
  /// Non-ego state blocks the measurements leave under-constrained; each one
  /// carries a weak anchor factor at its initial-guess value.
  std::vector<BlockId> anchored;
};

/// Joint MAP problem without game-theoretic priors: ego priors and dynamics,
/// every landmark and inter-player measurement, no interaction terms, and no
/// priors or dynamics for non-ego players. Free blocks are every player's
/// states (stages 1..K), the ego's controls and all landmarks.
BaGraph build_ba_graph(const Scenario& scenario, const MeasurementSet& meas, const Eigen::VectorXd& init_vars);

struct BaResult {
  /// Same shape as the IBR output; ibr_iterations is 0 and the traces are empty.
  game::GameSolution solution;
  graph::SolveReport report;
  std::vector<BlockId> anchored;

  bool success() const { return report.termination != graph::Termination::lambda_overflow; }
};

/// One Levenberg-Marquardt solve on the bundle-adjustment graph. Damping
/// overflow is reported through `success()`, never thrown.
BaResult solve_ba(const Scenario& scenario, const MeasurementSet& meas, const Eigen::VectorXd& init_vars);

}  // namespace gtpslam::baseline
