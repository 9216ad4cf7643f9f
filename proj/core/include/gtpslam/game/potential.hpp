#pragma once

#include "gtpslam/core/scenario.hpp"
#include "gtpslam/core/types.hpp"

#include <Eigen/Core>

#include <vector>

namespace gtpslam::game {

/// Decomposition of the potential into per-player terms C^i and pair terms
/// C^{ij}, i < j. Each pair term holds the interaction cost of the pair and,
/// for ego pairs, both directions of the inter-player measurement cost.
struct PotentialTerms {
  std::vector<double> own;
  /// Upper triangle only.
  Eigen::MatrixXd pair;

  double total() const;
};

/// Evaluates the terms directly from the model functions and explicit
/// inverse covariances, without going through factor graphs.
PotentialTerms potential_terms(const Scenario& scenario, const MeasurementSet& meas, const Eigen::VectorXd& vars);

double evaluate_potential(const Scenario& scenario, const MeasurementSet& meas, const Eigen::VectorXd& vars);

struct DeviationIdentity {
  double delta_player_cost = 0.0;
  double delta_potential = 0.0;

  /// |dL - dp| <= tol * (1 + |dp|).
  bool holds(double relative_tolerance = 1e-9) const;
};

/// Compares the change of player r's objective with the change of the
/// potential under a unilateral deviation (a full-length increment vector).
/// Throws std::invalid_argument if the deviation touches blocks r does not
/// own (initial states included; landmarks are owned by the ego only).
DeviationIdentity potential_identity_check(const Scenario& scenario, const MeasurementSet& meas,
                                           const Eigen::VectorXd& base_vars, PlayerId r,
                                           const Eigen::VectorXd& deviation);

}  // namespace gtpslam::game
