#include "gtpslam/game/potential.hpp"

#include "gtpslam/core/angle.hpp"
#include "gtpslam/core/layout.hpp"
#include "gtpslam/game/player_problem.hpp"
#include "gtpslam/models/models.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>
#include <string>

namespace gtpslam::game {

namespace {

template <typename Vec, typename Mat>
double mahalanobis(const Vec& r, const Mat& sigma) {
  return r.dot(sigma.ldlt().solve(r));
}

}  // namespace

double PotentialTerms::total() const {
  double sum = 0.0;
  for (double c : own) sum += c;
  for (Eigen::Index i = 0; i < pair.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < pair.cols(); ++j) sum += pair(i, j);
  }
  return sum;
}

PotentialTerms potential_terms(const Scenario& scn, const MeasurementSet& meas, const Eigen::VectorXd& vars) {
  const VariableLayout layout = make_layout(scn);
  if (vars.size() != layout.total_dim()) throw std::invalid_argument("variable vector does not match the scenario layout");
  const CovarianceSet& cov = scn.covariances;
  const int n = scn.num_players;

  PotentialTerms terms;
  terms.own.assign(static_cast<std::size_t>(n), 0.0);
  terms.pair = Eigen::MatrixXd::Zero(n, n);

  for (PlayerId i = 0; i < n; ++i) {
    double& c = terms.own[static_cast<std::size_t>(i)];
    const double lane = scn.lane_targets[static_cast<std::size_t>(i)];
    for (int k = 0; k < scn.horizon; ++k) {
      const State x = get_state(layout, vars, i, k);
      const Control u = get_control(layout, vars, i, k);
      const State next = get_state(layout, vars, i, k + 1);
      c += mahalanobis(models::state_prior_residual(x, lane), cov.sigma_g);
      const double w = models::control_prior_residual(u);
      c += w * w / cov.sigma_g_hat;
      Eigen::Vector3d d = models::dubins_step(x, u, scn.speed, scn.dt, scn.integrator).vector() - next.vector();
      d[2] = wrap_angle(d[2]);
      c += mahalanobis(d, cov.sigma_f);
    }
  }
  for (const auto& z : meas.landmark_meas) {
    Eigen::Vector2d r = models::landmark_meas(get_state(layout, vars, kEgo, z.stage), get_landmark(layout, vars, z.landmark)) - z.z;
    r[1] = wrap_angle(r[1]);
    terms.own[kEgo] += mahalanobis(r, meas.sigma_h);
  }

  for (PlayerId i = 0; i < n; ++i) {
    for (PlayerId j = i + 1; j < n; ++j) {
      for (int k = 0; k < scn.horizon; ++k) {
        const double b = models::interaction_residual_clamped(get_state(layout, vars, i, k), get_state(layout, vars, j, k));
        terms.pair(i, j) += b * b / cov.sigma_b;
      }
    }
  }
  for (const auto& z : meas.interplayer_meas) {
    const Eigen::Vector2d r = models::interplayer_meas(get_state(layout, vars, z.observer, z.stage),
                                                       get_state(layout, vars, z.target, z.stage)) -
                              z.z;
    const PlayerId lo = std::min(z.observer, z.target);
    const PlayerId hi = std::max(z.observer, z.target);
    terms.pair(lo, hi) += mahalanobis(r, meas.sigma_h_bar);
  }
  return terms;
}

double evaluate_potential(const Scenario& scn, const MeasurementSet& meas, const Eigen::VectorXd& vars) {
  return potential_terms(scn, meas, vars).total();
}

bool DeviationIdentity::holds(double relative_tolerance) const {
  return std::abs(delta_player_cost - delta_potential) <= relative_tolerance * (1.0 + std::abs(delta_potential));
}

DeviationIdentity potential_identity_check(const Scenario& scn, const MeasurementSet& meas,
                                           const Eigen::VectorXd& base_vars, PlayerId r,
                                           const Eigen::VectorXd& deviation) {
  const VariableLayout layout = make_layout(scn);
  if (r < 0 || r >= scn.num_players) throw std::out_of_range("unknown player id " + std::to_string(r));
  if (deviation.size() != layout.total_dim() || base_vars.size() != layout.total_dim()) {
    throw std::invalid_argument("deviation does not match the scenario layout");
  }
  for (int b = 0; b < layout.num_blocks(); ++b) {
    const BlockInfo& info = layout.info({b});
    if (deviation.segment(info.offset, info.dim).isZero(0.0)) continue;
    const bool owned = info.kind == BlockKind::landmark
                           ? r == kEgo
                           : info.player == r && !(info.kind == BlockKind::state && info.stage == 0);
    if (!owned) {
      throw std::invalid_argument("deviation of player " + std::to_string(r) + " touches a block it does not own (block " +
                                  std::to_string(b) + ")");
    }
  }
  const Eigen::VectorXd deviated = base_vars + deviation;
  const PlayerProblem problem = build_player_problem(scn, meas, base_vars, r);
  DeviationIdentity out;
  out.delta_player_cost = evaluate_cost(problem, deviated) - evaluate_cost(problem, base_vars);
  out.delta_potential = evaluate_potential(scn, meas, deviated) - evaluate_potential(scn, meas, base_vars);
  return out;
}

}  // namespace gtpslam::game
