#pragma once

#include "gtpslam/core/layout.hpp"
#include "gtpslam/core/scenario.hpp"
#include "gtpslam/core/types.hpp"

#include <Eigen/Core>

#include <string_view>
#include <vector>

namespace gtpslam::graph {

enum class FactorKind {
  prior_state,
  prior_control,
  dynamics,
  interaction,
  landmark_meas,
  interplayer_meas,
  /// Weak full-state prior that keeps otherwise unobserved blocks solvable.
  anchor,
};

std::string_view to_string(FactorKind kind);

/// Whitening operator W with W^T W = Sigma^{-1}, so ||W r||^2 is the
/// Mahalanobis norm of r. Built once per covariance.
class NoiseModel {
 public:
  NoiseModel() = default;
  /// Throws std::invalid_argument unless `sigma` is symmetric positive definite.
  static NoiseModel from_covariance(const Eigen::MatrixXd& sigma);
  static NoiseModel from_variance(double variance);

  int dim() const { return static_cast<int>(sqrt_information_.rows()); }
  const Eigen::MatrixXd& sqrt_information() const { return sqrt_information_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }

 private:
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd sqrt_information_;
};

/// One residual term over a few variable blocks.
///
/// Block order per kind:
///   prior_state       {x_k^i}
///   prior_control     {u_k^i}
///   dynamics          {x_k^i, u_k^i, x_{k+1}^i}
///   interaction       {x_k^i, x_k^j}
///   landmark_meas     {x_k^ego, l_a}
///   interplayer_meas  {x_k^observer, x_k^target}
///   anchor            {x_k^i}
struct Factor {
  FactorKind kind = FactorKind::prior_state;
  std::vector<BlockId> blocks;
  /// Measurement, lane target (1-vector) or anchor mean, depending on kind.
  Eigen::VectorXd data;
  NoiseModel noise;
  double speed = 0.0;
  double dt = 0.0;
  Integrator integrator = Integrator::euler;

  int residual_dim() const { return noise.dim(); }
};

Factor make_prior_state(const VariableLayout& layout, PlayerId player, int stage, double lane_target,
                        const Eigen::Matrix2d& sigma_g);
Factor make_prior_control(const VariableLayout& layout, PlayerId player, int stage, double sigma_g_hat);
Factor make_dynamics(const VariableLayout& layout, PlayerId player, int stage, double speed, double dt,
                     Integrator integrator, const Eigen::Matrix3d& sigma_f);
Factor make_interaction(const VariableLayout& layout, PlayerId i, PlayerId j, int stage, double sigma_b);
Factor make_landmark_meas(const VariableLayout& layout, int stage, int landmark, const Eigen::Vector2d& z,
                          const Eigen::Matrix2d& sigma_h);
Factor make_interplayer_meas(const VariableLayout& layout, PlayerId observer, PlayerId target, int stage,
                             const Eigen::Vector2d& z, const Eigen::Matrix2d& sigma_h_bar);
Factor make_anchor(const VariableLayout& layout, PlayerId player, int stage, const State& mean,
                   const Eigen::Matrix3d& sigma);

/// Unwhitened residual with one Jacobian per connected block. Angular
/// components are wrapped. The interaction term is clamped near contact.
struct FactorLinearization {
  Eigen::VectorXd residual;
  std::vector<Eigen::MatrixXd> jacobians;
};

Eigen::VectorXd evaluate_residual(const Factor& factor, const VariableLayout& layout, const Eigen::VectorXd& v);
FactorLinearization linearize(const Factor& factor, const VariableLayout& layout, const Eigen::VectorXd& v);

/// ||W r||^2 for this factor.
double factor_cost(const Factor& factor, const VariableLayout& layout, const Eigen::VectorXd& v);

}  // namespace gtpslam::graph
