#pragma once

#include "gtpslam/core/scenario.hpp"
#include "gtpslam/core/types.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

/// Dynamics, measurement, interaction and prior functions with analytic
/// Jacobians. Jacobian out-parameters are optional; pass nullptr to skip.
namespace gtpslam::models {

using Matrix23 = Eigen::Matrix<double, 2, 3>;
using RowVector3 = Eigen::Matrix<double, 1, 3>;

/// Range below which a bearing is undefined.
inline constexpr double kMinRange = 1e-6;
/// Separation below which the interaction term is singular.
inline constexpr double kMinSeparation = 1e-3;

/// Constant-speed unicycle step. Heading of the result is wrapped.
State dubins_step(const State& x, const Control& u, double speed, double dt,
                  Integrator integrator = Integrator::euler, Eigen::Matrix3d* H_x = nullptr,
                  Eigen::Vector3d* H_u = nullptr);

/// Range and bearing of landmark `l` seen from `x`. Throws DomainError when
/// the range is below kMinRange.
Eigen::Vector2d landmark_meas(const State& x, const Eigen::Vector2d& l, Matrix23* H_x = nullptr,
                              Eigen::Matrix2d* H_l = nullptr);

/// Position of `xj` in the body frame of `xi`.
Eigen::Vector2d interplayer_meas(const State& xi, const State& xj, Matrix23* H_i = nullptr,
                                 Matrix23* H_j = nullptr);

/// Inverse planar distance 1/|p_i - p_j|. Throws DomainError below
/// kMinSeparation.
double interaction_residual(const State& xi, const State& xj, RowVector3* H_i = nullptr, RowVector3* H_j = nullptr);

/// Same as interaction_residual but never throws: below kMinSeparation the
/// value is held at 1/kMinSeparation and the Jacobian at its value on the
/// kMinSeparation circle along the current direction.
double interaction_residual_clamped(const State& xi, const State& xj, RowVector3* H_i = nullptr,
                                    RowVector3* H_j = nullptr);

/// Lane tracking and heading alignment: (py - lane_target, wrap(theta)).
Eigen::Vector2d state_prior_residual(const State& x, double lane_target, Matrix23* H_x = nullptr);

double control_prior_residual(const Control& u);

enum class ModelFunction { dubins_step, landmark_meas, interplayer_meas, interaction, state_prior, control_prior };

/// Constants that some model functions close over.
struct ModelContext {
  double speed = 30.0;
  double dt = 0.2;
  Integrator integrator = Integrator::euler;
  double lane_target = 0.0;
};

/// Number and dimension of the input blocks each function takes.
std::vector<int> input_dims(ModelFunction fn);

/// Uniform entry points over flat input blocks, used for generic checks.
Eigen::VectorXd evaluate(ModelFunction fn, std::span<const Eigen::VectorXd> inputs, const ModelContext& ctx = {});
std::vector<Eigen::MatrixXd> jacobian_of(ModelFunction fn, std::span<const Eigen::VectorXd> inputs,
                                         const ModelContext& ctx = {});

}  // namespace gtpslam::models
