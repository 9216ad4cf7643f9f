#include "gtpslam/graph/factor.hpp"

#include "gtpslam/core/angle.hpp"
#include "gtpslam/models/models.hpp"

#include <Eigen/Cholesky>

#include <stdexcept>

namespace gtpslam::graph {

std::string_view to_string(FactorKind kind) {
  switch (kind) {
    case FactorKind::prior_state: return "prior_state";
    case FactorKind::prior_control: return "prior_control";
    case FactorKind::dynamics: return "dynamics";
    case FactorKind::interaction: return "interaction";
    case FactorKind::landmark_meas: return "landmark_meas";
    case FactorKind::interplayer_meas: return "interplayer_meas";
    case FactorKind::anchor: return "anchor";
  }
  return "unknown";
}

NoiseModel NoiseModel::from_covariance(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0 || !sigma.allFinite()) {
    throw std::invalid_argument("NoiseModel: covariance must be a finite square matrix");
  }
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("NoiseModel: covariance must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("NoiseModel: covariance must be positive definite");
  NoiseModel m;
  m.covariance_ = sigma;
  // Sigma = L L^T  =>  W = L^{-1} satisfies W^T W = Sigma^{-1}.
  m.sqrt_information_ = llt.matrixL().solve(Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols()));
  return m;
}

NoiseModel NoiseModel::from_variance(double variance) {
  return from_covariance(Eigen::MatrixXd::Constant(1, 1, variance));
}

Factor make_prior_state(const VariableLayout& layout, PlayerId player, int stage, double lane_target,
                        const Eigen::Matrix2d& sigma_g) {
  Factor f;
  f.kind = FactorKind::prior_state;
  f.blocks = {layout.state(player, stage)};
  f.data = Eigen::VectorXd::Constant(1, lane_target);
  f.noise = NoiseModel::from_covariance(sigma_g);
  return f;
}

Factor make_prior_control(const VariableLayout& layout, PlayerId player, int stage, double sigma_g_hat) {
  Factor f;
  f.kind = FactorKind::prior_control;
  f.blocks = {layout.control(player, stage)};
  f.noise = NoiseModel::from_variance(sigma_g_hat);
  return f;
}

Factor make_dynamics(const VariableLayout& layout, PlayerId player, int stage, double speed, double dt,
                     Integrator integrator, const Eigen::Matrix3d& sigma_f) {
  Factor f;
  f.kind = FactorKind::dynamics;
  f.blocks = {layout.state(player, stage), layout.control(player, stage), layout.state(player, stage + 1)};
  f.noise = NoiseModel::from_covariance(sigma_f);
  f.speed = speed;
  f.dt = dt;
  f.integrator = integrator;
  return f;
}

Factor make_interaction(const VariableLayout& layout, PlayerId i, PlayerId j, int stage, double sigma_b) {
  if (i == j) throw std::invalid_argument("interaction factor needs two distinct players");
  Factor f;
  f.kind = FactorKind::interaction;
  f.blocks = {layout.state(i, stage), layout.state(j, stage)};
  f.noise = NoiseModel::from_variance(sigma_b);
  return f;
}

Factor make_landmark_meas(const VariableLayout& layout, int stage, int landmark, const Eigen::Vector2d& z,
                          const Eigen::Matrix2d& sigma_h) {
  Factor f;
  f.kind = FactorKind::landmark_meas;
  f.blocks = {layout.state(kEgo, stage), layout.landmark(landmark)};
  f.data = z;
  f.noise = NoiseModel::from_covariance(sigma_h);
  return f;
}

Factor make_interplayer_meas(const VariableLayout& layout, PlayerId observer, PlayerId target, int stage,
                             const Eigen::Vector2d& z, const Eigen::Matrix2d& sigma_h_bar) {
  if (observer == target) throw std::invalid_argument("inter-player measurement needs two distinct players");
  Factor f;
  f.kind = FactorKind::interplayer_meas;
  f.blocks = {layout.state(observer, stage), layout.state(target, stage)};
  f.data = z;
  f.noise = NoiseModel::from_covariance(sigma_h_bar);
  return f;
}

Factor make_anchor(const VariableLayout& layout, PlayerId player, int stage, const State& mean,
                   const Eigen::Matrix3d& sigma) {
  Factor f;
  f.kind = FactorKind::anchor;
  f.blocks = {layout.state(player, stage)};
  f.data = mean.vector();
  f.noise = NoiseModel::from_covariance(sigma);
  return f;
}

namespace {

State state_at(const VariableLayout& layout, const Eigen::VectorXd& v, BlockId id) {
  const int o = layout.offset(id);
  return {v[o], v[o + 1], v[o + 2]};
}

FactorLinearization linearize_impl(const Factor& f, const VariableLayout& layout, const Eigen::VectorXd& v,
                                   bool with_jacobians) {
  FactorLinearization out;
  switch (f.kind) {
    case FactorKind::prior_state: {
      models::Matrix23 H;
      out.residual = models::state_prior_residual(state_at(layout, v, f.blocks[0]), f.data[0], &H);
      if (with_jacobians) out.jacobians = {H};
      break;
    }
    case FactorKind::prior_control: {
      out.residual = Eigen::VectorXd::Constant(1, models::control_prior_residual({v[layout.offset(f.blocks[0])]}));
      if (with_jacobians) out.jacobians = {Eigen::MatrixXd::Identity(1, 1)};
      break;
    }
    case FactorKind::dynamics: {
      const State x = state_at(layout, v, f.blocks[0]);
      const Control u{v[layout.offset(f.blocks[1])]};
      const State next = state_at(layout, v, f.blocks[2]);
      Eigen::Matrix3d Hx;
      Eigen::Vector3d Hu;
      const State pred = models::dubins_step(x, u, f.speed, f.dt, f.integrator, &Hx, &Hu);
      Eigen::Vector3d r = pred.vector() - next.vector();
      r[2] = wrap_angle(r[2]);
      out.residual = r;
      if (with_jacobians) out.jacobians = {Hx, Hu, -Eigen::Matrix3d::Identity()};
      break;
    }
    case FactorKind::interaction: {
      models::RowVector3 Hi, Hj;
      const double b =
          models::interaction_residual_clamped(state_at(layout, v, f.blocks[0]), state_at(layout, v, f.blocks[1]), &Hi, &Hj);
      out.residual = Eigen::VectorXd::Constant(1, b);
      if (with_jacobians) out.jacobians = {Hi, Hj};
      break;
    }
    case FactorKind::landmark_meas: {
      models::Matrix23 Hx;
      Eigen::Matrix2d Hl;
      const Eigen::Vector2d l = v.segment<2>(layout.offset(f.blocks[1]));
      Eigen::Vector2d r = models::landmark_meas(state_at(layout, v, f.blocks[0]), l, &Hx, &Hl) - f.data;
      r[1] = wrap_angle(r[1]);
      out.residual = r;
      if (with_jacobians) out.jacobians = {Hx, Hl};
      break;
    }
    case FactorKind::interplayer_meas: {
      models::Matrix23 Hi, Hj;
      out.residual =
          models::interplayer_meas(state_at(layout, v, f.blocks[0]), state_at(layout, v, f.blocks[1]), &Hi, &Hj) -
          f.data;
      if (with_jacobians) out.jacobians = {Hi, Hj};
      break;
    }
    case FactorKind::anchor: {
      Eigen::Vector3d r = state_at(layout, v, f.blocks[0]).vector() - f.data;
      r[2] = wrap_angle(r[2]);
      out.residual = r;
      if (with_jacobians) out.jacobians = {Eigen::Matrix3d::Identity()};
      break;
    }
  }
  return out;
}

}  // namespace

Eigen::VectorXd evaluate_residual(const Factor& factor, const VariableLayout& layout, const Eigen::VectorXd& v) {
  return linearize_impl(factor, layout, v, false).residual;
}

FactorLinearization linearize(const Factor& factor, const VariableLayout& layout, const Eigen::VectorXd& v) {
  return linearize_impl(factor, layout, v, true);
}

double factor_cost(const Factor& factor, const VariableLayout& layout, const Eigen::VectorXd& v) {
  return (factor.noise.sqrt_information() * evaluate_residual(factor, layout, v)).squaredNorm();
}

}  // namespace gtpslam::graph
