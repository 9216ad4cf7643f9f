#include "gtpslam/models/models.hpp"

#include "gtpslam/core/angle.hpp"
#include "gtpslam/core/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gtpslam::models {

namespace {

// sin(a)/a, (1 - cos a)/a and their derivatives, series near zero.
struct ArcTerms {
  double s, c, ds, dc;
};

ArcTerms arc_terms(double a) {
  if (std::abs(a) < 1e-2) {
    const double a2 = a * a;
    return {1.0 - a2 / 6.0 + a2 * a2 / 120.0 - a2 * a2 * a2 / 5040.0,
            a / 2.0 - a * a2 / 24.0 + a * a2 * a2 / 720.0 - a * a2 * a2 * a2 / 40320.0,
            -a / 3.0 + a * a2 / 30.0 - a * a2 * a2 / 840.0,
            0.5 - a2 / 8.0 + a2 * a2 / 144.0 - a2 * a2 * a2 / 5760.0};
  }
  const double sa = std::sin(a);
  const double ca = std::cos(a);
  return {sa / a, (1.0 - ca) / a, (a * ca - sa) / (a * a), (a * sa - (1.0 - ca)) / (a * a)};
}

}  // namespace

State dubins_step(const State& x, const Control& u, double speed, double dt, Integrator integrator,
                  Eigen::Matrix3d* H_x, Eigen::Vector3d* H_u) {
  const double ct = std::cos(x.theta);
  const double st = std::sin(x.theta);
  const double step = speed * dt;
  State next;
  next.theta = wrap_angle(x.theta + u.omega * dt);

  if (integrator == Integrator::euler) {
    next.px = x.px + step * ct;
    next.py = x.py + step * st;
    if (H_x) {
      *H_x << 1, 0, -step * st,
              0, 1, step * ct,
              0, 0, 1;
    }
    if (H_u) *H_u << 0, 0, dt;
    return next;
  }

  const ArcTerms t = arc_terms(u.omega * dt);
  next.px = x.px + step * (ct * t.s - st * t.c);
  next.py = x.py + step * (st * t.s + ct * t.c);
  if (H_x) {
    *H_x << 1, 0, step * (-st * t.s - ct * t.c),
            0, 1, step * (ct * t.s - st * t.c),
            0, 0, 1;
  }
  if (H_u) *H_u << step * dt * (ct * t.ds - st * t.dc), step * dt * (st * t.ds + ct * t.dc), dt;
  return next;
}

Eigen::Vector2d landmark_meas(const State& x, const Eigen::Vector2d& l, Matrix23* H_x, Eigen::Matrix2d* H_l) {
  const Eigen::Vector2d d = l - x.position();
  const double r2 = d.squaredNorm();
  const double r = std::sqrt(r2);
  if (!(r >= kMinRange)) {
    throw DomainError("landmark_meas: range " + std::to_string(r) + " m below minimum; bearing undefined");
  }
  if (H_x) {
    *H_x << -d.x() / r, -d.y() / r, 0,
            d.y() / r2, -d.x() / r2, -1;
  }
  if (H_l) {
    *H_l << d.x() / r, d.y() / r,
            -d.y() / r2, d.x() / r2;
  }
  return {r, wrap_angle(std::atan2(d.y(), d.x()) - x.theta)};
}

Eigen::Vector2d interplayer_meas(const State& xi, const State& xj, Matrix23* H_i, Matrix23* H_j) {
  const double c = std::cos(xi.theta);
  const double s = std::sin(xi.theta);
  const Eigen::Vector2d d = xj.position() - xi.position();
  const Eigen::Vector2d z(c * d.x() + s * d.y(), -s * d.x() + c * d.y());
  if (H_i) {
    *H_i << -c, -s, z.y(),
            s, -c, -z.x();
  }
  if (H_j) {
    *H_j << c, s, 0,
            -s, c, 0;
  }
  return z;
}

double interaction_residual(const State& xi, const State& xj, RowVector3* H_i, RowVector3* H_j) {
  const Eigen::Vector2d e = xi.position() - xj.position();
  const double d = e.norm();
  if (!(d >= kMinSeparation)) {
    throw DomainError("interaction_residual: separation " + std::to_string(d) + " m below minimum");
  }
  const double d3 = d * d * d;
  if (H_i) *H_i << -e.x() / d3, -e.y() / d3, 0;
  if (H_j) *H_j << e.x() / d3, e.y() / d3, 0;
  return 1.0 / d;
}

double interaction_residual_clamped(const State& xi, const State& xj, RowVector3* H_i, RowVector3* H_j) {
  const Eigen::Vector2d e = xi.position() - xj.position();
  const double d = e.norm();
  if (d >= kMinSeparation) return interaction_residual(xi, xj, H_i, H_j);
  // Gradient magnitude of 1/d at the clamp radius, along the current direction.
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  if (d > 0.0) g = -(e / d) / (kMinSeparation * kMinSeparation);
  if (H_i) *H_i << g.x(), g.y(), 0;
  if (H_j) *H_j << -g.x(), -g.y(), 0;
  return 1.0 / kMinSeparation;
}

Eigen::Vector2d state_prior_residual(const State& x, double lane_target, Matrix23* H_x) {
  if (H_x) {
    *H_x << 0, 1, 0,
            0, 0, 1;
  }
  return {x.py - lane_target, wrap_angle(x.theta)};
}

double control_prior_residual(const Control& u) { return u.omega; }

std::vector<int> input_dims(ModelFunction fn) {
  switch (fn) {
    case ModelFunction::dubins_step:
      return {kStateDim, kControlDim};
    case ModelFunction::landmark_meas:
      return {kStateDim, kLandmarkDim};
    case ModelFunction::interplayer_meas:
    case ModelFunction::interaction:
      return {kStateDim, kStateDim};
    case ModelFunction::state_prior:
      return {kStateDim};
    case ModelFunction::control_prior:
      return {kControlDim};
  }
  throw std::invalid_argument("unknown model function");
}

namespace {

void check_inputs(ModelFunction fn, std::span<const Eigen::VectorXd> inputs) {
  const std::vector<int> dims = input_dims(fn);
  if (inputs.size() != dims.size()) throw std::invalid_argument("model function: wrong number of inputs");
  for (std::size_t b = 0; b < dims.size(); ++b) {
    if (inputs[b].size() != dims[b]) throw std::invalid_argument("model function: wrong input dimension");
  }
}

State as_state(const Eigen::VectorXd& v) { return {v[0], v[1], v[2]}; }

}  // namespace

Eigen::VectorXd evaluate(ModelFunction fn, std::span<const Eigen::VectorXd> in, const ModelContext& ctx) {
  check_inputs(fn, in);
  switch (fn) {
    case ModelFunction::dubins_step:
      return dubins_step(as_state(in[0]), {in[1][0]}, ctx.speed, ctx.dt, ctx.integrator).vector();
    case ModelFunction::landmark_meas:
      return landmark_meas(as_state(in[0]), in[1]);
    case ModelFunction::interplayer_meas:
      return interplayer_meas(as_state(in[0]), as_state(in[1]));
    case ModelFunction::interaction:
      return Eigen::VectorXd::Constant(1, interaction_residual(as_state(in[0]), as_state(in[1])));
    case ModelFunction::state_prior:
      return state_prior_residual(as_state(in[0]), ctx.lane_target);
    case ModelFunction::control_prior:
      return Eigen::VectorXd::Constant(1, control_prior_residual({in[0][0]}));
  }
  throw std::invalid_argument("unknown model function");
}

std::vector<Eigen::MatrixXd> jacobian_of(ModelFunction fn, std::span<const Eigen::VectorXd> in,
                                         const ModelContext& ctx) {
  check_inputs(fn, in);
  switch (fn) {
    case ModelFunction::dubins_step: {
      Eigen::Matrix3d hx;
      Eigen::Vector3d hu;
      dubins_step(as_state(in[0]), {in[1][0]}, ctx.speed, ctx.dt, ctx.integrator, &hx, &hu);
      return {hx, hu};
    }
    case ModelFunction::landmark_meas: {
      Matrix23 hx;
      Eigen::Matrix2d hl;
      landmark_meas(as_state(in[0]), in[1], &hx, &hl);
      return {hx, hl};
    }
    case ModelFunction::interplayer_meas: {
      Matrix23 hi, hj;
      interplayer_meas(as_state(in[0]), as_state(in[1]), &hi, &hj);
      return {hi, hj};
    }
    case ModelFunction::interaction: {
      RowVector3 hi, hj;
      interaction_residual(as_state(in[0]), as_state(in[1]), &hi, &hj);
      return {hi, hj};
    }
    case ModelFunction::state_prior: {
      Matrix23 hx;
      state_prior_residual(as_state(in[0]), ctx.lane_target, &hx);
      return {hx};
    }
    case ModelFunction::control_prior:
      return {Eigen::MatrixXd::Identity(1, 1)};
  }
  throw std::invalid_argument("unknown model function");
}

}  // namespace gtpslam::models
