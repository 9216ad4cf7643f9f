#include "gtpslam/core/angle.hpp"
#include "gtpslam/core/errors.hpp"
#include "gtpslam/models/models.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace gtpslam::models {
namespace {

constexpr double kEps = 1e-12;

void expect_state_near(const State& a, const State& b, double tol = kEps) {
  EXPECT_NEAR(a.px, b.px, tol);
  EXPECT_NEAR(a.py, b.py, tol);
  EXPECT_NEAR(a.theta, b.theta, tol);
}

TEST(DubinsStep, Examples) {
  expect_state_near(dubins_step({0, 0, 0}, {0}, 30, 0.2), {6, 0, 0});
  expect_state_near(dubins_step({0, 0, kPi / 2}, {0}, 30, 0.2), {0, 6, kPi / 2});
  // Hand computation: position advances along the old heading, heading by 0.5 * 0.2.
  expect_state_near(dubins_step({0, 0, 0}, {0.5}, 30, 0.2), {6, 0, 0.1});
}

TEST(DubinsStep, HeadingWrapped) {
  const State x = dubins_step({0, 0, kPi - 0.01}, {1.0}, 10, 0.1);
  EXPECT_NEAR(x.theta, -kPi + 0.09, kEps);
}

TEST(DubinsStep, ExactArc) {
  // Quarter circle of radius speed/omega = 10.
  const State x = dubins_step({0, 0, 0}, {1.0}, 10, kPi / 2, Integrator::exact_arc);
  expect_state_near(x, {10, 10, kPi / 2}, 1e-12);
  // The series branch agrees with the closed form at the switch-over.
  const State a = dubins_step({1, 2, 0.3}, {0.05 - 1e-9}, 30, 0.2, Integrator::exact_arc);
  const State b = dubins_step({1, 2, 0.3}, {0.05 + 1e-9}, 30, 0.2, Integrator::exact_arc);
  expect_state_near(a, b, 1e-8);
  expect_state_near(dubins_step({0, 0, 0}, {0}, 30, 0.2, Integrator::exact_arc), {6, 0, 0});
}

TEST(DubinsStep, HeadingJacobianColumn) {
  Eigen::Matrix3d H;
  dubins_step({0, 0, 0}, {0}, 30, 0.2, Integrator::euler, &H);
  EXPECT_TRUE(H.col(2).isApprox(Eigen::Vector3d(0, 6, 1), 1e-15));
  const Eigen::VectorXd x = State{0, 0, 0}.vector();
  const Eigen::MatrixXd N = oracle::numeric_jacobian(
      [](const Eigen::VectorXd& s) { return dubins_step(State::from_vector(s), {0}, 30, 0.2).vector(); }, x, 1e-6,
      {2});
  EXPECT_NEAR(N(1, 2), 6.0, 1e-8);
}

TEST(LandmarkMeas, Examples) {
  EXPECT_TRUE(landmark_meas({0, 0, 0}, {1, 0}).isApprox(Eigen::Vector2d(1, 0)));
  EXPECT_TRUE(landmark_meas({0, 0, kPi / 2}, {0, 2}).isApprox(Eigen::Vector2d(2, 0)));
  const Eigen::Vector2d z = landmark_meas({1, 1, 0}, {1, 2});
  EXPECT_NEAR(z[0], 1.0, kEps);
  EXPECT_NEAR(z[1], kPi / 2, kEps);
}

TEST(LandmarkMeas, RangeRowJacobian) {
  Matrix23 H;
  landmark_meas({0, 0, 0}, {1, 0}, &H);
  EXPECT_NEAR(H(0, 0), -1.0, kEps);
  EXPECT_NEAR(H(0, 1), 0.0, kEps);
  EXPECT_NEAR(H(0, 2), 0.0, kEps);
}

TEST(LandmarkMeas, DegenerateThrows) {
  EXPECT_THROW(landmark_meas({1, 1, 0}, {1, 1}), DomainError);
  EXPECT_THROW(landmark_meas({1, 1, 0}, {1 + 1e-7, 1}), DomainError);
  EXPECT_NO_THROW(landmark_meas({1, 1, 0}, {1 + 1e-5, 1}));
}

TEST(InterplayerMeas, Examples) {
  EXPECT_TRUE(interplayer_meas({0, 0, 0}, {5, 0, 1}).isApprox(Eigen::Vector2d(5, 0)));
  EXPECT_TRUE(interplayer_meas({0, 0, kPi / 2}, {0, 5, -2}).isApprox(Eigen::Vector2d(5, 0)));
  EXPECT_TRUE(interplayer_meas({2, 3, 0}, {2, 3, 0.4}).isZero());
}

TEST(Interaction, Examples) {
  EXPECT_NEAR(interaction_residual({0, 0, 0}, {3, 4, 0}), 0.2, kEps);
  EXPECT_NEAR(interaction_residual({0, 0, 0}, {100, 0, 0}), 0.01, kEps);
  EXPECT_THROW(interaction_residual({1, 1, 0}, {1, 1, 0}), DomainError);
}

TEST(Interaction, JacobianSign) {
  RowVector3 Hi, Hj;
  interaction_residual({0, 0, 0}, {3, 4, 0}, &Hi, &Hj);
  EXPECT_NEAR(Hi(0), 3.0 / 125.0, kEps);
  EXPECT_NEAR(Hi(1), 4.0 / 125.0, kEps);
  EXPECT_EQ(Hi(2), 0.0);
  EXPECT_TRUE((Hi + Hj).isZero(kEps));
}

TEST(Interaction, ClampedIsFinite) {
  RowVector3 Hi, Hj;
  EXPECT_EQ(interaction_residual_clamped({1, 1, 0}, {1, 1, 0}, &Hi, &Hj), 1.0 / kMinSeparation);
  EXPECT_TRUE(Hi.allFinite() && Hj.allFinite());
  const double b = interaction_residual_clamped({0, 0, 0}, {1e-4, 0, 0}, &Hi, &Hj);
  EXPECT_EQ(b, 1.0 / kMinSeparation);
  // Derivative frozen at its value on the clamp circle along the same direction.
  EXPECT_NEAR(Hi(0), 1.0 / (kMinSeparation * kMinSeparation), 1e-6);
  EXPECT_NEAR(interaction_residual_clamped({0, 0, 0}, {3, 4, 0}), 0.2, kEps);
}

TEST(Priors, Examples) {
  EXPECT_TRUE(state_prior_residual({9, 3.7, 0}, 3.7).isZero());
  EXPECT_TRUE(state_prior_residual({9, 0, 0.1}, 3.7).isApprox(Eigen::Vector2d(-3.7, 0.1)));
  EXPECT_TRUE(state_prior_residual({9, 5, -0.2}, 3.7).isApprox(Eigen::Vector2d(1.3, -0.2)));
  EXPECT_EQ(control_prior_residual({0.0}), 0.0);
  EXPECT_EQ(control_prior_residual({0.3}), 0.3);
  EXPECT_EQ(control_prior_residual({-0.3}), -0.3);
}

class JacobianProperty : public ::testing::TestWithParam<std::tuple<ModelFunction, Integrator>> {};

TEST_P(JacobianProperty, MatchesCentralDifferences) {
  const auto [fn, integrator] = GetParam();
  gen::Rng rng(1000 + static_cast<int>(fn) * 7 + static_cast<int>(integrator));
  const ModelContext ctx{gen::uniform(rng, 5, 30), gen::uniform(rng, 0.05, 0.3), integrator, 1.5};
  double worst = 0.0;
  for (int n = 0; n < 500; ++n) {
    const auto inputs = gen::model_inputs(rng, fn);
    const auto analytic = jacobian_of(fn, inputs, ctx);
    ASSERT_EQ(analytic.size(), inputs.size());
    for (std::size_t b = 0; b < inputs.size(); ++b) {
      auto f = [&](const Eigen::VectorXd& block) {
        auto in = inputs;
        in[b] = block;
        return evaluate(fn, in, ctx);
      };
      const Eigen::MatrixXd numeric = oracle::numeric_jacobian(f, inputs[b], 1e-6, gen::angular_rows(fn));
      double err = 0.0;
      EXPECT_TRUE(oracle::jacobians_match(analytic[b], numeric, 1e-6, 1e-8, &err))
          << "sample " << n << " block " << b << "\nanalytic\n" << analytic[b] << "\nnumeric\n" << numeric;
      worst = std::max(worst, err);
    }
  }
  RecordProperty("worst_relative_error", std::to_string(worst));
}

INSTANTIATE_TEST_SUITE_P(
    AllModels, JacobianProperty,
    ::testing::Values(std::make_tuple(ModelFunction::dubins_step, Integrator::euler),
                      std::make_tuple(ModelFunction::dubins_step, Integrator::exact_arc),
                      std::make_tuple(ModelFunction::landmark_meas, Integrator::euler),
                      std::make_tuple(ModelFunction::interplayer_meas, Integrator::euler),
                      std::make_tuple(ModelFunction::interaction, Integrator::euler),
                      std::make_tuple(ModelFunction::state_prior, Integrator::euler),
                      std::make_tuple(ModelFunction::control_prior, Integrator::euler)));

TEST(ModelProperties, InterplayerRoundTrip) {
  gen::Rng rng(21);
  for (int n = 0; n < 500; ++n) {
    const State xi = gen::random_state(rng), xj = gen::random_state(rng);
    const Eigen::Vector2d z = interplayer_meas(xi, xj);
    const Eigen::Vector2d back = Eigen::Rotation2Dd(xi.theta) * z + xi.position();
    EXPECT_TRUE(back.isApprox(xj.position(), 1e-12)) << n;
  }
}

TEST(ModelProperties, RangeRigidInvariance) {
  gen::Rng rng(22);
  for (int n = 0; n < 500; ++n) {
    const State x = gen::random_state(rng);
    const Eigen::Vector2d l(gen::uniform(rng, -50, 50), gen::uniform(rng, -50, 50));
    if ((l - x.position()).norm() < 1e-3) continue;
    const double phi = gen::uniform(rng, -kPi, kPi);
    const Eigen::Vector2d t(gen::uniform(rng, -20, 20), gen::uniform(rng, -20, 20));
    const Eigen::Rotation2Dd R(phi);
    const State xt{(R * x.position() + t).x(), (R * x.position() + t).y(), wrap_angle(x.theta + phi)};
    const Eigen::Vector2d lt = R * l + t;
    EXPECT_NEAR(landmark_meas(x, l)[0], landmark_meas(xt, lt)[0], 1e-12 * std::max(1.0, landmark_meas(x, l)[0]));
    // Bearing is invariant too, up to wrapping.
    EXPECT_NEAR(wrap_angle(landmark_meas(x, l)[1] - landmark_meas(xt, lt)[1]), 0.0, 1e-9);
  }
}

TEST(ModelProperties, InteractionSymmetric) {
  gen::Rng rng(23);
  for (int n = 0; n < 500; ++n) {
    const State a = gen::random_state(rng), b = gen::random_state(rng);
    EXPECT_EQ(interaction_residual(a, b), interaction_residual(b, a));
    EXPECT_EQ(interaction_residual_clamped(a, b), interaction_residual_clamped(b, a));
  }
}

TEST(ModelProperties, BearingInRange) {
  gen::Rng rng(24);
  for (int n = 0; n < 1000; ++n) {
    const State x = gen::random_state(rng);
    const Eigen::Vector2d z = landmark_meas(x, {gen::uniform(rng, -60, 60), gen::uniform(rng, -60, 60)});
    EXPECT_GT(z[1], -kPi);
    EXPECT_LE(z[1], kPi);
  }
}

TEST(ModelGeneric, InputDimsAndErrors) {
  EXPECT_EQ(input_dims(ModelFunction::dubins_step), (std::vector<int>{3, 1}));
  EXPECT_EQ(input_dims(ModelFunction::landmark_meas), (std::vector<int>{3, 2}));
  EXPECT_EQ(input_dims(ModelFunction::control_prior), (std::vector<int>{1}));
  const std::vector<Eigen::VectorXd> wrong{Eigen::Vector3d::Zero()};
  EXPECT_THROW(evaluate(ModelFunction::dubins_step, wrong), std::invalid_argument);
  const std::vector<Eigen::VectorXd> coincident{Eigen::Vector3d(1, 1, 0), Eigen::Vector3d(1, 1, 0)};
  EXPECT_THROW(jacobian_of(ModelFunction::interaction, coincident), DomainError);
}

}  // namespace
}  // namespace gtpslam::models
