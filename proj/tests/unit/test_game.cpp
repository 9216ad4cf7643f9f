#include "gtpslam/core/angle.hpp"
#include "gtpslam/core/layout.hpp"
#include "gtpslam/game/ibr.hpp"
#include "gtpslam/game/initial_guess.hpp"
#include "gtpslam/game/nash_check.hpp"
#include "gtpslam/game/player_problem.hpp"
#include "gtpslam/game/potential.hpp"
#include "gtpslam/graph/factor.hpp"
#include "gtpslam/graph/lm_solver.hpp"
#include "gtpslam/models/models.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>

namespace gtpslam::game {
namespace {

using graph::FactorKind;

std::map<FactorKind, int> count_kinds(const graph::FactorGraph& g) {
  std::map<FactorKind, int> counts;
  for (const auto& f : g.factors()) ++counts[f.kind];
  return counts;
}

struct Instance {
  Scenario scn;
  MeasurementSet meas;
  Eigen::VectorXd vars;
};

Instance random_instance(gen::Rng& rng, int n, int k, int l) {
  Instance in;
  in.scn = gen::scenario(rng, n, k, l);
  const Eigen::VectorXd truth = gen::variables(rng, in.scn, 0.3);
  in.meas = gen::measurements(rng, in.scn, truth, 0.2);
  in.vars = gen::variables(rng, in.scn, 0.5);
  return in;
}

// Two players, K=20, no landmarks or measurements; player 1 starts in the
// ego's target lane and both must trade places.
Scenario planning_scenario() {
  Scenario s;
  s.name = "plan2";
  s.num_players = 2;
  s.horizon = 20;
  s.lane_targets = {3.7, 0.0};
  s.initial_states = {{0, 0, 0}, {15, 3.7, 0}};
  s.covariances.sigma_f = Eigen::Vector3d(2.5e-3, 2.5e-3, 1e-4).asDiagonal();
  s.covariances.sigma_g = Eigen::Vector2d(1.0, 0.04).asDiagonal();
  s.covariances.sigma_g_hat = 0.04;
  s.covariances.sigma_b = 2.5e-3;
  return s;
}

Eigen::VectorXd straight_guess(const Scenario& s) { return initial_guess(s, MeasurementSet{}); }

TEST(PlayerProblem, EgoFactorCounts) {
  Scenario s = planning_scenario();
  s.horizon = 2;
  s.landmarks_truth = {{10, -5}};
  gen::Rng rng(1);
  const Eigen::VectorXd v = straight_guess(s);
  const MeasurementSet m = gen::measurements(rng, s, v, 0.1);
  const PlayerProblem ego = build_player_problem(s, m, v, 0);
  auto c = count_kinds(ego.graph);
  EXPECT_EQ(c[FactorKind::prior_state], 2);
  EXPECT_EQ(c[FactorKind::prior_control], 2);
  EXPECT_EQ(c[FactorKind::dynamics], 2);
  EXPECT_EQ(c[FactorKind::interaction], 2);
  EXPECT_EQ(c[FactorKind::landmark_meas], 2);
  EXPECT_EQ(c[FactorKind::interplayer_meas], 4);
  EXPECT_EQ(ego.graph.num_factors(), 14);

  const VariableLayout& L = ego.graph.layout();
  std::vector<BlockId> expected;
  for (int k = 1; k <= 2; ++k) expected.push_back(L.state(0, k));
  for (int k = 0; k < 2; ++k) expected.push_back(L.control(0, k));
  expected.push_back(L.landmark(0));
  std::sort(expected.begin(), expected.end());
  auto free = ego.graph.free_blocks();
  std::sort(free.begin(), free.end());
  EXPECT_EQ(free, expected);
}

TEST(PlayerProblem, NonEgoFactorCounts) {
  Scenario s = planning_scenario();
  s.horizon = 2;
  s.landmarks_truth = {{10, -5}};
  gen::Rng rng(1);
  const Eigen::VectorXd v = straight_guess(s);
  const MeasurementSet m = gen::measurements(rng, s, v, 0.1);
  const PlayerProblem p1 = build_player_problem(s, m, v, 1);
  auto c = count_kinds(p1.graph);
  EXPECT_EQ(c[FactorKind::landmark_meas], 0);
  EXPECT_EQ(c[FactorKind::interplayer_meas], 4);
  EXPECT_EQ(p1.graph.num_factors(), 12);
  EXPECT_FALSE(p1.graph.is_free(p1.graph.layout().landmark(0)));
  EXPECT_EQ(p1.graph.free_dim(), 2 * 3 + 2);
}

TEST(PlayerProblem, NonEgoSeesOnlyEgoPairs) {
  gen::Rng rng(2);
  const Instance in = random_instance(rng, 3, 3, 1);
  const PlayerProblem p2 = build_player_problem(in.scn, in.meas, in.vars, 2);
  for (const auto& f : p2.graph.factors()) {
    if (f.kind != FactorKind::interplayer_meas) continue;
    const auto a = p2.graph.layout().info(f.blocks[0]).player, b = p2.graph.layout().info(f.blocks[1]).player;
    EXPECT_TRUE((a == 0 && b == 2) || (a == 2 && b == 0));
  }
}

TEST(PlayerProblem, Errors) {
  Scenario s = planning_scenario();
  s.num_players = 4;
  s.lane_targets = {0, 3.7, 7.4, 0};
  s.initial_states = {{0, 0, 0}, {10, 3.7, 0}, {20, 7.4, 0}, {-10, 0, 0}};
  const Eigen::VectorXd v = straight_guess(s);
  EXPECT_THROW(build_player_problem(s, {}, v, 5), std::out_of_range);
  EXPECT_THROW(build_player_problem(s, {}, v, -1), std::out_of_range);
  EXPECT_THROW(build_player_problem(s, {}, v.head(10), 0), std::invalid_argument);
}

TEST(PlayerCost, ZeroResiduals) {
  Scenario s;
  s.num_players = 1;
  s.horizon = 3;
  s.lane_targets = {0.0};
  s.initial_states = {{0, 0, 0}};
  const Eigen::VectorXd v = straight_guess(s);
  EXPECT_EQ(evaluate_cost(build_player_problem(s, {}, v, 0), v), 0.0);
  EXPECT_EQ(evaluate_potential(s, {}, v), 0.0);
}

TEST(PlayerCost, SingleInteraction) {
  const VariableLayout layout(2, 1, 0);
  graph::FactorGraph g(layout);
  g.add(graph::make_interaction(layout, 0, 1, 1, 1.0));
  Eigen::VectorXd v = Eigen::VectorXd::Zero(layout.total_dim());
  set_state(layout, v, 1, 1, {3.0, 4.0, 0.0});
  EXPECT_NEAR(graph::evaluate_cost(g, v), 0.04, 1e-15);
}

TEST(PlayerCost, MatchesNaiveOracle) {
  gen::Rng rng(3);
  for (int n = 0; n < 30; ++n) {
    const Instance in = random_instance(rng, 1 + n % 3, 1 + n % 6, n % 3);
    for (PlayerId p = 0; p < in.scn.num_players; ++p) {
      const double expected = oracle::player_cost(in.scn, in.meas, in.vars, p);
      const double got = evaluate_cost(build_player_problem(in.scn, in.meas, in.vars, p), in.vars);
      EXPECT_NEAR(got, expected, 1e-10 * (1.0 + expected)) << n << ":" << p;
    }
  }
}

TEST(Potential, MatchesNaiveOracle) {
  gen::Rng rng(4);
  for (int n = 0; n < 30; ++n) {
    const Instance in = random_instance(rng, 1 + n % 3, 1 + n % 6, n % 3);
    const double expected = oracle::potential(in.scn, in.meas, in.vars);
    EXPECT_NEAR(evaluate_potential(in.scn, in.meas, in.vars), expected, 1e-10 * (1.0 + expected)) << n;
  }
}

TEST(Potential, SinglePlayerEqualsObjective) {
  gen::Rng rng(5);
  Instance in = random_instance(rng, 1, 5, 0);
  const double l1 = evaluate_cost(build_player_problem(in.scn, in.meas, in.vars, 0), in.vars);
  EXPECT_NEAR(evaluate_potential(in.scn, in.meas, in.vars), l1, 1e-12 * l1);
}

TEST(Potential, PairTermsCountedOnce) {
  gen::Rng rng(6);
  const Instance in = random_instance(rng, 3, 4, 2);
  const PotentialTerms t = potential_terms(in.scn, in.meas, in.vars);
  ASSERT_EQ(t.own.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      double expected = oracle::interaction_cost(in.scn, in.vars, i, j);
      if (i == 0) expected += oracle::interplayer_cost(in.scn, in.meas, in.vars, i, j);
      EXPECT_NEAR(t.pair(i, j), expected, 1e-10 * (1.0 + expected));
      // The pair cost is symmetric in its arguments.
      EXPECT_EQ(oracle::interaction_cost(in.scn, in.vars, i, j), oracle::interaction_cost(in.scn, in.vars, j, i));
      EXPECT_EQ(t.pair(j, i), 0.0);
    }
  }
  EXPECT_NEAR(t.total(), evaluate_potential(in.scn, in.meas, in.vars), 1e-12 * t.total());
}

TEST(PotentialIdentity, ZeroDeviation) {
  gen::Rng rng(7);
  const Instance in = random_instance(rng, 2, 3, 1);
  const DeviationIdentity d =
      potential_identity_check(in.scn, in.meas, in.vars, 1, Eigen::VectorXd::Zero(in.vars.size()));
  EXPECT_EQ(d.delta_player_cost, 0.0);
  EXPECT_EQ(d.delta_potential, 0.0);
  EXPECT_TRUE(d.holds());
}

TEST(PotentialIdentity, RandomDeviations) {
  gen::Rng rng(8);
  for (int n = 0; n < 100; ++n) {
    const Instance in = random_instance(rng, 2 + n % 2, n % 2 == 0 ? 3 : 10, 1 + n % 3);
    const int r = static_cast<int>(rng() % static_cast<unsigned>(in.scn.num_players));
    const DeviationIdentity d =
        potential_identity_check(in.scn, in.meas, in.vars, r, gen::deviation(rng, in.scn, r, 0.3));
    EXPECT_TRUE(d.holds()) << n << ": dL=" << d.delta_player_cost << " dp=" << d.delta_potential;
    EXPECT_NE(d.delta_potential, 0.0);
  }
}

TEST(PotentialIdentity, ForeignBlocksRejected) {
  gen::Rng rng(9);
  const Instance in = random_instance(rng, 2, 3, 1);
  Eigen::VectorXd dev = Eigen::VectorXd::Zero(in.vars.size());
  dev[oracle::landmark_offset(in.scn, 0)] = 0.1;
  EXPECT_THROW(potential_identity_check(in.scn, in.meas, in.vars, 1, dev), std::invalid_argument);
  EXPECT_NO_THROW(potential_identity_check(in.scn, in.meas, in.vars, 0, dev));
  dev.setZero();
  dev[oracle::state_offset(in.scn, 0, 2)] = 0.1;
  EXPECT_THROW(potential_identity_check(in.scn, in.meas, in.vars, 1, dev), std::invalid_argument);
  dev.setZero();
  dev[oracle::state_offset(in.scn, 1, 0)] = 0.1;
  EXPECT_THROW(potential_identity_check(in.scn, in.meas, in.vars, 1, dev), std::invalid_argument);
  EXPECT_THROW(potential_identity_check(in.scn, in.meas, in.vars, 1, dev.head(3)), std::invalid_argument);
}

TEST(Ibr, SinglePlayerEqualsLm) {
  gen::Rng rng(10);
  const Instance in = random_instance(rng, 1, 8, 2);
  Eigen::VectorXd init = in.vars;
  const GameSolution sol = solve_ibr(in.scn, in.meas, init);
  const auto problem = build_player_problem(in.scn, in.meas, init, 0);
  const auto lm = graph::solve_lm(problem.graph, init, graph::LmOptions::from(in.scn.solver));
  EXPECT_EQ(sol.ibr_iterations, 1);
  EXPECT_TRUE(sol.converged);
  EXPECT_LT((sol.values - lm.values).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Ibr, ZeroRoundsReturnsInit) {
  Scenario s = planning_scenario();
  s.ibr.max_iterations = 0;
  const Eigen::VectorXd init = straight_guess(s);
  const GameSolution sol = solve_ibr(s, {}, init);
  EXPECT_FALSE(sol.converged);
  EXPECT_EQ(sol.ibr_iterations, 0);
  EXPECT_EQ(sol.values, init);
  EXPECT_EQ(sol.potential_trace.size(), 1u);
}

TEST(Ibr, PlanningConvergesToLocalNash) {
  const Scenario s = planning_scenario();
  const GameSolution sol = solve_ibr(s, {}, straight_guess(s));
  EXPECT_TRUE(sol.converged);
  EXPECT_LE(sol.ibr_iterations, 50);
  ASSERT_EQ(sol.potential_trace.size(), 1u + 2u * static_cast<std::size_t>(sol.ibr_iterations));
  for (std::size_t i = 1; i < sol.potential_trace.size(); ++i) {
    EXPECT_LE(sol.potential_trace[i], sol.potential_trace[i - 1] * (1.0 + 1e-9)) << i;
  }
  EXPECT_LT(sol.round_displacements.back(), s.ibr.tolerance);
  const NashReport report = nash_check(s, {}, sol.values, {100, 1e-3, 1e-6, 42});
  EXPECT_TRUE(report.passed());
  ASSERT_EQ(report.players.size(), 2u);
  for (const auto& p : report.players) EXPECT_LE(p.worst_decrease, 1e-6 * (1.0 + std::abs(p.base_cost)));
}

TEST(Ibr, TraceBookkeeping) {
  const Scenario s = planning_scenario();
  const GameSolution sol = solve_ibr(s, {}, straight_guess(s));
  ASSERT_EQ(sol.updates.size(), 2u * static_cast<std::size_t>(sol.ibr_iterations));
  EXPECT_EQ(sol.round_potentials.size(), static_cast<std::size_t>(sol.ibr_iterations));
  EXPECT_EQ(sol.round_costs.size(), static_cast<std::size_t>(sol.ibr_iterations));
  for (std::size_t u = 0; u < sol.updates.size(); ++u) {
    const IbrUpdate& up = sol.updates[u];
    EXPECT_EQ(up.round, static_cast<int>(u / 2) + 1);
    EXPECT_EQ(up.player, static_cast<PlayerId>(u % 2));
    EXPECT_LE(up.cost_after, up.cost_before);
    EXPECT_EQ(up.potential, sol.potential_trace[u + 1]);
  }
  EXPECT_EQ(sol.round_potentials.back(), evaluate_potential(s, {}, sol.values));
  ASSERT_EQ(sol.trajectories.size(), 2u);
  EXPECT_EQ(sol.trajectories[1].states.size(), 21u);
}

TEST(Ibr, FixedPoint) {
  const Scenario s = planning_scenario();
  const GameSolution first = solve_ibr(s, {}, straight_guess(s));
  ASSERT_TRUE(first.converged);
  const GameSolution again = solve_ibr(s, {}, first.values);
  EXPECT_EQ(again.ibr_iterations, 1);
  EXPECT_TRUE(again.converged);
  EXPECT_LT(again.round_displacements.front(), s.ibr.tolerance);
}

TEST(Ibr, CustomOrder) {
  Scenario s = planning_scenario();
  s.ibr.order = {1, 0};
  const GameSolution sol = solve_ibr(s, {}, straight_guess(s));
  EXPECT_TRUE(sol.converged);
  ASSERT_FALSE(sol.updates.empty());
  EXPECT_EQ(sol.updates.front().player, 1);
  EXPECT_TRUE(nash_check(s, {}, sol.values, {100, 1e-3, 1e-6, 3}).passed());
}

TEST(Ibr, InitialStateMismatch) {
  const Scenario s = planning_scenario();
  Eigen::VectorXd init = straight_guess(s);
  init[oracle::state_offset(s, 1, 0)] += 1.0;
  EXPECT_THROW(solve_ibr(s, {}, init), std::invalid_argument);
  EXPECT_THROW(solve_ibr(s, {}, init.head(5)), std::invalid_argument);
}

TEST(Ibr, OverflowCarriesPartialSolution) {
  const Scenario s = planning_scenario();
  Eigen::VectorXd init = straight_guess(s);
  init[oracle::control_offset(s, 1, 3)] = std::nan("");
  try {
    solve_ibr(s, {}, init);
    FAIL() << "expected IbrError";
  } catch (const IbrError& e) {
    EXPECT_NE(std::string(e.what()).find("player 1"), std::string::npos) << e.what();
    EXPECT_FALSE(e.partial().converged);
    ASSERT_FALSE(e.partial().updates.empty());
    EXPECT_EQ(e.partial().updates.front().player, 0);
  }
}

TEST(Ibr, TraceCsv) {
  const Scenario s = planning_scenario();
  const GameSolution sol = solve_ibr(s, {}, straight_guess(s));
  const auto path = std::filesystem::temp_directory_path() / "gtpslam_trace_test" / "t.csv";
  write_ibr_trace_csv(sol, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "round,player,cost_before,cost_after,potential");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, static_cast<int>(sol.updates.size()));
  std::filesystem::remove_all(path.parent_path());
}

TEST(NashCheck, SinglePlayerOptimum) {
  Scenario s = planning_scenario();
  s.num_players = 1;
  s.lane_targets = {3.7};
  s.initial_states = {{0, 0, 0}};
  const GameSolution sol = solve_ibr(s, {}, straight_guess(s));
  EXPECT_TRUE(nash_check(s, {}, sol.values).passed());
}

TEST(NashCheck, PerturbedSolutionViolates) {
  const Scenario s = planning_scenario();
  const GameSolution sol = solve_ibr(s, {}, straight_guess(s));
  // Moving away from the equilibrium along a descent-admitting direction.
  Eigen::VectorXd off = sol.values;
  const VariableLayout layout = make_layout(s);
  for (int k = 0; k < s.horizon; ++k) off[layout.offset(layout.control(1, k))] += 0.3;
  off = residual_consistent_rollout(s, sol.values, 1, [&] {
    Eigen::VectorXd u(s.horizon);
    for (int k = 0; k < s.horizon; ++k) u[k] = off[layout.offset(layout.control(1, k))];
    return u;
  }());
  const NashReport report = nash_check(s, {}, off, {100, 1e-3, 1e-6, 1});
  EXPECT_FALSE(report.passed());
  EXPECT_GT(report.players[1].violations, 0);
  EXPECT_GT(report.players[1].worst_decrease, 0.0);
}

TEST(NashCheck, RolloutPreservesDynamicsResiduals) {
  gen::Rng rng(11);
  const Instance in = random_instance(rng, 2, 6, 0);
  const VariableLayout layout = make_layout(in.scn);
  Eigen::VectorXd u(in.scn.horizon);
  for (int k = 0; k < in.scn.horizon; ++k) u[k] = gen::normal(rng, 0.2);
  const Eigen::VectorXd out = residual_consistent_rollout(in.scn, in.vars, 1, u);
  for (int k = 0; k < in.scn.horizon; ++k) {
    auto residual = [&](const Eigen::VectorXd& v) {
      const State x = get_state(layout, v, 1, k);
      const State pred = models::dubins_step(x, get_control(layout, v, 1, k), in.scn.speed, in.scn.dt);
      Eigen::Vector3d r = pred.vector() - get_state(layout, v, 1, k + 1).vector();
      r[2] = wrap_angle(r[2]);
      return r;
    };
    EXPECT_LT((residual(out) - residual(in.vars)).norm(), 1e-9) << k;
    EXPECT_EQ(get_control(layout, out, 1, k).omega, u[k]);
  }
  // Other players untouched.
  for (int k = 0; k <= in.scn.horizon; ++k) {
    EXPECT_EQ(get_state(layout, out, 0, k).vector(), get_state(layout, in.vars, 0, k).vector());
  }
}

TEST(InitialGuess, StraightLinesAndLandmarks) {
  Scenario s = planning_scenario();
  s.horizon = 4;
  s.landmarks_truth = {{30, -5}, {50, 10}};
  const VariableLayout layout = make_layout(s);
  MeasurementSet m;
  // Landmark 0 seen twice; the closer sighting wins.
  m.landmark_meas.push_back({0, 0, {std::hypot(30.0, 5.0), std::atan2(-5.0, 30.0)}});
  const State ego2 = {12.0, 3.7, 0.0};
  m.landmark_meas.push_back({2, 0, {std::hypot(18.0, 8.7), std::atan2(-8.7, 18.0) + 0.01}});
  const Eigen::VectorXd v = initial_guess(s, m);
  EXPECT_EQ(get_state(layout, v, 0, 0).vector(), s.initial_states[0].vector());
  EXPECT_TRUE(get_state(layout, v, 0, 2).vector().isApprox(ego2.vector()));
  EXPECT_TRUE(get_state(layout, v, 1, 4).vector().isApprox(Eigen::Vector3d(15 + 24, 0.0, 0.0)));
  EXPECT_EQ(get_control(layout, v, 1, 3).omega, 0.0);
  const double r = std::hypot(18.0, 8.7), b = std::atan2(-8.7, 18.0) + 0.01;
  EXPECT_TRUE(get_landmark(layout, v, 0).isApprox(Eigen::Vector2d(12 + r * std::cos(b), 3.7 + r * std::sin(b))));
  // Never observed: ego's initial position.
  EXPECT_EQ(get_landmark(layout, v, 1), Eigen::Vector2d(0, 0));
}

}  // namespace
}  // namespace gtpslam::game
