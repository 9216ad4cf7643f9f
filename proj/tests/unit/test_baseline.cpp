#include "gtpslam/baseline/bundle_adjustment.hpp"
#include "gtpslam/game/initial_guess.hpp"
#include "gtpslam/game/player_problem.hpp"
#include "gtpslam/harness/metrics.hpp"
#include "gtpslam/models/models.hpp"
#include "gtpslam/sim/ground_truth.hpp"
#include "gtpslam/sim/measurements.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <map>

namespace gtpslam::baseline {
namespace {

using graph::FactorKind;

std::map<FactorKind, int> count_kinds(const graph::FactorGraph& g) {
  std::map<FactorKind, int> counts;
  for (const auto& f : g.factors()) ++counts[f.kind];
  return counts;
}

Scenario small(int n, int k) {
  Scenario s;
  s.num_players = n;
  s.horizon = k;
  s.lane_targets = {0.0, 3.7, 7.4};
  s.lane_targets.resize(static_cast<std::size_t>(n));
  s.initial_states = {{0, 0, 0}, {10, 3.7, 0}, {-10, 7.4, 0}};
  s.initial_states.resize(static_cast<std::size_t>(n));
  s.landmarks_truth = {{10, -5}};
  return s;
}

MeasurementSet measure(const Scenario& s, const Eigen::VectorXd& truth, double sigma, std::uint64_t seed) {
  sim::GroundTruth gt;
  const VariableLayout layout = game::make_layout(s);
  gt.trajectories = unpack_trajectories(layout, truth);
  gt.landmarks = s.landmarks_truth;
  return sim::synthesize_measurements(s, gt, {seed, sigma, 1.0});
}

TEST(BaGraph, SinglePlayerMatchesEgoProblem) {
  gen::Rng rng(1);
  const Scenario s = gen::scenario(rng, 1, 6, 3);
  const Eigen::VectorXd v = gen::variables(rng, s, 0.3);
  const MeasurementSet m = gen::measurements(rng, s, v, 0.2);
  const BaGraph ba = build_ba_graph(s, m, v);
  const game::PlayerProblem ego = game::build_player_problem(s, m, v, kEgo);
  EXPECT_EQ(count_kinds(ba.graph), count_kinds(ego.graph));
  EXPECT_EQ(ba.graph.free_blocks(), ego.graph.free_blocks());
  EXPECT_TRUE(ba.anchored.empty());
  EXPECT_NEAR(graph::evaluate_cost(ba.graph, v), game::evaluate_cost(ego, v), 1e-10 * graph::evaluate_cost(ba.graph, v));
}

TEST(BaGraph, TwoPlayerStructure) {
  const Scenario s = small(2, 2);
  const Eigen::VectorXd v = game::initial_guess(s, {});
  const MeasurementSet m = measure(s, v, 0.1, 1);
  const BaGraph ba = build_ba_graph(s, m, v);
  auto c = count_kinds(ba.graph);
  EXPECT_EQ(c[FactorKind::prior_state], 2);
  EXPECT_EQ(c[FactorKind::prior_control], 2);
  EXPECT_EQ(c[FactorKind::dynamics], 2);
  EXPECT_EQ(c[FactorKind::landmark_meas], 2);
  EXPECT_EQ(c[FactorKind::interplayer_meas], 4);
  EXPECT_EQ(c[FactorKind::interaction], 0);
  // Player 1 sees the ego at stages 0 and 1 only; stage 2 needs an anchor.
  EXPECT_EQ(c[FactorKind::anchor], 1);
  const VariableLayout& L = ba.graph.layout();
  EXPECT_EQ(ba.anchored, std::vector<BlockId>{L.state(1, 2)});

  for (const auto& f : ba.graph.factors()) {
    if (f.kind == FactorKind::prior_state || f.kind == FactorKind::prior_control || f.kind == FactorKind::dynamics) {
      for (BlockId b : f.blocks) EXPECT_EQ(L.info(b).player, kEgo);
    }
  }
  std::vector<BlockId> expected;
  for (PlayerId i = 0; i < 2; ++i) {
    for (int k = 1; k <= 2; ++k) expected.push_back(L.state(i, k));
  }
  for (int k = 0; k < 2; ++k) expected.push_back(L.control(0, k));
  expected.push_back(L.landmark(0));
  std::sort(expected.begin(), expected.end());
  auto free = ba.graph.free_blocks();
  std::sort(free.begin(), free.end());
  EXPECT_EQ(free, expected);
  EXPECT_FALSE(ba.graph.is_free(L.control(1, 0)));
}

TEST(BaGraph, EgoOnlyAnchorsEveryNonEgoState) {
  Scenario s = small(3, 3);
  s.interplayer_mode = InterplayerMode::ego_only;
  const Eigen::VectorXd v = game::initial_guess(s, {});
  const BaGraph ba = build_ba_graph(s, measure(s, v, 0.1, 2), v);
  EXPECT_EQ(ba.anchored.size(), 2u * 3u);
  EXPECT_EQ(count_kinds(ba.graph)[FactorKind::anchor], 6);
}

TEST(BaGraph, MeasurementFactorsMatchGameUnion) {
  // The measurement factors are exactly the union of what the players see.
  gen::Rng rng(3);
  const Scenario s = gen::scenario(rng, 3, 4, 2);
  const Eigen::VectorXd v = gen::variables(rng, s, 0.3);
  const MeasurementSet m = gen::measurements(rng, s, v, 0.2);
  const BaGraph ba = build_ba_graph(s, m, v);
  auto key = [](const graph::Factor& f) {
    std::vector<int> k{static_cast<int>(f.kind)};
    for (BlockId b : f.blocks) k.push_back(b.index);
    return k;
  };
  std::vector<std::vector<int>> from_ba, from_game;
  for (const auto& f : ba.graph.factors()) {
    if (f.kind == FactorKind::landmark_meas || f.kind == FactorKind::interplayer_meas) from_ba.push_back(key(f));
  }
  const game::PlayerProblem ego = game::build_player_problem(s, m, v, kEgo);
  for (const auto& f : ego.graph.factors()) {
    if (f.kind == FactorKind::landmark_meas || f.kind == FactorKind::interplayer_meas) from_game.push_back(key(f));
  }
  std::sort(from_ba.begin(), from_ba.end());
  std::sort(from_game.begin(), from_game.end());
  EXPECT_EQ(from_ba, from_game);
}

TEST(BaGraph, LayoutMismatch) {
  const Scenario s = small(2, 2);
  EXPECT_THROW(build_ba_graph(s, {}, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST(SolveBa, NoiselessSinglePlayerRecovery) {
  Scenario s = small(1, 8);
  s.landmarks_truth = {{10, -5}, {25, 8}, {40, -6}};
  const Eigen::VectorXd truth = game::initial_guess(s, {});
  MeasurementSet m = measure(s, truth, 0.1, 4);
  const VariableLayout layout = game::make_layout(s);
  for (auto& z : m.landmark_meas) {
    z.z = models::landmark_meas(get_state(layout, truth, 0, z.stage), s.landmarks_truth[static_cast<std::size_t>(z.landmark)]);
  }
  Eigen::VectorXd truth_full = truth;
  for (int a = 0; a < s.num_landmarks(); ++a) set_landmark(layout, truth_full, a, s.landmarks_truth[static_cast<std::size_t>(a)]);

  gen::Rng rng(5);
  Eigen::VectorXd init = truth_full;
  for (int a = 0; a < s.num_landmarks(); ++a) {
    set_landmark(layout, init, a, get_landmark(layout, truth_full, a) + Eigen::Vector2d(gen::normal(rng, 0.5), gen::normal(rng, 0.5)));
  }
  for (int k = 1; k <= s.horizon; ++k) {
    State x = get_state(layout, init, 0, k);
    x.py += gen::normal(rng, 0.2);
    set_state(layout, init, 0, k, x);
  }
  const BaResult r = solve_ba(s, m, init);
  ASSERT_TRUE(r.success());
  EXPECT_LT((r.solution.values - truth_full).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_EQ(r.solution.ibr_iterations, 0);
  EXPECT_TRUE(r.solution.potential_trace.empty());
}

TEST(SolveBa, DeskSmoke) {
  const Scenario s = load_scenario(std::filesystem::path(GTPSLAM_SCENARIO_DIR) / "desk2.json");
  const sim::GroundTruth gt = sim::plan_ground_truth(s);
  const MeasurementSet m = sim::synthesize_measurements(s, gt, {11, 0.5, 1.0});
  const BaResult r = solve_ba(s, m, game::initial_guess(s, m));
  ASSERT_TRUE(r.success());
  EXPECT_LE(r.report.final_cost, r.report.initial_cost);
  const double v = harness::vehicle_rmse(r.solution.trajectories, gt.trajectories);
  const double l = harness::landmark_rmse(r.solution.landmarks, gt.landmarks);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_LT(v, 5.0);
  EXPECT_LT(l, 5.0);
}

}  // namespace
}  // namespace gtpslam::baseline
