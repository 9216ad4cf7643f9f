#include "gtpslam/baseline/bundle_adjustment.hpp"
#include "gtpslam/game/ibr.hpp"
#include "gtpslam/game/initial_guess.hpp"
#include "gtpslam/game/player_problem.hpp"
#include "gtpslam/graph/factor_graph.hpp"
#include "gtpslam/graph/lm_solver.hpp"
#include "gtpslam/sim/ground_truth.hpp"
#include "gtpslam/sim/measurements.hpp"

#include <benchmark/benchmark.h>

#include <filesystem>

namespace {

using namespace gtpslam;

struct Setup {
  Scenario scn;
  MeasurementSet meas;
  Eigen::VectorXd init;
};

// Scenario file, horizon override, noise level.
Setup make_setup(const char* name, int horizon, double sigma) {
  Setup s;
  s.scn = load_scenario(std::filesystem::path(GTPSLAM_SCENARIO_DIR) / name);
  s.scn.horizon = horizon;
  const sim::GroundTruth gt = sim::plan_ground_truth(s.scn);
  s.meas = sim::synthesize_measurements(s.scn, gt, {1, sigma, 1.0});
  s.init = game::initial_guess(s.scn, s.meas);
  return s;
}

void BM_EgoLinearization(benchmark::State& state) {
  const Setup s = make_setup("desk4.json", static_cast<int>(state.range(0)), 0.5);
  const game::PlayerProblem ego = game::build_player_problem(s.scn, s.meas, s.init, kEgo);
  for (auto _ : state) benchmark::DoNotOptimize(graph::residual_and_jacobian(ego.graph, s.init));
  state.counters["factors"] = ego.graph.num_factors();
}
BENCHMARK(BM_EgoLinearization)->Arg(40)->Arg(167)->Unit(benchmark::kMicrosecond);

void BM_EgoLmSolve(benchmark::State& state) {
  const Setup s = make_setup("desk4.json", static_cast<int>(state.range(0)), 0.5);
  const game::PlayerProblem ego = game::build_player_problem(s.scn, s.meas, s.init, kEgo);
  const auto opts = graph::LmOptions::from(s.scn.solver);
  for (auto _ : state) benchmark::DoNotOptimize(graph::solve_lm(ego.graph, s.init, opts));
}
BENCHMARK(BM_EgoLmSolve)->Arg(40)->Arg(167)->Unit(benchmark::kMillisecond);

void BM_Ibr(benchmark::State& state) {
  const Setup s = make_setup("desk4.json", static_cast<int>(state.range(0)), 0.5);
  int rounds = 0;
  for (auto _ : state) rounds = game::solve_ibr(s.scn, s.meas, s.init).ibr_iterations;
  state.counters["rounds"] = rounds;
}
BENCHMARK(BM_Ibr)->Arg(40)->Arg(167)->Unit(benchmark::kMillisecond);

void BM_BundleAdjustment(benchmark::State& state) {
  const Setup s = make_setup("desk4.json", static_cast<int>(state.range(0)), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(baseline::solve_ba(s.scn, s.meas, s.init));
}
BENCHMARK(BM_BundleAdjustment)->Arg(40)->Arg(167)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
