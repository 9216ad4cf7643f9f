#include "gtpslam/harness/sweep.hpp"

#include "gtpslam/baseline/bundle_adjustment.hpp"
#include "gtpslam/core/errors.hpp"
#include "gtpslam/game/initial_guess.hpp"
#include "gtpslam/harness/metrics.hpp"
#include "gtpslam/sim/ground_truth.hpp"
#include "gtpslam/sim/measurements.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <thread>

namespace gtpslam::harness {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void parallel_for(int count, int workers, const std::function<void(int)>& body) {
  if (count <= 0) return;
  workers = std::clamp(workers, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct PlannedTrial {
  Scenario scenario;
  std::optional<sim::GroundTruth> truth;
};

}  // namespace

std::string_view to_string(Method method) { return method == Method::gtpslam ? "gtpslam" : "ba"; }

std::uint64_t perturbation_seed(std::uint64_t seed0, int trial) {
  return splitmix64(splitmix64(seed0) ^ static_cast<std::uint64_t>(trial));
}

std::uint64_t measurement_seed(std::uint64_t seed0, int level_index, int trial) {
  return splitmix64(splitmix64(splitmix64(seed0) + 1 + static_cast<std::uint64_t>(level_index)) ^
                    static_cast<std::uint64_t>(trial));
}

SweepOutput run_sweep(const Scenario& scn, const SweepOptions& options) {
  if (options.levels.empty()) throw ConfigError("sweep: at least one noise level is required");
  for (double s : options.levels) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("sweep: noise levels must be > 0");
  }
  if (options.trials_per_level < 0) throw ConfigError("sweep: trial count must be >= 0");
  const int workers =
      options.workers > 0 ? options.workers : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  const int trials = options.trials_per_level;
  const int levels = static_cast<int>(options.levels.size());

  std::vector<PlannedTrial> planned(static_cast<std::size_t>(trials));
  parallel_for(trials, workers, [&](int t) {
    PlannedTrial& p = planned[static_cast<std::size_t>(t)];
    p.scenario = sim::perturb_initials(scn, perturbation_seed(options.seed0, t));
    try {
      p.truth = sim::plan_ground_truth(p.scenario);
    } catch (const std::exception&) {
      p.truth.reset();
    }
  });

  SweepOutput out;
  out.results.resize(static_cast<std::size_t>(2 * levels * trials));
  out.traces.resize(out.results.size());
  parallel_for(levels * trials, workers, [&](int task) {
    const int l = task / trials;
    const int t = task % trials;
    const double sigma = options.levels[static_cast<std::size_t>(l)];
    const std::uint64_t seed = measurement_seed(options.seed0, l, t);
    const std::size_t slot = static_cast<std::size_t>(2 * task);
    TrialResult& gtp = out.results[slot];
    TrialResult& ba = out.results[slot + 1];
    for (TrialResult* r : {&gtp, &ba}) {
      r->sigma = sigma;
      r->seed = seed;
      r->trial = t;
    }
    gtp.method = Method::gtpslam;
    ba.method = Method::ba;

    const PlannedTrial& p = planned[static_cast<std::size_t>(t)];
    if (!p.truth) {
      gtp.status = ba.status = "planning_failed";
      return;
    }
    const sim::GroundTruth& truth = *p.truth;
    const MeasurementSet meas = sim::synthesize_measurements(p.scenario, truth, {seed, sigma, 1.0});
    const Eigen::VectorXd init = game::initial_guess(p.scenario, meas);

    auto score = [&](TrialResult& r, const game::GameSolution& sol) {
      r.vehicle_rmse = vehicle_rmse(sol.trajectories, truth.trajectories);
      r.landmark_rmse = landmark_rmse(sol.landmarks, truth.landmarks);
    };

    auto start = std::chrono::steady_clock::now();
    try {
      const game::GameSolution sol = game::solve_ibr(p.scenario, meas, init);
      score(gtp, sol);
      gtp.ibr_rounds = sol.ibr_iterations;
      out.traces[slot] = sol.updates;
    } catch (const game::IbrError& e) {
      gtp.status = "lambda_overflow";
      gtp.ibr_rounds = e.partial().ibr_iterations;
      out.traces[slot] = e.partial().updates;
    } catch (const DomainError&) {
      gtp.status = "domain_error";
    }
    gtp.wall_time_s = seconds_since(start);

    start = std::chrono::steady_clock::now();
    try {
      const baseline::BaResult result = baseline::solve_ba(p.scenario, meas, init);
      if (result.success()) {
        score(ba, result.solution);
      } else {
        ba.status = "lambda_overflow";
      }
    } catch (const DomainError&) {
      ba.status = "domain_error";
    }
    ba.wall_time_s = seconds_since(start);
  });
  return out;
}

ProfileDefaults profile_defaults(Profile profile) {
  ProfileDefaults d;
  if (profile == Profile::desk) {
    d.horizon = 40;
    d.trials = 10;
    d.levels = {0.1, 0.5, 1.0};
    return d;
  }
  d.horizon = 167;
  d.trials = 50;
  for (int i = 1; i <= 20; ++i) d.levels.push_back(static_cast<double>(5 * i) / 100.0);
  return d;
}

std::vector<SummaryRow> summarize(const std::vector<TrialResult>& results) {
  if (results.empty()) throw std::invalid_argument("summarize: no results");
  struct Group {
    std::vector<double> vehicle;
    std::vector<double> landmark;
    int failures = 0;
  };
  std::map<std::pair<double, int>, Group> groups;
  for (const TrialResult& r : results) {
    Group& g = groups[{r.sigma, static_cast<int>(r.method)}];
    if (!r.success()) {
      ++g.failures;
      continue;
    }
    g.vehicle.push_back(*r.vehicle_rmse);
    g.landmark.push_back(*r.landmark_rmse);
  }
  std::vector<SummaryRow> rows;
  for (const auto& [key, g] : groups) {
    for (const auto& [metric, values] : {std::pair{"vehicle", &g.vehicle}, std::pair{"landmark", &g.landmark}}) {
      SummaryRow row;
      row.sigma = key.first;
      row.method = static_cast<Method>(key.second);
      row.metric = metric;
      row.failures = g.failures;
      if (!values->empty()) {
        row.median = quantile(*values, 0.5);
        row.q1 = quantile(*values, 0.25);
        row.q3 = quantile(*values, 0.75);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace gtpslam::harness
