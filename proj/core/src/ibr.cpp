#include "gtpslam/game/ibr.hpp"

#include "gtpslam/core/angle.hpp"
#include "gtpslam/core/layout.hpp"
#include "gtpslam/game/player_problem.hpp"
#include "gtpslam/game/potential.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gtpslam::game {

IbrOptions IbrOptions::from(const Scenario& scn) {
  IbrOptions o;
  o.max_iterations = scn.ibr.max_iterations;
  o.tolerance = scn.ibr.tolerance;
  o.order = scn.ibr.order;
  o.lm = graph::LmOptions::from(scn.solver);
  return o;
}

namespace {

double state_displacement(const VariableLayout& layout, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                          PlayerId player) {
  double sq = 0.0;
  for (int k = 0; k <= layout.horizon(); ++k) {
    const int o = layout.offset(layout.state(player, k));
    const double dx = a[o] - b[o];
    const double dy = a[o + 1] - b[o + 1];
    const double dt = wrap_angle(a[o + 2] - b[o + 2]);
    sq += dx * dx + dy * dy + dt * dt;
  }
  return std::sqrt(sq);
}

void check_initial_states(const Scenario& scn, const VariableLayout& layout, const Eigen::VectorXd& v) {
  for (PlayerId i = 0; i < scn.num_players; ++i) {
    if (!(get_state(layout, v, i, 0) == scn.initial_states[static_cast<std::size_t>(i)])) {
      throw std::invalid_argument("initial state of player " + std::to_string(i) +
                                  " does not match the scenario's fixed initial state");
    }
  }
}

void finalize(GameSolution& sol, const VariableLayout& layout) {
  sol.trajectories = unpack_trajectories(layout, sol.values);
  sol.landmarks = unpack_landmarks(layout, sol.values);
}

}  // namespace

GameSolution solve_ibr(const Scenario& scn, const MeasurementSet& meas, const Eigen::VectorXd& init_vars,
                       const IbrOptions& options) {
  const VariableLayout layout = make_layout(scn);
  if (init_vars.size() != layout.total_dim()) throw std::invalid_argument("init_vars does not match the scenario layout");
  check_initial_states(scn, layout, init_vars);

  std::vector<PlayerId> order = options.order;
  if (order.empty()) {
    order.resize(static_cast<std::size_t>(scn.num_players));
    std::iota(order.begin(), order.end(), 0);
  }

  std::vector<PlayerProblem> problems;
  problems.reserve(static_cast<std::size_t>(scn.num_players));
  for (PlayerId i = 0; i < scn.num_players; ++i) problems.push_back(build_player_problem(scn, meas, init_vars, i));

  GameSolution sol;
  sol.values = init_vars;
  sol.potential_trace.push_back(evaluate_potential(scn, meas, sol.values));

  for (int round = 1; round <= options.max_iterations; ++round) {
    const Eigen::VectorXd previous = sol.values;
    for (PlayerId i : order) {
      const PlayerProblem& problem = problems[static_cast<std::size_t>(i)];
      graph::SolveResult result = graph::solve_lm(problem.graph, sol.values, options.lm);
      IbrUpdate update;
      update.round = round;
      update.player = i;
      update.cost_before = result.report.initial_cost;
      update.cost_after = result.report.final_cost;
      update.lm_iterations = result.report.iterations;
      update.termination = result.report.termination;
      sol.values = std::move(result.values);
      update.potential = evaluate_potential(scn, meas, sol.values);
      sol.potential_trace.push_back(update.potential);
      sol.updates.push_back(update);
      if (update.termination == graph::Termination::lambda_overflow) {
        sol.ibr_iterations = round;
        finalize(sol, layout);
        throw IbrError("best response of player " + std::to_string(i) + " in round " + std::to_string(round) +
                           " failed: damping overflow (cost " + std::to_string(update.cost_after) + ")",
                       sol);
      }
    }
    sol.ibr_iterations = round;
    sol.round_potentials.push_back(sol.potential_trace.back());
    std::vector<double> costs;
    double displacement = 0.0;
    for (PlayerId i = 0; i < scn.num_players; ++i) {
      costs.push_back(evaluate_cost(problems[static_cast<std::size_t>(i)], sol.values));
      displacement = std::max(displacement, state_displacement(layout, sol.values, previous, i));
    }
    sol.round_costs.push_back(std::move(costs));
    sol.round_displacements.push_back(displacement);
    if (displacement < options.tolerance || scn.num_players == 1) {
      sol.converged = true;
      break;
    }
  }
  finalize(sol, layout);
  return sol;
}

GameSolution solve_ibr(const Scenario& scn, const MeasurementSet& meas, const Eigen::VectorXd& init_vars) {
  return solve_ibr(scn, meas, init_vars, IbrOptions::from(scn));
}

void write_ibr_trace_csv(const GameSolution& solution, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "round,player,cost_before,cost_after,potential\n";
  out << std::setprecision(17);
  for (const IbrUpdate& u : solution.updates) {
    out << u.round << ',' << u.player << ',' << u.cost_before << ',' << u.cost_after << ',' << u.potential << '\n';
  }
}

}  // namespace gtpslam::game
