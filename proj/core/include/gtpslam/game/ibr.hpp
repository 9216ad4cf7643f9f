#pragma once

#include "gtpslam/core/errors.hpp"
#include "gtpslam/core/scenario.hpp"
#include "gtpslam/core/types.hpp"
#include "gtpslam/graph/lm_solver.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <vector>

namespace gtpslam::game {

struct IbrOptions {
  int max_iterations = 50;
  double tolerance = 1e-4;
  /// Empty means ego first, then ascending id.
  std::vector<PlayerId> order;
  graph::LmOptions lm;

  static IbrOptions from(const Scenario& scenario);
};

/// One best-response update.
struct IbrUpdate {
  int round = 0;
  PlayerId player = 0;
  double cost_before = 0.0;
  double cost_after = 0.0;
  /// Potential after the update.
  double potential = 0.0;
  int lm_iterations = 0;
  graph::Termination termination = graph::Termination::converged;
};

struct GameSolution {
  std::vector<Trajectory> trajectories;
  std::vector<Eigen::Vector2d> landmarks;
  Eigen::VectorXd values;
  int ibr_iterations = 0;
  bool converged = false;
  /// Potential at the initial point, then after every player update.
  std::vector<double> potential_trace;
  /// Potential at the end of each round.
  std::vector<double> round_potentials;
  /// L^i of every player at the end of each round, indexed [round][player].
  std::vector<std::vector<double>> round_costs;
  /// Largest per-player state displacement of each round.
  std::vector<double> round_displacements;
  std::vector<IbrUpdate> updates;
};

/// Raised when a player's best response fails (damping overflow). The
/// message names the player and round.
class IbrError : public SolverError {
 public:
  IbrError(const std::string& what, GameSolution partial) : SolverError(what), partial_(std::move(partial)) {}
  const GameSolution& partial() const { return partial_; }

 private:
  GameSolution partial_;
};

/// Iterated best response: each round, players in `order` minimize their own
/// objective with the others held fixed. Stops when every player's state
/// trajectory moved less than `tolerance` during a round, or after
/// `max_iterations` rounds. A single-player game is done after one round.
GameSolution solve_ibr(const Scenario& scenario, const MeasurementSet& meas, const Eigen::VectorXd& init_vars,
                       const IbrOptions& options);
GameSolution solve_ibr(const Scenario& scenario, const MeasurementSet& meas, const Eigen::VectorXd& init_vars);

/// CSV with columns round,player,cost_before,cost_after,potential.
void write_ibr_trace_csv(const GameSolution& solution, const std::filesystem::path& path);

}  // namespace gtpslam::game
