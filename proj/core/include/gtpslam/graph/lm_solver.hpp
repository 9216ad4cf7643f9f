#pragma once

#include "gtpslam/core/scenario.hpp"
#include "gtpslam/graph/factor_graph.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <string_view>
#include <vector>

namespace gtpslam::graph {

enum class LinearSolver {
  /// Normal equations with a sparse LDL^T factorization.
  sparse_cholesky,
  /// Dense QR on the damped, stacked Jacobian. Slow; kept as a reference.
  dense_qr,
};

struct LmOptions {
  int max_iterations = 100;
  double ftol = 1e-8;
  double xtol = 1e-8;
  double lambda0 = 1e-4;
  double lambda_max = 1e12;
  LinearSolver linear_solver = LinearSolver::sparse_cholesky;

  static LmOptions from(const SolverParams& params);
};

enum class Termination { converged, max_iterations, lambda_overflow };

std::string_view to_string(Termination t);

struct SolveReport {
  double initial_cost = 0.0;
  double final_cost = 0.0;
  /// Accepted steps.
  int iterations = 0;
  Termination termination = Termination::converged;
  /// Cost before the first step and after every accepted step.
  std::vector<double> cost_trace;
};

struct SolveResult {
  Eigen::VectorXd values;
  SolveReport report;
};

/// Levenberg-Marquardt over the free blocks of `graph`, starting at `v0`.
/// Never returns a point with higher cost than `v0`. Damping overflow is
/// reported through the termination reason, not thrown.
SolveResult solve_lm(const FactorGraph& graph, const Eigen::VectorXd& v0, const LmOptions& options = {});

/// Solves (J^T J + lambda D) delta = -J^T r with D = diag(J^T J) (floored).
/// Returns false if the factorization fails.
bool damped_step(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& r, double lambda,
                 LinearSolver solver, Eigen::VectorXd& delta);

}  // namespace gtpslam::graph
