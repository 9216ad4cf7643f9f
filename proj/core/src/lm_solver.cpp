#include "gtpslam/graph/lm_solver.hpp"

#include <Eigen/QR>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gtpslam::graph {

namespace {

// Floor on the Marquardt scaling so directions with no curvature still get damped.
constexpr double kMinDiagonal = 1e-9;
// Costs below this are treated as exact zeros.
constexpr double kZeroCost = 1e-24;
constexpr double kMinDamping = 1e-12;

class DampedSystem {
 public:
  DampedSystem(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& r, LinearSolver solver)
      : J_(J), r_(r), solver_(solver) {
    H_ = Eigen::SparseMatrix<double>(J.transpose()) * J;
    g_ = J.transpose() * r;
    diag_ = H_.diagonal().cwiseMax(kMinDiagonal);
    if (solver_ == LinearSolver::sparse_cholesky) {
      // Every diagonal entry must exist so that adding damping keeps the analyzed pattern.
      for (int i = 0; i < H_.rows(); ++i) H_.coeffRef(i, i) += 0.0;
      H_.makeCompressed();
      ldlt_.analyzePattern(H_);
    }
  }

  bool solve(double lambda, Eigen::VectorXd& delta) {
    if (solver_ == LinearSolver::dense_qr) {
      const Eigen::Index m = J_.rows();
      const Eigen::Index n = J_.cols();
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + n, n);
      A.topRows(m) = Eigen::MatrixXd(J_);
      A.bottomRows(n) = (lambda * diag_).cwiseSqrt().asDiagonal();
      Eigen::VectorXd b = Eigen::VectorXd::Zero(m + n);
      b.head(m) = -r_;
      delta = A.householderQr().solve(b);
      return delta.allFinite();
    }
    Eigen::SparseMatrix<double> A = H_;
    for (int i = 0; i < A.rows(); ++i) A.coeffRef(i, i) += lambda * diag_[i];
    ldlt_.factorize(A);
    if (ldlt_.info() != Eigen::Success) return false;
    delta = ldlt_.solve(-g_);
    return ldlt_.info() == Eigen::Success && delta.allFinite();
  }

  /// Decrease of the linearized cost for a step.
  double predicted_decrease(const Eigen::VectorXd& delta) const {
    return r_.squaredNorm() - (r_ + J_ * delta).squaredNorm();
  }

 private:
  const Eigen::SparseMatrix<double>& J_;
  const Eigen::VectorXd& r_;
  LinearSolver solver_;
  Eigen::SparseMatrix<double> H_;
  Eigen::VectorXd g_;
  Eigen::VectorXd diag_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

}  // namespace

LmOptions LmOptions::from(const SolverParams& params) {
  LmOptions o;
  o.max_iterations = params.max_iterations;
  o.ftol = params.ftol;
  o.xtol = params.xtol;
  o.lambda0 = params.lambda0;
  return o;
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iterations: return "max_iter";
    case Termination::lambda_overflow: return "lambda_overflow";
  }
  return "unknown";
}

bool damped_step(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& r, double lambda,
                 LinearSolver solver, Eigen::VectorXd& delta) {
  DampedSystem system(J, r, solver);
  return system.solve(lambda, delta);
}

SolveResult solve_lm(const FactorGraph& graph, const Eigen::VectorXd& v0, const LmOptions& options) {
  if (graph.free_dim() == 0) throw std::invalid_argument("solve_lm: graph has no free blocks");
  bool any_active = false;
  for (const Factor& f : graph.factors()) any_active = any_active || graph.is_active(f);
  if (!any_active) throw std::invalid_argument("solve_lm: no factor touches a free block");

  SolveResult result;
  result.values = v0;
  SolveReport& report = result.report;

  Linearization lin = residual_and_jacobian(graph, result.values);
  double cost = lin.residual.squaredNorm();
  report.initial_cost = cost;
  report.cost_trace.push_back(cost);
  report.termination = Termination::max_iterations;

  double lambda = options.lambda0;
  bool done = cost <= kZeroCost;
  if (done) report.termination = Termination::converged;

  while (!done && report.iterations < options.max_iterations) {
    DampedSystem system(lin.jacobian, lin.residual, options.linear_solver);
    bool accepted = false;
    bool stationarity_checked = false;
    while (!accepted) {
      Eigen::VectorXd delta;
      if (system.solve(lambda, delta)) {
        const Eigen::VectorXd candidate = apply_increment(graph, result.values, delta);
        const double candidate_cost = evaluate_cost(graph, candidate);
        if (std::isfinite(candidate_cost) && candidate_cost < cost) {
          accepted = true;
          const double decrease = cost - candidate_cost;
          const double step_norm = delta.norm();
          const double x_norm = extract_free(graph, result.values).norm();
          result.values = candidate;
          cost = candidate_cost;
          ++report.iterations;
          report.cost_trace.push_back(cost);
          lambda = std::max(lambda / 10.0, 1e-15);
          if (cost <= kZeroCost || decrease <= options.ftol * (cost + decrease) ||
              step_norm <= options.xtol * (x_norm + options.xtol)) {
            report.termination = Termination::converged;
            done = true;
          }
          break;
        }
        // A rejected step may just mean there is nothing left to gain. Ask the
        // nearly undamped model once per iteration.
        if (!stationarity_checked) {
          stationarity_checked = true;
          Eigen::VectorXd gn;
          if (system.solve(kMinDamping, gn)) {
            const double gn_predicted = system.predicted_decrease(gn);
            if (gn_predicted <= options.ftol * cost || gn_predicted <= kZeroCost) {
              report.termination = Termination::converged;
              done = true;
              break;
            }
          }
        }
      }
      lambda *= 10.0;
      if (lambda > options.lambda_max) {
        report.termination = Termination::lambda_overflow;
        done = true;
        break;
      }
    }
    if (!done) lin = residual_and_jacobian(graph, result.values);
  }
  report.final_cost = cost;
  return result;
}

}  // namespace gtpslam::graph
