#pragma once

#include "gtpslam/core/layout.hpp"
#include "gtpslam/graph/factor.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <vector>

namespace gtpslam::graph {

/// Factors over a VariableLayout plus a per-block free/frozen mask. Every
/// block starts frozen; initial states (stage 0) can never be freed.
class FactorGraph {
 public:
  FactorGraph() = default;
  explicit FactorGraph(VariableLayout layout);

  const VariableLayout& layout() const { return layout_; }
  const std::vector<Factor>& factors() const { return factors_; }
  int num_factors() const { return static_cast<int>(factors_.size()); }

  /// Validates block references and residual/covariance dimensions.
  int add(Factor factor);

  void set_free(BlockId block, bool free);
  bool is_free(BlockId block) const { return free_[static_cast<std::size_t>(block.index)]; }

  /// Frees stages 1..K of the player's states and all of its controls.
  void free_player(PlayerId player);
  void free_player_states(PlayerId player);
  void free_landmarks();

  /// A factor is active when it touches at least one free block.
  bool is_active(const Factor& factor) const;

  /// Column offset of each free block in the reduced (free-only) ordering,
  /// -1 for frozen blocks.
  const std::vector<int>& free_offsets() const;
  int free_dim() const;
  int residual_dim() const;

  std::vector<BlockId> free_blocks() const;

 private:
  void refresh_offsets() const;

  VariableLayout layout_;
  std::vector<Factor> factors_;
  std::vector<bool> free_;
  mutable std::vector<int> free_offsets_;
  mutable int free_dim_ = 0;
  mutable bool offsets_dirty_ = true;
};

/// Whitened residual stacked in factor order, and the whitened Jacobian
/// restricted to free blocks.
struct Linearization {
  Eigen::VectorXd residual;
  Eigen::SparseMatrix<double> jacobian;
  /// First row of each factor.
  std::vector<int> row_offsets;
};

Linearization residual_and_jacobian(const FactorGraph& graph, const Eigen::VectorXd& v);

/// Weighted sum of squared residuals over every factor, frozen or not.
double evaluate_cost(const FactorGraph& graph, const Eigen::VectorXd& v);

/// Writes the free-block increment into the full vector and re-wraps headings.
Eigen::VectorXd apply_increment(const FactorGraph& graph, const Eigen::VectorXd& v, const Eigen::VectorXd& delta);

Eigen::VectorXd extract_free(const FactorGraph& graph, const Eigen::VectorXd& v);

}  // namespace gtpslam::graph
