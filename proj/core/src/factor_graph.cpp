#include "gtpslam/graph/factor_graph.hpp"

#include "gtpslam/core/angle.hpp"

#include <stdexcept>
#include <vector>
#include <string>

namespace gtpslam::graph {

namespace {

int expected_block_count(FactorKind kind) {
  switch (kind) {
    case FactorKind::prior_state:
    case FactorKind::prior_control:
    case FactorKind::anchor:
      return 1;
    case FactorKind::dynamics:
      return 3;
    case FactorKind::interaction:
    case FactorKind::landmark_meas:
    case FactorKind::interplayer_meas:
      return 2;
  }
  return -1;
}

std::vector<BlockKind> expected_block_kinds(FactorKind kind) {
  using enum BlockKind;
  switch (kind) {
    case FactorKind::prior_state:
    case FactorKind::anchor:
      return {state};
    case FactorKind::prior_control: return {control};
    case FactorKind::dynamics: return {state, control, state};
    case FactorKind::interaction:
    case FactorKind::interplayer_meas:
      return {state, state};
    case FactorKind::landmark_meas: return {state, landmark};
  }
  return {};
}

int expected_residual_dim(FactorKind kind) {
  switch (kind) {
    case FactorKind::prior_control:
    case FactorKind::interaction:
      return 1;
    case FactorKind::prior_state:
    case FactorKind::landmark_meas:
    case FactorKind::interplayer_meas:
      return 2;
    case FactorKind::dynamics:
    case FactorKind::anchor:
      return 3;
  }
  return -1;
}

}  // namespace

FactorGraph::FactorGraph(VariableLayout layout)
    : layout_(std::move(layout)), free_(static_cast<std::size_t>(layout_.num_blocks()), false) {}

int FactorGraph::add(Factor factor) {
  if (static_cast<int>(factor.blocks.size()) != expected_block_count(factor.kind)) {
    throw std::invalid_argument(std::string("factor ") + std::string(to_string(factor.kind)) +
                                " connects the wrong number of blocks");
  }
  for (BlockId b : factor.blocks) {
    if (b.index < 0 || b.index >= layout_.num_blocks()) throw std::invalid_argument("factor references unknown block");
  }
  const std::vector<BlockKind> kinds = expected_block_kinds(factor.kind);
  for (std::size_t n = 0; n < kinds.size(); ++n) {
    if (layout_.info(factor.blocks[n]).kind != kinds[n]) {
      throw std::invalid_argument(std::string("factor ") + std::string(to_string(factor.kind)) + ": block " +
                                  std::to_string(n) + " has the wrong kind");
    }
  }
  if (factor.residual_dim() != expected_residual_dim(factor.kind)) {
    throw std::invalid_argument(std::string("factor ") + std::string(to_string(factor.kind)) +
                                ": covariance dimension does not match residual dimension");
  }
  factors_.push_back(std::move(factor));
  return num_factors() - 1;
}

void FactorGraph::set_free(BlockId block, bool free) {
  const BlockInfo& info = layout_.info(block);
  if (free && info.kind == BlockKind::state && info.stage == 0) {
    throw std::invalid_argument("initial state of player " + std::to_string(info.player) + " is fixed");
  }
  free_[static_cast<std::size_t>(block.index)] = free;
  offsets_dirty_ = true;
}

void FactorGraph::free_player(PlayerId player) {
  free_player_states(player);
  for (int k = 0; k < layout_.horizon(); ++k) set_free(layout_.control(player, k), true);
}

void FactorGraph::free_player_states(PlayerId player) {
  for (int k = 1; k <= layout_.horizon(); ++k) set_free(layout_.state(player, k), true);
}

void FactorGraph::free_landmarks() {
  for (int a = 0; a < layout_.num_landmarks(); ++a) set_free(layout_.landmark(a), true);
}

bool FactorGraph::is_active(const Factor& factor) const {
  for (BlockId b : factor.blocks) {
    if (is_free(b)) return true;
  }
  return false;
}

void FactorGraph::refresh_offsets() const {
  if (!offsets_dirty_) return;
  free_offsets_.assign(free_.size(), -1);
  int offset = 0;
  for (int b = 0; b < layout_.num_blocks(); ++b) {
    if (free_[static_cast<std::size_t>(b)]) {
      free_offsets_[static_cast<std::size_t>(b)] = offset;
      offset += layout_.dim({b});
    }
  }
  free_dim_ = offset;
  offsets_dirty_ = false;
}

const std::vector<int>& FactorGraph::free_offsets() const {
  refresh_offsets();
  return free_offsets_;
}

int FactorGraph::free_dim() const {
  refresh_offsets();
  return free_dim_;
}

int FactorGraph::residual_dim() const {
  int rows = 0;
  for (const Factor& f : factors_) rows += f.residual_dim();
  return rows;
}

std::vector<BlockId> FactorGraph::free_blocks() const {
  std::vector<BlockId> out;
  for (int b = 0; b < layout_.num_blocks(); ++b) {
    if (free_[static_cast<std::size_t>(b)]) out.push_back({b});
  }
  return out;
}

Linearization residual_and_jacobian(const FactorGraph& graph, const Eigen::VectorXd& v) {
  const VariableLayout& layout = graph.layout();
  if (v.size() != layout.total_dim()) throw std::invalid_argument("variable vector does not match layout");
  const std::vector<int>& cols = graph.free_offsets();

  Linearization lin;
  lin.residual.resize(graph.residual_dim());
  lin.row_offsets.reserve(graph.factors().size());
  std::vector<Eigen::Triplet<double>> triplets;
  int row = 0;
  for (const Factor& f : graph.factors()) {
    lin.row_offsets.push_back(row);
    const Eigen::MatrixXd& W = f.noise.sqrt_information();
    const int m = f.residual_dim();
    if (!graph.is_active(f)) {
      lin.residual.segment(row, m) = W * evaluate_residual(f, layout, v);
      row += m;
      continue;
    }
    const FactorLinearization fl = linearize(f, layout, v);
    lin.residual.segment(row, m) = W * fl.residual;
    for (std::size_t b = 0; b < f.blocks.size(); ++b) {
      const int col = cols[static_cast<std::size_t>(f.blocks[b].index)];
      if (col < 0) continue;
      const Eigen::MatrixXd Jw = W * fl.jacobians[b];
      for (int r = 0; r < Jw.rows(); ++r) {
        for (int c = 0; c < Jw.cols(); ++c) {
          if (Jw(r, c) != 0.0) triplets.emplace_back(row + r, col + c, Jw(r, c));
        }
      }
    }
    row += m;
  }
  lin.jacobian.resize(row, graph.free_dim());
  lin.jacobian.setFromTriplets(triplets.begin(), triplets.end());
  return lin;
}

double evaluate_cost(const FactorGraph& graph, const Eigen::VectorXd& v) {
  if (v.size() != graph.layout().total_dim()) throw std::invalid_argument("variable vector does not match layout");
  double cost = 0.0;
  for (const Factor& f : graph.factors()) cost += factor_cost(f, graph.layout(), v);
  return cost;
}

Eigen::VectorXd apply_increment(const FactorGraph& graph, const Eigen::VectorXd& v, const Eigen::VectorXd& delta) {
  const VariableLayout& layout = graph.layout();
  const std::vector<int>& cols = graph.free_offsets();
  Eigen::VectorXd out = v;
  for (int b = 0; b < layout.num_blocks(); ++b) {
    const int col = cols[static_cast<std::size_t>(b)];
    if (col < 0) continue;
    const BlockInfo& info = layout.info({b});
    out.segment(info.offset, info.dim) += delta.segment(col, info.dim);
    if (info.kind == BlockKind::state) out[info.offset + 2] = wrap_angle(out[info.offset + 2]);
  }
  return out;
}

Eigen::VectorXd extract_free(const FactorGraph& graph, const Eigen::VectorXd& v) {
  const VariableLayout& layout = graph.layout();
  const std::vector<int>& cols = graph.free_offsets();
  Eigen::VectorXd out(graph.free_dim());
  for (int b = 0; b < layout.num_blocks(); ++b) {
    const int col = cols[static_cast<std::size_t>(b)];
    if (col < 0) continue;
    const BlockInfo& info = layout.info({b});
    out.segment(col, info.dim) = v.segment(info.offset, info.dim);
  }
  return out;
}

}  // namespace gtpslam::graph
