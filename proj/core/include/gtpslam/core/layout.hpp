#pragma once

#include "gtpslam/core/types.hpp"

#include <Eigen/Core>

#include <vector>

namespace gtpslam {

enum class BlockKind { state, control, landmark };

/// Index of a variable block within a VariableLayout.
struct BlockId {
  int index = -1;

  bool valid() const { return index >= 0; }
  auto operator<=>(const BlockId&) const = default;
};

struct BlockInfo {
  BlockKind kind = BlockKind::state;
  /// Owning player, or -1 for landmarks.
  PlayerId player = -1;
  /// Stage for states [0, K] and controls [0, K-1]; landmark index otherwise.
  int stage = 0;
  int offset = 0;
  int dim = 0;
};

/// Maps (player, stage, kind) and landmark indices onto contiguous slices of
/// one flat vector. Per player the blocks interleave as x_0 u_0 x_1 ... x_K;
/// landmark blocks follow all players.
class VariableLayout {
 public:
  VariableLayout() = default;
  VariableLayout(int num_players, int horizon, int num_landmarks);

  int num_players() const { return num_players_; }
  int horizon() const { return horizon_; }
  int num_landmarks() const { return num_landmarks_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int total_dim() const { return total_dim_; }

  BlockId state(PlayerId player, int stage) const;
  BlockId control(PlayerId player, int stage) const;
  BlockId landmark(int index) const;

  const BlockInfo& info(BlockId id) const { return blocks_.at(id.index); }
  int offset(BlockId id) const { return info(id).offset; }
  int dim(BlockId id) const { return info(id).dim; }

  bool operator==(const VariableLayout& other) const {
    return num_players_ == other.num_players_ && horizon_ == other.horizon_ &&
           num_landmarks_ == other.num_landmarks_;
  }

 private:
  int num_players_ = 0;
  int horizon_ = 0;
  int num_landmarks_ = 0;
  int total_dim_ = 0;
  std::vector<BlockInfo> blocks_;
};

/// Typed accessors into a flat variable vector.
State get_state(const VariableLayout& layout, const Eigen::VectorXd& v, PlayerId player, int stage);
Control get_control(const VariableLayout& layout, const Eigen::VectorXd& v, PlayerId player, int stage);
Eigen::Vector2d get_landmark(const VariableLayout& layout, const Eigen::VectorXd& v, int index);

void set_state(const VariableLayout& layout, Eigen::VectorXd& v, PlayerId player, int stage, const State& x);
void set_control(const VariableLayout& layout, Eigen::VectorXd& v, PlayerId player, int stage, const Control& u);
void set_landmark(const VariableLayout& layout, Eigen::VectorXd& v, int index, const Eigen::Vector2d& l);

Eigen::VectorXd pack(const VariableLayout& layout, const std::vector<Trajectory>& trajectories,
                     const std::vector<Eigen::Vector2d>& landmarks);
std::vector<Trajectory> unpack_trajectories(const VariableLayout& layout, const Eigen::VectorXd& v);
std::vector<Eigen::Vector2d> unpack_landmarks(const VariableLayout& layout, const Eigen::VectorXd& v);

/// Re-wraps every heading component into (-pi, pi].
void wrap_headings(const VariableLayout& layout, Eigen::VectorXd& v);

}  // namespace gtpslam
