#include "gtpslam/core/layout.hpp"

#include "gtpslam/core/angle.hpp"

#include <stdexcept>
#include <string>

namespace gtpslam {

VariableLayout::VariableLayout(int num_players, int horizon, int num_landmarks)
    : num_players_(num_players), horizon_(horizon), num_landmarks_(num_landmarks) {
  if (num_players < 1 || horizon < 1 || num_landmarks < 0) {
    throw std::invalid_argument("VariableLayout: need N >= 1, K >= 1, N_l >= 0");
  }
  blocks_.reserve(static_cast<std::size_t>(num_players * (2 * horizon + 1) + num_landmarks));
  int offset = 0;
  for (PlayerId i = 0; i < num_players; ++i) {
    for (int k = 0; k <= horizon; ++k) {
      blocks_.push_back({BlockKind::state, i, k, offset, kStateDim});
      offset += kStateDim;
      if (k < horizon) {
        blocks_.push_back({BlockKind::control, i, k, offset, kControlDim});
        offset += kControlDim;
      }
    }
  }
  for (int a = 0; a < num_landmarks; ++a) {
    blocks_.push_back({BlockKind::landmark, -1, a, offset, kLandmarkDim});
    offset += kLandmarkDim;
  }
  total_dim_ = offset;
}

BlockId VariableLayout::state(PlayerId player, int stage) const {
  if (player < 0 || player >= num_players_ || stage < 0 || stage > horizon_) {
    throw std::out_of_range("state block (" + std::to_string(player) + ", " + std::to_string(stage) +
                            ") outside layout");
  }
  return {player * (2 * horizon_ + 1) + 2 * stage};
}

BlockId VariableLayout::control(PlayerId player, int stage) const {
  if (player < 0 || player >= num_players_ || stage < 0 || stage >= horizon_) {
    throw std::out_of_range("control block (" + std::to_string(player) + ", " + std::to_string(stage) +
                            ") outside layout");
  }
  return {player * (2 * horizon_ + 1) + 2 * stage + 1};
}

BlockId VariableLayout::landmark(int index) const {
  if (index < 0 || index >= num_landmarks_) {
    throw std::out_of_range("landmark block " + std::to_string(index) + " outside layout");
  }
  return {num_players_ * (2 * horizon_ + 1) + index};
}

State get_state(const VariableLayout& layout, const Eigen::VectorXd& v, PlayerId player, int stage) {
  const int o = layout.offset(layout.state(player, stage));
  return {v[o], v[o + 1], v[o + 2]};
}

Control get_control(const VariableLayout& layout, const Eigen::VectorXd& v, PlayerId player, int stage) {
  return {v[layout.offset(layout.control(player, stage))]};
}

Eigen::Vector2d get_landmark(const VariableLayout& layout, const Eigen::VectorXd& v, int index) {
  return v.segment<2>(layout.offset(layout.landmark(index)));
}

void set_state(const VariableLayout& layout, Eigen::VectorXd& v, PlayerId player, int stage, const State& x) {
  v.segment<3>(layout.offset(layout.state(player, stage))) = x.vector();
}

void set_control(const VariableLayout& layout, Eigen::VectorXd& v, PlayerId player, int stage, const Control& u) {
  v[layout.offset(layout.control(player, stage))] = u.omega;
}

void set_landmark(const VariableLayout& layout, Eigen::VectorXd& v, int index, const Eigen::Vector2d& l) {
  v.segment<2>(layout.offset(layout.landmark(index))) = l;
}

Eigen::VectorXd pack(const VariableLayout& layout, const std::vector<Trajectory>& trajectories,
                     const std::vector<Eigen::Vector2d>& landmarks) {
  if (static_cast<int>(trajectories.size()) != layout.num_players() ||
      static_cast<int>(landmarks.size()) != layout.num_landmarks()) {
    throw std::invalid_argument("pack: trajectory or landmark count does not match layout");
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(layout.total_dim());
  for (PlayerId i = 0; i < layout.num_players(); ++i) {
    const Trajectory& t = trajectories[static_cast<std::size_t>(i)];
    if (static_cast<int>(t.states.size()) != layout.horizon() + 1 ||
        static_cast<int>(t.controls.size()) != layout.horizon()) {
      throw std::invalid_argument("pack: trajectory of player " + std::to_string(i) + " has wrong length");
    }
    for (int k = 0; k <= layout.horizon(); ++k) set_state(layout, v, i, k, t.states[static_cast<std::size_t>(k)]);
    for (int k = 0; k < layout.horizon(); ++k) set_control(layout, v, i, k, t.controls[static_cast<std::size_t>(k)]);
  }
  for (int a = 0; a < layout.num_landmarks(); ++a) set_landmark(layout, v, a, landmarks[static_cast<std::size_t>(a)]);
  return v;
}

std::vector<Trajectory> unpack_trajectories(const VariableLayout& layout, const Eigen::VectorXd& v) {
  std::vector<Trajectory> out(static_cast<std::size_t>(layout.num_players()));
  for (PlayerId i = 0; i < layout.num_players(); ++i) {
    Trajectory& t = out[static_cast<std::size_t>(i)];
    t.player_id = i;
    for (int k = 0; k <= layout.horizon(); ++k) t.states.push_back(get_state(layout, v, i, k));
    for (int k = 0; k < layout.horizon(); ++k) t.controls.push_back(get_control(layout, v, i, k));
  }
  return out;
}

std::vector<Eigen::Vector2d> unpack_landmarks(const VariableLayout& layout, const Eigen::VectorXd& v) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(static_cast<std::size_t>(layout.num_landmarks()));
  for (int a = 0; a < layout.num_landmarks(); ++a) out.push_back(get_landmark(layout, v, a));
  return out;
}

void wrap_headings(const VariableLayout& layout, Eigen::VectorXd& v) {
  for (PlayerId i = 0; i < layout.num_players(); ++i) {
    for (int k = 0; k <= layout.horizon(); ++k) {
      double& theta = v[layout.offset(layout.state(i, k)) + 2];
      theta = wrap_angle(theta);
    }
  }
}

}  // namespace gtpslam
