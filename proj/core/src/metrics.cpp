#include "gtpslam/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gtpslam::harness {

double vehicle_rmse(std::span<const Trajectory> estimate, std::span<const Trajectory> truth) {
  if (estimate.size() != truth.size() || truth.empty()) throw std::invalid_argument("vehicle_rmse: player count mismatch");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto& e = estimate[i].states;
    const auto& t = truth[i].states;
    if (e.size() != t.size()) throw std::invalid_argument("vehicle_rmse: stage count mismatch");
    for (std::size_t k = 0; k < t.size(); ++k) {
      sum += (e[k].position() - t[k].position()).squaredNorm();
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("vehicle_rmse: no states");
  return std::sqrt(sum / static_cast<double>(count));
}

double landmark_rmse(std::span<const Eigen::Vector2d> estimate, std::span<const Eigen::Vector2d> truth) {
  if (estimate.size() != truth.size()) throw std::invalid_argument("landmark_rmse: landmark count mismatch");
  if (truth.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t a = 0; a < truth.size(); ++a) sum += (estimate[a] - truth[a]).squaredNorm();
  return std::sqrt(sum / static_cast<double>(truth.size()));
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

}  // namespace gtpslam::harness
