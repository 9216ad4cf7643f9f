#include "gtpslam/core/scenario.hpp"

#include "gtpslam/core/angle.hpp"
#include "gtpslam/core/errors.hpp"
#include "gtpslam/core/io.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <tuple>
#include <sstream>

namespace gtpslam {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid scenario: " + what);
}

template <typename Matrix>
void require_spd(const Matrix& m, const std::string& name) {
  require(m.allFinite(), name + " must be finite");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  require((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, name + " must be symmetric");
  Eigen::LLT<Matrix> llt(m);
  require(llt.info() == Eigen::Success, name + " must be positive definite");
}

}  // namespace

std::vector<PlayerId> Scenario::update_order() const {
  if (!ibr.order.empty()) return ibr.order;
  std::vector<PlayerId> order(static_cast<std::size_t>(num_players));
  std::iota(order.begin(), order.end(), 0);
  return order;
}

void validate(const Scenario& s) {
  require(s.num_players >= 1, "num_players must be >= 1");
  require(s.horizon >= 1, "horizon must be >= 1");
  require(std::isfinite(s.dt) && s.dt > 0.0, "dt must be > 0");
  require(std::isfinite(s.speed) && s.speed > 0.0, "speed must be > 0");
  require(static_cast<int>(s.lane_targets.size()) == s.num_players,
          "lane_targets must have exactly num_players entries (got " + std::to_string(s.lane_targets.size()) + ")");
  require(static_cast<int>(s.initial_states.size()) == s.num_players,
          "initial_states must have exactly num_players entries (got " + std::to_string(s.initial_states.size()) +
              ")");
  for (double t : s.lane_targets) require(std::isfinite(t), "lane_targets must be finite");
  for (const State& x : s.initial_states) {
    require(std::isfinite(x.px) && std::isfinite(x.py) && std::isfinite(x.theta), "initial_states must be finite");
  }
  for (const auto& l : s.landmarks_truth) require(l.allFinite(), "landmarks must be finite");

  const CovarianceSet& c = s.covariances;
  require_spd(c.sigma_f, "covariances.sigma_f");
  require_spd(c.sigma_g, "covariances.sigma_g");
  require(std::isfinite(c.sigma_g_hat) && c.sigma_g_hat > 0.0, "covariances.sigma_g_hat must be > 0");
  require_spd(c.sigma_h, "covariances.sigma_h");
  require_spd(c.sigma_h_bar, "covariances.sigma_h_bar");
  require(std::isfinite(c.sigma_b) && c.sigma_b > 0.0, "covariances.sigma_b must be > 0");

  require(s.ibr.max_iterations >= 0, "ibr.max_iterations must be >= 0");
  require(s.ibr.tolerance >= 0.0, "ibr.tolerance must be >= 0");
  if (!s.ibr.order.empty()) {
    std::vector<PlayerId> sorted = s.ibr.order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<PlayerId> expected(static_cast<std::size_t>(s.num_players));
    std::iota(expected.begin(), expected.end(), 0);
    require(sorted == expected, "ibr.order must be a permutation of 0..num_players-1");
  }

  require(s.solver.max_iterations >= 0, "solver.max_iterations must be >= 0");
  require(s.solver.ftol >= 0.0 && s.solver.xtol >= 0.0, "solver tolerances must be >= 0");
  require(s.solver.lambda0 > 0.0, "solver.lambda0 must be > 0");

  require(std::isfinite(s.noise_std) && s.noise_std > 0.0, "noise_std must be > 0");
  require(s.perturbation.longitudinal >= 0.0 && s.perturbation.lateral >= 0.0 && s.perturbation.heading >= 0.0,
          "perturbation standard deviations must be >= 0");
  require(s.max_sensor_range > 0.0, "max_sensor_range must be > 0");
}

void validate(const MeasurementSet& meas, const Scenario& s) {
  auto fail = [](const std::string& what) { throw ConfigError("invalid measurement set: " + what); };
  auto check_cov = [&](const Eigen::Matrix2d& m, const std::string& name) {
    try {
      require_spd(m, name);
    } catch (const ConfigError& e) {
      fail(e.what());
    }
  };
  check_cov(meas.sigma_h, "sigma_h");
  check_cov(meas.sigma_h_bar, "sigma_h_bar");
  std::set<std::pair<int, int>> seen_landmark;
  for (const auto& z : meas.landmark_meas) {
    if (z.stage < 0 || z.stage >= s.horizon) fail("landmark measurement stage " + std::to_string(z.stage) + " outside [0, K)");
    if (z.landmark < 0 || z.landmark >= s.num_landmarks()) fail("unknown landmark " + std::to_string(z.landmark));
    if (!z.z.allFinite()) fail("non-finite landmark measurement");
    if (!(z.z[1] > -kPi && z.z[1] <= kPi)) fail("bearing outside (-pi, pi]");
    if (!seen_landmark.insert({z.stage, z.landmark}).second) fail("duplicate landmark measurement");
  }
  std::set<std::tuple<int, int, int>> seen_pair;
  for (const auto& z : meas.interplayer_meas) {
    if (z.stage < 0 || z.stage >= s.horizon) fail("inter-player measurement stage " + std::to_string(z.stage) + " outside [0, K)");
    if (z.observer < 0 || z.observer >= s.num_players || z.target < 0 || z.target >= s.num_players ||
        z.observer == z.target) {
      fail("inter-player measurement between invalid players");
    }
    if (std::min(z.observer, z.target) != kEgo) fail("inter-player measurements must involve the ego player");
    if (!z.z.allFinite()) fail("non-finite inter-player measurement");
    if (!seen_pair.insert({z.stage, z.observer, z.target}).second) fail("duplicate inter-player measurement");
  }
}

Scenario parse_scenario(std::string_view text, std::string_view source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ConfigError(std::string(source) + ":" + std::to_string(line) + ": parse error: " + e.what());
  }
  Scenario s;
  try {
    s = scenario_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.string());
}

std::string serialize_scenario(const Scenario& scenario) { return scenario_to_json(scenario).dump(2); }

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  write_json_file(scenario_to_json(scenario), path);
}

}  // namespace gtpslam
