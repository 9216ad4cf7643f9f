#include "gtpslam/core/io.hpp"

#include "gtpslam/core/errors.hpp"

#include <fstream>
#include <set>

namespace gtpslam {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ConfigError("field '" + path + "': " + what);
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) field_error(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) field_error(path, "expected an integer");
  return j.get<int>();
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) field_error(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) field_error(path.empty() ? key : path + "." + key, "unknown key");
  }
}

/// Matrices are written as a list of rows; a flat list is read as a diagonal.
template <int Dim>
Eigen::Matrix<double, Dim, Dim> read_matrix(const json& j, const std::string& path) {
  Eigen::Matrix<double, Dim, Dim> m = Eigen::Matrix<double, Dim, Dim>::Zero();
  if (!j.is_array() || static_cast<int>(j.size()) != Dim) {
    field_error(path, "expected " + std::to_string(Dim) + " rows or a " + std::to_string(Dim) + "-entry diagonal");
  }
  if (j[0].is_number()) {
    for (int r = 0; r < Dim; ++r) m(r, r) = as_double(j[static_cast<std::size_t>(r)], path);
    return m;
  }
  for (int r = 0; r < Dim; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != Dim) field_error(path, "malformed matrix row");
    for (int c = 0; c < Dim; ++c) m(r, c) = as_double(row[static_cast<std::size_t>(c)], path);
  }
  return m;
}

template <int Dim>
json write_matrix(const Eigen::Matrix<double, Dim, Dim>& m) {
  json rows = json::array();
  for (int r = 0; r < Dim; ++r) {
    json row = json::array();
    for (int c = 0; c < Dim; ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

Eigen::Vector2d read_vec2(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) field_error(path, "expected a 2-vector");
  return {as_double(j[0], path), as_double(j[1], path)};
}

State read_state(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) field_error(path, "expected [px, py, theta]");
  return {as_double(j[0], path), as_double(j[1], path), as_double(j[2], path)};
}

std::string integrator_name(Integrator i) { return i == Integrator::euler ? "euler" : "exact_arc"; }
std::string mode_name(InterplayerMode m) { return m == InterplayerMode::both ? "both" : "ego_only"; }

}  // namespace

json to_json(const Trajectory& t) {
  json states = json::array();
  for (const State& x : t.states) states.push_back({x.px, x.py, x.theta});
  json controls = json::array();
  for (const Control& u : t.controls) controls.push_back(u.omega);
  return {{"player_id", t.player_id}, {"states", states}, {"controls", controls}};
}

Trajectory trajectory_from_json(const json& j) {
  check_keys(j, "trajectory", {"player_id", "states", "controls"});
  Trajectory t;
  t.player_id = as_int(j.at("player_id"), "trajectory.player_id");
  for (const json& x : j.at("states")) t.states.push_back(read_state(x, "trajectory.states"));
  for (const json& u : j.at("controls")) t.controls.push_back({as_double(u, "trajectory.controls")});
  if (t.states.size() != t.controls.size() + 1) field_error("trajectory", "needs exactly one more state than controls");
  return t;
}

json to_json(const MeasurementSet& m) {
  json lm = json::array();
  for (const auto& z : m.landmark_meas) lm.push_back({{"stage", z.stage}, {"landmark", z.landmark}, {"z", {z.z.x(), z.z.y()}}});
  json ip = json::array();
  for (const auto& z : m.interplayer_meas) {
    ip.push_back({{"stage", z.stage}, {"observer", z.observer}, {"target", z.target}, {"z", {z.z.x(), z.z.y()}}});
  }
  return {{"sigma_h", write_matrix<2>(m.sigma_h)},
          {"sigma_h_bar", write_matrix<2>(m.sigma_h_bar)},
          {"landmark_meas", lm},
          {"interplayer_meas", ip}};
}

MeasurementSet measurements_from_json(const json& j) {
  check_keys(j, "", {"sigma_h", "sigma_h_bar", "landmark_meas", "interplayer_meas"});
  MeasurementSet m;
  m.sigma_h = read_matrix<2>(j.at("sigma_h"), "sigma_h");
  m.sigma_h_bar = read_matrix<2>(j.at("sigma_h_bar"), "sigma_h_bar");
  for (const json& e : j.at("landmark_meas")) {
    m.landmark_meas.push_back({as_int(e.at("stage"), "landmark_meas.stage"), as_int(e.at("landmark"), "landmark_meas.landmark"),
                               read_vec2(e.at("z"), "landmark_meas.z")});
  }
  for (const json& e : j.at("interplayer_meas")) {
    m.interplayer_meas.push_back({as_int(e.at("stage"), "interplayer_meas.stage"),
                                  as_int(e.at("observer"), "interplayer_meas.observer"),
                                  as_int(e.at("target"), "interplayer_meas.target"),
                                  read_vec2(e.at("z"), "interplayer_meas.z")});
  }
  return m;
}

json scenario_to_json(const Scenario& s) {
  json landmarks = json::array();
  for (const auto& l : s.landmarks_truth) landmarks.push_back({l.x(), l.y()});
  json initial = json::array();
  for (const State& x : s.initial_states) initial.push_back({x.px, x.py, x.theta});
  const CovarianceSet& c = s.covariances;
  json out = {
      {"name", s.name},
      {"num_players", s.num_players},
      {"horizon", s.horizon},
      {"dt", s.dt},
      {"speed", s.speed},
      {"landmarks", landmarks},
      {"lane_targets", s.lane_targets},
      {"initial_states", initial},
      {"covariances",
       {{"sigma_f", write_matrix<3>(c.sigma_f)},
        {"sigma_g", write_matrix<2>(c.sigma_g)},
        {"sigma_g_hat", c.sigma_g_hat},
        {"sigma_h", write_matrix<2>(c.sigma_h)},
        {"sigma_h_bar", write_matrix<2>(c.sigma_h_bar)},
        {"sigma_b", c.sigma_b}}},
      {"ibr", {{"max_iterations", s.ibr.max_iterations}, {"tolerance", s.ibr.tolerance}, {"order", s.ibr.order}}},
      {"solver",
       {{"max_iterations", s.solver.max_iterations},
        {"ftol", s.solver.ftol},
        {"xtol", s.solver.xtol},
        {"lambda0", s.solver.lambda0}}},
      {"noise_std", s.noise_std},
      {"perturbation",
       {{"longitudinal", s.perturbation.longitudinal},
        {"lateral", s.perturbation.lateral},
        {"heading", s.perturbation.heading}}},
      {"integrator", integrator_name(s.integrator)},
      {"interplayer_mode", mode_name(s.interplayer_mode)},
  };
  out["max_sensor_range"] = std::isfinite(s.max_sensor_range) ? json(s.max_sensor_range) : json(nullptr);
  return out;
}

Scenario scenario_from_json(const json& j) {
  check_keys(j, "", {"$schema", "name", "num_players", "horizon", "dt", "speed", "landmarks", "lane_targets",
                     "initial_states", "covariances", "ibr", "solver", "noise_std", "perturbation", "integrator",
                     "interplayer_mode", "max_sensor_range"});
  for (const char* key : {"num_players", "horizon", "lane_targets", "initial_states"}) {
    if (!j.contains(key)) field_error(key, "required");
  }
  Scenario s;
  if (j.contains("name")) {
    if (!j["name"].is_string()) field_error("name", "expected a string");
    s.name = j["name"].get<std::string>();
  }
  s.num_players = as_int(j["num_players"], "num_players");
  s.horizon = as_int(j["horizon"], "horizon");
  if (j.contains("dt")) s.dt = as_double(j["dt"], "dt");
  if (j.contains("speed")) s.speed = as_double(j["speed"], "speed");
  if (j.contains("landmarks")) {
    if (!j["landmarks"].is_array()) field_error("landmarks", "expected a list");
    for (const json& l : j["landmarks"]) s.landmarks_truth.push_back(read_vec2(l, "landmarks"));
  }
  if (!j["lane_targets"].is_array()) field_error("lane_targets", "expected a list");
  for (const json& t : j["lane_targets"]) s.lane_targets.push_back(as_double(t, "lane_targets"));
  if (!j["initial_states"].is_array()) field_error("initial_states", "expected a list");
  for (const json& x : j["initial_states"]) s.initial_states.push_back(read_state(x, "initial_states"));

  if (j.contains("covariances")) {
    const json& c = j["covariances"];
    check_keys(c, "covariances", {"sigma_f", "sigma_g", "sigma_g_hat", "sigma_h", "sigma_h_bar", "sigma_b"});
    CovarianceSet& cov = s.covariances;
    if (c.contains("sigma_f")) cov.sigma_f = read_matrix<3>(c["sigma_f"], "covariances.sigma_f");
    if (c.contains("sigma_g")) cov.sigma_g = read_matrix<2>(c["sigma_g"], "covariances.sigma_g");
    if (c.contains("sigma_g_hat")) cov.sigma_g_hat = as_double(c["sigma_g_hat"], "covariances.sigma_g_hat");
    if (c.contains("sigma_h")) cov.sigma_h = read_matrix<2>(c["sigma_h"], "covariances.sigma_h");
    if (c.contains("sigma_h_bar")) cov.sigma_h_bar = read_matrix<2>(c["sigma_h_bar"], "covariances.sigma_h_bar");
    if (c.contains("sigma_b")) cov.sigma_b = as_double(c["sigma_b"], "covariances.sigma_b");
  }
  if (j.contains("ibr")) {
    const json& b = j["ibr"];
    check_keys(b, "ibr", {"max_iterations", "tolerance", "order"});
    if (b.contains("max_iterations")) s.ibr.max_iterations = as_int(b["max_iterations"], "ibr.max_iterations");
    if (b.contains("tolerance")) s.ibr.tolerance = as_double(b["tolerance"], "ibr.tolerance");
    if (b.contains("order")) {
      if (!b["order"].is_array()) field_error("ibr.order", "expected a list");
      for (const json& p : b["order"]) s.ibr.order.push_back(as_int(p, "ibr.order"));
    }
  }
  if (j.contains("solver")) {
    const json& o = j["solver"];
    check_keys(o, "solver", {"max_iterations", "ftol", "xtol", "lambda0"});
    if (o.contains("max_iterations")) s.solver.max_iterations = as_int(o["max_iterations"], "solver.max_iterations");
    if (o.contains("ftol")) s.solver.ftol = as_double(o["ftol"], "solver.ftol");
    if (o.contains("xtol")) s.solver.xtol = as_double(o["xtol"], "solver.xtol");
    if (o.contains("lambda0")) s.solver.lambda0 = as_double(o["lambda0"], "solver.lambda0");
  }
  if (j.contains("noise_std")) s.noise_std = as_double(j["noise_std"], "noise_std");
  if (j.contains("perturbation")) {
    const json& p = j["perturbation"];
    check_keys(p, "perturbation", {"longitudinal", "lateral", "heading"});
    if (p.contains("longitudinal")) s.perturbation.longitudinal = as_double(p["longitudinal"], "perturbation.longitudinal");
    if (p.contains("lateral")) s.perturbation.lateral = as_double(p["lateral"], "perturbation.lateral");
    if (p.contains("heading")) s.perturbation.heading = as_double(p["heading"], "perturbation.heading");
  }
  if (j.contains("integrator")) {
    const json& v = j["integrator"];
    if (v == "euler") {
      s.integrator = Integrator::euler;
    } else if (v == "exact_arc") {
      s.integrator = Integrator::exact_arc;
    } else {
      field_error("integrator", "expected \"euler\" or \"exact_arc\"");
    }
  }
  if (j.contains("interplayer_mode")) {
    const json& v = j["interplayer_mode"];
    if (v == "both") {
      s.interplayer_mode = InterplayerMode::both;
    } else if (v == "ego_only") {
      s.interplayer_mode = InterplayerMode::ego_only;
    } else {
      field_error("interplayer_mode", "expected \"both\" or \"ego_only\"");
    }
  }
  if (j.contains("max_sensor_range") && !j["max_sensor_range"].is_null()) {
    s.max_sensor_range = as_double(j["max_sensor_range"], "max_sensor_range");
  }
  return s;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": parse error: " + e.what());
  }
}

void write_json_file(const json& j, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace gtpslam
