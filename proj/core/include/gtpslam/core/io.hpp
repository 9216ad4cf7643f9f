#pragma once

#include "gtpslam/core/scenario.hpp"
#include "gtpslam/core/types.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace gtpslam {

nlohmann::json to_json(const Trajectory& trajectory);
Trajectory trajectory_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MeasurementSet& meas);
MeasurementSet measurements_from_json(const nlohmann::json& j);

nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace gtpslam
