#pragma once

#include "gtpslam/harness/sweep.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace gtpslam::harness {

/// Columns: sigma,seed,trial,method,vehicle_rmse,landmark_rmse,status,ibr_rounds.
/// Wall time is kept out so the file is a pure function of the inputs.
std::string trials_csv(const std::vector<TrialResult>& results);

/// Columns: sigma,seed,trial,method,wall_time_s.
std::string timing_csv(const std::vector<TrialResult>& results);

/// Columns: sigma,method,metric,median,q1,q3,failures. Missing statistics
/// are empty fields.
std::string summary_csv(const std::vector<SummaryRow>& rows);

/// Writes trials.csv, timing.csv, summary.csv (when there are results) and
/// trace/level<L>_trial<T>.csv for every GTP-SLAM result into `dir`.
void write_sweep_outputs(const SweepOutput& output, const std::vector<double>& levels,
                         const std::filesystem::path& dir);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace gtpslam::harness
