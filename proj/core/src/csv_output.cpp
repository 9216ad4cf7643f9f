#include "gtpslam/harness/csv_output.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gtpslam::harness {

namespace {

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string trials_csv(const std::vector<TrialResult>& results) {
  std::ostringstream out;
  out << "sigma,seed,trial,method,vehicle_rmse,landmark_rmse,status,ibr_rounds\n";
  for (const TrialResult& r : results) {
    out << format_double(r.sigma) << ',' << r.seed << ',' << r.trial << ',' << to_string(r.method) << ','
        << optional_field(r.vehicle_rmse) << ',' << optional_field(r.landmark_rmse) << ',' << r.status << ','
        << r.ibr_rounds << '\n';
  }
  return out.str();
}

std::string timing_csv(const std::vector<TrialResult>& results) {
  std::ostringstream out;
  out << "sigma,seed,trial,method,wall_time_s\n";
  for (const TrialResult& r : results) {
    out << format_double(r.sigma) << ',' << r.seed << ',' << r.trial << ',' << to_string(r.method) << ','
        << format_double(r.wall_time_s) << '\n';
  }
  return out.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "sigma,method,metric,median,q1,q3,failures\n";
  for (const SummaryRow& r : rows) {
    out << format_double(r.sigma) << ',' << to_string(r.method) << ',' << r.metric << ',' << optional_field(r.median)
        << ',' << optional_field(r.q1) << ',' << optional_field(r.q3) << ',' << r.failures << '\n';
  }
  return out.str();
}

void write_sweep_outputs(const SweepOutput& output, const std::vector<double>& levels,
                         const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "trials.csv", trials_csv(output.results));
  write_file(dir / "timing.csv", timing_csv(output.results));
  if (!output.results.empty()) write_file(dir / "summary.csv", summary_csv(summarize(output.results)));
  for (std::size_t i = 0; i < output.results.size(); ++i) {
    const TrialResult& r = output.results[i];
    if (r.method != Method::gtpslam || output.traces[i].empty()) continue;
    const auto level = std::find(levels.begin(), levels.end(), r.sigma) - levels.begin();
    std::ostringstream trace;
    trace << "round,player,cost_before,cost_after,potential\n";
    for (const auto& u : output.traces[i]) {
      trace << u.round << ',' << u.player << ',' << format_double(u.cost_before) << ',' << format_double(u.cost_after)
            << ',' << format_double(u.potential) << '\n';
    }
    write_file(dir / "trace" / ("level" + std::to_string(level) + "_trial" + std::to_string(r.trial) + ".csv"),
               trace.str());
  }
}

}  // namespace gtpslam::harness
