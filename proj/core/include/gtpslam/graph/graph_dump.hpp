#pragma once

#include "gtpslam/graph/factor_graph.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace gtpslam::graph {

/// Structured snapshot of blocks, factors and per-factor costs at `v`, for
/// inspecting a graph by hand.
nlohmann::json dump_graph(const FactorGraph& graph, const Eigen::VectorXd& v);
void write_graph_dump(const FactorGraph& graph, const Eigen::VectorXd& v, const std::filesystem::path& path);

}  // namespace gtpslam::graph
