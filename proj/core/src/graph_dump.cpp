#include "gtpslam/graph/graph_dump.hpp"

#include "gtpslam/core/io.hpp"

namespace gtpslam::graph {

namespace {

const char* kind_name(BlockKind kind) {
  switch (kind) {
    case BlockKind::state: return "state";
    case BlockKind::control: return "control";
    case BlockKind::landmark: return "landmark";
  }
  return "unknown";
}

}  // namespace

nlohmann::json dump_graph(const FactorGraph& graph, const Eigen::VectorXd& v) {
  const VariableLayout& layout = graph.layout();
  nlohmann::json blocks = nlohmann::json::array();
  for (int b = 0; b < layout.num_blocks(); ++b) {
    const BlockInfo& info = layout.info({b});
    std::vector<double> value(v.data() + info.offset, v.data() + info.offset + info.dim);
    blocks.push_back({{"id", b},
                      {"kind", kind_name(info.kind)},
                      {"player", info.player},
                      {"stage", info.stage},
                      {"free", graph.is_free({b})},
                      {"value", value}});
  }
  nlohmann::json factors = nlohmann::json::array();
  double total = 0.0;
  for (const Factor& f : graph.factors()) {
    nlohmann::json ids = nlohmann::json::array();
    for (BlockId b : f.blocks) ids.push_back(b.index);
    const double cost = factor_cost(f, layout, v);
    total += cost;
    factors.push_back({{"kind", to_string(f.kind)}, {"blocks", ids}, {"active", graph.is_active(f)}, {"cost", cost}});
  }
  return {{"num_players", layout.num_players()},
          {"horizon", layout.horizon()},
          {"num_landmarks", layout.num_landmarks()},
          {"total_cost", total},
          {"blocks", blocks},
          {"factors", factors}};
}

void write_graph_dump(const FactorGraph& graph, const Eigen::VectorXd& v, const std::filesystem::path& path) {
  write_json_file(dump_graph(graph, v), path);
}

}  // namespace gtpslam::graph
