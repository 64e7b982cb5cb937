#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fngcn/centrality.hpp"
#include "fngcn/feature_selector.hpp"
#include "fngcn/gcn.hpp"
#include "fngcn/metrics.hpp"
#include "fngcn/sir.hpp"

namespace fngcn {

using Json = nlohmann::ordered_json;

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

/// `node,<metric...>` with original node labels.
std::string centrality_csv(const Graph& g, const CentralityTable& table);
Json centrality_timings_json(const CentralityTable& table);

/// `{delta, metrics, scc_matrix, edges, groups, chosen, fallback_used, trace}`.
Json selection_json(const FeatureNetwork& fn, const SelectionResult& sel);

/// `node,<feature...>`.
std::string feature_matrix_csv(const Graph& g, const FeatureMatrix& f);

/// `node,ic`, full round-trip precision.
std::string scores_csv(const Graph& g, const InfluenceScores& s);
/// Reads a scores file back; node labels must exist in g.
InfluenceScores parse_scores_csv(const Graph& g, const std::string& text);

Json dataset_json(const Graph& g, const LabeledDataset& d, const DatasetConfig& cfg);

Json metrics_json(const MetricsReport& m);

Json model_config_json(const ModelConfig& c);
ModelConfig model_config_from_json(const Json& j);

/// Versioned checkpoint: config, feature names, row-major tensors.
Json checkpoint_json(const ModelConfig& cfg, const ModelParameters& params, const std::vector<std::string>& features,
                     RankTies ties);
struct Checkpoint {
    ModelConfig config;
    ModelParameters params;
    std::vector<std::string> features;
    RankTies ties = RankTies::NodeId;
};
Checkpoint checkpoint_from_json(const Json& j);

Json trace_json(const TrainTrace& t);

std::string format_double(double x);

}  // namespace fngcn
