#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fngcn/centrality.hpp"
#include "fngcn/feature_selector.hpp"
#include "fngcn/gcn.hpp"
#include "fngcn/metrics.hpp"
#include "fngcn/serialize.hpp"
#include "fngcn/sir.hpp"

namespace fngcn {

enum class FeatureMode {
    FnSelected,   ///< feature network over the local metrics, one per group
    AllLocal,
    AllGlobal,
    All,
    InfGcn4,      ///< Degree, Betweenness, Closeness, LCC
    Explicit,
    LeaveOneOut,  ///< fn-selected minus `leave_out`
};

std::string_view feature_mode_name(FeatureMode m);
FeatureMode parse_feature_mode(std::string_view name);

std::vector<Metric> infgcn4_metrics();

struct ExperimentConfig {
    std::filesystem::path graph_path;
    FeatureMode mode = FeatureMode::FnSelected;
    std::vector<Metric> explicit_metrics;
    std::optional<Metric> leave_out;
    double delta = kDefaultDelta;
    ModelConfig model;
    SirConfig sir;
    DatasetConfig dataset;
    RankTies rank_ties = RankTies::NodeId;
    VolumeMeasure conductance_volume = VolumeMeasure::DegreeSum;
    std::filesystem::path out_dir = "out";
    unsigned threads = 1;
    /// Reuse SIR scores stored under out_dir/sir_cache.
    bool use_sir_cache = true;

    void validate() const;
};

/// Sets one `key = value` field. `variant` resets the model to that
/// variant's defaults, so it should come first.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);
/// Every field as ordered key/value pairs; feeding them back through
/// apply_setting reproduces the config.
std::vector<std::pair<std::string, std::string>> settings(const ExperimentConfig& cfg);

/// `key = value` lines; `#` starts a comment; `[section]` headers are ignored.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_text(const ExperimentConfig& cfg);
Json config_json(const ExperimentConfig& cfg);

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct RunRecord {
    std::string label;
    ExperimentConfig config;
    std::size_t num_nodes = 0, num_edges = 0;
    std::uint64_t graph_hash = 0;
    std::optional<FeatureNetwork> feature_network;
    std::optional<SelectionResult> selection;
    std::vector<std::string> features;
    std::uint64_t dataset_hash = 0;
    std::uint64_t scores_hash = 0;
    std::size_t positives = 0, negatives = 0, train_size = 0, test_size = 0;
    double beta_c = 0.0, beta = 0.0;
    TrainTrace trace;
    MetricsReport test_metrics;
    MetricsReport train_metrics;
    std::vector<StageTiming> stages;
    std::map<std::string, double> centrality_seconds;

    Json to_json() const;
};

/// Shared state for one graph: P̃, cached centralities, SIR scores and the
/// labeled dataset. Every run through the same context sees the same labels.
class PipelineContext {
public:
    /// Loads cfg.graph_path.
    explicit PipelineContext(ExperimentConfig cfg);
    PipelineContext(Graph g, ExperimentConfig cfg);

    const ExperimentConfig& config() const { return cfg_; }
    const Graph& graph() const { return graph_; }
    const SparseMatrix<double>& transition();

    /// Table over `metrics` (kAllMetrics order); each metric is computed once.
    CentralityTable centralities(const std::vector<Metric>& metrics);
    const InfluenceScores& scores();
    std::uint64_t scores_hash();
    const LabeledDataset& dataset();

    /// Stage durations accumulated by the lazy computations above.
    const std::vector<StageTiming>& shared_stages() const { return shared_stages_; }

    /// Runs selection, normalization, training and evaluation with the
    /// feature mode and model of `cfg`; labels come from this context.
    /// Artifacts go to `artifact_dir` unless it is empty.
    RunRecord run(const ExperimentConfig& cfg, const std::string& label = "run",
                  const std::filesystem::path& artifact_dir = {});

    /// Metric set chosen by the feature network over the local metrics.
    struct Selection {
        FeatureNetwork network;
        SelectionResult result;
        std::vector<Metric> metrics;
    };
    Selection select(double delta);

private:
    ExperimentConfig cfg_;
    Graph graph_;
    std::optional<SparseMatrix<double>> transition_;
    std::map<Metric, std::pair<Eigen::VectorXd, double>> columns_;
    std::optional<InfluenceScores> scores_;
    std::optional<std::uint64_t> scores_hash_;
    std::optional<LabeledDataset> dataset_;
    std::vector<StageTiming> shared_stages_;
};

/// load → centralities → selection → normalization → labels → dataset →
/// train → evaluate; writes run_record.json and intermediate artifacts under
/// cfg.out_dir.
RunRecord run_pipeline(const ExperimentConfig& cfg);

inline const std::vector<int> kDefaultDepths = {3, 8, 16, 24, 32, 64};
inline const std::vector<FeatureMode> kDefaultAblationModes = {
    FeatureMode::AllLocal, FeatureMode::AllGlobal, FeatureMode::All, FeatureMode::FnSelected, FeatureMode::InfGcn4};

/// One deep-variant run per depth on shared labels; writes depth.csv.
std::vector<RunRecord> ablate_depth(PipelineContext& ctx, const std::vector<int>& depths = kDefaultDepths);
/// One run per feature mode on shared labels; writes features.csv.
std::vector<RunRecord> ablate_features(PipelineContext& ctx,
                                       const std::vector<FeatureMode>& modes = kDefaultAblationModes);

struct LeaveOneOutRow {
    std::string metric;
    double delta_accuracy = 0.0, delta_f1 = 0.0, delta_auc = 0.0;
};
struct LeaveOneOutResult {
    RunRecord baseline;
    std::vector<RunRecord> records;  // one per chosen metric, in chosen order
    /// Largest degradation first: Δaccuracy desc, then Δf1, Δauc, name.
    std::vector<LeaveOneOutRow> summary;
};
/// Baseline fn-selected run plus one run per chosen metric with that metric
/// removed; writes leave_one_out.csv.
LeaveOneOutResult ablate_leave_one_out(PipelineContext& ctx);

struct TimingRow {
    std::string network;
    double all = 0.0, global = 0.0, local = 0.0;
};
/// Single-threaded wall-clock seconds for each metric group.
TimingRow timing_benchmark(const Graph& g, const std::string& network,
                           VolumeMeasure volume = VolumeMeasure::DegreeSum);
std::string timing_csv(const std::vector<TimingRow>& rows);

std::string ablation_csv(const std::vector<RunRecord>& records, const std::string& key_column);

}  // namespace fngcn
