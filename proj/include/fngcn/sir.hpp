#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "fngcn/graph.hpp"

namespace fngcn {

struct SirConfig {
    int runs = 1000;
    /// Infection rate multiplier on the epidemic threshold.
    double xi = 2.0;
    double gamma = 1.0;
    std::uint64_t seed = 1;
    /// Bypasses xi·β_c when set (test hook and CLI `--beta`).
    std::optional<double> beta_override;
    unsigned threads = 1;
};

/// Mean-field epidemic threshold ⟨d⟩ / (⟨d²⟩ − ⟨d⟩).
double critical_beta(const DegreeStats& stats);

/// Counter-based uniform in [0,1) keyed by the given words; identical keys
/// give identical draws regardless of evaluation order.
double keyed_uniform(std::uint64_t stream, std::uint64_t a, std::uint64_t b, std::uint64_t c);

/// Key of the random stream for one (node, run) simulation.
std::uint64_t sir_stream(std::uint64_t seed, NodeId node, int run);

/// One discrete-time synchronous SIR cascade from `seed_node`; returns the
/// number of nodes ever infected (|R| + |I| at termination).
///
/// Each step every infected node tries each currently susceptible neighbor
/// once with probability beta, then every node that was infected at the
/// start of the step recovers with probability gamma. Draws are keyed by
/// (stream, node, neighbor, infectious age), so with gamma = 1 each edge gets
/// one fixed draw per run and the outcome is monotone in beta.
int simulate_once(const Graph& g, NodeId seed_node, double beta, double gamma, std::uint64_t stream);

struct InfluenceScores {
    Eigen::VectorXd ic;
    double beta_c = 0.0;
    double beta = 0.0;
};

/// IC(u) = Σ_runs count / (N · runs).
InfluenceScores influence_scores(const Graph& g, const SirConfig& cfg);

enum class NegativeSampling {
    Ratio,      ///< |negatives| = neg_ratio · |positives|
    TenPercent, ///< |negatives| = round(0.1 · non-influential count)
};

struct DatasetConfig {
    double top_fraction = 0.05;
    double neg_ratio = 2.0;
    double split = 0.7;
    std::uint64_t seed = 1;
    NegativeSampling sampling = NegativeSampling::Ratio;
};

struct LabeledDataset {
    std::vector<NodeId> positives, negatives;
    std::vector<NodeId> train, test;
    /// 1 positive, 0 negative, -1 unlabeled.
    Eigen::VectorXi labels;

    std::uint64_t hash() const;
};

LabeledDataset build_dataset(const InfluenceScores& scores, const DatasetConfig& cfg = {});

}  // namespace fngcn
