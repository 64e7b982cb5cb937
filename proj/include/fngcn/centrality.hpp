#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "fngcn/graph.hpp"

namespace fngcn {

/// Column order follows the metric listing (global first, then local).
enum class Metric {
    Closeness,
    Betweenness,
    PageRank,
    Eigenvector,
    Degree,
    ExtendedDegree,
    AccumulatedDegree,
    NodeMass,
    ConductanceOfEgonet,
    DensityOfEgonet,
    LCC,
    CoredCosine,
    CoredJaccard,
    CoredPearson,
    SPA,
};

inline constexpr std::size_t kMetricCount = 15;

inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::Closeness,    Metric::Betweenness,         Metric::PageRank,        Metric::Eigenvector,
    Metric::Degree,       Metric::ExtendedDegree,      Metric::AccumulatedDegree, Metric::NodeMass,
    Metric::ConductanceOfEgonet, Metric::DensityOfEgonet, Metric::LCC,          Metric::CoredCosine,
    Metric::CoredJaccard, Metric::CoredPearson,        Metric::SPA,
};

std::string_view metric_name(Metric m);
std::optional<Metric> parse_metric(std::string_view name);
bool is_local(Metric m);

std::vector<Metric> local_metrics();
std::vector<Metric> global_metrics();

/// How the egonet conductance denominator measures a node set.
enum class VolumeMeasure {
    DegreeSum,  ///< vol(S) = sum of degrees in S
    NodeCount,  ///< vol(S) = |S|
};

struct CentralityOptions {
    VolumeMeasure conductance_volume = VolumeMeasure::DegreeSum;
    double pagerank_damping = 0.85;
    double pagerank_tolerance = 1e-13;
    int pagerank_max_iterations = 1000;
    double eigenvector_tolerance = 1e-13;
    int eigenvector_max_iterations = 10000;
    /// 0 = hardware concurrency. Results do not depend on this.
    unsigned threads = 1;
};

/// n × m raw scores plus per-metric wall-clock seconds.
struct CentralityTable {
    std::vector<Metric> metrics;
    Eigen::MatrixXd values;
    std::vector<double> seconds;
    std::vector<std::string> warnings;

    Eigen::Index column_of(Metric m) const;
    Eigen::VectorXd column(Metric m) const { return values.col(column_of(m)); }
    std::size_t num_nodes() const { return static_cast<std::size_t>(values.rows()); }
};

/// One metric's per-node scores.
using Column = Eigen::VectorXd;

struct DegreeFamily {
    Column degree, extended, accumulated;
};
DegreeFamily degree_family(const Graph& g);

struct EgonetFamily {
    Column node_mass, conductance, density, lcc;
};
EgonetFamily egonet_family(const Graph& g, VolumeMeasure volume = VolumeMeasure::DegreeSum,
                           unsigned threads = 1);

struct CoreDominanceFamily {
    Column cosine, jaccard, pearson, spa;
};
CoreDominanceFamily core_dominance_family(const Graph& g, unsigned threads = 1);

Column closeness(const Graph& g, unsigned threads = 1);
/// Sum over unordered pairs {s,t} of the fraction of s–t shortest paths through v.
Column betweenness(const Graph& g, unsigned threads = 1);
Column pagerank(const Graph& g, double damping, double tolerance, int max_iterations);

struct EigenvectorResult {
    Column values;
    bool converged = false;
    int iterations = 0;
};
EigenvectorResult eigenvector(const Graph& g, double tolerance, int max_iterations);

struct GlobalFamily {
    Column closeness, betweenness, pagerank, eigenvector;
    std::vector<std::string> warnings;
};
GlobalFamily global_centralities(const Graph& g, const CentralityOptions& options = {});

enum class MetricSelection { Local, Global, All };

CentralityTable compute(const Graph& g, MetricSelection which, const CentralityOptions& options = {});
/// Explicit list; output order still follows kAllMetrics.
CentralityTable compute(const Graph& g, std::span<const Metric> which,
                        const CentralityOptions& options = {});
CentralityTable compute(const Graph& g, std::span<const std::string> names,
                        const CentralityOptions& options = {});

}  // namespace fngcn
