#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "fngcn/centrality.hpp"

namespace fngcn {

/// Fractional (average) ranks, ascending: the smallest value gets rank 1.
Eigen::VectorXd fractional_ranks(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Spearman rank correlation with average ranks for ties; 0 when either
/// ranking is constant.
double spearman(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y);

/// Metrics as nodes; an edge joins two metrics whose Spearman correlation
/// strictly exceeds delta.
struct FeatureNetwork {
    std::vector<std::string> nodes;
    Eigen::MatrixXd scc;
    std::vector<std::pair<int, int>> edges;  // i < j, sorted
    double delta = 0.9;

    int index_of(const std::string& name) const;
    bool adjacent(int i, int j) const;
    int degree(int i) const;
    std::vector<int> neighbors(int i) const;
};

inline constexpr double kDefaultDelta = 0.9;

FeatureNetwork build_feature_network(const CentralityTable& table, double delta = kDefaultDelta);
/// Network over explicit named columns; used for synthetic tables.
FeatureNetwork build_feature_network(const std::vector<std::string>& names,
                                     const Eigen::Ref<const Eigen::MatrixXd>& columns,
                                     double delta = kDefaultDelta);
/// Network with a prescribed correlation matrix (edges derived from it).
FeatureNetwork feature_network_from_scc(std::vector<std::string> names, Eigen::MatrixXd scc, double delta);

/// Groups of metric-node indices, each sorted by name; groups ordered by
/// their lexicographically smallest member.
using Groups = std::vector<std::vector<int>>;

/// Modularity of a partition on the (unweighted) feature network.
double modularity(const FeatureNetwork& fn, const Groups& groups, double resolution = 1.0);

/// Deterministic Louvain: local moves over nodes in name order, then
/// aggregation, repeated until no move improves modularity.
Groups cluster(const FeatureNetwork& fn, double resolution = 1.0);

struct GroupTrace {
    std::vector<int> members;
    /// Candidates in visiting order (degree desc, name asc).
    std::vector<int> candidates;
    /// Candidates skipped because a neighbor was already chosen.
    std::vector<int> skipped;
    int chosen = -1;
    bool fallback = false;
};

struct SelectionResult {
    Groups groups;
    std::vector<int> chosen;  // in processing order
    std::vector<GroupTrace> trace;
    bool fallback_used = false;

    std::vector<std::string> chosen_names(const FeatureNetwork& fn) const;
};

SelectionResult select_representatives(const FeatureNetwork& fn, const Groups& groups);

enum class RankTies {
    NodeId,   ///< total order; ties broken by ascending node id
    Average,  ///< tied nodes share their average rank
};

/// Rank-normalized features: f = rank/N − 0.5, ranks in descending value order.
struct FeatureMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> names;
};

FeatureMatrix normalize(const CentralityTable& table, const std::vector<Metric>& chosen,
                        RankTies ties = RankTies::NodeId);
Eigen::VectorXd normalize_column(const Eigen::Ref<const Eigen::VectorXd>& raw, RankTies ties = RankTies::NodeId);

}  // namespace fngcn
