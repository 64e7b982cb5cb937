#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

namespace fngcn {

using NodeId = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Row-major sparse storage; GCN propagation walks rows.
template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor, std::int32_t>;

/// Immutable undirected simple graph. Node ids are contiguous in [0, n) and
/// every edge is stored once as (u, v) with u < v. Neighbor lists are sorted.
class Graph {
public:
    Graph() = default;

    /// Builds from already-deduplicated edges; names[i] is the label of node i.
    /// Self-loops and duplicates are rejected; use GraphBuilder for raw input.
    Graph(std::size_t n, std::vector<Edge> edges, std::vector<std::string> names = {});

    std::size_t num_nodes() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_edges() const noexcept { return edges_.size(); }

    std::span<const NodeId> neighbors(NodeId u) const noexcept {
        return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
    }
    std::size_t degree(NodeId u) const noexcept {
        return static_cast<std::size_t>(offsets_[u + 1] - offsets_[u]);
    }
    bool has_edge(NodeId u, NodeId v) const;

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::string& name(NodeId u) const { return names_[u]; }
    const std::vector<std::string>& names() const noexcept { return names_; }

    /// Id for an original label, or -1.
    NodeId id_of(const std::string& label) const;

    /// Relabels node u as perm[u].
    Graph permuted(std::span<const NodeId> perm) const;

private:
    std::vector<std::int64_t> offsets_;
    std::vector<NodeId> targets_;
    std::vector<Edge> edges_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> index_;
};

struct IngestReport {
    std::size_t lines_read = 0;
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_dropped = 0;
};

struct EdgeListOptions {
    std::string comment_prefixes = "#%";
    /// 0 means any run of whitespace separates tokens.
    char delimiter = 0;
};

/// Accumulates labelled edges, assigning ids in first-seen order.
class GraphBuilder {
public:
    void add_edge(const std::string& a, const std::string& b);
    NodeId add_node(const std::string& label);
    Graph build() const;
    const IngestReport& report() const noexcept { return report_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<Edge> edges_;
    std::unordered_set<std::uint64_t> seen_;
    IngestReport report_;
};

struct LoadedGraph {
    Graph graph;
    IngestReport report;
};

LoadedGraph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options = {});
LoadedGraph parse_edge_list(std::string_view text, const EdgeListOptions& options = {});

/// Writes one `label label` line per edge.
void write_edge_list(const Graph& g, const std::filesystem::path& path);

/// Stable 64-bit fingerprint of the edge set and labels (FNV-1a).
std::uint64_t graph_hash(const Graph& g);

struct DegreeStats {
    double mean_degree = 0.0;
    double mean_square_degree = 0.0;
    /// Exact Σd and Σd²; ratios of these round only once.
    std::uint64_t degree_sum = 0;
    std::uint64_t square_degree_sum = 0;
};

DegreeStats degree_stats(const Graph& g);

/// D̃^{-1/2} (A + I) D̃^{-1/2} with D̃ = D + I.
template <typename Scalar = double>
SparseMatrix<Scalar> adjusted_transition(const Graph& g);

extern template SparseMatrix<double> adjusted_transition<double>(const Graph&);
extern template SparseMatrix<float> adjusted_transition<float>(const Graph&);

}  // namespace fngcn
