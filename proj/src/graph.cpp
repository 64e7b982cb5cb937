#include "fngcn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fngcn/error.hpp"

namespace fngcn {

namespace {

std::uint64_t edge_key(NodeId u, NodeId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

std::vector<std::string_view> tokenize(std::string_view line, char delimiter) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    auto is_sep = [&](char c) {
        if (delimiter == 0) return c == ' ' || c == '\t' || c == '\r' || c == '\n';
        return c == delimiter || c == '\r' || c == '\n';
    };
    while (i < line.size()) {
        while (i < line.size() && is_sep(line[i])) ++i;
        std::size_t j = i;
        while (j < line.size() && !is_sep(line[j])) ++j;
        if (j > i) {
            std::string_view tok = line.substr(i, j - i);
            // Trim whitespace around explicit delimiters.
            while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
            while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t')) tok.remove_suffix(1);
            if (!tok.empty()) tokens.push_back(tok);
        }
        i = j + 1;
    }
    return tokens;
}

}  // namespace

Graph::Graph(std::size_t n, std::vector<Edge> edges, std::vector<std::string> names)
    : edges_(std::move(edges)), names_(std::move(names)) {
    if (names_.empty()) {
        names_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) names_.push_back(std::to_string(i));
    }
    if (names_.size() != n) throw Error("graph", "name count does not match node count");

    std::vector<std::int64_t> deg(n, 0);
    for (auto& [u, v] : edges_) {
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
            throw Error("graph", "edge endpoint out of range");
        if (u == v) throw Error("graph", "self-loop in simple graph");
        if (u > v) std::swap(u, v);
        ++deg[u];
        ++deg[v];
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw Error("graph", "duplicate edge in simple graph");

    offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
    targets_.resize(static_cast<std::size_t>(offsets_[n]));
    std::vector<std::int64_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [u, v] : edges_) {
        targets_[fill[u]++] = v;
        targets_[fill[v]++] = u;
    }
    for (std::size_t i = 0; i < n; ++i)
        std::sort(targets_.begin() + offsets_[i], targets_.begin() + offsets_[i + 1]);

    index_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) index_.emplace(names_[i], static_cast<NodeId>(i));
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

NodeId Graph::id_of(const std::string& label) const {
    auto it = index_.find(label);
    return it == index_.end() ? -1 : it->second;
}

Graph Graph::permuted(std::span<const NodeId> perm) const {
    const std::size_t n = num_nodes();
    std::vector<Edge> edges;
    edges.reserve(edges_.size());
    for (const auto& [u, v] : edges_) edges.emplace_back(perm[u], perm[v]);
    std::vector<std::string> names(n);
    for (std::size_t i = 0; i < n; ++i) names[perm[i]] = names_[i];
    return Graph(n, std::move(edges), std::move(names));
}

NodeId GraphBuilder::add_node(const std::string& label) {
    auto [it, inserted] = index_.emplace(label, static_cast<NodeId>(names_.size()));
    if (inserted) names_.push_back(label);
    return it->second;
}

void GraphBuilder::add_edge(const std::string& a, const std::string& b) {
    const NodeId u = add_node(a);
    const NodeId v = add_node(b);
    if (u == v) {
        ++report_.self_loops_dropped;
        return;
    }
    if (!seen_.insert(edge_key(u, v)).second) {
        ++report_.duplicates_dropped;
        return;
    }
    edges_.emplace_back(std::min(u, v), std::max(u, v));
}

Graph GraphBuilder::build() const { return Graph(names_.size(), edges_, names_); }

LoadedGraph parse_edge_list(std::string_view text, const EdgeListOptions& options) {
    GraphBuilder builder;
    std::size_t line_no = 0;
    std::size_t lines_read = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) continue;
        if (options.comment_prefixes.find(line[first]) != std::string::npos) continue;

        auto tokens = tokenize(line, options.delimiter);
        if (tokens.size() < 2)
            throw IoError("load", "line " + std::to_string(line_no) + ": expected two node tokens");
        builder.add_edge(std::string(tokens[0]), std::string(tokens[1]));
        ++lines_read;
    }
    Graph g = builder.build();
    if (g.num_nodes() == 0) throw IoError("load", "edge list contains no edges");
    IngestReport report = builder.report();
    report.lines_read = lines_read;
    return {std::move(g), report};
}

LoadedGraph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load", "cannot read " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_edge_list(buffer.str(), options);
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write", "cannot write " + path.string());
    for (const auto& [u, v] : g.edges()) out << g.name(u) << ' ' << g.name(v) << '\n';
}

std::uint64_t graph_hash(const Graph& g) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= 0xff;
        h *= 1099511628211ULL;
    };
    mix(std::to_string(g.num_nodes()));
    for (const auto& [u, v] : g.edges()) {
        mix(g.name(u));
        mix(g.name(v));
    }
    return h;
}

DegreeStats degree_stats(const Graph& g) {
    const std::size_t n = g.num_nodes();
    if (n == 0) throw DegenerateGraphError("graph", "degree statistics of an empty graph");
    // Integer sums are exact; divide once.
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
    for (std::size_t u = 0; u < n; ++u) {
        const std::uint64_t d = g.degree(static_cast<NodeId>(u));
        sum += d;
        sum_sq += d * d;
    }
    return {static_cast<double>(sum) / static_cast<double>(n),
            static_cast<double>(sum_sq) / static_cast<double>(n), sum, sum_sq};
}

template <typename Scalar>
SparseMatrix<Scalar> adjusted_transition(const Graph& g) {
    const auto n = static_cast<std::int32_t>(g.num_nodes());
    if (n == 0) throw DegenerateGraphError("graph", "adjusted transition of an empty graph");
    // 1/sqrt((d_u+1)(d_v+1)) from an exact integer product, so (u,v) and
    // (v,u) are bitwise equal.
    auto entry = [&](NodeId u, NodeId v) {
        const auto prod = static_cast<std::uint64_t>(g.degree(u) + 1) * (g.degree(v) + 1);
        return Scalar(1) / std::sqrt(static_cast<Scalar>(prod));
    };

    SparseMatrix<Scalar> p(n, n);
    Eigen::VectorXi nnz(n);
    for (NodeId u = 0; u < n; ++u) nnz[u] = static_cast<int>(g.degree(u) + 1);
    p.reserve(nnz);
    for (NodeId u = 0; u < n; ++u) {
        bool diag_done = false;
        for (NodeId v : g.neighbors(u)) {
            if (!diag_done && v > u) {
                p.insert(u, u) = Scalar(1) / static_cast<Scalar>(g.degree(u) + 1);
                diag_done = true;
            }
            p.insert(u, v) = entry(u, v);
        }
        if (!diag_done) p.insert(u, u) = Scalar(1) / static_cast<Scalar>(g.degree(u) + 1);
    }
    p.makeCompressed();
    return p;
}

template SparseMatrix<double> adjusted_transition<double>(const Graph&);
template SparseMatrix<float> adjusted_transition<float>(const Graph&);

}  // namespace fngcn
