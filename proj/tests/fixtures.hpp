#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fngcn/centrality.hpp"
#include "fngcn/graph.hpp"

namespace fixtures {

using fngcn::Edge;
using fngcn::Graph;
using fngcn::NodeId;

inline std::filesystem::path data_dir() { return FNGCN_DATA_DIR; }

inline Graph from_edges(std::size_t n, std::vector<Edge> edges) { return Graph(n, std::move(edges)); }

inline Graph path(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(i + 1));
    return Graph(n, e);
}

inline Graph cycle(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t i = 0; i < n; ++i)
        e.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % n));
    return Graph(n, e);
}

/// Node 0 is the center.
inline Graph star(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t i = 1; i < n; ++i) e.emplace_back(0, static_cast<NodeId>(i));
    return Graph(n, e);
}

inline Graph complete(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    return Graph(n, e);
}

/// Circulant graph joining each node to its k/2 nearest neighbors on each
/// side (k even), or a Möbius-style ladder for k = 3 (n even).
inline Graph regular(std::size_t n, int k) {
    std::vector<Edge> e;
    auto add = [&](std::size_t a, std::size_t b) {
        a %= n;
        b %= n;
        e.emplace_back(static_cast<NodeId>(std::min(a, b)), static_cast<NodeId>(std::max(a, b)));
    };
    for (std::size_t i = 0; i < n; ++i)
        for (int s = 1; s <= k / 2; ++s) add(i, i + static_cast<std::size_t>(s));
    if (k % 2 == 1)
        for (std::size_t i = 0; i < n / 2; ++i) add(i, i + n / 2);
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return Graph(n, e);
}

/// Perfect matching on n (even) nodes.
inline Graph matching(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t i = 0; i + 1 < n; i += 2) e.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(i + 1));
    return Graph(n, e);
}

inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<Edge> e;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng)) e.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    return Graph(n, e);
}

/// G(n, m) with a given mean degree; O(m) for large sparse graphs.
inline Graph erdos_renyi_mean_degree(std::size_t n, double mean_degree, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto m = static_cast<std::size_t>(mean_degree * static_cast<double>(n) / 2.0);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<Edge> e;
    e.reserve(m + m / 8);
    while (e.size() < m + m / 16) {
        auto a = pick(rng), b = pick(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        e.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    std::shuffle(e.begin(), e.end(), rng);
    e.resize(std::min(e.size(), m));
    return Graph(n, e);
}

/// Uniform-ish random k-regular simple graph by repeated stub pairing.
inline Graph random_regular(std::size_t n, int k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (;;) {
        std::vector<NodeId> stubs;
        for (std::size_t v = 0; v < n; ++v)
            for (int j = 0; j < k; ++j) stubs.push_back(static_cast<NodeId>(v));
        std::shuffle(stubs.begin(), stubs.end(), rng);
        std::vector<Edge> e;
        bool simple = true;
        for (std::size_t i = 0; i + 1 < stubs.size() && simple; i += 2) {
            auto a = stubs[i], b = stubs[i + 1];
            if (a > b) std::swap(a, b);
            simple = a != b;
            e.emplace_back(a, b);
        }
        if (!simple) continue;
        std::sort(e.begin(), e.end());
        if (std::adjacent_find(e.begin(), e.end()) != e.end()) continue;
        return Graph(n, e);
    }
}

inline bool connected(const Graph& g) {
    if (g.num_nodes() == 0) return true;
    std::vector<char> seen(g.num_nodes(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        for (NodeId v : g.neighbors(u))
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++count;
                stack.push_back(v);
            }
    }
    return count == g.num_nodes();
}

/// Connected G(n, p) by rejection; the seed advances until one is found.
inline Graph connected_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    for (;; ++seed) {
        Graph g = erdos_renyi(n, p, seed);
        if (connected(g)) return g;
    }
}

/// Five communities of 100 nodes (sparse inside, sparser across) plus five
/// planted hubs per community, each wired to 30 uniformly random nodes. The
/// 25 hubs make up the top 5% by SIR influence.
inline Graph planted_partition_with_hubs(std::uint64_t seed = 7) {
    constexpr std::size_t n = 500, size = 100, communities = 5, hubs_per = 5, hub_degree = 30;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Edge> e;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (unif(rng) < (u / size == v / size ? 0.03 : 0.001))
                e.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t c = 0; c < communities; ++c)
        for (std::size_t j = 0; j < hubs_per; ++j) {
            const std::size_t h = c * size + j;
            for (std::size_t added = 0; added < hub_degree;) {
                const std::size_t v = pick(rng);
                if (v == h) continue;
                e.emplace_back(static_cast<NodeId>(std::min(h, v)), static_cast<NodeId>(std::max(h, v)));
                ++added;
            }
        }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return Graph(n, e);
}

inline std::vector<NodeId> planted_hubs() {
    std::vector<NodeId> hubs;
    for (NodeId c = 0; c < 5; ++c)
        for (NodeId j = 0; j < 5; ++j) hubs.push_back(c * 100 + j);
    return hubs;
}

/// Synthetic local-centrality table with a prescribed feature network.
///
/// Seven metrics sit at positions on a line: AccumulatedDegree, ExtendedDegree
/// at 0; SPA at 1; NodeMass, Degree at 2; CoredCosine, CoredPearson at 3;
/// CoredJaccard at 4. Each column is white noise on a fine grid smoothed by a
/// Gaussian kernel centered at the metric's position, so the correlation of
/// two columns is about exp(−Δ²/(4σ²)) with σ² = 5.5: 0.956 at distance 1 and
/// 0.834 at distance 2. Metrics at the same position get a little independent
/// noise. Conductance, Density and LCC are independent columns. At δ = 0.9 the
/// edges are exactly the pairs at distance ≤ 1.
inline fngcn::CentralityTable synthetic_feature_table(std::size_t rows = 2000, std::uint64_t seed = 42) {
    using fngcn::Metric;
    const std::vector<std::pair<Metric, double>> placed = {
        {Metric::AccumulatedDegree, 0.0}, {Metric::ExtendedDegree, 0.0}, {Metric::SPA, 1.0},
        {Metric::NodeMass, 2.0},          {Metric::Degree, 2.0},         {Metric::CoredCosine, 3.0},
        {Metric::CoredPearson, 3.0},      {Metric::CoredJaccard, 4.0},
    };
    constexpr double sigma2 = 5.5, step = 0.1, lo = -12.0, hi = 16.0;
    const auto grid = static_cast<Eigen::Index>((hi - lo) / step) + 1;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd noise(static_cast<Eigen::Index>(rows), grid);
    for (Eigen::Index j = 0; j < noise.cols(); ++j)
        for (Eigen::Index i = 0; i < noise.rows(); ++i) noise(i, j) = normal(rng);

    fngcn::CentralityTable t;
    t.metrics = fngcn::local_metrics();
    t.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(t.metrics.size()));
    t.seconds.assign(t.metrics.size(), 0.0);
    for (Metric m : t.metrics) {
        const Eigen::Index c = t.column_of(m);
        const auto it = std::find_if(placed.begin(), placed.end(), [m](const auto& p) { return p.first == m; });
        if (it == placed.end()) {
            for (Eigen::Index i = 0; i < t.values.rows(); ++i) t.values(i, c) = normal(rng);
            continue;
        }
        Eigen::VectorXd kernel(grid);
        for (Eigen::Index g = 0; g < grid; ++g) {
            const double x = lo + step * static_cast<double>(g) - it->second;
            kernel[g] = std::exp(-x * x / (2.0 * sigma2));
        }
        Eigen::VectorXd col = noise * kernel;
        col /= std::sqrt(kernel.squaredNorm());
        for (Eigen::Index i = 0; i < col.size(); ++i) col[i] += 0.1 * normal(rng);
        t.values.col(c) = col;
    }
    return t;
}

}  // namespace fixtures
