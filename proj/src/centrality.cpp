#include "fngcn/centrality.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>

#include "fngcn/error.hpp"
#include "fngcn/parallel.hpp"

namespace fngcn {

namespace {

constexpr std::array<std::string_view, kMetricCount> kNames = {
    "Closeness",    "Betweenness",         "PageRank",        "Eigenvector",
    "Degree",       "ExtendedDegree",      "AccumulatedDegree", "NodeMass",
    "ConductanceOfEgonet", "DensityOfEgonet", "LCC",           "CoredCosine",
    "CoredJaccard", "CoredPearson",        "SPA",
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

NodeId node_count(const Graph& g) { return static_cast<NodeId>(g.num_nodes()); }

/// Calls visit(u, v, common) for every node u and neighbor v, where common is
/// |N(u) ∩ N(v)|. Each worker owns one marker array.
template <typename Visit>
void for_each_neighbor_overlap(const Graph& g, unsigned threads, Visit&& visit) {
    const std::size_t n = g.num_nodes();
    parallel_for(n, threads, [&](unsigned, std::size_t begin, std::size_t end) {
        std::vector<NodeId> mark(n, -1);
        for (std::size_t i = begin; i < end; ++i) {
            const auto u = static_cast<NodeId>(i);
            for (NodeId v : g.neighbors(u)) mark[v] = u;
            for (NodeId v : g.neighbors(u)) {
                std::int64_t common = 0;
                for (NodeId w : g.neighbors(v)) common += (mark[w] == u);
                visit(u, v, common);
            }
        }
    });
}

/// Edges among the open neighborhood of each node.
std::vector<std::int64_t> neighborhood_edges(const Graph& g, unsigned threads) {
    std::vector<std::int64_t> twice(g.num_nodes(), 0);
    for_each_neighbor_overlap(g, threads, [&](NodeId u, NodeId, std::int64_t common) { twice[u] += common; });
    for (auto& t : twice) t /= 2;
    return twice;
}

Column node_mass_column(const Graph& g, unsigned threads) {
    const auto tri = neighborhood_edges(g, threads);
    Column out(g.num_nodes());
    for (NodeId u = 0; u < node_count(g); ++u)
        out[u] = static_cast<double>(static_cast<std::int64_t>(g.degree(u)) + tri[u]);
    return out;
}

Column density_column(const Graph& g, unsigned threads) {
    const auto tri = neighborhood_edges(g, threads);
    Column out(g.num_nodes());
    for (NodeId u = 0; u < node_count(g); ++u) {
        const auto d = static_cast<std::int64_t>(g.degree(u));
        out[u] = d == 0 ? 0.0 : static_cast<double>(d + tri[u]) / static_cast<double>((d + 1) * d / 2);
    }
    return out;
}

Column lcc_column(const Graph& g, unsigned threads) {
    const auto tri = neighborhood_edges(g, threads);
    Column out(g.num_nodes());
    for (NodeId u = 0; u < node_count(g); ++u) {
        const auto d = static_cast<std::int64_t>(g.degree(u));
        out[u] = d < 2 ? 0.0 : static_cast<double>(tri[u]) / static_cast<double>(d * (d - 1) / 2);
    }
    return out;
}

Column conductance_column(const Graph& g, VolumeMeasure volume, unsigned threads) {
    const auto tri = neighborhood_edges(g, threads);
    const auto n = static_cast<std::int64_t>(g.num_nodes());
    const auto total_volume = static_cast<std::int64_t>(2 * g.num_edges());
    Column out(g.num_nodes());
    for (NodeId u = 0; u < node_count(g); ++u) {
        const auto d = static_cast<std::int64_t>(g.degree(u));
        std::int64_t ego_volume = d;
        for (NodeId v : g.neighbors(u)) ego_volume += static_cast<std::int64_t>(g.degree(v));
        const std::int64_t inside = d + tri[u];
        const std::int64_t boundary = ego_volume - 2 * inside;
        std::int64_t vol_in = 0, vol_out = 0;
        if (volume == VolumeMeasure::DegreeSum) {
            vol_in = ego_volume;
            vol_out = total_volume - ego_volume;
        } else {
            vol_in = d + 1;
            vol_out = n - d - 1;
        }
        const std::int64_t denom = std::min(vol_in, vol_out);
        out[u] = (denom <= 0 || d + 1 == n) ? 0.0 : static_cast<double>(boundary) / static_cast<double>(denom);
    }
    return out;
}

enum class Similarity { Cosine, Jaccard, Pearson };

Column cored_column(const Graph& g, Similarity sim, unsigned threads) {
    const auto n = static_cast<std::int64_t>(g.num_nodes());
    Column out = Column::Zero(g.num_nodes());
    for_each_neighbor_overlap(g, threads, [&](NodeId u, NodeId v, std::int64_t c) {
        const auto du = static_cast<std::int64_t>(g.degree(u));
        const auto dv = static_cast<std::int64_t>(g.degree(v));
        double s = 0.0;
        switch (sim) {
            case Similarity::Cosine:
                s = static_cast<double>(c) / std::sqrt(static_cast<double>(du * dv));
                break;
            case Similarity::Jaccard:
                s = static_cast<double>(c) / static_cast<double>(du + dv - c);
                break;
            case Similarity::Pearson: {
                // Row-mean-centred adjacency rows, scaled by n to stay in integers:
                // cov·n = n·c − du·dv, var·n = n·d − d².
                const std::int64_t var_u = n * du - du * du;
                const std::int64_t var_v = n * dv - dv * dv;
                if (var_u > 0 && var_v > 0)
                    s = static_cast<double>(n * c - du * dv) /
                        std::sqrt(static_cast<double>(var_u) * static_cast<double>(var_v));
                break;
            }
        }
        out[u] += s;
    });
    return out;
}

Column spa_column(const Graph& g) {
    Column out(g.num_nodes());
    for (NodeId u = 0; u < node_count(g); ++u) {
        std::int64_t s = 0;
        for (NodeId v : g.neighbors(u)) s += static_cast<std::int64_t>(g.degree(v));
        out[u] = static_cast<double>(static_cast<std::int64_t>(g.degree(u)) * s);
    }
    return out;
}

Column degree_column(const Graph& g) {
    const std::size_t n = g.num_nodes();
    if (n < 2) throw DegenerateGraphError("centrality", "degree centrality needs at least two nodes");
    Column out(n);
    for (NodeId u = 0; u < node_count(g); ++u)
        out[u] = static_cast<double>(g.degree(u)) / static_cast<double>(n - 1);
    return out;
}

std::vector<std::int64_t> extended_counts(const Graph& g) {
    std::vector<std::int64_t> ext(g.num_nodes());
    for (NodeId u = 0; u < node_count(g); ++u) {
        std::int64_t s = static_cast<std::int64_t>(g.degree(u));
        for (NodeId v : g.neighbors(u)) s += static_cast<std::int64_t>(g.degree(v));
        ext[u] = s;
    }
    return ext;
}

Column extended_column(const Graph& g) {
    const auto ext = extended_counts(g);
    Column out(g.num_nodes());
    for (std::size_t u = 0; u < ext.size(); ++u) out[static_cast<Eigen::Index>(u)] = static_cast<double>(ext[u]);
    return out;
}

Column accumulated_column(const Graph& g) {
    const auto ext = extended_counts(g);
    Column out(g.num_nodes());
    for (NodeId u = 0; u < node_count(g); ++u) {
        std::int64_t s = static_cast<std::int64_t>(g.degree(u));
        for (NodeId v : g.neighbors(u)) s += ext[v];
        out[u] = static_cast<double>(s);
    }
    return out;
}

void require_two_nodes(const Graph& g) {
    if (g.num_nodes() < 2)
        throw DegenerateGraphError("centrality", "global centralities need at least two nodes");
}

Column compute_metric(const Graph& g, Metric m, const CentralityOptions& o, std::vector<std::string>& warnings) {
    switch (m) {
        case Metric::Closeness: return closeness(g, o.threads);
        case Metric::Betweenness: return betweenness(g, o.threads);
        case Metric::PageRank: return pagerank(g, o.pagerank_damping, o.pagerank_tolerance, o.pagerank_max_iterations);
        case Metric::Eigenvector: {
            auto r = eigenvector(g, o.eigenvector_tolerance, o.eigenvector_max_iterations);
            if (!r.converged)
                warnings.push_back("eigenvector centrality did not converge in " +
                                   std::to_string(r.iterations) + " iterations; using last iterate");
            return r.values;
        }
        case Metric::Degree: return degree_column(g);
        case Metric::ExtendedDegree: return extended_column(g);
        case Metric::AccumulatedDegree: return accumulated_column(g);
        case Metric::NodeMass: return node_mass_column(g, o.threads);
        case Metric::ConductanceOfEgonet: return conductance_column(g, o.conductance_volume, o.threads);
        case Metric::DensityOfEgonet: return density_column(g, o.threads);
        case Metric::LCC: return lcc_column(g, o.threads);
        case Metric::CoredCosine: return cored_column(g, Similarity::Cosine, o.threads);
        case Metric::CoredJaccard: return cored_column(g, Similarity::Jaccard, o.threads);
        case Metric::CoredPearson: return cored_column(g, Similarity::Pearson, o.threads);
        case Metric::SPA: return spa_column(g);
    }
    throw Error("centrality", "unhandled metric");
}

}  // namespace

std::string_view metric_name(Metric m) { return kNames[static_cast<std::size_t>(m)]; }

std::optional<Metric> parse_metric(std::string_view name) {
    for (std::size_t i = 0; i < kMetricCount; ++i)
        if (kNames[i] == name) return static_cast<Metric>(i);
    return std::nullopt;
}

bool is_local(Metric m) { return static_cast<int>(m) >= static_cast<int>(Metric::Degree); }

std::vector<Metric> local_metrics() {
    std::vector<Metric> out;
    for (Metric m : kAllMetrics)
        if (is_local(m)) out.push_back(m);
    return out;
}

std::vector<Metric> global_metrics() {
    std::vector<Metric> out;
    for (Metric m : kAllMetrics)
        if (!is_local(m)) out.push_back(m);
    return out;
}

Eigen::Index CentralityTable::column_of(Metric m) const {
    for (std::size_t i = 0; i < metrics.size(); ++i)
        if (metrics[i] == m) return static_cast<Eigen::Index>(i);
    throw ConfigError("centrality", "metric not in table: " + std::string(metric_name(m)));
}

DegreeFamily degree_family(const Graph& g) {
    return {degree_column(g), extended_column(g), accumulated_column(g)};
}

EgonetFamily egonet_family(const Graph& g, VolumeMeasure volume, unsigned threads) {
    return {node_mass_column(g, threads), conductance_column(g, volume, threads), density_column(g, threads),
            lcc_column(g, threads)};
}

CoreDominanceFamily core_dominance_family(const Graph& g, unsigned threads) {
    return {cored_column(g, Similarity::Cosine, threads), cored_column(g, Similarity::Jaccard, threads),
            cored_column(g, Similarity::Pearson, threads), spa_column(g)};
}

Column closeness(const Graph& g, unsigned threads) {
    require_two_nodes(g);
    const std::size_t n = g.num_nodes();
    Column out(n);
    parallel_for(n, threads, [&](unsigned, std::size_t begin, std::size_t end) {
        std::vector<std::int32_t> dist(n, -1);
        std::vector<NodeId> queue(n);
        for (std::size_t s = begin; s < end; ++s) {
            std::fill(dist.begin(), dist.end(), -1);
            std::size_t head = 0, tail = 0;
            queue[tail++] = static_cast<NodeId>(s);
            dist[s] = 0;
            std::int64_t total = 0;
            while (head < tail) {
                const NodeId v = queue[head++];
                total += dist[v];
                for (NodeId w : g.neighbors(v))
                    if (dist[w] < 0) {
                        dist[w] = dist[v] + 1;
                        queue[tail++] = w;
                    }
            }
            const double reach = static_cast<double>(tail - 1);
            out[static_cast<Eigen::Index>(s)] =
                total == 0 ? 0.0 : (reach / static_cast<double>(total)) * (reach / static_cast<double>(n - 1));
        }
    });
    return out;
}

Column betweenness(const Graph& g, unsigned threads) {
    require_two_nodes(g);
    const std::size_t n = g.num_nodes();
    // Sources are split into a fixed number of chunks whose partial sums are
    // reduced in chunk order, so the result is independent of thread count.
    const std::size_t chunks = std::min<std::size_t>(n, 32);
    const std::size_t chunk_size = (n + chunks - 1) / chunks;
    std::vector<Column> partial(chunks, Column::Zero(n));

    parallel_for(chunks, threads, [&](unsigned, std::size_t cbegin, std::size_t cend) {
        std::vector<std::int32_t> dist(n);
        std::vector<double> sigma(n), delta(n);
        std::vector<NodeId> order(n);
        for (std::size_t c = cbegin; c < cend; ++c) {
            Column& acc = partial[c];
            const std::size_t sbegin = c * chunk_size;
            const std::size_t send = std::min(n, sbegin + chunk_size);
            for (std::size_t s = sbegin; s < send; ++s) {
                std::fill(dist.begin(), dist.end(), -1);
                std::fill(sigma.begin(), sigma.end(), 0.0);
                std::fill(delta.begin(), delta.end(), 0.0);
                std::size_t head = 0, tail = 0;
                order[tail++] = static_cast<NodeId>(s);
                dist[s] = 0;
                sigma[s] = 1.0;
                while (head < tail) {
                    const NodeId v = order[head++];
                    for (NodeId w : g.neighbors(v)) {
                        if (dist[w] < 0) {
                            dist[w] = dist[v] + 1;
                            order[tail++] = w;
                        }
                        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
                    }
                }
                // Predecessors are recovered from distances instead of stored.
                for (std::size_t i = tail; i-- > 1;) {
                    const NodeId w = order[i];
                    const double coeff = (1.0 + delta[w]) / sigma[w];
                    for (NodeId v : g.neighbors(w))
                        if (dist[v] == dist[w] - 1) delta[v] += sigma[v] * coeff;
                    acc[w] += delta[w];
                }
            }
        }
    });

    Column out = Column::Zero(n);
    for (const auto& p : partial) out += p;
    // Each unordered pair was counted from both endpoints.
    out *= 0.5;
    return out;
}

Column pagerank(const Graph& g, double damping, double tolerance, int max_iterations) {
    require_two_nodes(g);
    const auto n = static_cast<Eigen::Index>(g.num_nodes());
    const double inv_n = 1.0 / static_cast<double>(n);
    Column x = Column::Constant(n, inv_n);
    Column next(n);
    for (int it = 0; it < max_iterations; ++it) {
        double dangling = 0.0;
        for (NodeId u = 0; u < n; ++u)
            if (g.degree(u) == 0) dangling += x[u];
        const double base = (1.0 - damping) * inv_n + damping * dangling * inv_n;
        for (NodeId u = 0; u < n; ++u) {
            double s = 0.0;
            for (NodeId v : g.neighbors(u)) s += x[v] / static_cast<double>(g.degree(v));
            next[u] = base + damping * s;
        }
        const double residual = (next - x).lpNorm<1>();
        x.swap(next);
        if (residual < tolerance) break;
    }
    return x;
}

EigenvectorResult eigenvector(const Graph& g, double tolerance, int max_iterations) {
    require_two_nodes(g);
    const auto n = static_cast<Eigen::Index>(g.num_nodes());
    EigenvectorResult r;
    Column x = Column::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    Column next(n);
    // Iterating on A + I shifts the spectrum by one, removing the period-2
    // oscillation on bipartite graphs without changing the eigenvectors.
    for (r.iterations = 1; r.iterations <= max_iterations; ++r.iterations) {
        for (NodeId u = 0; u < n; ++u) {
            double s = x[u];
            for (NodeId v : g.neighbors(u)) s += x[v];
            next[u] = s;
        }
        next /= next.norm();
        const double change = (next - x).norm();
        x.swap(next);
        if (change < tolerance) {
            r.converged = true;
            break;
        }
    }
    r.iterations = std::min(r.iterations, max_iterations);
    r.values = std::move(x);
    return r;
}

GlobalFamily global_centralities(const Graph& g, const CentralityOptions& o) {
    GlobalFamily f;
    f.closeness = closeness(g, o.threads);
    f.betweenness = betweenness(g, o.threads);
    f.pagerank = pagerank(g, o.pagerank_damping, o.pagerank_tolerance, o.pagerank_max_iterations);
    auto ev = eigenvector(g, o.eigenvector_tolerance, o.eigenvector_max_iterations);
    if (!ev.converged) f.warnings.push_back("eigenvector centrality did not converge; using last iterate");
    f.eigenvector = std::move(ev.values);
    return f;
}

CentralityTable compute(const Graph& g, std::span<const Metric> which, const CentralityOptions& options) {
    CentralityTable t;
    for (Metric m : kAllMetrics)
        if (std::find(which.begin(), which.end(), m) != which.end()) t.metrics.push_back(m);
    t.values.resize(static_cast<Eigen::Index>(g.num_nodes()), static_cast<Eigen::Index>(t.metrics.size()));
    t.seconds.resize(t.metrics.size());
    for (std::size_t i = 0; i < t.metrics.size(); ++i) {
        const auto start = Clock::now();
        t.values.col(static_cast<Eigen::Index>(i)) = compute_metric(g, t.metrics[i], options, t.warnings);
        t.seconds[i] = seconds_since(start);
    }
    return t;
}

CentralityTable compute(const Graph& g, MetricSelection which, const CentralityOptions& options) {
    std::vector<Metric> ms;
    switch (which) {
        case MetricSelection::Local: ms = local_metrics(); break;
        case MetricSelection::Global: ms = global_metrics(); break;
        case MetricSelection::All: ms.assign(kAllMetrics.begin(), kAllMetrics.end()); break;
    }
    return compute(g, ms, options);
}

CentralityTable compute(const Graph& g, std::span<const std::string> names, const CentralityOptions& options) {
    std::vector<Metric> ms;
    for (const auto& name : names) {
        auto m = parse_metric(name);
        if (!m) throw ConfigError("centrality", "unknown metric: " + name);
        ms.push_back(*m);
    }
    return compute(g, ms, options);
}

}  // namespace fngcn
