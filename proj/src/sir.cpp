#include "fngcn/sir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "fngcn/error.hpp"
#include "fngcn/parallel.hpp"

namespace fngcn {

namespace {

constexpr std::uint64_t kRecoverTag = 0xffffffffULL;

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Half-up rounding that tolerates representation error (0.7 · 15 → 11).
std::size_t round_count(double x) { return static_cast<std::size_t>(std::floor(x + 0.5 + 1e-9)); }

}  // namespace

double critical_beta(const DegreeStats& stats) {
    // Σd / (Σd² − Σd) equals the ratio of means; integer sums keep it exact.
    if (stats.square_degree_sum > stats.degree_sum)
        return static_cast<double>(stats.degree_sum) /
               static_cast<double>(stats.square_degree_sum - stats.degree_sum);
    if (stats.degree_sum == 0 && stats.square_degree_sum == 0) {
        const double denom = stats.mean_square_degree - stats.mean_degree;
        if (denom > 0.0) return stats.mean_degree / denom;
    }
    throw DegenerateGraphError("sir", "epidemic threshold undefined: <d^2> <= <d>");
}

double keyed_uniform(std::uint64_t stream, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = splitmix(stream ^ splitmix(a));
    h = splitmix(h ^ splitmix(b + 0x632be59bd9b4e019ULL));
    h = splitmix(h ^ c);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::uint64_t sir_stream(std::uint64_t seed, NodeId node, int run) {
    return splitmix(splitmix(seed) ^ splitmix((static_cast<std::uint64_t>(node) << 32) |
                                              static_cast<std::uint32_t>(run)));
}

int simulate_once(const Graph& g, NodeId seed_node, double beta, double gamma, std::uint64_t stream) {
    struct Infected {
        NodeId node;
        std::uint32_t age;
    };
    // 0 susceptible, 1 infected, 2 recovered. Reset through `touched` so a
    // worker reuses one buffer across runs.
    thread_local std::vector<std::uint8_t> state;
    thread_local std::vector<NodeId> touched;
    thread_local std::vector<Infected> infected, next;
    thread_local std::vector<NodeId> newly;
    if (state.size() < g.num_nodes()) state.assign(g.num_nodes(), 0);
    touched.assign(1, seed_node);
    infected.assign(1, {seed_node, 0});
    state[seed_node] = 1;

    while (!infected.empty()) {
        newly.clear();
        for (const auto& [u, age] : infected)
            for (NodeId v : g.neighbors(u)) {
                if (state[v] != 0) continue;
                if (keyed_uniform(stream, static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(v), age) < beta) {
                    state[v] = 1;
                    newly.push_back(v);
                }
            }
        next.clear();
        for (const auto& [u, age] : infected) {
            if (keyed_uniform(stream, static_cast<std::uint64_t>(u), kRecoverTag, age) < gamma)
                state[u] = 2;
            else
                next.push_back({u, age + 1});
        }
        for (NodeId v : newly) next.push_back({v, 0});
        touched.insert(touched.end(), newly.begin(), newly.end());
        infected.swap(next);
    }
    for (NodeId v : touched) state[v] = 0;
    return static_cast<int>(touched.size());
}

InfluenceScores influence_scores(const Graph& g, const SirConfig& cfg) {
    if (cfg.runs < 1) throw ConfigError("sir", "runs must be at least 1");
    if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0)) throw ConfigError("sir", "gamma must lie in (0, 1]");

    InfluenceScores s;
    if (cfg.beta_override) {
        s.beta = *cfg.beta_override;
        if (!(s.beta >= 0.0 && s.beta <= 1.0)) throw ConfigError("sir", "beta must lie in [0, 1]");
        try {
            s.beta_c = critical_beta(degree_stats(g));
        } catch (const DegenerateGraphError&) {
            s.beta_c = std::numeric_limits<double>::quiet_NaN();
        }
    } else {
        if (!(cfg.xi > 0.0)) throw ConfigError("sir", "xi must be positive");
        s.beta_c = critical_beta(degree_stats(g));
        s.beta = std::min(1.0, cfg.xi * s.beta_c);
    }

    const std::size_t n = g.num_nodes();
    s.ic.resize(static_cast<Eigen::Index>(n));
    parallel_for(n, cfg.threads, [&](unsigned, std::size_t begin, std::size_t end) {
        for (std::size_t u = begin; u < end; ++u) {
            std::int64_t total = 0;
            for (int r = 0; r < cfg.runs; ++r)
                total += simulate_once(g, static_cast<NodeId>(u), s.beta, cfg.gamma,
                                       sir_stream(cfg.seed, static_cast<NodeId>(u), r));
            s.ic[static_cast<Eigen::Index>(u)] =
                static_cast<double>(total) / (static_cast<double>(n) * static_cast<double>(cfg.runs));
        }
    });
    return s;
}

std::uint64_t LabeledDataset::hash() const {
    std::uint64_t h = 0x1234567ULL;
    auto mix = [&](const std::vector<NodeId>& v, std::uint64_t tag) {
        h = splitmix(h ^ tag);
        for (NodeId x : v) h = splitmix(h ^ static_cast<std::uint64_t>(x));
    };
    mix(positives, 1);
    mix(negatives, 2);
    mix(train, 3);
    mix(test, 4);
    return h;
}

LabeledDataset build_dataset(const InfluenceScores& scores, const DatasetConfig& cfg) {
    const auto n = static_cast<std::size_t>(scores.ic.size());
    if (!(cfg.top_fraction > 0.0 && cfg.top_fraction <= 1.0))
        throw ConfigError("dataset", "top fraction must lie in (0, 1]");
    if (!(cfg.split > 0.0 && cfg.split < 1.0)) throw ConfigError("dataset", "split must lie in (0, 1)");
    if (!(cfg.neg_ratio > 0.0)) throw ConfigError("dataset", "negative ratio must be positive");

    const auto num_pos =
        static_cast<std::size_t>(std::ceil(cfg.top_fraction * static_cast<double>(n) - 1e-9));
    if (num_pos < 1) throw ConfigError("dataset", "graph too small for the requested top fraction");

    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return scores.ic[a] > scores.ic[b]; });

    LabeledDataset d;
    d.positives.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(num_pos, n)));
    const std::size_t available = n - d.positives.size();
    const std::size_t num_neg =
        cfg.sampling == NegativeSampling::Ratio
            ? round_count(cfg.neg_ratio * static_cast<double>(num_pos))
            : round_count(0.1 * static_cast<double>(available));
    if (num_neg < 1 || num_neg > available)
        throw Error("dataset", "insufficient non-influential nodes: need " + std::to_string(num_neg) +
                                   ", have " + std::to_string(available));

    // Weighted sampling without replacement (Efraimidis–Spirakis keys).
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::pair<double, NodeId>> keys;
    keys.reserve(available);
    for (std::size_t i = num_pos; i < n; ++i) {
        const NodeId v = order[i];
        const double u = std::max(unif(rng), 1e-300);
        keys.emplace_back(std::log(u) / scores.ic[v], v);
    }
    std::stable_sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; i < num_neg; ++i) d.negatives.push_back(keys[i].second);

    std::sort(d.positives.begin(), d.positives.end());
    std::sort(d.negatives.begin(), d.negatives.end());

    const std::size_t total = d.positives.size() + d.negatives.size();
    const auto train_total = round_count(cfg.split * static_cast<double>(total));
    auto train_pos = round_count(cfg.split * static_cast<double>(d.positives.size()));
    train_pos = std::min(train_pos, std::min(d.positives.size(), train_total));
    const std::size_t train_neg = std::min(train_total - train_pos, d.negatives.size());

    auto pos = d.positives;
    auto neg = d.negatives;
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(neg.begin(), neg.end(), rng);
    d.train.assign(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(train_pos));
    d.train.insert(d.train.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(train_neg));
    d.test.assign(pos.begin() + static_cast<std::ptrdiff_t>(train_pos), pos.end());
    d.test.insert(d.test.end(), neg.begin() + static_cast<std::ptrdiff_t>(train_neg), neg.end());
    std::sort(d.train.begin(), d.train.end());
    std::sort(d.test.begin(), d.test.end());

    d.labels = Eigen::VectorXi::Constant(static_cast<Eigen::Index>(n), -1);
    for (NodeId v : d.positives) d.labels[v] = 1;
    for (NodeId v : d.negatives) d.labels[v] = 0;
    return d;
}

}  // namespace fngcn
