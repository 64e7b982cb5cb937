#include "fngcn/feature_selector.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "fngcn/error.hpp"

namespace fngcn {

Eigen::VectorXd fractional_ranks(const Eigen::Ref<const Eigen::VectorXd>& x) {
    const Eigen::Index n = x.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return x[a] < x[b]; });
    Eigen::VectorXd ranks(n);
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        // Positions i..j (0-based) share the mean of ranks i+1..j+1.
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (Eigen::Index k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (x.size() != y.size()) throw Error("feature-net", "spearman: length mismatch");
    if (x.size() < 2) throw Error("feature-net", "spearman: need at least two observations");
    const Eigen::VectorXd rx = fractional_ranks(x);
    const Eigen::VectorXd ry = fractional_ranks(y);
    const Eigen::VectorXd cx = rx.array() - rx.mean();
    const Eigen::VectorXd cy = ry.array() - ry.mean();
    const double sxx = cx.squaredNorm();
    const double syy = cy.squaredNorm();
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return std::clamp(cx.dot(cy) / std::sqrt(sxx * syy), -1.0, 1.0);
}

int FeatureNetwork::index_of(const std::string& name) const {
    auto it = std::find(nodes.begin(), nodes.end(), name);
    return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
}

bool FeatureNetwork::adjacent(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

int FeatureNetwork::degree(int i) const {
    int d = 0;
    for (const auto& [a, b] : edges) d += (a == i) + (b == i);
    return d;
}

std::vector<int> FeatureNetwork::neighbors(int i) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges) {
        if (a == i) out.push_back(b);
        if (b == i) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

FeatureNetwork feature_network_from_scc(std::vector<std::string> names, Eigen::MatrixXd scc, double delta) {
    if (names.size() < 2) throw Error("feature-net", "feature network needs at least two metrics");
    if (!(delta >= 0.0 && delta < 1.0)) throw ConfigError("feature-net", "delta must lie in [0, 1)");
    FeatureNetwork fn;
    fn.nodes = std::move(names);
    fn.scc = std::move(scc);
    fn.delta = delta;
    const int m = static_cast<int>(fn.nodes.size());
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (fn.scc(i, j) > delta) fn.edges.emplace_back(i, j);
    return fn;
}

FeatureNetwork build_feature_network(const std::vector<std::string>& names,
                                     const Eigen::Ref<const Eigen::MatrixXd>& columns, double delta) {
    const auto m = static_cast<Eigen::Index>(names.size());
    if (m < 2) throw Error("feature-net", "feature network needs at least two metrics");
    if (columns.cols() != m) throw Error("feature-net", "column count does not match metric names");
    Eigen::MatrixXd scc = Eigen::MatrixXd::Identity(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = i + 1; j < m; ++j) scc(i, j) = scc(j, i) = spearman(columns.col(i), columns.col(j));
    return feature_network_from_scc(names, std::move(scc), delta);
}

FeatureNetwork build_feature_network(const CentralityTable& table, double delta) {
    std::vector<std::string> names;
    for (Metric m : table.metrics) names.emplace_back(metric_name(m));
    return build_feature_network(names, table.values, delta);
}

namespace {

/// Symmetric weighted graph used across Louvain levels. Diagonal holds
/// twice the internal weight, matching the k_i = Σ_j W_ij convention.
struct WeightedGraph {
    Eigen::MatrixXd w;
};

Groups canonical_groups(const FeatureNetwork& fn, const std::vector<int>& community) {
    std::map<int, std::vector<int>> by_label;
    for (std::size_t i = 0; i < community.size(); ++i) by_label[community[i]].push_back(static_cast<int>(i));
    Groups groups;
    for (auto& [label, members] : by_label) {
        std::sort(members.begin(), members.end(),
                  [&](int a, int b) { return fn.nodes[a] < fn.nodes[b]; });
        groups.push_back(std::move(members));
    }
    std::sort(groups.begin(), groups.end(),
              [&](const auto& a, const auto& b) { return fn.nodes[a.front()] < fn.nodes[b.front()]; });
    return groups;
}

/// One pass of local moves; returns community label per node (labels are
/// node indices of the first occupant) and whether anything moved.
bool local_moves(const WeightedGraph& g, double resolution, std::vector<int>& community) {
    const Eigen::Index n = g.w.rows();
    const Eigen::VectorXd k = g.w.rowwise().sum();
    const double two_m = k.sum();
    if (two_m <= 0.0) return false;

    Eigen::VectorXd tot = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) tot[community[i]] += k[i];

    bool moved_any = false;
    bool improved = true;
    while (improved) {
        improved = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            const int old_c = community[i];
            tot[old_c] -= k[i];
            std::map<int, double> links;  // ordered for deterministic ties
            links[old_c] += 0.0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != i && g.w(i, j) > 0.0) links[community[j]] += g.w(i, j);

            auto gain = [&](int c) { return links[c] - resolution * k[i] * tot[c] / two_m; };
            int best = old_c;
            double best_gain = gain(old_c);
            for (const auto& [c, _] : links) {
                const double gc = gain(c);
                if (gc > best_gain + 1e-12) {
                    best = c;
                    best_gain = gc;
                }
            }
            tot[best] += k[i];
            if (best != old_c) {
                community[i] = best;
                improved = true;
                moved_any = true;
            }
        }
    }
    return moved_any;
}

}  // namespace

double modularity(const FeatureNetwork& fn, const Groups& groups, double resolution) {
    const int m = static_cast<int>(fn.nodes.size());
    const double two_m = 2.0 * static_cast<double>(fn.edges.size());
    if (two_m == 0.0) return 0.0;
    std::vector<int> label(m, -1);
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (int v : groups[g]) label[v] = static_cast<int>(g);
    std::vector<double> deg(m);
    for (int i = 0; i < m; ++i) deg[i] = fn.degree(i);
    double q = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (label[i] == label[j])
                q += (fn.adjacent(i, j) && i != j ? 1.0 : 0.0) - resolution * deg[i] * deg[j] / two_m;
    return q / two_m;
}

Groups cluster(const FeatureNetwork& fn, double resolution) {
    const int m = static_cast<int>(fn.nodes.size());
    // Level-0 nodes are visited in lexicographic name order.
    std::vector<int> by_name(m);
    std::iota(by_name.begin(), by_name.end(), 0);
    std::sort(by_name.begin(), by_name.end(), [&](int a, int b) { return fn.nodes[a] < fn.nodes[b]; });

    WeightedGraph level{Eigen::MatrixXd::Zero(m, m)};
    std::vector<int> position(m);
    for (int p = 0; p < m; ++p) position[by_name[p]] = p;
    for (const auto& [a, b] : fn.edges) {
        level.w(position[a], position[b]) = 1.0;
        level.w(position[b], position[a]) = 1.0;
    }
    // membership[v] = super-node (at the current level) containing original node by_name[v].
    std::vector<int> membership(m);
    std::iota(membership.begin(), membership.end(), 0);

    while (true) {
        const Eigen::Index n = level.w.rows();
        std::vector<int> community(static_cast<std::size_t>(n));
        std::iota(community.begin(), community.end(), 0);
        if (!local_moves(level, resolution, community)) break;

        // Relabel communities 0..c-1 in order of first appearance, which
        // preserves the name ordering of their earliest member.
        std::vector<int> relabel(static_cast<std::size_t>(n), -1);
        int count = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (relabel[community[i]] < 0) relabel[community[i]] = count++;
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(count, count);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) next(relabel[community[i]], relabel[community[j]]) += level.w(i, j);
        for (auto& s : membership) s = relabel[community[s]];
        level.w = std::move(next);
        if (count == n) break;
    }

    std::vector<int> final_label(m);
    for (int p = 0; p < m; ++p) final_label[by_name[p]] = membership[p];
    return canonical_groups(fn, final_label);
}

std::vector<std::string> SelectionResult::chosen_names(const FeatureNetwork& fn) const {
    std::vector<std::string> out;
    for (int c : chosen) out.push_back(fn.nodes[c]);
    return out;
}

SelectionResult select_representatives(const FeatureNetwork& fn, const Groups& groups) {
    const int m = static_cast<int>(fn.nodes.size());
    std::vector<int> seen(m, 0);
    for (const auto& g : groups)
        for (int v : g) {
            if (v < 0 || v >= m || seen[v]++) throw Error("feature-net", "groups do not partition the metrics");
        }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw Error("feature-net", "groups do not cover every metric");

    auto min_name = [&](const std::vector<int>& g) {
        std::string best = fn.nodes[g.front()];
        for (int v : g) best = std::min(best, fn.nodes[v]);
        return best;
    };

    SelectionResult r;
    r.groups = groups;
    std::vector<const std::vector<int>*> order;
    for (const auto& g : groups) order.push_back(&g);
    std::stable_sort(order.begin(), order.end(), [&](const auto* a, const auto* b) {
        if (a->size() != b->size()) return a->size() > b->size();
        return min_name(*a) < min_name(*b);
    });

    std::vector<bool> is_chosen(m, false);
    for (const auto* group : order) {
        GroupTrace t;
        t.members = *group;
        t.candidates = *group;
        std::sort(t.candidates.begin(), t.candidates.end(), [&](int a, int b) {
            const int da = fn.degree(a), db = fn.degree(b);
            if (da != db) return da > db;
            return fn.nodes[a] < fn.nodes[b];
        });
        for (int c : t.candidates) {
            bool blocked = false;
            for (int nb : fn.neighbors(c)) blocked = blocked || is_chosen[nb];
            if (!blocked) {
                t.chosen = c;
                break;
            }
            t.skipped.push_back(c);
        }
        if (t.chosen < 0) {
            t.chosen = t.candidates.front();
            t.fallback = true;
            r.fallback_used = true;
        }
        is_chosen[t.chosen] = true;
        r.chosen.push_back(t.chosen);
        r.trace.push_back(std::move(t));
    }
    return r;
}

Eigen::VectorXd normalize_column(const Eigen::Ref<const Eigen::VectorXd>& raw, RankTies ties) {
    const Eigen::Index n = raw.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    // Descending value; stable sort keeps ascending node id among ties.
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return raw[a] > raw[b]; });
    Eigen::VectorXd rank(n);
    if (ties == RankTies::NodeId) {
        for (Eigen::Index pos = 0; pos < n; ++pos) rank[order[pos]] = static_cast<double>(pos + 1);
    } else {
        Eigen::Index i = 0;
        while (i < n) {
            Eigen::Index j = i;
            while (j + 1 < n && raw[order[j + 1]] == raw[order[i]]) ++j;
            for (Eigen::Index k = i; k <= j; ++k) rank[order[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
            i = j + 1;
        }
    }
    return rank.array() / static_cast<double>(n) - 0.5;
}

FeatureMatrix normalize(const CentralityTable& table, const std::vector<Metric>& chosen, RankTies ties) {
    FeatureMatrix f;
    f.values.resize(table.values.rows(), static_cast<Eigen::Index>(chosen.size()));
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        f.values.col(static_cast<Eigen::Index>(i)) = normalize_column(table.column(chosen[i]), ties);
        f.names.emplace_back(metric_name(chosen[i]));
    }
    return f;
}

}  // namespace fngcn
