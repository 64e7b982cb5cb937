#pragma once

// Brute-force reference implementations for small graphs. Everything here
// works on a dense adjacency matrix and plain loops so that it shares no
// code path with the library kernels.

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "fngcn/centrality.hpp"
#include "fngcn/graph.hpp"

namespace oracle {

using fngcn::Graph;
using fngcn::Metric;
using Vec = Eigen::VectorXd;

struct Dense {
    int n = 0;
    std::vector<std::vector<int>> a;
    std::vector<int> deg;
    int m = 0;

    explicit Dense(const Graph& g) : n(static_cast<int>(g.num_nodes())), a(n, std::vector<int>(n, 0)), deg(n, 0) {
        for (const auto& [u, v] : g.edges()) {
            a[u][v] = a[v][u] = 1;
            ++m;
        }
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) deg[u] += a[u][v];
    }
    std::vector<int> nbrs(int u) const {
        std::vector<int> out;
        for (int v = 0; v < n; ++v)
            if (a[u][v]) out.push_back(v);
        return out;
    }
    int common(int u, int v) const {
        int c = 0;
        for (int k = 0; k < n; ++k) c += a[u][k] && a[v][k];
        return c;
    }
    int unite(int u, int v) const {
        int c = 0;
        for (int k = 0; k < n; ++k) c += a[u][k] || a[v][k];
        return c;
    }
};

inline Vec degree(const Dense& d) {
    Vec out(d.n);
    for (int u = 0; u < d.n; ++u) out[u] = static_cast<double>(d.deg[u]) / (d.n - 1);
    return out;
}

inline Vec extended_degree(const Dense& d) {
    Vec out(d.n);
    for (int u = 0; u < d.n; ++u) {
        double s = d.deg[u];
        for (int v : d.nbrs(u)) s += d.deg[v];
        out[u] = s;
    }
    return out;
}

inline Vec accumulated_degree(const Dense& d) {
    Vec out(d.n);
    for (int u = 0; u < d.n; ++u) {
        double s = d.deg[u];
        for (int v : d.nbrs(u)) {
            s += d.deg[v];
            for (int w : d.nbrs(v)) s += d.deg[w];
        }
        out[u] = s;
    }
    return out;
}

inline std::vector<int> closed(const Dense& d, int u) {
    std::vector<int> s = d.nbrs(u);
    s.push_back(u);
    return s;
}

inline int edges_within(const Dense& d, const std::vector<int>& set) {
    int c = 0;
    for (std::size_t i = 0; i < set.size(); ++i)
        for (std::size_t j = i + 1; j < set.size(); ++j) c += d.a[set[i]][set[j]];
    return c;
}

inline Vec node_mass(const Dense& d) {
    Vec out(d.n);
    for (int u = 0; u < d.n; ++u) out[u] = edges_within(d, closed(d, u));
    return out;
}

inline Vec density(const Dense& d) {
    Vec out(d.n);
    for (int u = 0; u < d.n; ++u) {
        const double k = d.deg[u] + 1;
        out[u] = d.deg[u] == 0 ? 0.0 : edges_within(d, closed(d, u)) / (k * (k - 1) / 2.0);
    }
    return out;
}

inline Vec lcc(const Dense& d) {
    Vec out(d.n);
    for (int u = 0; u < d.n; ++u) {
        const double k = d.deg[u];
        out[u] = d.deg[u] < 2 ? 0.0 : edges_within(d, d.nbrs(u)) / (k * (k - 1) / 2.0);
    }
    return out;
}

inline Vec conductance(const Dense& d, fngcn::VolumeMeasure vol) {
    Vec out(d.n);
    for (int u = 0; u < d.n; ++u) {
        std::vector<char> in(d.n, 0);
        for (int v : closed(d, u)) in[v] = 1;
        int boundary = 0, vol_in = 0, vol_out = 0, size_in = 0;
        for (int x = 0; x < d.n; ++x) {
            (in[x] ? vol_in : vol_out) += d.deg[x];
            size_in += in[x];
            for (int y = x + 1; y < d.n; ++y)
                if (d.a[x][y] && in[x] != in[y]) ++boundary;
        }
        if (vol == fngcn::VolumeMeasure::NodeCount) {
            vol_in = size_in;
            vol_out = d.n - size_in;
        }
        const int denom = std::min(vol_in, vol_out);
        out[u] = (size_in == d.n || denom <= 0) ? 0.0 : static_cast<double>(boundary) / denom;
    }
    return out;
}

inline Vec cored_cosine(const Dense& d) {
    Vec out = Vec::Zero(d.n);
    for (int u = 0; u < d.n; ++u)
        for (int v : d.nbrs(u)) out[u] += d.common(u, v) / std::sqrt(static_cast<double>(d.deg[u]) * d.deg[v]);
    return out;
}

inline Vec cored_jaccard(const Dense& d) {
    Vec out = Vec::Zero(d.n);
    for (int u = 0; u < d.n; ++u)
        for (int v : d.nbrs(u)) out[u] += static_cast<double>(d.common(u, v)) / d.unite(u, v);
    return out;
}

/// Centered sums are scaled by n so every intermediate is an exact integer.
inline Vec cored_pearson(const Dense& d) {
    Vec out = Vec::Zero(d.n);
    for (int u = 0; u < d.n; ++u)
        for (int v : d.nbrs(u)) {
            long long cov = 0, vu = 0, vv = 0;
            for (int k = 0; k < d.n; ++k) {
                const long long xu = static_cast<long long>(d.n) * d.a[u][k] - d.deg[u];
                const long long xv = static_cast<long long>(d.n) * d.a[v][k] - d.deg[v];
                cov += xu * xv;
                vu += xu * xu;
                vv += xv * xv;
            }
            if (vu > 0 && vv > 0) out[u] += static_cast<double>(cov) / std::sqrt(static_cast<double>(vu) * static_cast<double>(vv));
        }
    return out;
}

inline Vec spa(const Dense& d) {
    Vec out = Vec::Zero(d.n);
    for (int u = 0; u < d.n; ++u)
        for (int v : d.nbrs(u)) out[u] += static_cast<double>(d.deg[u]) * d.deg[v];
    return out;
}

constexpr int kInf = std::numeric_limits<int>::max() / 4;

/// Floyd–Warshall hop distances.
inline std::vector<std::vector<int>> distances(const Dense& d) {
    std::vector<std::vector<int>> dist(d.n, std::vector<int>(d.n, kInf));
    for (int u = 0; u < d.n; ++u) {
        dist[u][u] = 0;
        for (int v = 0; v < d.n; ++v)
            if (d.a[u][v]) dist[u][v] = 1;
    }
    for (int k = 0; k < d.n; ++k)
        for (int i = 0; i < d.n; ++i)
            for (int j = 0; j < d.n; ++j)
                if (dist[i][k] + dist[k][j] < dist[i][j]) dist[i][j] = dist[i][k] + dist[k][j];
    return dist;
}

inline Vec closeness(const Dense& d) {
    const auto dist = distances(d);
    Vec out(d.n);
    for (int u = 0; u < d.n; ++u) {
        double reach = 0, total = 0;
        for (int v = 0; v < d.n; ++v)
            if (v != u && dist[u][v] < kInf) {
                ++reach;
                total += dist[u][v];
            }
        out[u] = total == 0 ? 0.0 : (reach / total) * (reach / (d.n - 1));
    }
    return out;
}

/// Pair-sum over s < t of σ_sv σ_vt / σ_st for every v on a shortest s–t path.
inline Vec betweenness(const Dense& d) {
    const auto dist = distances(d);
    // σ_st by layered counting on the distance matrix.
    std::vector<std::vector<double>> sigma(d.n, std::vector<double>(d.n, 0.0));
    for (int s = 0; s < d.n; ++s) {
        std::vector<int> order(d.n);
        for (int i = 0; i < d.n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int x, int y) { return dist[s][x] < dist[s][y]; });
        sigma[s][s] = 1;
        for (int t : order) {
            if (t == s || dist[s][t] >= kInf) continue;
            for (int w = 0; w < d.n; ++w)
                if (d.a[w][t] && dist[s][w] == dist[s][t] - 1) sigma[s][t] += sigma[s][w];
        }
    }
    Vec out = Vec::Zero(d.n);
    for (int s = 0; s < d.n; ++s)
        for (int t = s + 1; t < d.n; ++t) {
            if (dist[s][t] >= kInf) continue;
            for (int v = 0; v < d.n; ++v)
                if (v != s && v != t && dist[s][v] + dist[v][t] == dist[s][t])
                    out[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
        }
    return out;
}

/// Direct linear solve of the PageRank fixed point with uniform teleport and
/// dangling mass spread uniformly.
inline Vec pagerank(const Dense& d, double alpha = 0.85) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d.n, d.n);
    for (int v = 0; v < d.n; ++v)
        for (int u = 0; u < d.n; ++u) m(u, v) = d.deg[v] == 0 ? 1.0 / d.n : d.a[u][v] / static_cast<double>(d.deg[v]);
    const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(d.n, d.n) - alpha * m;
    const Vec rhs = Vec::Constant(d.n, (1.0 - alpha) / d.n);
    Vec x = lhs.fullPivLu().solve(rhs);
    return x / x.sum();
}

/// Leading eigenvector of A, nonnegative, unit L2 norm. Also reports the gap
/// between the two largest eigenvalues so callers can skip degenerate cases.
inline Vec eigenvector(const Dense& d, double* gap = nullptr) {
    Eigen::MatrixXd a(d.n, d.n);
    for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < d.n; ++j) a(i, j) = d.a[i][j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    Vec v = es.eigenvectors().col(d.n - 1);
    if (gap) *gap = d.n > 1 ? es.eigenvalues()[d.n - 1] - es.eigenvalues()[d.n - 2] : 1.0;
    if (v.sum() < 0) v = -v;
    v = v.cwiseAbs();
    return v / v.norm();
}

inline Vec metric(const Dense& d, Metric m, fngcn::VolumeMeasure vol = fngcn::VolumeMeasure::DegreeSum) {
    switch (m) {
        case Metric::Closeness: return closeness(d);
        case Metric::Betweenness: return betweenness(d);
        case Metric::PageRank: return pagerank(d);
        case Metric::Eigenvector: return eigenvector(d);
        case Metric::Degree: return degree(d);
        case Metric::ExtendedDegree: return extended_degree(d);
        case Metric::AccumulatedDegree: return accumulated_degree(d);
        case Metric::NodeMass: return node_mass(d);
        case Metric::ConductanceOfEgonet: return conductance(d, vol);
        case Metric::DensityOfEgonet: return density(d);
        case Metric::LCC: return lcc(d);
        case Metric::CoredCosine: return cored_cosine(d);
        case Metric::CoredJaccard: return cored_jaccard(d);
        case Metric::CoredPearson: return cored_pearson(d);
        case Metric::SPA: return spa(d);
    }
    return {};
}

/// Largest relative error; exact zeros in the reference demand |x| ≤ 1e-12.
inline double max_relative_error(const Vec& got, const Vec& want) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < want.size(); ++i) {
        const double err = std::abs(got[i] - want[i]);
        worst = std::max(worst, want[i] == 0.0 ? (err <= 1e-12 ? 0.0 : 1.0) : err / std::abs(want[i]));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Other oracles

/// Spearman from the textbook definition: average ranks by counting.
inline double spearman(const Vec& x, const Vec& y) {
    const auto n = x.size();
    auto ranks = [n](const Vec& v) {
        Vec r(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            double less = 0, equal = 0;
            for (Eigen::Index j = 0; j < n; ++j) {
                less += v[j] < v[i];
                equal += v[j] == v[i];
            }
            r[i] = less + (equal + 1) / 2.0;
        }
        return r;
    };
    const Vec rx = ranks(x), ry = ranks(y);
    const Vec cx = rx.array() - rx.mean(), cy = ry.array() - ry.mean();
    const double den = std::sqrt(cx.squaredNorm() * cy.squaredNorm());
    return den == 0 ? 0.0 : cx.dot(cy) / den;
}

/// AUC by enumerating every (positive, negative) pair.
inline double auc(const Vec& s, const Eigen::VectorXi& truth) {
    double wins = 0, pairs = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        for (Eigen::Index j = 0; j < s.size(); ++j)
            if (truth[i] == 1 && truth[j] == 0) {
                pairs += 1;
                wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
            }
    return wins / pairs;
}

/// Trapezoidal area under the ROC curve built by sweeping thresholds.
inline double trapezoid_auc(const Vec& s, const Eigen::VectorXi& truth) {
    std::vector<double> thresholds(s.data(), s.data() + s.size());
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    double pos = 0, neg = 0;
    for (Eigen::Index i = 0; i < truth.size(); ++i) (truth[i] == 1 ? pos : neg) += 1;
    double area = 0, prev_tpr = 0, prev_fpr = 0;
    for (double t : thresholds) {
        double tp = 0, fp = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s[i] >= t) (truth[i] == 1 ? tp : fp) += 1;
        const double tpr = tp / pos, fpr = fp / neg;
        area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        prev_tpr = tpr;
        prev_fpr = fpr;
    }
    return area;
}

/// Modularity of a partition by the pairwise definition.
inline double modularity(const std::vector<std::vector<int>>& adj, const std::vector<int>& community) {
    const int n = static_cast<int>(adj.size());
    double m2 = 0;
    std::vector<double> k(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) k[i] += adj[i][j];
    for (double x : k) m2 += x;
    if (m2 == 0) return 0.0;
    double q = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (community[i] == community[j]) q += adj[i][j] - k[i] * k[j] / m2;
    return q / m2;
}

/// Calls f(labels) for every set partition of n items (restricted growth strings).
template <typename F>
void for_each_partition(int n, F&& f) {
    std::vector<int> label(n, 0), maxv(n, 0);
    while (true) {
        f(label);
        int i = n - 1;
        while (i > 0 && label[i] == maxv[i - 1] + 1) --i;
        if (i == 0) return;
        ++label[i];
        maxv[i] = std::max(maxv[i - 1], label[i]);
        for (int j = i + 1; j < n; ++j) {
            label[j] = 0;
            maxv[j] = maxv[i];
        }
    }
}

}  // namespace oracle
