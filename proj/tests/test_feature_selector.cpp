#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "fngcn/error.hpp"
#include "fngcn/feature_selector.hpp"
#include "oracles.hpp"

using namespace fngcn;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

std::vector<std::string> letters(int m) {
    std::vector<std::string> out;
    for (int i = 0; i < m; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
    return out;
}

FeatureNetwork network(int m, const std::vector<std::pair<int, int>>& edges) {
    Eigen::MatrixXd scc = Eigen::MatrixXd::Zero(m, m);
    scc.diagonal().setOnes();
    for (auto [a, b] : edges) scc(a, b) = scc(b, a) = 0.95;
    return feature_network_from_scc(letters(m), scc, 0.9);
}

std::set<std::set<std::string>> named(const FeatureNetwork& fn, const Groups& groups) {
    std::set<std::set<std::string>> out;
    for (const auto& g : groups) {
        std::set<std::string> s;
        for (int v : g) s.insert(fn.nodes[v]);
        out.insert(s);
    }
    return out;
}

std::vector<std::vector<int>> adjacency(const FeatureNetwork& fn) {
    const int m = static_cast<int>(fn.nodes.size());
    std::vector<std::vector<int>> a(m, std::vector<int>(m, 0));
    for (auto [i, j] : fn.edges) a[i][j] = a[j][i] = 1;
    return a;
}

double best_modularity(const FeatureNetwork& fn) {
    const auto a = adjacency(fn);
    double best = -1.0;
    oracle::for_each_partition(static_cast<int>(a.size()),
                               [&](const std::vector<int>& label) { best = std::max(best, oracle::modularity(a, label)); });
    return best;
}

std::vector<int> labels_of(const Groups& groups, int m) {
    std::vector<int> label(m, -1);
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (int v : groups[g]) label[v] = static_cast<int>(g);
    return label;
}

}  // namespace

TEST_CASE("spearman examples") {
    const auto x = vec({1, 2, 3, 4, 5});
    CHECK(spearman(x, x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(spearman(x, vec({5, 4, 3, 2, 1})) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(spearman(vec({1, 2, 3}), vec({1, 3, 2})) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(spearman(vec({1, 1, 1}), vec({1, 2, 3})) == 0.0);
    CHECK_THROWS(spearman(vec({1, 2}), vec({1, 2, 3})));
    CHECK_THROWS(spearman(vec({1}), vec({1})));
}

TEST_CASE("spearman properties") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> small(0, 6);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng() % 60);
        Eigen::VectorXd x(n), y(n);
        // Half the trials use heavily tied integer data.
        for (Eigen::Index i = 0; i < n; ++i) {
            x[i] = trial % 2 ? small(rng) : normal(rng);
            y[i] = trial % 2 ? small(rng) + 0.5 * x[i] : normal(rng) + x[i];
        }
        const double s = spearman(x, y);
        CHECK(s == doctest::Approx(oracle::spearman(x, y)).epsilon(1e-12));
        CHECK(s == doctest::Approx(spearman(y, x)).epsilon(1e-12));
        CHECK(std::abs(s) <= 1.0);
        // Scalar exp: Eigen's packet exp can differ by an ulp from its scalar
        // tail, which would split ties.
        const Eigen::VectorXd ex = x.unaryExpr([](double v) { return std::exp(v); });
        const Eigen::VectorXd lin = 3.0 * x.array() + 1.0;
        CHECK(std::abs(spearman(ex, y) - s) <= 1e-12);
        CHECK(std::abs(spearman(lin, y) - s) <= 1e-12);
    }
}

TEST_CASE("feature network construction") {
    SUBCASE("identical columns share an edge") {
        Eigen::MatrixXd cols(5, 2);
        cols << 1, 1, 5, 5, 2, 2, 4, 4, 3, 3;
        const auto fn = build_feature_network({"p", "q"}, cols, 0.9);
        CHECK(fn.edges == std::vector<std::pair<int, int>>{{0, 1}});
    }
    SUBCASE("independent columns stay apart") {
        std::mt19937_64 rng(8);
        std::normal_distribution<double> normal;
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::MatrixXd cols(200, 6);
            for (Eigen::Index j = 0; j < cols.cols(); ++j)
                for (Eigen::Index i = 0; i < cols.rows(); ++i) cols(i, j) = normal(rng);
            const auto fn = build_feature_network(letters(6), cols, 0.9);
            CHECK(fn.edges.empty());
            CHECK((fn.scc - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 0.9);
        }
    }
    SUBCASE("errors") {
        Eigen::MatrixXd one(4, 1);
        one << 1, 2, 3, 4;
        CHECK_THROWS(build_feature_network({"p"}, one, 0.9));
        Eigen::MatrixXd two(4, 2);
        two << 1, 2, 3, 4, 5, 6, 7, 8;
        CHECK_THROWS_AS(build_feature_network({"p", "q"}, two, 1.0), ConfigError);
    }
    SUBCASE("invariants on random tables") {
        std::mt19937_64 rng(12);
        std::normal_distribution<double> normal;
        for (int trial = 0; trial < 100; ++trial) {
            const int m = 2 + static_cast<int>(rng() % 9);
            Eigen::MatrixXd cols(50, m);
            Eigen::VectorXd base(50);
            for (auto& b : base) b = normal(rng);
            for (int j = 0; j < m; ++j)
                for (Eigen::Index i = 0; i < 50; ++i) cols(i, j) = base[i] * (j % 3) + normal(rng) * 0.3;
            const double delta = std::uniform_real_distribution<double>(0.0, 0.99)(rng);
            const auto fn = build_feature_network(letters(m), cols, delta);
            CHECK((fn.scc - fn.scc.transpose()).cwiseAbs().maxCoeff() == 0.0);
            CHECK(fn.scc.diagonal().isOnes());
            CHECK(fn.scc.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
            std::vector<std::pair<int, int>> expected;
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j)
                    if (fn.scc(i, j) > delta) expected.emplace_back(i, j);
            CHECK(fn.edges == expected);
        }
    }
}

TEST_CASE("clustering examples") {
    SUBCASE("no edges gives singletons") {
        const auto fn = network(5, {});
        CHECK(cluster(fn).size() == 5);
    }
    SUBCASE("complete network gives one group") {
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j) e.emplace_back(i, j);
        CHECK(cluster(network(6, e)).size() == 1);
    }
    SUBCASE("two disjoint triangles") {
        const auto fn = network(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
        const Groups groups = cluster(fn);
        CHECK(named(fn, groups) == std::set<std::set<std::string>>{{"a", "b", "c"}, {"d", "e", "f"}});
        // The brute-force optimum over all 203 partitions is the same split.
        CHECK(modularity(fn, groups) == doctest::Approx(best_modularity(fn)).epsilon(1e-12));
    }
    SUBCASE("worked-example structure") {
        const auto table = fixtures::synthetic_feature_table();
        const auto fn = build_feature_network(table, 0.9);
        const Groups groups = cluster(fn);
        CHECK(modularity(fn, groups) == doctest::Approx(best_modularity(fn)).epsilon(1e-12));
        CHECK(named(fn, groups) ==
              std::set<std::set<std::string>>{{"AccumulatedDegree", "ExtendedDegree", "SPA"},
                                              {"CoredCosine", "CoredJaccard", "CoredPearson", "Degree", "NodeMass"},
                                              {"ConductanceOfEgonet"},
                                              {"DensityOfEgonet"},
                                              {"LCC"}});
    }
}

TEST_CASE("clustering properties") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 150; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 8);
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (rng() % 3 == 0) e.emplace_back(i, j);
        const auto fn = network(m, e);
        const Groups groups = cluster(fn);
        CAPTURE(trial);
        // A partition of every metric, and modularity agrees with the pairwise oracle.
        const auto label = labels_of(groups, m);
        CHECK(std::count(label.begin(), label.end(), -1) == 0);
        std::size_t total = 0;
        for (const auto& g : groups) total += g.size();
        CHECK(total == static_cast<std::size_t>(m));
        CHECK(modularity(fn, groups) == doctest::Approx(oracle::modularity(adjacency(fn), label)).epsilon(1e-12));
        // Greedy moves never end below the trivial partitions.
        CHECK(modularity(fn, groups) >= modularity(fn, Groups{[&] {
                                            std::vector<int> all(m);
                                            std::iota(all.begin(), all.end(), 0);
                                            return all;
                                        }()}) - 1e-12);
        for (int v = 0; v < m; ++v)
            if (fn.degree(v) == 0) CHECK(std::find(groups.begin(), groups.end(), std::vector<int>{v}) != groups.end());
        // Determinism: identical input yields identical output.
        CHECK(cluster(fn) == groups);
    }
}

TEST_CASE("representative selection examples") {
    SUBCASE("singletons are all chosen") {
        const auto fn = network(4, {});
        const auto sel = select_representatives(fn, cluster(fn));
        CHECK(sel.chosen.size() == 4);
        CHECK_FALSE(sel.fallback_used);
    }
    SUBCASE("neighbor of a chosen metric is skipped") {
        // SPA has the highest degree in the larger group; NodeMass is then
        // skipped because SPA is already chosen.
        const std::vector<std::string> names = {"AccumulatedDegree", "ExtendedDegree", "SPA", "NodeMass",
                                                "CoredCosine", "X1", "X2"};
        Eigen::MatrixXd scc = Eigen::MatrixXd::Identity(7, 7);
        for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {0, 5}, {1, 6}, {2, 5}})
            scc(a, b) = scc(b, a) = 0.95;
        const auto fn = feature_network_from_scc(names, scc, 0.9);
        const Groups groups = {{0, 1, 2, 5, 6}, {3, 4}};
        const auto sel = select_representatives(fn, groups);
        const auto chosen = sel.chosen_names(fn);
        CHECK(chosen == std::vector<std::string>{"SPA", "CoredCosine"});
        CHECK(sel.trace[1].skipped == std::vector<int>{3});
        CHECK_FALSE(sel.fallback_used);
    }
    SUBCASE("fallback when every candidate is blocked") {
        const auto fn = network(3, {{0, 2}});
        const Groups groups = {{0, 1}, {2}};
        const auto sel = select_representatives(fn, groups);
        CHECK(sel.chosen_names(fn) == std::vector<std::string>{"a", "c"});
        CHECK(sel.fallback_used);
        CHECK(sel.trace[1].fallback);
    }
    SUBCASE("groups must partition the metrics") {
        const auto fn = network(3, {});
        CHECK_THROWS(select_representatives(fn, Groups{{0, 1}}));
        CHECK_THROWS(select_representatives(fn, Groups{{0, 1}, {1, 2}}));
    }
    SUBCASE("worked-example structure") {
        const auto fn = build_feature_network(fixtures::synthetic_feature_table(), 0.9);
        const auto sel = select_representatives(fn, cluster(fn));
        auto chosen = sel.chosen_names(fn);
        std::sort(chosen.begin(), chosen.end());
        CHECK(chosen == std::vector<std::string>{"ConductanceOfEgonet", "CoredCosine", "DensityOfEgonet", "LCC", "SPA"});
    }
}

TEST_CASE("selection properties") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 150; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 10);
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (rng() % 3 == 0) e.emplace_back(i, j);
        const auto fn = network(m, e);
        const Groups groups = cluster(fn);
        const auto sel = select_representatives(fn, groups);
        CAPTURE(trial);
        CHECK(sel.chosen.size() == groups.size());
        for (std::size_t k = 0; k < sel.trace.size(); ++k) {
            const auto& t = sel.trace[k];
            CHECK(std::find(t.members.begin(), t.members.end(), t.chosen) != t.members.end());
        }
        bool adjacent_pair = false;
        for (std::size_t a = 0; a < sel.chosen.size(); ++a)
            for (std::size_t b = a + 1; b < sel.chosen.size(); ++b)
                adjacent_pair |= fn.adjacent(sel.chosen[a], sel.chosen[b]);
        if (adjacent_pair) CHECK(sel.fallback_used);
        const auto again = select_representatives(fn, cluster(fn));
        CHECK(again.chosen == sel.chosen);
    }
}

TEST_CASE("rank normalization") {
    SUBCASE("worked example") {
        const auto f = normalize_column(vec({9, 7, 7, 1}));
        CHECK(f == vec({-0.25, 0.0, 0.25, 0.5}));
    }
    SUBCASE("extremes for N = 100") {
        Eigen::VectorXd raw(100);
        for (int i = 0; i < 100; ++i) raw[i] = 100 - i;
        const auto f = normalize_column(raw);
        CHECK(f[0] == doctest::Approx(-0.49).epsilon(1e-15));
        CHECK(f[99] == 0.5);
    }
    SUBCASE("average ties") {
        const auto f = normalize_column(vec({9, 7, 7, 1}), RankTies::Average);
        CHECK(f == vec({-0.25, 0.125, 0.125, 0.5}));
    }
    SUBCASE("properties") {
        std::mt19937_64 rng(4);
        for (int trial = 0; trial < 100; ++trial) {
            const Graph g = fixtures::erdos_renyi(5 + rng() % 80, 0.1, rng());
            const auto table = compute(g, MetricSelection::Local);
            const auto fm = normalize(table, local_metrics());
            const double n = static_cast<double>(g.num_nodes());
            for (Eigen::Index c = 0; c < fm.values.cols(); ++c) {
                const auto col = fm.values.col(c);
                CHECK(col.minCoeff() >= 1.0 / n - 0.5 - 1e-15);
                CHECK(col.maxCoeff() <= 0.5);
                CHECK(std::abs(col.mean() - ((n + 1) / (2 * n) - 0.5)) <= 1e-12);
                std::vector<double> ranks(col.data(), col.data() + col.size());
                for (auto& r : ranks) r = std::round((r + 0.5) * n);
                std::sort(ranks.begin(), ranks.end());
                for (std::size_t i = 0; i < ranks.size(); ++i) CHECK(ranks[i] == static_cast<double>(i + 1));
            }
        }
    }
}
