#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "graph_oracle.h"
#include "unfollow/graph_features.h"

using namespace unfollow;

namespace {

MentionGraph graph_of(const std::vector<std::pair<std::string, std::string>>& edges) {
    std::vector<std::string> ids;
    std::vector<std::vector<std::string>> handles;
    auto idx = [&](const std::string& id) {
        auto it = std::find(ids.begin(), ids.end(), id);
        if (it != ids.end()) return static_cast<std::size_t>(it - ids.begin());
        ids.push_back(id);
        handles.emplace_back();
        return ids.size() - 1;
    };
    for (const auto& [a, b] : edges) {
        const auto i = idx(a);
        idx(b);
        handles[i].push_back(b);
    }
    return build_mention_graph(ids, handles);
}

double at(const MentionGraph& g, const std::vector<double>& v, const std::string& id) { return v[*g.find(id)]; }

double residual(const std::vector<std::vector<std::size_t>>& adj, const EigenResult& r) {
    double s = 0.0;
    for (std::size_t i = 0; i < adj.size(); ++i) {
        double ax = 0.0;
        for (auto j : adj[i]) ax += r.vector[j];
        s += (ax - r.eigenvalue * r.vector[i]) * (ax - r.eigenvalue * r.vector[i]);
    }
    return std::sqrt(s);
}

}  // namespace

TEST(MentionGraph, Construction) {
    std::vector<std::string> ids = {"a", "b", "c", "Lonely"};
    std::vector<std::vector<std::string>> none(4);
    EXPECT_EQ(build_mention_graph(ids, none).size(), 0u);

    std::vector<std::vector<std::string>> h = {{"b", "B", "b", "a", "nobody"}, {}, {}, {}};
    const auto g = build_mention_graph(ids, h);
    EXPECT_EQ(g.size(), 2u);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_FALSE(g.find("c").has_value());
    EXPECT_FALSE(g.find("Lonely").has_value());
    const auto a = *g.find("a"), b = *g.find("b");
    EXPECT_EQ(g.out[a], std::vector<std::size_t>{b});
    EXPECT_EQ(g.in[b], std::vector<std::size_t>{a});

    std::vector<std::vector<std::string>> h2 = {{}, {}, {}, {"lonely", "C"}};
    const auto g2 = build_mention_graph(ids, h2);
    EXPECT_EQ(g2.size(), 2u);
    EXPECT_TRUE(g2.find("c").has_value());
}

TEST(MentionGraph, FixtureEdgeList) {
    // Edges counted by hand from the mention lists below.
    std::vector<std::string> ids = {"x", "y", "z", "w"};
    std::vector<std::vector<std::string>> h = {{"y", "z", "y"}, {"x"}, {"w", "x"}, {}};
    const auto g = build_mention_graph(ids, h);
    std::ostringstream out;
    write_edge_list(g, out);
    std::multiset<std::string> lines;
    std::istringstream in(out.str());
    for (std::string l; std::getline(in, l);) lines.insert(l);
    EXPECT_EQ(lines, (std::multiset<std::string>{"x\ty", "x\tz", "y\tx", "z\tw", "z\tx"}));
}

TEST(Centrality, PathBetweenness) {
    const auto g = graph_of({{"a", "b"}, {"b", "c"}});
    const auto bc = betweenness_centrality(g);
    EXPECT_DOUBLE_EQ(at(g, bc, "b"), 0.5);
    EXPECT_DOUBLE_EQ(at(g, bc, "a"), 0.0);
    const auto cl = closeness_centrality(g);
    EXPECT_DOUBLE_EQ(at(g, cl, "a"), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(at(g, cl, "b"), 1.0);
    EXPECT_DOUBLE_EQ(at(g, cl, "c"), 0.0);
    const auto c = centralities(g);
    EXPECT_DOUBLE_EQ(c[*g.find("b")].in_deg, 0.5);
    EXPECT_DOUBLE_EQ(c[*g.find("b")].out_deg, 0.5);
    EXPECT_DOUBLE_EQ(c[*g.find("a")].out_deg, 0.5);
}

TEST(Centrality, StarEigenvector) {
    std::vector<std::pair<std::string, std::string>> e;
    for (const char* leaf : {"l1", "l2", "l3", "l4", "l5"}) {
        e.emplace_back("hub", leaf);
        e.emplace_back(leaf, "hub");
    }
    const auto g = graph_of(e);
    const auto adj = undirected_projection(g);
    const auto r = eigenvector_centrality(adj);
    const double hub = r.vector[*g.find("hub")];
    for (const char* leaf : {"l1", "l2", "l3", "l4", "l5"}) EXPECT_GT(hub, r.vector[*g.find(leaf)]);
    EXPECT_NEAR(r.eigenvalue, std::sqrt(5.0), 1e-6);
    EXPECT_LT(residual(adj, r), 1e-6);
}

TEST(Centrality, TriangleClustering) {
    const auto g = graph_of({{"a", "b"}, {"b", "c"}, {"c", "a"}});
    for (double c : clustering_coefficients(undirected_projection(g))) EXPECT_DOUBLE_EQ(c, 1.0);
    const auto p = graph_of({{"a", "b"}, {"b", "c"}});
    for (double c : clustering_coefficients(undirected_projection(p))) EXPECT_DOUBLE_EQ(c, 0.0);
}

TEST(Centrality, BrandesMatchesBruteForce) {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + gen() % 29;
        const double p = std::uniform_real_distribution<double>(0.03, 0.25)(gen);
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < n; ++i) ids.push_back("n" + std::to_string(i));
        std::vector<std::vector<std::string>> h(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && std::uniform_real_distribution<double>(0, 1)(gen) < p) h[i].push_back(ids[j]);
        const auto g = build_mention_graph(ids, h);
        if (g.size() == 0) continue;
        const auto got = betweenness_centrality(g);
        const auto expect = testutil::brute_force_betweenness(g.out);
        ASSERT_EQ(got.size(), expect.size());
        for (std::size_t v = 0; v < got.size(); ++v) ASSERT_NEAR(got[v], expect[v], 1e-9) << "trial " << trial;
        for (double b : got) ASSERT_GE(b, 0.0);

        const auto adj = undirected_projection(g);
        const auto r = eigenvector_centrality(adj);
        ASSERT_LT(residual(adj, r), 1e-6) << "trial " << trial;
        double norm = 0.0;
        for (double x : r.vector) {
            ASSERT_GE(x, 0.0);
            norm += x * x;
        }
        ASSERT_NEAR(norm, 1.0, 1e-9);
    }
}

TEST(Jaccard, Examples) {
    const std::vector<std::string> abc = {"a", "b", "c"}, bcd = {"b", "c", "d"}, xy = {"x", "y"};
    EXPECT_DOUBLE_EQ(jaccard(abc, abc), 1.0);
    EXPECT_DOUBLE_EQ(jaccard(abc, xy), 0.0);
    EXPECT_DOUBLE_EQ(jaccard(abc, bcd), 0.5);
    EXPECT_DOUBLE_EQ(jaccard(std::vector<std::string>{}, std::vector<std::string>{}), 0.0);
    const std::vector<std::string> dup = {"a", "a", "b"};
    EXPECT_DOUBLE_EQ(jaccard(dup, abc), 2.0 / 3.0);
}

TEST(Jaccard, SymmetricAndBounded) {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<std::string> a, b;
        for (int i = 0; i < static_cast<int>(gen() % 10); ++i) a.push_back(std::to_string(gen() % 12));
        for (int i = 0; i < static_cast<int>(gen() % 10); ++i) b.push_back(std::to_string(gen() % 12));
        const double ab = jaccard(a, b);
        EXPECT_EQ(ab, jaccard(b, a));
        EXPECT_GE(ab, 0.0);
        EXPECT_LE(ab, 1.0);
        if (!a.empty()) {
            EXPECT_EQ(jaccard(a, a), 1.0);
        }
    }
}

TEST(SimilarityGraph, ThresholdBoundaryIsBitExact) {
    // 3 shared of 10 total: exactly 0.3. 29 shared of 100: just under.
    std::vector<std::size_t> a = {0, 1, 2, 3, 4, 5, 6};
    std::vector<std::size_t> b = {0, 1, 2, 7, 8, 9};
    ASSERT_EQ(jaccard(a, b), 0.3);
    std::vector<std::size_t> c, d;
    for (std::size_t i = 0; i < 29; ++i) {
        c.push_back(100 + i);
        d.push_back(100 + i);
    }
    for (std::size_t i = 0; i < 35; ++i) c.push_back(200 + i);
    for (std::size_t i = 0; i < 36; ++i) d.push_back(300 + i);
    ASSERT_EQ(jaccard(c, d), 0.29);
    std::vector<std::vector<std::size_t>> sets = {a, b, c, d};
    const auto g = build_similarity_graph(sets, 0.3);
    EXPECT_EQ(g.edge_count(), 1u);
    ASSERT_EQ(g.adjacency[0].size(), 1u);
    EXPECT_EQ(g.adjacency[0][0].neighbor, 1u);
    EXPECT_EQ(g.adjacency[0][0].weight, 0.3);
    EXPECT_TRUE(g.adjacency[2].empty());
}

TEST(SimilarityGraph, IdenticalUsersAndNoSelfLoops) {
    std::vector<std::vector<std::string>> docs = {{"a", "b"}, {"b", "a", "a"}, {"z"}, {}};
    const auto g = build_similarity_graph(token_id_sets(docs), 0.3);
    ASSERT_EQ(g.size(), 4u);
    ASSERT_EQ(g.adjacency[0].size(), 1u);
    EXPECT_EQ(g.adjacency[0][0].weight, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (const auto& e : g.adjacency[i]) {
            EXPECT_NE(e.neighbor, i);
            EXPECT_GE(e.weight, 0.3);
            EXPECT_LE(e.weight, 1.0);
        }
}

TEST(SimilarityGraph, MatchesAllPairsOracle) {
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + gen() % 40;
        std::vector<std::vector<std::size_t>> sets(n);
        for (auto& s : sets) {
            for (int i = 0; i < static_cast<int>(gen() % 8); ++i) s.push_back(gen() % 15);
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
        }
        const auto g = build_similarity_graph(sets, 0.3);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::pair<std::size_t, double>> expect, got;
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                std::vector<std::size_t> inter;
                std::set_intersection(sets[i].begin(), sets[i].end(), sets[j].begin(), sets[j].end(),
                                      std::back_inserter(inter));
                const std::size_t uni = sets[i].size() + sets[j].size() - inter.size();
                const double w = uni == 0 ? 0.0 : static_cast<double>(inter.size()) / static_cast<double>(uni);
                if (w >= 0.3) expect.emplace_back(j, w);
            }
            for (const auto& e : g.adjacency[i]) got.emplace_back(e.neighbor, e.weight);
            std::sort(got.begin(), got.end());
            ASSERT_EQ(got, expect);
        }
    }
}

TEST(NeighborMajority, Rules) {
    SimilarityGraph g;
    g.adjacency.resize(6);
    auto link = [&](std::size_t a, std::size_t b) {
        g.adjacency[a].push_back({b, 1.0});
        g.adjacency[b].push_back({a, 1.0});
    };
    for (std::size_t i = 1; i <= 4; ++i) link(0, i);
    std::vector<std::optional<int>> labels = {std::nullopt, 1, 1, 1, 0, std::nullopt};
    EXPECT_EQ(neighbor_majority_class(g, 0, labels), 1.0);
    labels[2] = 0;
    EXPECT_EQ(neighbor_majority_class(g, 0, labels), 0.5);
    labels[1] = labels[2] = labels[3] = labels[4] = std::nullopt;
    EXPECT_EQ(neighbor_majority_class(g, 0, labels), 0.5);
    EXPECT_EQ(neighbor_majority_class(g, 5, labels), 0.5);
    EXPECT_EQ(neighbor_majority_class(g, std::nullopt, labels), 0.5);
    labels = {std::nullopt, 0, 0, 0, 1, std::nullopt};
    EXPECT_EQ(neighbor_majority_class(g, 0, labels), 0.0);
    // The node's own label never counts.
    labels[0] = 1;
    EXPECT_EQ(neighbor_majority_class(g, 0, labels), 0.0);
}

TEST(SimilarityGraph, InducedSubgraphAndClustering) {
    std::vector<std::vector<std::string>> docs = {{"a", "b"}, {"a", "b"}, {"a", "b"}, {"q"}};
    const auto g = build_similarity_graph(token_id_sets(docs), 0.3);
    EXPECT_EQ(clustering_coefficients(g.neighbor_lists()), (std::vector<double>{1.0, 1.0, 1.0, 0.0}));
    const auto sub = induced_subgraph(g, {true, false, true, true});
    EXPECT_EQ(sub.edge_count(), 1u);
    ASSERT_EQ(sub.size(), 3u);
    EXPECT_EQ(sub.adjacency[0].size(), 1u);
    EXPECT_TRUE(sub.adjacency[2].empty());
}
