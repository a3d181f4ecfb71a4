#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "support.hpp"

using namespace hyperlim;
using namespace testing_support;

namespace {

StageConfig stage_config(Rational delta, std::int64_t den, Rational diam) {
    StageConfig c;
    c.catalog.delta = delta;
    c.catalog.max_size = 3;
    c.catalog.denominator_bound = den;
    c.catalog.diameter_bound = diam;
    return c;
}

std::set<std::pair<Index, Index>> oracle_edges(const FiniteMetricSpace& s, const Rational& delta,
                                               const std::vector<Rational>& r) {
    std::set<std::pair<Index, Index>> out;
    for (Index x = 0; x < s.size(); ++x)
        for (Index y = x + 1; y < s.size(); ++y)
            if (std::find(r.begin(), r.end(), s.d(x, y)) != r.end() && naive_closed(s, make_subset(s.size(), {x, y}), delta))
                out.emplace(x, y);
    return out;
}

std::vector<std::vector<Index>> adjacency(std::size_t n, const std::set<std::pair<Index, Index>>& edges) {
    std::vector<std::vector<Index>> adj(n);
    for (const auto& [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    return adj;
}

// Acyclic iff |E| = |V| - #components, components by DFS.
bool oracle_acyclic(std::size_t n, const std::set<std::pair<Index, Index>>& edges) {
    const auto adj = adjacency(n, edges);
    std::vector<bool> seen(n, false);
    std::size_t comps = 0;
    for (Index s = 0; s < n; ++s) {
        if (seen[s]) continue;
        ++comps;
        std::vector<Index> stack{s};
        seen[s] = true;
        while (!stack.empty()) {
            const Index u = stack.back();
            stack.pop_back();
            for (Index v : adj[u])
                if (!seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
        }
    }
    return edges.size() + comps == n;
}

// Vertex sets of subtrees with up to `cap` vertices, grown edge by edge.
std::set<Subset> small_subtrees(std::size_t n, const std::vector<std::vector<Index>>& adj, std::size_t cap) {
    std::set<Subset> out;
    std::vector<Subset> frontier;
    for (Index v = 0; v < n; ++v)
        if (!adj[v].empty()) frontier.push_back(make_subset(n, {v}));
    while (!frontier.empty()) {
        std::vector<Subset> next;
        for (const auto& s : frontier) {
            if (!out.insert(s).second || s.count() >= cap) continue;
            for (Index u : members(s))
                for (Index v : adj[u])
                    if (!s.test(v)) {
                        Subset t = s;
                        t.set(v);
                        next.push_back(t);
                    }
        }
        frontier = std::move(next);
    }
    return out;
}

std::vector<Rational> random_lengths(std::mt19937_64& rng, const FiniteMetricSpace& s, const Rational& delta) {
    std::set<Rational> occurring;
    for (Index x = 0; x < s.size(); ++x)
        for (Index y = x + 1; y < s.size(); ++y)
            if (s.d(x, y) > delta) occurring.insert(s.d(x, y));
    std::vector<Rational> r;
    for (const auto& v : occurring)
        if (rng() % 2) r.push_back(v);
    if (r.empty() && !occurring.empty()) r.push_back(*occurring.begin());
    if (rng() % 4 == 0) r.push_back(delta + Rational(1, 7)); // usually absent
    return r;
}

} // namespace

TEST(ErGraph, CollinearPath) {
    const auto s = line({0, 1, 2});
    const auto g = er_graph(s, Rational(1, 2), {Rational(1)});
    EXPECT_EQ(g.edges, (std::vector<std::pair<Index, Index>>{{0, 1}, {1, 2}}));
    EXPECT_TRUE(is_forest(g).forest);
    const auto rep = geodetic_paths_check(s, g);
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.components_checked, 1u);
    EXPECT_EQ(rep.paths_checked, 3u);
    EXPECT_TRUE(is_geodetic(s, std::vector<Index>{0, 1, 2}));
}

TEST(ErGraph, FourCycleDiagonalsAreNotEdges) {
    const auto c = four_cycle();
    EXPECT_TRUE(er_graph(c, Rational(1), {Rational(2)}).edges.empty());
    EXPECT_THROW(er_graph(c, Rational(1), {Rational(1)}), InputError);
    EXPECT_THROW(er_graph(c, Rational(1), {Rational(3), Rational(1, 2)}), InputError);
}

TEST(ErGraph, AbsentLengthsGiveTheEmptyGraph) {
    const auto s = line({0, 1, 2});
    const auto g = er_graph(s, Rational(0), {Rational(5)});
    EXPECT_TRUE(g.edges.empty());
    EXPECT_TRUE(is_forest(g).forest);
    EXPECT_EQ(geodetic_paths_check(s, g).components_checked, 0u);
    EXPECT_TRUE(is_forest(ERGraph{}).forest);
}

TEST(ErGraph, LengthsAreSortedAndDeduplicated) {
    const auto g = er_graph(line({0, 2, 5}), Rational(1), {Rational(3), Rational(2), Rational(3)});
    EXPECT_EQ(g.lengths, (std::vector<Rational>{Rational(2), Rational(3)}));
    EXPECT_EQ(g.edges.size(), 2u);
}

TEST(IsForest, CycleWitnessIsAClosedWalk) {
    ERGraph g;
    g.vertex_count = 4;
    g.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    const auto r = is_forest(g);
    ASSERT_FALSE(r.forest);
    ASSERT_GE(r.cycle.size(), 4u);
    EXPECT_EQ(r.cycle.front(), r.cycle.back());
    const std::set<std::pair<Index, Index>> edges{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    for (std::size_t i = 0; i + 1 < r.cycle.size(); ++i) {
        const auto e = std::minmax(r.cycle[i], r.cycle[i + 1]);
        EXPECT_TRUE(edges.contains({e.first, e.second}));
    }
    EXPECT_THROW(geodetic_paths_check(line({0, 1, 2, 3}), g), InputError);
}

TEST(ErGraph, ExportBlock) {
    const auto s = line({0, 1, 2});
    const auto j = er_graph_json(s, er_graph(s, Rational(1, 2), {Rational(1)}));
    EXPECT_EQ(j["lengths"], Json::array({"1"}));
    EXPECT_EQ(j["edges"].size(), 2u);
    EXPECT_EQ(j["edges"][0], Json::array({"0", "1"}));
}

TEST(ErGraph, MatchesPairClosednessOnRandomSpaces) {
    std::mt19937_64 rng(51);
    int nonempty = 0;
    for (int t = 0; t < 150; ++t) {
        const auto s = random_space(rng, 2, 9);
        const Rational delta(static_cast<std::int64_t>(rng() % 3), 2);
        const auto r = random_lengths(rng, s, delta);
        if (r.empty()) continue;
        const auto g = er_graph(s, delta, r);
        const std::set<std::pair<Index, Index>> got(g.edges.begin(), g.edges.end());
        nonempty += !got.empty();
        EXPECT_EQ(got, oracle_edges(s, delta, r));
        EXPECT_EQ(is_forest(g).forest, oracle_acyclic(s.size(), got));
    }
    EXPECT_GT(nonempty, 50);
}

// In a δ-hyperbolic ambient space, graphs of closed pairs with lengths above δ
// are forests whose subtrees are closed and whose paths are geodesics.
TEST(ErGraph, ForestPropertiesOnStages) {
    std::mt19937_64 rng(52);
    int pairs = 0, with_edges = 0;
    for (const Rational delta : {Rational(1, 2), Rational(1)}) {
        const auto c = stage_config(delta, 2, Rational(3));
        const auto catalog = stage_catalog(c);
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const auto chain = build_chain(c, catalog, catalog.size() + 6, seed);
            for (std::size_t n = chain.size() / 2; n < chain.size(); n += 3) {
                const auto& s = chain[n].space();
                for (int q = 0; q < 3; ++q) {
                    const auto r = random_lengths(rng, s, delta);
                    if (r.empty()) continue;
                    ++pairs;
                    const auto g = er_graph(s, delta, r);
                    const std::set<std::pair<Index, Index>> edges(g.edges.begin(), g.edges.end());
                    with_edges += !edges.empty();
                    ASSERT_TRUE(oracle_acyclic(s.size(), edges));
                    ASSERT_TRUE(is_forest(g).forest);
                    EXPECT_TRUE(geodetic_paths_check(s, g).passed());
                    const auto adj = adjacency(s.size(), edges);
                    for (const auto& tree : small_subtrees(s.size(), adj, 4)) EXPECT_TRUE(naive_closed(s, tree, delta));
                    // Paths between tree vertices, found by plain DFS, add up to the distance.
                    for (Index u = 0; u < s.size(); ++u) {
                        std::vector<Index> path{u};
                        std::function<void(Index, Index)> walk = [&](Index v, Index from) {
                            if (path.size() > 1) {
                                Rational sum(0);
                                for (std::size_t i = 0; i + 1 < path.size(); ++i) sum += s.d(path[i], path[i + 1]);
                                EXPECT_EQ(sum, s.d(path.front(), path.back()));
                            }
                            for (Index w : adj[v])
                                if (w != from) {
                                    path.push_back(w);
                                    walk(w, v);
                                    path.pop_back();
                                }
                        };
                        walk(u, u);
                    }
                    // Edges persist into the next stage and none appear among old points.
                    if (n + 1 < chain.size()) {
                        const auto later = er_graph(chain[n + 1].space(), delta, r);
                        std::set<std::pair<Index, Index>> old_part;
                        for (const auto& e : later.edges)
                            if (e.second < s.size()) old_part.insert(e);
                        EXPECT_EQ(old_part, edges);
                    }
                }
            }
        }
    }
    EXPECT_GE(pairs, 50);
    EXPECT_GT(with_edges, 10);
}
