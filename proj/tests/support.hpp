#pragma once

// Generators and brute-force oracles shared by the test suites. Oracles are
// written from the definitions and deliberately avoid the library's helpers.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hyperlim/hyperlim.hpp"

namespace testing_support {

using hyperlim::FiniteMetricSpace;
using hyperlim::Index;
using hyperlim::Rational;
using hyperlim::Subset;

inline FiniteMetricSpace space(std::vector<std::string> labels, const std::vector<std::vector<int>>& rows) {
    std::vector<std::vector<Rational>> r;
    for (const auto& row : rows) r.emplace_back(row.begin(), row.end());
    return FiniteMetricSpace::from_rows(std::move(labels), r);
}

/// Points at the given positions on a line, labelled by position.
inline FiniteMetricSpace line(const std::vector<int>& at) {
    std::vector<std::string> labels;
    std::vector<std::vector<int>> rows;
    for (int x : at) {
        labels.push_back(std::to_string(x));
        rows.emplace_back();
        for (int y : at) rows.back().push_back(std::abs(x - y));
    }
    return space(labels, rows);
}

inline FiniteMetricSpace four_cycle() {
    return space({"v0", "v1", "v2", "v3"}, {{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}});
}

inline Subset subset(const FiniteMetricSpace& s, const std::vector<std::string>& names) { return s.subset_of(names); }

inline Rational random_rational(std::mt19937_64& rng, std::int64_t max_num, std::int64_t max_den) {
    const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % max_den);
    const std::int64_t num = 1 + static_cast<std::int64_t>(rng() % (max_num * den));
    return Rational(num, den);
}

/// Shortest-path metric of a complete graph with random rational weights.
inline FiniteMetricSpace random_metric(std::mt19937_64& rng, std::size_t n, std::int64_t max_weight,
                                       std::int64_t max_den) {
    std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, Rational(0)));
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) d[i][j] = d[j][i] = random_rational(rng, max_weight, max_den);
    for (Index k = 0; k < n; ++k)
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return FiniteMetricSpace::from_rows(d);
}

/// Metric of a random weighted tree on n vertices (0-hyperbolic).
inline FiniteMetricSpace random_tree_metric(std::mt19937_64& rng, std::size_t n, std::int64_t max_weight,
                                            std::int64_t max_den) {
    std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, Rational(0)));
    for (Index v = 1; v < n; ++v) {
        const Index parent = rng() % v;
        const Rational w = random_rational(rng, max_weight, max_den);
        for (Index u = 0; u < v; ++u) d[u][v] = d[v][u] = d[u][parent] + w;
    }
    return FiniteMetricSpace::from_rows(d);
}

/// Graph metric of a random connected graph: a random tree plus extra edges.
inline FiniteMetricSpace random_graph_metric(std::mt19937_64& rng, std::size_t n, double extra_edge_p) {
    std::vector<std::vector<int>> adj(n);
    for (Index v = 1; v < n; ++v) {
        const Index parent = rng() % v;
        adj[v].push_back(parent);
        adj[parent].push_back(v);
    }
    std::bernoulli_distribution extra(extra_edge_p);
    for (Index u = 0; u < n; ++u)
        for (Index v = u + 1; v < n; ++v)
            if (std::find(adj[u].begin(), adj[u].end(), v) == adj[u].end() && extra(rng)) {
                adj[u].push_back(v);
                adj[v].push_back(u);
            }
    std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
    for (Index s = 0; s < n; ++s) {
        std::vector<int> dist(n, -1);
        std::queue<Index> q;
        dist[s] = 0;
        q.push(s);
        while (!q.empty()) {
            const Index u = q.front();
            q.pop();
            for (int v : adj[u])
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    q.push(v);
                }
        }
        for (Index t = 0; t < n; ++t) d[s][t] = dist[t];
    }
    return FiniteMetricSpace::from_rows(d);
}

/// One of the generators above, chosen at random; sizes in [lo, hi].
inline FiniteMetricSpace random_space(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    const std::size_t n = lo + rng() % (hi - lo + 1);
    switch (rng() % 4) {
    case 0: return random_metric(rng, n, 6, 2);
    case 1: return random_tree_metric(rng, n, 4, 2);
    case 2: return random_graph_metric(rng, n, 0.15);
    default: return random_graph_metric(rng, n, 0.4);
    }
}

inline Subset random_nonempty_subset(std::mt19937_64& rng, std::size_t n) {
    Subset s(n);
    while (s.none())
        for (Index i = 0; i < n; ++i)
            if (rng() % 3 == 0) s.set(i);
    return s;
}

/// Multiples of 1/6 in (0, max]; sums stay in (1/6)Z, so denominators divide 6.
inline Rational random_sixth(std::mt19937_64& rng, std::int64_t max) {
    return Rational(1 + static_cast<std::int64_t>(rng() % (6 * max)), 6);
}

inline FiniteMetricSpace random_sixths_space(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, Rational(0)));
    if (rng() % 3 == 0) {
        for (Index v = 1; v < n; ++v) {
            const Index parent = rng() % v;
            const Rational w = random_sixth(rng, 3);
            for (Index u = 0; u < v; ++u) d[u][v] = d[v][u] = d[u][parent] + w;
        }
        return FiniteMetricSpace::from_rows(d);
    }
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) d[i][j] = d[j][i] = random_sixth(rng, 4);
    for (Index k = 0; k < n; ++k)
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return FiniteMetricSpace::from_rows(d);
}

/// Two hosts sharing a δ-closed A, both cut out of one δ-hyperbolic space H.
/// A subspace containing A keeps A δ-closed, so the hypotheses hold by
/// construction; B2 is shuffled so the correspondence is not the identity.
struct AmalgamInstance {
    FiniteMetricSpace host;
    Subset a; ///< in host indices
    hyperlim::AmalgamSpec spec;
};

inline AmalgamInstance random_amalgam_instance(std::mt19937_64& rng, std::size_t max_total = 12) {
    while (true) {
        const std::size_t n = 3 + rng() % 7;
        auto h = random_sixths_space(rng, n);
        const Rational extra[] = {Rational(0), Rational(1, 6), Rational(1, 2), Rational(1)};
        const Rational delta = hyperlim::min_hyperbolicity(h) + extra[rng() % 4];
        Subset seed(n);
        seed.set(rng() % n);
        if (rng() % 2) seed.set(rng() % n);
        const Subset a = hyperlim::closure(h, seed, delta);
        if (a.all()) continue;
        const Subset rest = ~a;
        Subset s1(n), s2(n);
        while (s1.none() || s2.none()) {
            for (Index i : hyperlim::members(rest)) {
                if (rng() % 2) s1.set(i);
                if (rng() % 2) s2.set(i);
            }
        }
        if (a.count() + s1.count() + s2.count() > max_total) continue;
        const auto b1 = hyperlim::subspace(h, a | s1);
        auto b2 = hyperlim::subspace(h, a | s2);
        std::vector<Index> order(b2.size());
        std::iota(order.begin(), order.end(), Index{0});
        std::shuffle(order.begin(), order.end(), rng);
        b2 = hyperlim::permuted(b2, order);
        hyperlim::AmalgamSpec spec{b1, b2, {}, delta};
        for (Index i : hyperlim::members(a)) spec.correspondence.emplace_back(b1.index_of(h.label(i)), b2.index_of(h.label(i)));
        return {std::move(h), a, std::move(spec)};
    }
}

// ---------------------------------------------------------------------------
// Oracles

/// Four-point condition over all ordered 4-tuples, repetitions included.
inline Rational naive_max_defect(const FiniteMetricSpace& s) {
    Rational worst(0);
    const std::size_t n = s.size();
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b)
            for (Index c = 0; c < n; ++c)
                for (Index e = 0; e < n; ++e) {
                    std::vector<Rational> sums{s.d(a, b) + s.d(c, e), s.d(a, c) + s.d(b, e), s.d(a, e) + s.d(b, c)};
                    std::sort(sums.begin(), sums.end());
                    worst = std::max(worst, sums[2] - sums[1]);
                }
    return worst;
}

/// Points g of A with d(b,a) = d(b,g) + d(g,a) for all a in A.
inline std::vector<Index> gate_candidates(const FiniteMetricSpace& s, const Subset& a, Index b) {
    std::vector<Index> out;
    for (Index g = 0; g < s.size(); ++g) {
        if (!a.test(g)) continue;
        bool ok = true;
        for (Index x = 0; x < s.size() && ok; ++x)
            if (a.test(x)) ok = s.d(b, x) == s.d(b, g) + s.d(g, x);
        if (ok) out.push_back(g);
    }
    return out;
}

/// δ-closedness of A inside the subspace `ambient`, read off the definition.
inline bool naive_closed_in(const FiniteMetricSpace& s, const Subset& a, const Subset& ambient, const Rational& delta) {
    std::map<Index, Index> g;
    for (Index b = 0; b < s.size(); ++b) {
        if (!ambient.test(b) || a.test(b)) continue;
        const auto c = gate_candidates(s, a, b);
        if (c.size() != 1) return false;
        g[b] = c.front();
    }
    for (const auto& [b, gb] : g)
        for (const auto& [b2, gb2] : g) {
            if (b >= b2 || s.d(gb, gb2) <= delta) continue;
            if (s.d(b, b2) != s.d(b, gb) + s.d(gb, gb2) + s.d(gb2, b2)) return false;
        }
    return true;
}

inline bool naive_closed(const FiniteMetricSpace& s, const Subset& a, const Rational& delta) {
    Subset all(s.size());
    all.set();
    return naive_closed_in(s, a, all, delta);
}

/// Every δ-closed subset of a small space.
inline std::vector<Subset> all_closed_subsets(const FiniteMetricSpace& s, const Rational& delta) {
    std::vector<Subset> out;
    const std::size_t n = s.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        Subset a(n, mask);
        if (naive_closed(s, a, delta)) out.push_back(a);
    }
    return out;
}

/// Intersection of all δ-closed supersets.
inline Subset closure_oracle(const std::vector<Subset>& closed, const Subset& a) {
    Subset out(a.size());
    out.set();
    for (const auto& c : closed)
        if (a.is_subset_of(c)) out &= c;
    return out;
}

/// Cross distance of the glued space computed as min over a in A of
/// d1(x,a) + d2(a,y), with x in B1 and y in B2 given by host indices.
inline Rational routed_distance(const hyperlim::AmalgamSpec& spec, Index x, Index y) {
    std::optional<Rational> best;
    for (const auto& [a1, a2] : spec.correspondence) {
        const Rational v = spec.b1.d(x, a1) + spec.b2.d(a2, y);
        if (!best || v < *best) best = v;
    }
    return *best;
}

/// Isometry test by trying every permutation.
inline bool naive_isometric(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    if (x.size() != y.size()) return false;
    std::vector<Index> p(x.size());
    std::iota(p.begin(), p.end(), Index{0});
    do {
        bool ok = true;
        for (Index i = 0; i < x.size() && ok; ++i)
            for (Index j = 0; j < x.size() && ok; ++j) ok = x.d(i, j) == y.d(p[i], p[j]);
        if (ok) return true;
    } while (std::next_permutation(p.begin(), p.end()));
    return false;
}

/// Isometry classes of δ-hyperbolic metrics on up to max_size points with
/// distances from `values`, by listing every symmetric matrix.
inline std::vector<FiniteMetricSpace> enumeration_oracle(const std::vector<Rational>& values, std::size_t max_size,
                                                         const Rational& delta, bool graph_only) {
    std::vector<FiniteMetricSpace> classes;
    for (std::size_t n = 1; n <= max_size; ++n) {
        const std::size_t pairs = n * (n - 1) / 2;
        std::vector<std::size_t> digit(pairs, 0);
        while (true) {
            std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, Rational(0)));
            std::size_t k = 0;
            for (Index i = 0; i < n; ++i)
                for (Index j = i + 1; j < n; ++j, ++k) d[i][j] = d[j][i] = values[digit[k]];
            const auto s = FiniteMetricSpace::from_rows(d);
            bool ok = hyperlim::validate_metric(s).valid() && naive_max_defect(s) <= 2 * delta;
            if (ok && graph_only) {
                // Unit-edge graph: shortest paths over the d = 1 pairs must reproduce d.
                for (Index i = 0; i < n && ok; ++i)
                    for (Index j = 0; j < n && ok; ++j) {
                        std::vector<int> dist(n, -1);
                        std::queue<Index> q;
                        dist[i] = 0;
                        q.push(i);
                        while (!q.empty()) {
                            Index u = q.front();
                            q.pop();
                            for (Index v = 0; v < n; ++v)
                                if (dist[v] < 0 && s.d(u, v) == 1) {
                                    dist[v] = dist[u] + 1;
                                    q.push(v);
                                }
                        }
                        ok = dist[j] >= 0 && Rational(dist[j]) == s.d(i, j);
                    }
            }
            if (ok && std::none_of(classes.begin(), classes.end(), [&](const auto& c) { return naive_isometric(c, s); })) {
                classes.push_back(s);
            }
            std::size_t pos = 0;
            while (pos < pairs && ++digit[pos] == values.size()) digit[pos++] = 0;
            if (pos == pairs) break;
        }
    }
    return classes;
}

/// Up to `want` pairwise disjoint δ-closed sets, each the closure of one or
/// two random points and at most `max_set` large.
inline std::vector<Subset> disjoint_closed_family(std::mt19937_64& rng, const FiniteMetricSpace& s,
                                                  const Rational& delta, std::size_t want, std::size_t max_set,
                                                  std::size_t attempts = 400) {
    std::vector<Subset> family;
    Subset used(s.size());
    for (std::size_t t = 0; t < attempts && family.size() < want; ++t) {
        Subset seed(s.size());
        seed.set(rng() % s.size());
        if (rng() % 2) seed.set(rng() % s.size());
        if ((seed & used).any()) continue;
        Subset c;
        try {
            c = hyperlim::closure(s, seed, delta, 20000);
        } catch (const hyperlim::ResourceError&) {
            continue;
        }
        if (c.count() > max_set || (c & used).any()) continue;
        used |= c;
        family.push_back(c);
    }
    return family;
}

} // namespace testing_support
