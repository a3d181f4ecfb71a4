#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "hyperlim/gates.hpp"
#include "hyperlim/hyperbolicity.hpp"
#include "hyperlim/space_io.hpp"

namespace hyperlim {

/// Pairs {x,y} with d(x,y) in R and {x,y} δ-closed in the ambient space.
struct ERGraph {
    std::size_t vertex_count = 0;
    Rational delta;
    std::vector<Rational> lengths; ///< R, ascending
    std::vector<std::pair<Index, Index>> edges;

    std::vector<std::vector<Index>> adjacency() const {
        std::vector<std::vector<Index>> adj(vertex_count);
        for (const auto& [u, v] : edges) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        return adj;
    }
};

inline ERGraph er_graph(const FiniteMetricSpace& space, const Rational& delta, std::vector<Rational> lengths) {
    if (delta < 0) throw InputError("delta must be nonnegative");
    std::sort(lengths.begin(), lengths.end());
    lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
    for (const auto& r : lengths) {
        if (r <= delta) throw InputError("edge length " + to_string(r) + " is not greater than delta " + to_string(delta));
    }
    ERGraph g{space.size(), delta, std::move(lengths), {}};
    for (Index x = 0; x < space.size(); ++x) {
        for (Index y = x + 1; y < space.size(); ++y) {
            if (!std::binary_search(g.lengths.begin(), g.lengths.end(), space.d(x, y))) continue;
            Subset pair = space.singleton(x);
            pair.set(y);
            if (is_delta_closed(space, pair, delta).verdict) g.edges.emplace_back(x, y);
        }
    }
    return g;
}

namespace detail {

inline std::vector<Index> tree_path(const std::vector<std::vector<Index>>& adj, Index from, Index to) {
    std::vector<std::optional<Index>> parent(adj.size());
    std::vector<bool> seen(adj.size(), false);
    std::queue<Index> todo;
    todo.push(from);
    seen[from] = true;
    while (!todo.empty()) {
        const Index u = todo.front();
        todo.pop();
        if (u == to) break;
        for (Index v : adj[u]) {
            if (!seen[v]) {
                seen[v] = true;
                parent[v] = u;
                todo.push(v);
            }
        }
    }
    std::vector<Index> path{to};
    while (path.back() != from) path.push_back(*parent[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace detail

struct ForestResult {
    bool forest = true;
    std::vector<Index> cycle; ///< closed walk x0 ... xk x0 when not a forest
};

inline ForestResult is_forest(const ERGraph& graph) {
    std::vector<Index> root(graph.vertex_count);
    std::iota(root.begin(), root.end(), Index{0});
    auto find = [&](Index x) {
        while (root[x] != x) x = root[x] = root[root[x]];
        return x;
    };
    std::vector<std::vector<Index>> adj(graph.vertex_count);
    for (const auto& [u, v] : graph.edges) {
        const Index ru = find(u), rv = find(v);
        if (ru == rv) {
            ForestResult r{false, detail::tree_path(adj, u, v)};
            r.cycle.push_back(u);
            return r;
        }
        root[ru] = rv;
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    return {};
}

/// Vertex sets of the connected components with at least one edge.
inline std::vector<Subset> nontrivial_components(const ERGraph& graph) {
    const auto adj = graph.adjacency();
    std::vector<bool> seen(graph.vertex_count, false);
    std::vector<Subset> out;
    for (Index s = 0; s < graph.vertex_count; ++s) {
        if (seen[s] || adj[s].empty()) continue;
        Subset comp(graph.vertex_count);
        std::vector<Index> stack{s};
        seen[s] = true;
        while (!stack.empty()) {
            const Index u = stack.back();
            stack.pop_back();
            comp.set(u);
            for (Index v : adj[u]) {
                if (!seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
            }
        }
        out.push_back(std::move(comp));
    }
    return out;
}

struct GeodeticReport {
    std::size_t paths_checked = 0;
    std::size_t components_checked = 0;
    std::optional<std::vector<Index>> non_geodetic_path;
    std::optional<Subset> non_closed_component;

    bool passed() const { return !non_geodetic_path && !non_closed_component; }
};

/// In a forest, every path between two vertices of a component is geodetic
/// in the ambient metric and every component is δ-closed.
inline GeodeticReport geodetic_paths_check(const FiniteMetricSpace& space, const ERGraph& graph) {
    if (!is_forest(graph).forest) throw InputError("geodetic_paths_check needs a forest");
    GeodeticReport report;
    const auto adj = graph.adjacency();
    for (const auto& comp : nontrivial_components(graph)) {
        ++report.components_checked;
        const auto verts = members(comp);
        for (std::size_t i = 0; i < verts.size(); ++i) {
            for (std::size_t j = i + 1; j < verts.size(); ++j) {
                auto path = detail::tree_path(adj, verts[i], verts[j]);
                ++report.paths_checked;
                if (!report.non_geodetic_path && !is_geodetic(space, path)) report.non_geodetic_path = path;
            }
        }
        if (!report.non_closed_component && !is_delta_closed(space, comp, graph.delta).verdict) {
            report.non_closed_component = comp;
        }
    }
    return report;
}

/// Edge-list block for a space file: {"lengths": [...], "edges": [[x,y],...]}.
inline Json er_graph_json(const FiniteMetricSpace& space, const ERGraph& g) {
    Json block;
    block["lengths"] = Json::array();
    for (const auto& r : g.lengths) block["lengths"].push_back(to_string(r));
    block["edges"] = Json::array();
    for (const auto& [u, v] : g.edges) block["edges"].push_back({space.label(u), space.label(v)});
    return block;
}

} // namespace hyperlim
