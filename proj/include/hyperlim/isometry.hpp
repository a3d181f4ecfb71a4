#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperlim/metric_space.hpp"

namespace hyperlim {

/// Injective map between point indices of two spaces, stored as (from, to)
/// pairs sorted by `from`.
struct PartialIsometry {
    std::vector<std::pair<Index, Index>> pairs;

    std::size_t size() const { return pairs.size(); }

    std::optional<Index> apply(Index from) const {
        auto it = std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(from, Index{0}));
        if (it == pairs.end() || it->first != from) return std::nullopt;
        return it->second;
    }

    Subset domain(std::size_t n) const {
        Subset s(n);
        for (const auto& p : pairs) s.set(p.first);
        return s;
    }
    Subset codomain(std::size_t n) const {
        Subset s(n);
        for (const auto& p : pairs) s.set(p.second);
        return s;
    }

    PartialIsometry inverse() const {
        PartialIsometry out;
        for (const auto& [a, b] : pairs) out.pairs.emplace_back(b, a);
        out.normalize();
        return out;
    }

    void normalize() { std::sort(pairs.begin(), pairs.end()); }

    bool is_identity() const {
        return std::all_of(pairs.begin(), pairs.end(), [](const auto& p) { return p.first == p.second; });
    }

    friend bool operator==(const PartialIsometry&, const PartialIsometry&) = default;
};

/// Injective and distance-preserving from `from` into `to`.
inline bool preserves_distances(const FiniteMetricSpace& from, const FiniteMetricSpace& to, const PartialIsometry& f) {
    Subset seen_src(from.size()), seen_dst(to.size());
    for (const auto& [a, b] : f.pairs) {
        if (a >= from.size() || b >= to.size() || seen_src.test(a) || seen_dst.test(b)) return false;
        seen_src.set(a);
        seen_dst.set(b);
    }
    for (const auto& [a, b] : f.pairs) {
        for (const auto& [c, e] : f.pairs) {
            if (from.d(a, c) != to.d(b, e)) return false;
        }
    }
    return true;
}

/// Search options for distance-preserving injections.
struct EmbeddingQuery {
    /// Images already fixed, (point of source, point of target).
    std::vector<std::pair<Index, Index>> fixed;
    /// Target points allowed as images of the unfixed source points; empty = all.
    std::optional<Subset> allowed;
};

/// Calls `visit(const PartialIsometry&)` for every distance-preserving
/// injection of `x` into `y` that honours `query`; stops early when visit
/// returns true. Returns whether it stopped early.
template <class Visit>
bool for_each_embedding(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const EmbeddingQuery& query,
                        Visit&& visit) {
    const std::size_t n = x.size();
    std::vector<std::optional<Index>> image(n);
    Subset used(y.size());
    for (const auto& [a, b] : query.fixed) {
        if (image[a] || used.test(b)) return false;
        image[a] = b;
        used.set(b);
    }
    for (const auto& [a, b] : query.fixed) {
        for (const auto& [c, e] : query.fixed) {
            if (x.d(a, c) != y.d(b, e)) return false;
        }
    }
    std::vector<Index> order;
    for (Index i = 0; i < n; ++i) {
        if (!image[i]) order.push_back(i);
    }
    std::vector<Index> assigned;
    for (const auto& [a, b] : query.fixed) assigned.push_back(a);

    auto emit = [&]() {
        PartialIsometry f;
        for (Index i = 0; i < n; ++i) f.pairs.emplace_back(i, *image[i]);
        return visit(static_cast<const PartialIsometry&>(f));
    };
    auto recurse = [&](auto&& self, std::size_t depth) -> bool {
        if (depth == order.size()) return emit();
        const Index a = order[depth];
        for (Index b = 0; b < y.size(); ++b) {
            if (used.test(b)) continue;
            if (query.allowed && !query.allowed->test(b)) continue;
            bool ok = true;
            for (Index c : assigned) {
                if (x.d(a, c) != y.d(b, *image[c])) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            image[a] = b;
            used.set(b);
            assigned.push_back(a);
            const bool stop = self(self, depth + 1);
            assigned.pop_back();
            used.reset(b);
            image[a].reset();
            if (stop) return true;
        }
        return false;
    };
    return recurse(recurse, 0);
}

/// Every distance-preserving bijection from `x` onto `y`.
inline std::vector<PartialIsometry> isometries(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                               std::size_t limit = static_cast<std::size_t>(-1)) {
    std::vector<PartialIsometry> out;
    if (x.size() != y.size()) return out;
    for_each_embedding(x, y, {}, [&](const PartialIsometry& f) {
        out.push_back(f);
        return out.size() >= limit;
    });
    return out;
}

inline bool are_isometric(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    return !isometries(x, y, 1).empty();
}

/// Isometry invariant used to bucket spaces: the lexicographically least
/// upper-triangular distance sequence over all orderings of the points.
/// Factorial cost; intended for the small spaces of a catalog.
inline std::vector<Rational> canonical_key(const FiniteMetricSpace& space) {
    const std::size_t n = space.size();
    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), Index{0});
    std::vector<Rational> best;
    std::vector<Rational> current;
    do {
        current.clear();
        for (Index i = 0; i < n; ++i)
            for (Index j = i + 1; j < n; ++j) current.push_back(space.d(perm[i], perm[j]));
        if (best.empty() || current < best) best = current;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// The points of `space` reordered so that the matrix realises canonical_key.
inline FiniteMetricSpace canonical_form(const FiniteMetricSpace& space) {
    const std::size_t n = space.size();
    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), Index{0});
    std::vector<Index> best_perm = perm;
    std::vector<Rational> best;
    std::vector<Rational> current;
    do {
        current.clear();
        for (Index i = 0; i < n; ++i)
            for (Index j = i + 1; j < n; ++j) current.push_back(space.d(perm[i], perm[j]));
        if (best.empty() || current < best) {
            best = current;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<std::string> labels;
    for (Index i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
    return relabeled(permuted(space, best_perm), std::move(labels));
}

} // namespace hyperlim
