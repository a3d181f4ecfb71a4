#pragma once

#include <optional>
#include <vector>

#include "hyperlim/metric_space.hpp"

namespace hyperlim {

struct GateResult {
    Index base = 0;
    Subset subset;
    /// The unique g in the subset with d(b,a) = d(b,g) + d(g,a) for all a, if any.
    std::optional<Index> gate;
};

namespace detail {

inline void require_nonempty(const Subset& a, const char* op) {
    if (a.none()) throw InputError(std::string(op) + ": the empty set is not gated");
}

inline std::optional<Index> find_gate(const FiniteMetricSpace& space, const std::vector<Index>& a_members,
                                      const Subset& a, Index b) {
    if (a.test(b)) return b;
    // A gate is the unique closest point, so a tie at the minimum rules it out.
    std::optional<Index> best;
    bool tie = false;
    for (Index x : a_members) {
        if (!best || space.d(b, x) < space.d(b, *best)) {
            best = x;
            tie = false;
        } else if (space.d(b, x) == space.d(b, *best)) {
            tie = true;
        }
    }
    if (!best || tie) return std::nullopt;
    const Rational& to_gate = space.d(b, *best);
    for (Index x : a_members) {
        if (space.d(b, x) != to_gate + space.d(*best, x)) return std::nullopt;
    }
    return best;
}

} // namespace detail

inline GateResult gate(const FiniteMetricSpace& space, const Subset& a, Index b) {
    detail::require_nonempty(a, "gate");
    return {b, a, detail::find_gate(space, members(a), a, b)};
}

/// Gate of every point of the space (points of `a` are their own gate).
inline std::vector<std::optional<Index>> gate_map(const FiniteMetricSpace& space, const Subset& a) {
    detail::require_nonempty(a, "gate_map");
    const auto a_members = members(a);
    std::vector<std::optional<Index>> out(space.size());
    for (Index b = 0; b < space.size(); ++b) out[b] = detail::find_gate(space, a_members, a, b);
    return out;
}

struct GatedResult {
    bool gated = true;
    std::optional<Index> witness; ///< first outside point without a gate
};

inline GatedResult is_gated(const FiniteMetricSpace& space, const Subset& a) {
    detail::require_nonempty(a, "is_gated");
    const auto a_members = members(a);
    for (Index b = 0; b < space.size(); ++b) {
        if (!detail::find_gate(space, a_members, a, b)) return {false, b};
    }
    return {};
}

enum class ClosednessFailure {
    NoGate,         ///< `point` has no gate in the subset
    NoDecomposition ///< gates of `point`, `other` are > δ apart but d does not route through them
};

struct ClosednessWitness {
    ClosednessFailure kind;
    Index point = 0;
    Index other = 0;
};

struct ClosednessReport {
    Subset subset;
    Rational delta;
    bool verdict = true;
    std::optional<ClosednessWitness> witness; ///< present iff verdict is false
};

namespace detail {

// δ-closedness of `a` inside the subspace `ambient` (which must contain `a`).
inline ClosednessReport closedness(const FiniteMetricSpace& space, const Subset& a, const Subset& ambient,
                                   const Rational& delta) {
    ClosednessReport report{a, delta, true, std::nullopt};
    const auto a_members = members(a);
    std::vector<Index> outside;
    std::vector<Index> gates;
    for (auto b = ambient.find_first(); b != Subset::npos; b = ambient.find_next(b)) {
        if (a.test(b)) continue;
        auto g = find_gate(space, a_members, a, b);
        if (!g) {
            report.verdict = false;
            report.witness = ClosednessWitness{ClosednessFailure::NoGate, b, b};
            return report;
        }
        outside.push_back(b);
        gates.push_back(*g);
    }
    for (std::size_t i = 0; i < outside.size(); ++i) {
        for (std::size_t j = i + 1; j < outside.size(); ++j) {
            const Rational& between = space.d(gates[i], gates[j]);
            if (between <= delta) continue;
            const Index b = outside[i];
            const Index c = outside[j];
            if (space.d(b, c) != space.d(b, gates[i]) + between + space.d(gates[j], c)) {
                report.verdict = false;
                report.witness = ClosednessWitness{ClosednessFailure::NoDecomposition, b, c};
                return report;
            }
        }
    }
    return report;
}

} // namespace detail

inline ClosednessReport is_delta_closed(const FiniteMetricSpace& space, const Subset& a, const Rational& delta) {
    detail::require_nonempty(a, "is_delta_closed");
    if (delta < 0) throw InputError("delta must be nonnegative");
    return detail::closedness(space, a, space.full_subset(), delta);
}

/// Is `a` δ-closed in the subspace `ambient`? Requires a ⊆ ambient.
inline ClosednessReport is_delta_closed_in(const FiniteMetricSpace& space, const Subset& a, const Subset& ambient,
                                           const Rational& delta) {
    detail::require_nonempty(a, "is_delta_closed_in");
    if (!a.is_subset_of(ambient)) throw InputError("is_delta_closed_in: subset is not inside the ambient set");
    return detail::closedness(space, a, ambient, delta);
}

/// Re-derives a negative verdict from its witness.
inline bool witness_confirms(const FiniteMetricSpace& space, const ClosednessReport& report) {
    if (report.verdict) return !report.witness.has_value();
    if (!report.witness) return false;
    const auto& w = *report.witness;
    const auto a_members = members(report.subset);
    auto g = detail::find_gate(space, a_members, report.subset, w.point);
    if (w.kind == ClosednessFailure::NoGate) return !g.has_value();
    auto h = detail::find_gate(space, a_members, report.subset, w.other);
    if (!g || !h || report.subset.test(w.point) || report.subset.test(w.other)) return false;
    return space.d(*g, *h) > report.delta &&
           space.d(w.point, w.other) != space.d(w.point, *g) + space.d(*g, *h) + space.d(*h, w.other);
}

/// Least superset containing every b with (a1, b, a2) geodetic for a1, a2 in it.
inline Subset convex_closure(const FiniteMetricSpace& space, const Subset& a) {
    detail::require_nonempty(a, "convex_closure");
    Subset current = a;
    bool grew = true;
    while (grew) {
        grew = false;
        const auto inside = members(current);
        for (Index b = 0; b < space.size(); ++b) {
            if (current.test(b)) continue;
            bool between = false;
            for (std::size_t i = 0; i < inside.size() && !between; ++i) {
                for (std::size_t j = i + 1; j < inside.size() && !between; ++j) {
                    between = space.d(inside[i], inside[j]) ==
                              space.d(inside[i], b) + space.d(b, inside[j]);
                }
            }
            if (between) {
                current.set(b);
                grew = true;
            }
        }
    }
    return current;
}

namespace detail {

// Adds every b that lies in all δ-closed supersets of `s` because no point
// could serve as its gate in such a superset, then re-convexifies.
inline Subset forced_closure(const FiniteMetricSpace& space, Subset s) {
    bool grew = true;
    while (grew) {
        grew = false;
        s = convex_closure(space, s);
        const auto inside = members(s);
        for (Index b = 0; b < space.size(); ++b) {
            if (s.test(b)) continue;
            bool has_candidate = false;
            for (Index g = 0; g < space.size() && !has_candidate; ++g) {
                if (g == b) continue;
                bool ok = true;
                for (Index a : inside) {
                    if (space.d(b, a) != space.d(b, g) + space.d(g, a)) {
                        ok = false;
                        break;
                    }
                }
                has_candidate = ok;
            }
            if (!has_candidate) {
                s.set(b);
                grew = true;
            }
        }
    }
    return s;
}

template <class Visit>
bool for_each_combination(const std::vector<Index>& pool, std::size_t k, Visit&& visit) {
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
        if (visit(pick)) return true;
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == pool.size() - k + (i - 1)) --i;
        if (i == 0) return false;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
}

} // namespace detail

inline constexpr std::size_t kDefaultClosureWorkLimit = 2'000'000;

/// Smallest δ-closed superset of `a`.
///
/// Seeds with points every δ-closed superset must contain, then scans
/// supersets of the seed in increasing size; δ-closed sets containing a
/// common point are closed under intersection, so the first hit is the
/// closure. Throws ResourceError after `work_limit` candidate checks.
inline Subset closure(const FiniteMetricSpace& space, const Subset& a, const Rational& delta,
                      std::size_t work_limit = kDefaultClosureWorkLimit) {
    detail::require_nonempty(a, "closure");
    if (delta < 0) throw InputError("delta must be nonnegative");
    const Subset seed = detail::forced_closure(space, a);
    if (is_delta_closed(space, seed, delta).verdict) return seed;
    std::vector<Index> pool;
    for (Index b = 0; b < space.size(); ++b) {
        if (!seed.test(b)) pool.push_back(b);
    }
    std::size_t work = 0;
    for (std::size_t k = 1; k <= pool.size(); ++k) {
        Subset found;
        const bool hit = detail::for_each_combination(pool, k, [&](const std::vector<std::size_t>& pick) {
            if (++work > work_limit) {
                throw ResourceError("closure search exceeded work limit of " + std::to_string(work_limit));
            }
            Subset candidate = seed;
            for (auto p : pick) candidate.set(pool[p]);
            if (detail::closedness(space, candidate, space.full_subset(), delta).verdict) {
                found = std::move(candidate);
                return true;
            }
            return false;
        });
        if (hit) return found;
    }
    return space.full_subset(); // unreachable: the whole space is δ-closed
}

/// Hypothesis of the strong-union lemma: A∩B nonempty and the closed δ-ball
/// around A∩B meets A∪B only inside A∩B.
inline bool strong_union_hypothesis(const FiniteMetricSpace& space, const Subset& a, const Subset& b,
                                    const Rational& delta) {
    const Subset common = a & b;
    if (common.none()) return false;
    const Subset either = a | b;
    for (Index x : members(either)) {
        if (common.test(x)) continue;
        for (Index c : members(common)) {
            if (space.d(x, c) <= delta) return false;
        }
    }
    return true;
}

} // namespace hyperlim
