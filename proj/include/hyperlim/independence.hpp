#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hyperlim/amalgam.hpp"
#include "hyperlim/isometry.hpp"
#include "hyperlim/stage.hpp"

namespace hyperlim {

/// Memoised δ-closure inside one fixed space.
class ClosureCache {
public:
    ClosureCache(const FiniteMetricSpace& space, Rational delta) : space_(&space), delta_(delta) {}

    const Subset& operator()(const Subset& s) {
        auto it = cache_.find(s);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(s, closure(*space_, s, delta_)).first->second;
    }

    const FiniteMetricSpace& space() const { return *space_; }
    const Rational& delta() const { return delta_; }

private:
    const FiniteMetricSpace* space_;
    Rational delta_;
    std::map<Subset, Subset> cache_;
};

struct IndependenceQuery {
    Subset a, b, c;
    bool verdict = false;
    std::string reason; ///< why the verdict is false
    FiniteMetricSpace actual;    ///< cl(A∪B∪C)
    FiniteMetricSpace predicted; ///< cl(A∪B) ⊗_{cl(B)} cl(B∪C)
};

/// Is A independent from C over B: does cl(A∪B∪C), read through the identity,
/// carry exactly the canonical-amalgam distances of cl(A∪B) ⊗_{cl(B)} cl(B∪C)?
inline IndependenceQuery indep(ClosureCache& cl, const Subset& a, const Subset& b, const Subset& c) {
    if (b.none()) throw InputError("indep: the base set B must be nonempty");
    const auto& space = cl.space();
    IndependenceQuery q{a, b, c, false, {}, {}, {}};
    const Subset p = cl(a | b);
    const Subset k = cl(b);
    const Subset r = cl(b | c);
    const Subset u = cl(a | b | c);
    q.actual = subspace(space, u);
    if ((k & ~p).any() || (k & ~r).any()) {
        q.reason = "cl(B) is not inside cl(A∪B) and cl(B∪C)";
        return q;
    }

    const auto p_idx = members(p);
    const auto r_idx = members(r);
    AmalgamSpec spec{subspace(space, p), subspace(space, r), {}, cl.delta()};
    for (std::size_t i = 0; i < p_idx.size(); ++i) {
        if (!k.test(p_idx[i])) continue;
        const auto j = std::find(r_idx.begin(), r_idx.end(), p_idx[i]) - r_idx.begin();
        spec.correspondence.emplace_back(i, static_cast<Index>(j));
    }
    const auto amalgam = canonical_amalgam(spec);
    q.predicted = amalgam.space;

    if ((p & r) != k) {
        q.reason = "cl(A∪B) and cl(B∪C) overlap outside cl(B)";
        return q;
    }
    if (u != (p | r)) {
        q.reason = "cl(A∪B∪C) is not cl(A∪B) ∪ cl(B∪C)";
        return q;
    }
    // Amalgam point -> ambient index.
    std::vector<Index> where(amalgam.space.size());
    for (std::size_t i = 0; i < p_idx.size(); ++i) where[amalgam.from_b1[i]] = p_idx[i];
    for (std::size_t j = 0; j < r_idx.size(); ++j) where[amalgam.from_b2[j]] = r_idx[j];
    for (Index i = 0; i < where.size(); ++i) {
        for (Index j = i + 1; j < where.size(); ++j) {
            if (amalgam.space.d(i, j) != space.d(where[i], where[j])) {
                q.reason = "d(" + space.label(where[i]) + "," + space.label(where[j]) + ") is " +
                           to_string(space.d(where[i], where[j])) + ", amalgam gives " + to_string(amalgam.space.d(i, j));
                return q;
            }
        }
    }
    q.verdict = true;
    return q;
}

inline IndependenceQuery indep(const FiniteMetricSpace& space, const Rational& delta, const Subset& a, const Subset& b,
                               const Subset& c) {
    ClosureCache cl(space, delta);
    return indep(cl, a, b, c);
}

// ---------------------------------------------------------------------------
// Independent copies

/// The stage enlarged by a fresh copy of cl(A∪B) glued over cl(B), and the
/// images of A in the copy. A' is independent from everything in the old
/// stage over B.
struct IndependentCopy {
    Stage stage;
    Subset a_copy;                    ///< indexed in `stage`
    std::vector<std::pair<Index, Index>> copy_map; ///< cl(A∪B) point -> image
};

inline IndependentCopy independent_copy(const Stage& stage, ClosureCache& cl, const Subset& a, const Subset& b) {
    const auto& space = stage.space();
    const Subset p = cl(a | b);
    const Subset k = cl(b);
    StepRecord r;
    r.kind = StepRecord::Kind::Copy;
    r.copied = space.labels_of(p);
    r.operand_hash = space_hash(subspace(space, p));
    for (Index i : members(k)) r.map.emplace_back(space.label(i), space.label(i));
    auto applied = apply_step(stage, r, {});
    IndependentCopy out{std::move(applied.stage), Subset(applied.amalgam.space.size()), {}};
    const auto p_idx = members(p);
    for (std::size_t i = 0; i < p_idx.size(); ++i) {
        const Index image = applied.amalgam.from_b2[i];
        out.copy_map.emplace_back(p_idx[i], image);
        if (a.test(p_idx[i])) out.a_copy.set(image);
    }
    return out;
}

inline Subset widen(const Subset& s, std::size_t n) {
    Subset out = s;
    out.resize(n);
    return out;
}

// ---------------------------------------------------------------------------
// Property checks

struct SirOptions {
    std::size_t samples = 500;           ///< (A,B,C,D) queries for items 1-3
    std::size_t constructions = 20;      ///< instances for items 4 and 5
    std::size_t max_set_size = 2;
    std::size_t automorphism_limit = 16;
    std::uint64_t seed = 0;
};

struct SirItem {
    std::string name;
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::size_t positives = 0; ///< instances where the verdict was "independent"
    std::string witness;

    bool passed() const { return violations == 0; }
};

struct SirReport {
    std::vector<SirItem> items; ///< invariance, monotonicity, symmetry, existence, stationarity
    std::size_t amalgamation_steps = 0; ///< used by the existence and stationarity constructions

    bool passed() const {
        for (const auto& i : items)
            if (!i.passed()) return false;
        return true;
    }
};

namespace detail {

inline Subset random_subset(const FiniteMetricSpace& space, std::mt19937_64& rng, std::size_t min_size,
                            std::size_t max_size) {
    Subset s(space.size());
    const std::size_t want = min_size + pick(rng, max_size - min_size + 1);
    for (std::size_t i = 0; i < want; ++i) s.set(pick(rng, space.size()));
    return s;
}

inline std::string describe(const FiniteMetricSpace& space, std::initializer_list<std::pair<const char*, Subset>> sets) {
    std::string out;
    for (const auto& [name, s] : sets) {
        out += std::string(out.empty() ? "" : " ") + name + "={";
        std::string inner;
        for (const auto& l : space.labels_of(s)) inner += (inner.empty() ? "" : ",") + l;
        out += inner + "}";
    }
    return out;
}

inline Subset apply_map(const PartialIsometry& f, const Subset& s) {
    Subset out(s.size());
    for (Index i : members(s)) out.set(*f.apply(i));
    return out;
}

} // namespace detail

/// Is there an isometry cl(A∪B∪C) -> cl(D∪B∪C) fixing B∪C and sending A to D
/// point by point (`a_to_d`)?
inline bool isometric_over(const FiniteMetricSpace& space, const Subset& u1, const Subset& u2, const Subset& fixed,
                           const std::vector<std::pair<Index, Index>>& a_to_d) {
    if (u1.count() != u2.count()) return false;
    const auto x = subspace(space, u1);
    const auto y = subspace(space, u2);
    const auto i1 = members(u1);
    const auto i2 = members(u2);
    auto pos = [](const std::vector<Index>& v, Index i) -> std::optional<Index> {
        auto it = std::find(v.begin(), v.end(), i);
        if (it == v.end()) return std::nullopt;
        return static_cast<Index>(it - v.begin());
    };
    EmbeddingQuery query;
    for (Index f : members(fixed)) {
        auto p = pos(i1, f), q = pos(i2, f);
        if (!p || !q) return false;
        query.fixed.emplace_back(*p, *q);
    }
    for (const auto& [from, to] : a_to_d) {
        auto p = pos(i1, from), q = pos(i2, to);
        if (!p || !q) return false;
        if (std::find(query.fixed.begin(), query.fixed.end(), std::make_pair(*p, *q)) == query.fixed.end()) {
            query.fixed.emplace_back(*p, *q);
        }
    }
    return for_each_embedding(x, y, query, [](const PartialIsometry&) { return true; });
}

/// Samples finite A, B, C, D in the stage and checks the local stationary
/// independence properties: (1) invariance under stage automorphisms,
/// (2) A⫝_B CD iff A⫝_B C and A⫝_{BC} D, (3) symmetry, (4) existence of an
/// independent copy A' with cl(A'∪B) ≅ cl(A∪B), (5) stationarity.
inline SirReport check_sir_properties(const Stage& stage, const SirOptions& opt) {
    const auto& space = stage.space();
    const auto& delta = stage.delta();
    std::mt19937_64 rng(opt.seed);
    ClosureCache cl(space, delta);
    SirReport report;
    for (const char* name : {"invariance", "monotonicity", "symmetry", "existence", "stationarity"}) {
        report.items.emplace_back().name = name;
    }
    auto& inv = report.items[0];
    auto& mono = report.items[1];
    auto& sym = report.items[2];
    auto& exist = report.items[3];
    auto& stat = report.items[4];

    auto autos = isometries(space, space, opt.automorphism_limit + 1);
    std::erase_if(autos, [](const PartialIsometry& f) { return f.is_identity(); });
    if (autos.size() > opt.automorphism_limit) autos.resize(opt.automorphism_limit);

    const std::size_t m = std::max<std::size_t>(1, opt.max_set_size);
    for (std::size_t t = 0; t < opt.samples; ++t) {
        const Subset a = detail::random_subset(space, rng, 0, m);
        const Subset b = detail::random_subset(space, rng, 1, m);
        const Subset c = detail::random_subset(space, rng, 0, m);
        const Subset d = detail::random_subset(space, rng, 0, m);
        const bool abc = indep(cl, a, b, c).verdict;

        ++sym.checked;
        sym.positives += abc;
        if (abc != indep(cl, c, b, a).verdict) {
            ++sym.violations;
            if (sym.witness.empty()) sym.witness = detail::describe(space, {{"A", a}, {"B", b}, {"C", c}});
        }

        ++mono.checked;
        const bool whole = indep(cl, a, b, c | d).verdict;
        const bool split = abc && indep(cl, a, b | c, d).verdict;
        mono.positives += whole;
        if (whole != split) {
            ++mono.violations;
            if (mono.witness.empty()) mono.witness = detail::describe(space, {{"A", a}, {"B", b}, {"C", c}, {"D", d}});
        }

        for (const auto& f : autos) {
            ++inv.checked;
            inv.positives += abc;
            const bool moved = indep(cl, detail::apply_map(f, a), detail::apply_map(f, b), detail::apply_map(f, c)).verdict;
            if (moved != abc) {
                ++inv.violations;
                if (inv.witness.empty()) inv.witness = detail::describe(space, {{"A", a}, {"B", b}, {"C", c}});
            }
        }
    }

    for (std::size_t t = 0; t < opt.constructions; ++t) {
        const Subset a = detail::random_subset(space, rng, 1, m);
        const Subset b = detail::random_subset(space, rng, 1, m);
        const Subset c = detail::random_subset(space, rng, 0, m);

        // (4): one amalgamation yields A'.
        auto first = independent_copy(stage, cl, a, b);
        report.amalgamation_steps += 1;
        const std::size_t n1 = first.stage.space().size();
        ClosureCache cl1(first.stage.space(), delta);
        const Subset b1 = widen(b, n1), c1 = widen(c, n1);
        const Subset ab_copy = cl1(first.a_copy | b1);
        Subset expected(n1);
        for (const auto& [from, to] : first.copy_map) expected.set(to);
        ++exist.checked;
        const bool copy_closed = ab_copy == expected;
        const bool copy_indep = indep(cl1, first.a_copy, b1, c1).verdict;
        exist.positives += copy_indep;
        if (!copy_closed || !copy_indep) {
            ++exist.violations;
            if (exist.witness.empty()) exist.witness = detail::describe(space, {{"A", a}, {"B", b}, {"C", c}});
        }

        // (5): a second independent copy A''; closures over B∪C must agree.
        auto second = independent_copy(first.stage, cl1, widen(a, n1), b1);
        report.amalgamation_steps += 1;
        const std::size_t n2 = second.stage.space().size();
        ClosureCache cl2(second.stage.space(), delta);
        const Subset a1 = widen(first.a_copy, n2), a2 = second.a_copy;
        const Subset b2 = widen(b, n2), c2 = widen(c, n2);
        ++stat.checked;
        const bool both_indep = indep(cl2, a1, b2, c2).verdict && indep(cl2, a2, b2, c2).verdict;
        std::vector<std::pair<Index, Index>> a_pairs; // A' point -> A'' point
        for (const auto& [orig, img1] : first.copy_map) {
            if (!a.test(orig)) continue;
            for (const auto& [orig2, img2] : second.copy_map) {
                if (orig2 == orig) a_pairs.emplace_back(img1, img2);
            }
        }
        const bool same = isometric_over(second.stage.space(), cl2(a1 | b2 | c2), cl2(a2 | b2 | c2), b2 | c2, a_pairs);
        stat.positives += both_indep;
        if (!both_indep || !same) {
            ++stat.violations;
            if (stat.witness.empty()) stat.witness = detail::describe(space, {{"A", a}, {"B", b}, {"C", c}});
        }
    }
    return report;
}

} // namespace hyperlim
