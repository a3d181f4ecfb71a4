#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyperlim/gates.hpp"
#include "hyperlim/space_io.hpp"

namespace hyperlim {

/// Gate sets of two disjoint δ-closed subsets, with the invariants that
/// hold for such a pair re-checked on construction.
struct GateSetPair {
    Subset a, b;
    Subset gates_in_a; ///< G_A(B) = { g_A(y) : y in B }
    Subset gates_in_b; ///< G_B(A)
    Rational distance; ///< d(A,B), the minimum over A×B
    std::vector<std::string> violations;

    bool invariants_hold() const { return violations.empty(); }
};

namespace detail {

inline void require_disjoint_closed(const FiniteMetricSpace& space, const std::vector<const Subset*>& sets,
                                    const Rational& delta) {
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (sets[i]->none()) throw PreconditionError("projection sets must be nonempty");
        if (!is_delta_closed(space, *sets[i], delta).verdict) {
            throw PreconditionError("projection set {" + [&] {
                std::string s;
                for (const auto& l : space.labels_of(*sets[i])) s += (s.empty() ? "" : ",") + l;
                return s;
            }() + "} is not delta-closed");
        }
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            if ((*sets[i] & *sets[j]).any()) throw PreconditionError("projection sets must be pairwise disjoint");
        }
    }
}

inline Subset gate_image(const FiniteMetricSpace& space, const Subset& onto, const Subset& from) {
    const auto gates = gate_map(space, onto);
    Subset out(space.size());
    for (Index x : members(from)) out.set(*gates[x]);
    return out;
}

} // namespace detail

inline GateSetPair gate_set(const FiniteMetricSpace& space, const Subset& a, const Subset& b, const Rational& delta) {
    detail::require_disjoint_closed(space, {&a, &b}, delta);
    GateSetPair out{a, b, detail::gate_image(space, a, b), detail::gate_image(space, b, a), set_distance(space, a, b), {}};

    const auto to_a = gate_map(space, a);
    const auto to_b = gate_map(space, b);
    if (diameter(space, out.gates_in_a) > delta) out.violations.push_back("diam G_A(B) exceeds delta");
    if (diameter(space, out.gates_in_b) > delta) out.violations.push_back("diam G_B(A) exceeds delta");
    for (Index x : members(out.gates_in_a)) {
        if (space.d(x, *to_b[x]) != out.distance) out.violations.push_back("d(a, g_B(a)) differs from d(A,B)");
    }
    for (Index y : members(out.gates_in_b)) {
        if (space.d(y, *to_a[y]) != out.distance) out.violations.push_back("d(b, g_A(b)) differs from d(A,B)");
    }
    // a -> g_B(a) on G_A(B): onto G_B(A) and distance-preserving.
    Subset image(space.size());
    const auto ga = members(out.gates_in_a);
    for (Index x : ga) image.set(*to_b[x]);
    if (image != out.gates_in_b || image.count() != ga.size()) out.violations.push_back("gate map is not a bijection");
    for (Index x : ga) {
        for (Index y : ga) {
            if (space.d(x, y) != space.d(*to_b[x], *to_b[y])) out.violations.push_back("gate map is not isometric");
        }
    }
    if (detail::gate_image(space, a, out.gates_in_b) != out.gates_in_a) {
        out.violations.push_back("G_A(B) differs from the gates of G_B(A)");
    }
    if (detail::gate_image(space, b, out.gates_in_a) != out.gates_in_b) {
        out.violations.push_back("G_B(A) differs from the gates of G_A(B)");
    }
    return out;
}

/// diam(G_Y(X) ∪ G_Y(Z)).
inline Rational proj_distance(const FiniteMetricSpace& space, const Subset& y, const Subset& x, const Subset& z,
                              const Rational& delta) {
    detail::require_disjoint_closed(space, {&x, &y, &z}, delta);
    return diameter(space, detail::gate_image(space, y, x) | detail::gate_image(space, y, z));
}

struct BetweenReport {
    Rational projection;      ///< d^π_Y(X,Z)
    Rational direct;          ///< d(X,Z)
    Rational via;             ///< d(X,Y) + d(Y,Z) + δ
    bool premise = false;     ///< projection > δ
    bool holds = true;        ///< premise implies direct > via
};

/// A large projection onto Y forces Y to sit strictly between X and Z.
inline BetweenReport check_between(const FiniteMetricSpace& space, const Subset& x, const Subset& y, const Subset& z,
                                   const Rational& delta) {
    BetweenReport r;
    r.projection = proj_distance(space, y, x, z, delta);
    r.direct = set_distance(space, x, z);
    r.via = set_distance(space, x, y) + set_distance(space, y, z) + delta;
    r.premise = r.projection > delta;
    r.holds = !r.premise || r.direct > r.via;
    return r;
}

/// d^π_Y(X,Z) for every triple of distinct members of a family.
struct ProjectionTable {
    std::vector<Subset> family;
    /// table[y][x][z]; empty when y coincides with x or z.
    std::vector<std::vector<std::vector<std::optional<Rational>>>> table;

    const Rational& at(std::size_t y, std::size_t x, std::size_t z) const { return *table[y][x][z]; }
};

inline ProjectionTable projection_table(const FiniteMetricSpace& space, const std::vector<Subset>& family,
                                        const Rational& delta) {
    std::vector<const Subset*> ptrs;
    for (const auto& s : family) ptrs.push_back(&s);
    detail::require_disjoint_closed(space, ptrs, delta);
    const std::size_t k = family.size();
    ProjectionTable t{family, {}};
    std::vector<Subset> gates(k * k); // gates[y*k+x] = G_Y(X)
    for (std::size_t y = 0; y < k; ++y)
        for (std::size_t x = 0; x < k; ++x)
            if (x != y) gates[y * k + x] = detail::gate_image(space, family[y], family[x]);
    t.table.assign(k, std::vector<std::vector<std::optional<Rational>>>(k, std::vector<std::optional<Rational>>(k)));
    for (std::size_t y = 0; y < k; ++y)
        for (std::size_t x = 0; x < k; ++x)
            for (std::size_t z = 0; z < k; ++z)
                if (x != y && z != y) t.table[y][x][z] = diameter(space, gates[y * k + x] | gates[y * k + z]);
    return t;
}

/// Block appended to a space file: {"family": [...], "table": [y][x][z]}.
inline Json projection_table_json(const FiniteMetricSpace& space, const ProjectionTable& t) {
    Json block;
    block["family"] = Json::array();
    for (const auto& s : t.family) block["family"].push_back(space.labels_of(s));
    block["table"] = Json::array();
    for (const auto& plane : t.table) {
        Json p = Json::array();
        for (const auto& row : plane) {
            Json r = Json::array();
            for (const auto& v : row) r.push_back(v ? Json(to_string(*v)) : Json(nullptr));
            p.push_back(std::move(r));
        }
        block["table"].push_back(std::move(p));
    }
    return block;
}

struct AxiomResult {
    std::string name;
    bool passed = true;
    std::size_t checked = 0;
    std::string witness; ///< first failing instance, as family indices
};

struct Pc4Entry {
    std::size_t x = 0, z = 0;
    std::size_t count = 0; ///< members Y with d^π_Y(X,Z) > δ
    Rational bound;        ///< d(X,Z) / δ
};

struct PcReport {
    std::vector<AxiomResult> axioms; ///< PC1 .. PC4 in order
    std::vector<Pc4Entry> pc4;
    ProjectionTable table;

    bool passed() const {
        for (const auto& a : axioms)
            if (!a.passed) return false;
        return true;
    }
};

/// Verifies the projection complex axioms on a pairwise disjoint family of
/// δ-closed sets (δ > 0), with the quantitative form of PC4: the number of
/// Y with d^π_Y(X,Z) > δ is at most d(X,Z)/δ.
inline PcReport check_pc_axioms(const FiniteMetricSpace& space, const std::vector<Subset>& family, const Rational& delta) {
    if (delta <= 0) throw InputError("projection axioms need delta > 0");
    PcReport report;
    for (const char* name : {"PC1", "PC2", "PC3", "PC4"}) report.axioms.emplace_back().name = name;
    report.table = projection_table(space, family, delta);
    const auto& t = report.table;
    const std::size_t k = family.size();
    auto fail = [](AxiomResult& a, std::string w) {
        if (a.passed) a.witness = std::move(w);
        a.passed = false;
    };
    auto ids = [](std::initializer_list<std::size_t> v) {
        std::string s;
        for (auto i : v) s += (s.empty() ? "" : ",") + std::to_string(i);
        return s;
    };
    for (std::size_t y = 0; y < k; ++y) {
        for (std::size_t x = 0; x < k; ++x) {
            if (x == y) continue;
            for (std::size_t z = 0; z < k; ++z) {
                if (z == y || z == x) continue;
                ++report.axioms[0].checked;
                if (t.at(y, x, z) != t.at(y, z, x)) fail(report.axioms[0], "Y,X,Z=" + ids({y, x, z}));
                ++report.axioms[2].checked;
                if (std::min(t.at(y, x, z), t.at(z, x, y)) > delta) fail(report.axioms[2], "Y,X,Z=" + ids({y, x, z}));
                for (std::size_t w = 0; w < k; ++w) {
                    if (w == y || w == x || w == z) continue;
                    ++report.axioms[1].checked;
                    if (t.at(y, x, z) + t.at(y, z, w) < t.at(y, x, w)) fail(report.axioms[1], "Y,X,Z,W=" + ids({y, x, z, w}));
                }
            }
        }
    }
    for (std::size_t x = 0; x < k; ++x) {
        for (std::size_t z = x + 1; z < k; ++z) {
            Pc4Entry e{x, z, 0, set_distance(space, family[x], family[z]) / delta};
            for (std::size_t y = 0; y < k; ++y) {
                if (y != x && y != z && t.at(y, x, z) > delta) ++e.count;
            }
            ++report.axioms[3].checked;
            if (Rational(static_cast<std::int64_t>(e.count)) > e.bound) fail(report.axioms[3], "X,Z=" + ids({x, z}));
            report.pc4.push_back(e);
        }
    }
    return report;
}

} // namespace hyperlim
