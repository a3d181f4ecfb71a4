#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace hyperlim;
using namespace testing_support;

namespace {

FiniteMetricSpace tripod() { return space({"c", "x", "z"}, {{0, 3, 3}, {3, 0, 6}, {3, 6, 0}}); }

// G_onto(from) straight from the gate equations.
Subset oracle_gate_set(const FiniteMetricSpace& s, const Subset& onto, const Subset& from) {
    Subset out(s.size());
    for (Index b : members(from)) {
        const auto c = gate_candidates(s, onto, b);
        if (onto.test(b)) {
            out.set(b);
        } else {
            EXPECT_EQ(c.size(), 1u);
            out.set(c.front());
        }
    }
    return out;
}

Rational oracle_diameter(const FiniteMetricSpace& s, const Subset& a) {
    Rational best(0);
    for (Index i : members(a))
        for (Index j : members(a)) best = std::max(best, s.d(i, j));
    return best;
}

Rational oracle_set_distance(const FiniteMetricSpace& s, const Subset& a, const Subset& b) {
    Rational best = s.d(a.find_first(), b.find_first());
    for (Index i : members(a))
        for (Index j : members(b)) best = std::min(best, s.d(i, j));
    return best;
}

StageConfig stage_config(Rational delta) {
    StageConfig c;
    c.catalog.delta = delta;
    c.catalog.max_size = 3;
    c.catalog.denominator_bound = 2;
    c.catalog.diameter_bound = Rational(3);
    return c;
}

} // namespace

TEST(GateSet, LineExample) {
    const auto s = line({0, 1, 5, 6});
    const auto g = gate_set(s, subset(s, {"0", "1"}), subset(s, {"5", "6"}), Rational(1));
    EXPECT_EQ(g.gates_in_a, subset(s, {"1"}));
    EXPECT_EQ(g.gates_in_b, subset(s, {"5"}));
    EXPECT_EQ(g.distance, Rational(4));
    EXPECT_TRUE(g.invariants_hold());
}

TEST(GateSet, TripodLeaves) {
    const auto t = tripod();
    const auto g = gate_set(t, subset(t, {"x"}), subset(t, {"z"}), Rational(1));
    EXPECT_EQ(g.gates_in_a, subset(t, {"x"}));
    EXPECT_EQ(g.distance, Rational(6));
}

TEST(GateSet, PreconditionsAreChecked) {
    const auto s = line({0, 1, 5, 6});
    EXPECT_THROW(gate_set(s, subset(s, {"0", "1"}), subset(s, {"1", "5"}), Rational(1)), PreconditionError);
    const auto c = four_cycle();
    EXPECT_THROW(gate_set(c, subset(c, {"v0", "v2"}), subset(c, {"v1"}), Rational(1)), PreconditionError);
    EXPECT_THROW(gate_set(s, Subset(4), subset(s, {"5"}), Rational(1)), PreconditionError);
}

TEST(GateSet, InvariantsOnRandomClosedPairs) {
    std::mt19937_64 rng(41);
    int pairs = 0;
    for (int t = 0; t < 150; ++t) {
        const auto s = random_space(rng, 4, 9);
        const Rational delta = std::max(min_hyperbolicity(s), Rational(static_cast<std::int64_t>(rng() % 4), 2));
        const auto fam = disjoint_closed_family(rng, s, delta, 2, s.size());
        if (fam.size() < 2) continue;
        ++pairs;
        const auto g = gate_set(s, fam[0], fam[1], delta);
        EXPECT_TRUE(g.invariants_hold()) << g.violations.front();
        EXPECT_EQ(g.gates_in_a, oracle_gate_set(s, fam[0], fam[1]));
        EXPECT_EQ(g.gates_in_b, oracle_gate_set(s, fam[1], fam[0]));
        EXPECT_EQ(g.distance, oracle_set_distance(s, fam[0], fam[1]));
        EXPECT_LE(oracle_diameter(s, g.gates_in_a), delta);
        EXPECT_LE(oracle_diameter(s, g.gates_in_b), delta);
        // Interchange: the gates of G_B(A) in A are G_A(B).
        EXPECT_EQ(oracle_gate_set(s, fam[0], g.gates_in_b), g.gates_in_a);
    }
    EXPECT_GT(pairs, 100);
}

TEST(ProjDistance, Examples) {
    const auto s = line({0, 4, 5, 10});
    EXPECT_EQ(proj_distance(s, subset(s, {"4", "5"}), subset(s, {"0"}), subset(s, {"10"}), Rational(1)), Rational(1));
    const auto t = tripod();
    EXPECT_EQ(proj_distance(t, subset(t, {"c"}), subset(t, {"x"}), subset(t, {"z"}), Rational(1)), Rational(0));
}

TEST(Between, Examples) {
    const auto s = line({0, 4, 6, 12});
    const auto r = check_between(s, subset(s, {"0"}), subset(s, {"4", "6"}), subset(s, {"12"}), Rational(1));
    EXPECT_EQ(r.projection, Rational(2));
    EXPECT_TRUE(r.premise);
    EXPECT_EQ(r.direct, Rational(12));
    EXPECT_EQ(r.via, Rational(11));
    EXPECT_TRUE(r.holds);
    const auto vac = check_between(s, subset(s, {"0"}), subset(s, {"4", "6"}), subset(s, {"12"}), Rational(2));
    EXPECT_FALSE(vac.premise);
    EXPECT_TRUE(vac.holds);
}

TEST(PcAxioms, CollinearFamily) {
    const auto s = line({0, 4, 6, 12, 20});
    const std::vector<Subset> fam{subset(s, {"0"}), subset(s, {"4", "6"}), subset(s, {"12"}), subset(s, {"20"})};
    const auto r = check_pc_axioms(s, fam, Rational(1));
    EXPECT_TRUE(r.passed());
    for (const auto& e : r.pc4) {
        if (e.x == 0 && e.z == 3) {
            EXPECT_EQ(e.bound, Rational(20));
            EXPECT_EQ(e.count, 1u);
        }
    }
    EXPECT_THROW(check_pc_axioms(s, fam, Rational(0)), InputError);
}

TEST(PcAxioms, SmallFamiliesPassTrivially) {
    const auto s = line({0, 4, 6});
    const auto r = check_pc_axioms(s, {subset(s, {"0"}), subset(s, {"6"})}, Rational(1));
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.axioms[0].checked, 0u);
    EXPECT_EQ(r.axioms[3].checked, 1u);
}

TEST(PcAxioms, HoldOnFamiliesInsideStages) {
    std::mt19937_64 rng(42);
    int families = 0;
    for (const Rational delta : {Rational(1, 2), Rational(1)}) {
        const auto c = stage_config(delta);
        const auto catalog = stage_catalog(c);
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const auto stage = build_stage(c, catalog, catalog.size() + 10, seed);
            const auto& s = stage.space();
            for (int q = 0; q < 5; ++q) {
                const auto fam = disjoint_closed_family(rng, s, delta, 3 + rng() % 4, 4);
                if (fam.size() < 3) continue;
                ++families;
                const auto r = check_pc_axioms(s, fam, delta);
                for (const auto& a : r.axioms) EXPECT_TRUE(a.passed) << a.name << " " << a.witness;
                // Independent recomputation of the table and of PC4.
                for (std::size_t y = 0; y < fam.size(); ++y)
                    for (std::size_t x = 0; x < fam.size(); ++x)
                        for (std::size_t z = 0; z < fam.size(); ++z) {
                            if (y == x || y == z || x == z) continue;
                            const auto u = oracle_gate_set(s, fam[y], fam[x]) | oracle_gate_set(s, fam[y], fam[z]);
                            ASSERT_EQ(r.table.at(y, x, z), oracle_diameter(s, u));
                        }
                for (const auto& e : r.pc4) {
                    std::size_t count = 0;
                    for (std::size_t y = 0; y < fam.size(); ++y)
                        if (y != e.x && y != e.z && r.table.at(y, e.x, e.z) > delta) ++count;
                    EXPECT_EQ(e.count, count);
                    EXPECT_LE(Rational(static_cast<std::int64_t>(count)), oracle_set_distance(s, fam[e.x], fam[e.z]) / delta);
                }
                for (std::size_t i = 0; i < fam.size(); ++i)
                    for (std::size_t j = i + 1; j < fam.size(); ++j) {
                        EXPECT_TRUE(gate_set(s, fam[i], fam[j], delta).invariants_hold());
                        for (std::size_t k = 0; k < fam.size(); ++k)
                            if (k != i && k != j) {
                                EXPECT_TRUE(check_between(s, fam[i], fam[k], fam[j], delta).holds);
                            }
                    }
            }
        }
    }
    EXPECT_GT(families, 25);
}

TEST(ProjectionTable, JsonBlockShape) {
    const auto s = line({0, 4, 6, 12});
    const std::vector<Subset> fam{subset(s, {"0"}), subset(s, {"4", "6"}), subset(s, {"12"})};
    const auto t = projection_table(s, fam, Rational(1));
    const auto j = projection_table_json(s, t);
    ASSERT_EQ(j["table"].size(), 3u);
    EXPECT_TRUE(j["table"][1][1][1].is_null());
    EXPECT_EQ(j["table"][1][0][2], "2");
    EXPECT_EQ(j["table"][1][2][0], "2");
}
