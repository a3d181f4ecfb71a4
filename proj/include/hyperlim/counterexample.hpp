#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperlim/hyperbolicity.hpp"
#include "hyperlim/metric_space.hpp"

namespace hyperlim {

/// Parameters of the five-point family on {a, b, c, d, e} in which the
/// spaces on {a,c,d,e} and {b,c,d,e} admit no common δ-hyperbolic extension
/// over {c,d,e}.
struct CounterexampleParams {
    Rational delta, x0, x1, z, z0, z1;
};

/// The nine prescribed distances, in the order listed by `distance_names`.
inline std::array<Rational, 9> counterexample_distances(const CounterexampleParams& p) {
    return {p.x0 + p.x1,
            p.z + p.x0,
            p.z + p.x1,
            p.z0,
            p.z0 + p.z + p.x1,
            p.z0 + p.z + p.x0 - 2 * p.delta,
            p.z1,
            p.z1 + p.z + p.x1 - 2 * p.delta,
            p.z1 + p.z + p.x0};
}

inline constexpr std::array<const char*, 9> distance_names{"d(c,d)", "d(e,c)", "d(e,d)", "d(a,e)", "d(a,d)",
                                                          "d(a,c)", "d(b,e)", "d(b,d)", "d(b,c)"};

struct CounterexampleConfig {
    CounterexampleParams params;
    FiniteMetricSpace b1; ///< on a, c, d, e
    FiniteMetricSpace b2; ///< on b, c, d, e
    std::array<Rational, 9> distances;
};

namespace detail {

inline FiniteMetricSpace four_point(const std::string& apex, const Rational& to_c, const Rational& to_d,
                                    const Rational& to_e, const Rational& cd, const Rational& ec, const Rational& ed) {
    return FiniteMetricSpace::from_rows({apex, "c", "d", "e"}, {{0, to_c, to_d, to_e},
                                                                {to_c, 0, cd, ec},
                                                                {to_d, cd, 0, ed},
                                                                {to_e, ec, ed, 0}});
}

inline std::string metric_problem(const FiniteMetricSpace& s) {
    const auto report = validate_metric(s);
    if (report.valid()) return {};
    const auto& v = report.violations.front();
    std::string pts;
    for (Index i : v.points) pts += (pts.empty() ? "" : ",") + s.label(i);
    return std::string(to_string(v.axiom)) + " fails at (" + pts + ")";
}

} // namespace detail

/// Builds both four-point spaces and re-verifies them. Broken positivity,
/// z <= 2δ or a failed metric/hyperbolicity check raise InputError;
/// z0 = z1 raises PreconditionError.
inline CounterexampleConfig build_config(const CounterexampleParams& p) {
    const std::array<std::pair<const char*, const Rational*>, 6> fields{
        {{"delta", &p.delta}, {"x0", &p.x0}, {"x1", &p.x1}, {"z", &p.z}, {"z0", &p.z0}, {"z1", &p.z1}}};
    for (const auto& [name, value] : fields) {
        if (*value <= 0) throw InputError(std::string(name) + " must be positive, got " + to_string(*value));
    }
    if (p.z <= 2 * p.delta) {
        throw InputError("z must exceed 2*delta: z=" + to_string(p.z) + ", 2*delta=" + to_string(2 * p.delta));
    }
    if (p.z0 == p.z1) throw PreconditionError("z0 and z1 must differ, both are " + to_string(p.z0));

    CounterexampleConfig c{p, {}, {}, counterexample_distances(p)};
    const auto& v = c.distances;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] <= 0) throw InputError(std::string(distance_names[i]) + " = " + to_string(v[i]) + " is not positive");
    }
    c.b1 = detail::four_point("a", v[5], v[4], v[3], v[0], v[1], v[2]);
    c.b2 = detail::four_point("b", v[8], v[7], v[6], v[0], v[1], v[2]);
    for (const auto* s : {&c.b1, &c.b2}) {
        const auto problem = detail::metric_problem(*s);
        if (!problem.empty()) throw InputError("space on {" + s->label(0) + ",c,d,e} is not a metric: " + problem);
        if (!is_delta_hyperbolic(*s, p.delta).holds) {
            throw InputError("space on {" + s->label(0) + ",c,d,e} is not " + to_string(p.delta) + "-hyperbolic");
        }
    }
    return c;
}

/// The five-point space with d(a,b) = r; points ordered a, b, c, d, e.
inline FiniteMetricSpace five_point(const CounterexampleConfig& c, const Rational& r) {
    std::vector<std::vector<Rational>> rows(5, std::vector<Rational>(5, Rational(0)));
    auto set = [&](Index i, Index j, const Rational& v) { rows[i][j] = rows[j][i] = v; };
    set(0, 1, r);
    for (Index k = 1; k < 4; ++k) {
        set(0, k + 1, c.b1.d(0, k));
        set(1, k + 1, c.b2.d(0, k));
        for (Index m = k + 1; m < 4; ++m) set(k + 1, m + 1, c.b1.d(k, m));
    }
    return FiniteMetricSpace::from_rows({"a", "b", "c", "d", "e"}, rows);
}

struct AffineCheck {
    std::string inequality;
    Rational lhs_at_lo, rhs_at_lo, lhs_at_hi, rhs_at_hi;
    bool holds = false; ///< strict at both endpoints
};

struct NoAmalgamReport {
    CounterexampleConfig config;
    bool b1_hyperbolic = false, b2_hyperbolic = false;
    Rational lo, hi;            ///< triangle-feasible interval for r = d(a,b)
    bool interval_empty = false;
    std::array<AffineCheck, 2> affine;
    std::int64_t grid_denominator = 0;
    std::size_t grid_points = 0;
    std::optional<Rational> admissible_r; ///< any r the scan accepted
    QuadrupleWitness witness;            ///< (a,b,c,d) at r = lo

    /// The certificate: the analytic check and the scan agree that no r works.
    bool no_admissible_r() const {
        return !admissible_r && (interval_empty || (affine[0].holds && affine[1].holds));
    }
};

/// Shows that no value of d(a,b) makes {a,b,c,d,e} a δ-hyperbolic metric.
///
/// Triangle inequalities through c, d, e confine r to [lo, hi]. On that
/// interval d(a,d)+d(b,c) beats both d(a,b)+d(c,d) and d(a,c)+d(b,d) by more
/// than 2δ; both sides are affine in r, so the endpoints decide. Every r in
/// [lo, hi] with denominator `grid_denominator`, plus lo and hi, is then
/// tested directly.
inline NoAmalgamReport verify_no_amalgam(const CounterexampleParams& params, std::int64_t grid_denominator) {
    if (grid_denominator <= 0) throw InputError("grid denominator must be positive");
    NoAmalgamReport rep;
    rep.config = build_config(params);
    const auto& c = rep.config;
    const auto& delta = params.delta;
    rep.b1_hyperbolic = is_delta_hyperbolic(c.b1, delta).holds;
    rep.b2_hyperbolic = is_delta_hyperbolic(c.b2, delta).holds;
    rep.grid_denominator = grid_denominator;

    rep.lo = abs(c.b1.d(0, 1) - c.b2.d(0, 1));
    rep.hi = c.b1.d(0, 1) + c.b2.d(0, 1);
    for (Index w = 2; w < 4; ++w) {
        rep.lo = std::max(rep.lo, abs(c.b1.d(0, w) - c.b2.d(0, w)));
        rep.hi = std::min(rep.hi, c.b1.d(0, w) + c.b2.d(0, w));
    }
    rep.interval_empty = rep.lo > rep.hi;

    // B1/B2 point order is (apex, c, d, e).
    const Rational ad = c.b1.d(0, 2), ac = c.b1.d(0, 1), bc = c.b2.d(0, 1), bd = c.b2.d(0, 2), cd = c.b1.d(1, 2);
    const Rational lhs = ad + bc;
    rep.affine[0] = {"d(a,d)+d(b,c) > d(a,b)+d(c,d)+2delta", lhs, rep.lo + cd + 2 * delta, lhs, rep.hi + cd + 2 * delta};
    rep.affine[1] = {"d(a,d)+d(b,c) > d(a,c)+d(b,d)+2delta", lhs, ac + bd + 2 * delta, lhs, ac + bd + 2 * delta};
    for (auto& a : rep.affine) a.holds = a.lhs_at_lo > a.rhs_at_lo && a.lhs_at_hi > a.rhs_at_hi;

    auto admissible = [&](const Rational& r) {
        const auto s = five_point(c, r);
        return validate_metric(s).valid() && is_delta_hyperbolic(s, delta).holds;
    };
    auto scan = [&](const Rational& r) {
        ++rep.grid_points;
        if (!rep.admissible_r && admissible(r)) rep.admissible_r = r;
    };
    if (!rep.interval_empty) {
        rep.witness = quadruple(five_point(c, rep.lo), 0, 1, 2, 3);
        scan(rep.lo);
        // First grid point strictly above lo.
        const Rational start = rep.lo * grid_denominator;
        std::int64_t k = start.numerator() / start.denominator() + 1;
        for (; Rational(k, grid_denominator) < rep.hi; ++k) scan(Rational(k, grid_denominator));
        if (rep.hi != rep.lo) scan(rep.hi);
    }
    return rep;
}

/// "x0,x1,z,z0,z1" with rationals in either form.
inline CounterexampleParams parse_counterexample_params(const Rational& delta, const std::string& list) {
    std::vector<Rational> v;
    std::string cur;
    for (char ch : list + ",") {
        if (ch == ',') {
            v.push_back(parse_rational(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (v.size() != 5) throw InputError("expected five parameters x0,x1,z,z0,z1, got " + std::to_string(v.size()));
    return {delta, v[0], v[1], v[2], v[3], v[4]};
}

} // namespace hyperlim
