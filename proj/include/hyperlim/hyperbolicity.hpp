#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hyperlim/metric_space.hpp"

namespace hyperlim {

/// Four points with their three pair sums. `defect` is the largest sum minus
/// the middle one; the four-point condition asks for defect <= 2δ.
struct QuadrupleWitness {
    std::array<Index, 4> points{};
    Rational e, f, g;
    Rational defect;
};

inline QuadrupleWitness quadruple(const FiniteMetricSpace& space, Index x1, Index x2, Index x3, Index x4) {
    QuadrupleWitness w;
    w.points = {x1, x2, x3, x4};
    w.e = space.d(x1, x2) + space.d(x3, x4);
    w.f = space.d(x1, x3) + space.d(x2, x4);
    w.g = space.d(x1, x4) + space.d(x2, x3);
    std::array<Rational, 3> sums{w.e, w.f, w.g};
    std::sort(sums.begin(), sums.end());
    w.defect = sums[2] - sums[1];
    return w;
}

/// Recomputes the sums from the matrix and compares with the stored ones.
inline bool witness_consistent(const FiniteMetricSpace& space, const QuadrupleWitness& w) {
    const auto fresh = quadruple(space, w.points[0], w.points[1], w.points[2], w.points[3]);
    return fresh.e == w.e && fresh.f == w.f && fresh.g == w.g && fresh.defect == w.defect && w.defect >= 0;
}

namespace detail {

// Quadruples with a repeated point have defect 0 by the triangle inequality,
// so only 4-subsets are visited.
template <class Visit>
void for_each_quadruple(const FiniteMetricSpace& space, Visit&& visit) {
    const std::size_t n = space.size();
    for (Index a = 0; a < n; ++a)
        for (Index b = a + 1; b < n; ++b)
            for (Index c = b + 1; c < n; ++c)
                for (Index d = c + 1; d < n; ++d)
                    visit(a, b, c, d);
}

// The matrix times the lcm of its denominators, when that fits comfortably
// in int64 (sums of four entries must not overflow).
struct ScaledMatrix {
    std::int64_t scale = 1;
    std::vector<std::int64_t> values;
};

inline std::optional<ScaledMatrix> scaled_integers(const FiniteMetricSpace& space) {
    constexpr std::int64_t kLimit = std::int64_t{1} << 58;
    ScaledMatrix m;
    for (const auto& v : space.row_major()) {
        const std::int64_t den = v.denominator();
        const std::int64_t g = std::gcd(m.scale, den);
        if (m.scale / g > kLimit / den) return std::nullopt;
        m.scale = m.scale / g * den;
    }
    m.values.reserve(space.row_major().size());
    for (const auto& v : space.row_major()) {
        const std::int64_t factor = m.scale / v.denominator();
        const std::int64_t num = v.numerator() < 0 ? -v.numerator() : v.numerator();
        if (num != 0 && factor > kLimit / num) return std::nullopt;
        m.values.push_back(v.numerator() * factor);
    }
    return m;
}

// Largest-defect quadruple among those with at least one point >= first_new.
inline std::optional<QuadrupleWitness> worst_quadruple(const FiniteMetricSpace& space, Index first_new = 0) {
    const std::size_t n = space.size();
    if (n < 4 || first_new >= n) return std::nullopt;
    if (auto m = scaled_integers(space)) {
        const auto& v = m->values;
        auto at = [&](Index i, Index j) { return v[i * n + j]; };
        std::int64_t best = -1;
        std::array<Index, 4> arg{};
        for (Index d = std::max<Index>(3, first_new); d < n; ++d)
            for (Index a = 0; a < d; ++a)
                for (Index b = a + 1; b < d; ++b)
                    for (Index c = b + 1; c < d; ++c) {
                        std::int64_t e = at(a, b) + at(c, d);
                        std::int64_t f = at(a, c) + at(b, d);
                        std::int64_t g = at(a, d) + at(b, c);
                        if (e > f) std::swap(e, f);
                        if (f > g) std::swap(f, g);
                        if (e > f) std::swap(e, f);
                        if (g - f > best) {
                            best = g - f;
                            arg = {a, b, c, d};
                        }
                    }
        return quadruple(space, arg[0], arg[1], arg[2], arg[3]);
    }
    std::optional<QuadrupleWitness> worst;
    detail::for_each_quadruple(space, [&](Index a, Index b, Index c, Index d) {
        if (d < first_new) return;
        auto w = quadruple(space, a, b, c, d);
        if (!worst || w.defect > worst->defect) worst = w;
    });
    return worst;
}

} // namespace detail

struct HyperbolicityResult {
    bool holds = true;
    /// Present iff `holds` is false: a quadruple of maximal defect.
    std::optional<QuadrupleWitness> witness;
};

inline HyperbolicityResult is_delta_hyperbolic(const FiniteMetricSpace& space, const Rational& delta) {
    if (delta < 0) throw InputError("delta must be nonnegative, got " + to_string(delta));
    HyperbolicityResult result;
    auto worst = detail::worst_quadruple(space);
    if (worst && worst->defect > 2 * delta) {
        result.holds = false;
        result.witness = worst;
    }
    return result;
}

/// Four-point check restricted to quadruples meeting the points with index
/// >= first_new; enough after appending points to a δ-hyperbolic space.
inline HyperbolicityResult is_delta_hyperbolic_from(const FiniteMetricSpace& space, Index first_new,
                                                    const Rational& delta) {
    if (delta < 0) throw InputError("delta must be nonnegative, got " + to_string(delta));
    HyperbolicityResult result;
    auto worst = detail::worst_quadruple(space, first_new);
    if (worst && worst->defect > 2 * delta) {
        result.holds = false;
        result.witness = worst;
    }
    return result;
}

/// Smallest δ for which `space` is δ-hyperbolic: half the maximal defect.
inline Rational min_hyperbolicity(const FiniteMetricSpace& space) {
    auto worst = detail::worst_quadruple(space);
    return worst ? worst->defect / 2 : Rational(0);
}

inline bool is_geodetic(const FiniteMetricSpace& space, const std::vector<Index>& tuple) {
    if (tuple.size() < 2) throw InputError("a geodetic tuple needs at least two points");
    Rational path(0);
    for (std::size_t i = 0; i + 1 < tuple.size(); ++i) path += space.d(tuple[i], tuple[i + 1]);
    return path == space.d(tuple.front(), tuple.back());
}

inline bool is_geodetic(const FiniteMetricSpace& space, const std::vector<std::string>& tuple) {
    std::vector<Index> idx;
    for (const auto& l : tuple) idx.push_back(space.index_of(l));
    return is_geodetic(space, idx);
}

} // namespace hyperlim
