#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hyperlim/hyperbolicity.hpp"
#include "hyperlim/isometry.hpp"

namespace hyperlim {

struct EnumerationParams {
    Rational delta;
    std::size_t max_size = 1;
    std::int64_t denominator_bound = 1;
    Rational diameter_bound{1};
    bool graph_mode = false;
    /// Candidate extensions examined before giving up.
    std::size_t work_limit = 50'000'000;
};

inline void validate(const EnumerationParams& p) {
    if (p.delta < 0) throw InputError("delta must be nonnegative");
    if (p.max_size < 1) throw InputError("max_size must be positive");
    if (p.denominator_bound < 1) throw InputError("denominator_bound must be positive");
    if (p.diameter_bound <= 0) throw InputError("diameter_bound must be positive");
}

/// Distances allowed by the bounds, ascending. Graph mode keeps integers only.
inline std::vector<Rational> distance_values(const EnumerationParams& p) {
    std::set<Rational> values;
    const std::int64_t top_den = p.graph_mode ? 1 : p.denominator_bound;
    for (std::int64_t q = 1; q <= top_den; ++q) {
        for (std::int64_t num = 1; Rational(num, q) <= p.diameter_bound; ++num) values.insert(Rational(num, q));
    }
    return {values.begin(), values.end()};
}

/// If the space is not the path metric of a connected graph with unit edges,
/// returns a pair with no neighbour of the first point one step closer to
/// the second (or a non-integer pair).
inline std::optional<std::pair<Index, Index>> graph_metric_certificate(const FiniteMetricSpace& space) {
    const std::size_t n = space.size();
    for (Index x = 0; x < n; ++x) {
        for (Index y = 0; y < n; ++y) {
            if (x == y) continue;
            const Rational& dxy = space.d(x, y);
            if (dxy.denominator() != 1) return std::make_pair(x, y);
            if (dxy == 1) continue;
            bool stepped = false;
            for (Index w = 0; w < n && !stepped; ++w) {
                stepped = space.d(x, w) == 1 && space.d(w, y) == dxy - 1;
            }
            if (!stepped) return std::make_pair(x, y);
        }
    }
    return std::nullopt;
}

inline bool is_graph_metric(const FiniteMetricSpace& space) { return !graph_metric_certificate(space); }

struct Catalog {
    /// Canonical representatives ordered by (size, canonical key).
    std::vector<FiniteMetricSpace> spaces;
    /// Set when the work limit stopped enumeration; `spaces` is then partial.
    bool truncated = false;
};

namespace detail {

inline FiniteMetricSpace extend_space(const FiniteMetricSpace& base, const std::vector<Rational>& to_new) {
    const std::size_t n = base.size();
    std::vector<Rational> flat((n + 1) * (n + 1), Rational(0));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) flat[i * (n + 1) + j] = base.d(i, j);
    for (Index i = 0; i < n; ++i) {
        flat[i * (n + 1) + n] = to_new[i];
        flat[n * (n + 1) + i] = to_new[i];
    }
    std::vector<std::string> labels = base.labels();
    labels.push_back("new");
    return FiniteMetricSpace(std::move(labels), std::move(flat));
}

// Triangle and four-point checks that involve the appended last point only;
// the base is already a δ-hyperbolic metric space.
inline bool admissible_extension(const FiniteMetricSpace& s, const Rational& delta) {
    const Index last = s.size() - 1;
    for (Index i = 0; i < last; ++i) {
        for (Index j = 0; j < last; ++j) {
            if (i == j) continue;
            if (s.d(i, last) > s.d(i, j) + s.d(j, last)) return false;
            if (s.d(i, j) > s.d(i, last) + s.d(last, j)) return false;
        }
    }
    for (Index a = 0; a < last; ++a)
        for (Index b = a + 1; b < last; ++b)
            for (Index c = b + 1; c < last; ++c)
                if (quadruple(s, a, b, c, last).defect > 2 * delta) return false;
    return true;
}

} // namespace detail

/// Every finite δ-hyperbolic space within the bounds, one per isometry class.
///
/// Level k is generated by appending a point to each level k-1 class in all
/// admissible ways; heredity makes this complete. Graph mode filters the
/// integer spaces down to graph metrics at the end, since graph metrics are
/// not closed under taking subspaces.
inline Catalog enumerate_spaces(const EnumerationParams& params) {
    validate(params);
    const auto values = distance_values(params);
    Catalog out;
    std::vector<FiniteMetricSpace> level{FiniteMetricSpace({"x0"}, {Rational(0)})};
    std::vector<FiniteMetricSpace> all = level;
    std::size_t work = 0;
    for (std::size_t size = 2; size <= params.max_size && !out.truncated; ++size) {
        std::map<std::vector<Rational>, FiniteMetricSpace> next;
        for (const auto& base : level) {
            std::vector<std::size_t> digit(base.size(), 0);
            std::vector<Rational> to_new(base.size());
            while (true) {
                if (++work > params.work_limit) {
                    out.truncated = true;
                    break;
                }
                for (Index i = 0; i < base.size(); ++i) to_new[i] = values[digit[i]];
                auto candidate = detail::extend_space(base, to_new);
                if (detail::admissible_extension(candidate, params.delta)) {
                    auto key = canonical_key(candidate);
                    if (!next.count(key)) next.emplace(std::move(key), canonical_form(candidate));
                }
                std::size_t pos = 0;
                while (pos < digit.size() && ++digit[pos] == values.size()) digit[pos++] = 0;
                if (pos == digit.size()) break;
            }
            if (out.truncated) break;
        }
        level.clear();
        for (auto& [key, space] : next) level.push_back(std::move(space));
        all.insert(all.end(), level.begin(), level.end());
    }
    for (auto& s : all) {
        if (params.graph_mode && !is_graph_metric(s)) continue;
        out.spaces.push_back(std::move(s));
    }
    std::stable_sort(out.spaces.begin(), out.spaces.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return canonical_key(a) < canonical_key(b);
    });
    return out;
}

} // namespace hyperlim
