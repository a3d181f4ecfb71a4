#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "hyperlim/errors.hpp"
#include "hyperlim/rational.hpp"

namespace hyperlim {

using Index = std::size_t;

/// A subset of the points of one space, indexed like that space.
using Subset = boost::dynamic_bitset<>;

inline std::vector<Index> members(const Subset& s) {
    std::vector<Index> out;
    out.reserve(s.count());
    for (auto i = s.find_first(); i != Subset::npos; i = s.find_next(i)) {
        out.push_back(i);
    }
    return out;
}

inline Subset make_subset(std::size_t n, std::initializer_list<Index> indices) {
    Subset s(n);
    for (Index i : indices) s.set(i);
    return s;
}

inline Subset make_subset(std::size_t n, const std::vector<Index>& indices) {
    Subset s(n);
    for (Index i : indices) s.set(i);
    return s;
}

/// Finite point set with a dense, fully materialised distance matrix.
///
/// Construction only checks shape (square matrix, distinct labels); the
/// metric axioms are checked separately by validate_metric so that invalid
/// inputs can be reported rather than rejected outright.
class FiniteMetricSpace {
public:
    FiniteMetricSpace() = default;

    FiniteMetricSpace(std::vector<std::string> labels, std::vector<Rational> row_major)
        : labels_(std::move(labels)), dist_(std::move(row_major)) {
        if (dist_.size() != labels_.size() * labels_.size()) {
            throw InputError("distance matrix has " + std::to_string(dist_.size()) +
                             " entries, expected " + std::to_string(labels_.size() * labels_.size()));
        }
        index_.reserve(labels_.size());
        for (Index i = 0; i < labels_.size(); ++i) {
            if (labels_[i].empty()) {
                throw InputError("empty point label at position " + std::to_string(i));
            }
            if (!index_.emplace(labels_[i], i).second) {
                throw InputError("duplicate point label \"" + labels_[i] + "\"");
            }
        }
    }

    static FiniteMetricSpace from_rows(std::vector<std::string> labels,
                                       const std::vector<std::vector<Rational>>& rows) {
        std::vector<Rational> flat;
        flat.reserve(labels.size() * labels.size());
        if (rows.size() != labels.size()) {
            throw InputError("distance matrix has " + std::to_string(rows.size()) + " rows for " +
                             std::to_string(labels.size()) + " points");
        }
        for (const auto& row : rows) {
            if (row.size() != labels.size()) {
                throw InputError("distance matrix row of length " + std::to_string(row.size()) +
                                 ", expected " + std::to_string(labels.size()));
            }
            flat.insert(flat.end(), row.begin(), row.end());
        }
        return FiniteMetricSpace(std::move(labels), std::move(flat));
    }

    /// Points labelled "0", "1", ... from the given rows.
    static FiniteMetricSpace from_rows(const std::vector<std::vector<Rational>>& rows) {
        std::vector<std::string> labels;
        for (Index i = 0; i < rows.size(); ++i) labels.push_back(std::to_string(i));
        return from_rows(std::move(labels), rows);
    }

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(Index i) const { return labels_.at(i); }
    const std::vector<Rational>& row_major() const { return dist_; }

    const Rational& d(Index i, Index j) const { return dist_[i * labels_.size() + j]; }

    std::optional<Index> find(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    Index index_of(const std::string& label) const {
        auto found = find(label);
        if (!found) throw InputError("unknown point label \"" + label + "\"");
        return *found;
    }

    Subset empty_subset() const { return Subset(size()); }
    Subset full_subset() const {
        Subset s(size());
        s.set();
        return s;
    }
    Subset singleton(Index i) const {
        Subset s(size());
        s.set(i);
        return s;
    }

    Subset subset_of(const std::vector<std::string>& names) const {
        Subset s(size());
        for (const auto& name : names) s.set(index_of(name));
        return s;
    }

    std::vector<std::string> labels_of(const Subset& s) const {
        std::vector<std::string> out;
        for (Index i : members(s)) out.push_back(labels_[i]);
        return out;
    }

    friend bool operator==(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
        return a.labels_ == b.labels_ && a.dist_ == b.dist_;
    }

private:
    std::vector<std::string> labels_;
    std::vector<Rational> dist_;
    std::unordered_map<std::string, Index> index_;
};

/// Restriction of `space` to `s`; points keep their labels and relative order.
inline FiniteMetricSpace subspace(const FiniteMetricSpace& space, const Subset& s) {
    const auto idx = members(s);
    std::vector<std::string> labels;
    std::vector<Rational> flat;
    flat.reserve(idx.size() * idx.size());
    for (Index i : idx) labels.push_back(space.label(i));
    for (Index i : idx) {
        for (Index j : idx) flat.push_back(space.d(i, j));
    }
    return FiniteMetricSpace(std::move(labels), std::move(flat));
}

/// Same points, every distance multiplied by `factor`.
inline FiniteMetricSpace scaled(const FiniteMetricSpace& space, const Rational& factor) {
    std::vector<Rational> flat = space.row_major();
    for (auto& v : flat) v *= factor;
    return FiniteMetricSpace(space.labels(), std::move(flat));
}

/// Reorders points: point i of the result is point order[i] of `space`.
inline FiniteMetricSpace permuted(const FiniteMetricSpace& space, const std::vector<Index>& order) {
    std::vector<std::string> labels;
    std::vector<Rational> flat;
    for (Index i : order) labels.push_back(space.label(i));
    for (Index i : order) {
        for (Index j : order) flat.push_back(space.d(i, j));
    }
    return FiniteMetricSpace(std::move(labels), std::move(flat));
}

inline FiniteMetricSpace relabeled(const FiniteMetricSpace& space, std::vector<std::string> labels) {
    return FiniteMetricSpace(std::move(labels), space.row_major());
}

inline Rational diameter(const FiniteMetricSpace& space, const Subset& s) {
    Rational best(0);
    const auto idx = members(s);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = i + 1; j < idx.size(); ++j) {
            best = std::max(best, space.d(idx[i], idx[j]));
        }
    }
    return best;
}

/// Minimum distance between two nonempty subsets.
inline Rational set_distance(const FiniteMetricSpace& space, const Subset& a, const Subset& b) {
    std::optional<Rational> best;
    for (Index i : members(a)) {
        for (Index j : members(b)) {
            if (!best || space.d(i, j) < *best) best = space.d(i, j);
        }
    }
    if (!best) throw InputError("distance between sets requires nonempty sets");
    return *best;
}

// ---------------------------------------------------------------------------
// Metric axioms

enum class MetricAxiom { ZeroDiagonal, Symmetry, Positivity, Triangle };

inline const char* to_string(MetricAxiom axiom) {
    switch (axiom) {
    case MetricAxiom::ZeroDiagonal: return "zero-diagonal";
    case MetricAxiom::Symmetry: return "symmetry";
    case MetricAxiom::Positivity: return "positivity";
    case MetricAxiom::Triangle: return "triangle";
    }
    return "?";
}

struct MetricViolation {
    MetricAxiom axiom;
    /// For Triangle, (x, y, z) with d(x,z) > d(x,y) + d(y,z).
    std::vector<Index> points;
};

struct MetricReport {
    std::vector<MetricViolation> violations;
    bool valid() const { return violations.empty(); }
};

inline MetricReport validate_metric(const FiniteMetricSpace& space) {
    MetricReport report;
    const std::size_t n = space.size();
    for (Index i = 0; i < n; ++i) {
        if (space.d(i, i) != 0) report.violations.push_back({MetricAxiom::ZeroDiagonal, {i}});
        for (Index j = i + 1; j < n; ++j) {
            if (space.d(i, j) != space.d(j, i)) {
                report.violations.push_back({MetricAxiom::Symmetry, {i, j}});
            }
            if (space.d(i, j) <= 0 || space.d(j, i) <= 0) {
                report.violations.push_back({MetricAxiom::Positivity, {i, j}});
            }
        }
    }
    for (Index x = 0; x < n; ++x) {
        for (Index z = x + 1; z < n; ++z) {
            for (Index y = 0; y < n; ++y) {
                if (y == x || y == z) continue;
                if (space.d(x, z) > space.d(x, y) + space.d(y, z)) {
                    report.violations.push_back({MetricAxiom::Triangle, {x, y, z}});
                }
            }
        }
    }
    return report;
}

inline void require_metric(const FiniteMetricSpace& space, const std::string& what = "space") {
    const auto report = validate_metric(space);
    if (!report.valid()) {
        const auto& v = report.violations.front();
        std::string pts;
        for (Index i : v.points) pts += (pts.empty() ? "" : ",") + space.label(i);
        throw InputError(what + " violates the " + to_string(v.axiom) + " axiom at (" + pts + ")");
    }
}

} // namespace hyperlim
