#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hyperlim/gates.hpp"
#include "hyperlim/hyperbolicity.hpp"

namespace hyperlim {

/// Two hosts B1, B2 and an isometric identification of a common subspace A,
/// given as pairs (index in B1, index in B2).
struct AmalgamSpec {
    FiniteMetricSpace b1;
    FiniteMetricSpace b2;
    std::vector<std::pair<Index, Index>> correspondence;
    Rational delta;
};

inline AmalgamSpec make_amalgam_spec(FiniteMetricSpace b1, FiniteMetricSpace b2,
                                     const std::vector<std::pair<std::string, std::string>>& shared,
                                     Rational delta) {
    AmalgamSpec spec{std::move(b1), std::move(b2), {}, delta};
    for (const auto& [l1, l2] : shared) {
        spec.correspondence.emplace_back(spec.b1.index_of(l1), spec.b2.index_of(l2));
    }
    return spec;
}

/// The glued space with the positions of each host's points inside it.
struct Amalgam {
    FiniteMetricSpace space;
    std::vector<Index> from_b1; ///< from_b1[i] = position of B1's point i
    std::vector<Index> from_b2;

    Subset image_of_b1() const { return make_subset(space.size(), from_b1); }
    Subset image_of_b2() const { return make_subset(space.size(), from_b2); }
};

/// Thrown when the shared subspace is not δ-closed in one of the hosts.
class AmalgamPreconditionError : public PreconditionError {
public:
    AmalgamPreconditionError(int host, ClosednessReport report)
        : PreconditionError("shared subspace is not delta-closed in host B" + std::to_string(host)),
          host_(host), report_(std::move(report)) {}
    int host() const { return host_; }
    const ClosednessReport& report() const { return report_; }

private:
    int host_;
    ClosednessReport report_;
};

namespace detail {

struct SharedPart {
    Subset in_b1;
    Subset in_b2;
    std::vector<std::optional<Index>> b2_to_b1; // for points of A in B2
};

inline SharedPart shared_part(const AmalgamSpec& spec) {
    SharedPart part{Subset(spec.b1.size()), Subset(spec.b2.size()), std::vector<std::optional<Index>>(spec.b2.size())};
    if (spec.correspondence.empty()) throw InputError("amalgamation needs a nonempty shared subspace");
    for (const auto& [i, j] : spec.correspondence) {
        if (i >= spec.b1.size() || j >= spec.b2.size()) throw InputError("correspondence index out of range");
        if (part.in_b1.test(i) || part.in_b2.test(j)) throw InputError("correspondence is not injective");
        part.in_b1.set(i);
        part.in_b2.set(j);
        part.b2_to_b1[j] = i;
    }
    for (const auto& [i, j] : spec.correspondence) {
        for (const auto& [k, l] : spec.correspondence) {
            if (spec.b1.d(i, k) != spec.b2.d(j, l)) {
                throw InputError("correspondence is not distance-preserving at (" + spec.b1.label(i) + "," +
                                 spec.b1.label(k) + ")");
            }
        }
    }
    return part;
}

inline std::string fresh_label(const std::string& base, const std::set<std::string>& taken) {
    std::string label = base;
    while (taken.count(label)) label += "@B2";
    return label;
}

} // namespace detail

/// B1 ⊗_A B2: cross distances are routed through the gates in A,
/// d(x,y) = d(x,g(x)) + d(g(x),g(y)) + d(g(y),y).
///
/// B1's points come first, in order, then B2∖A in order. B2 labels that
/// collide with an existing label get "@B2" appended until unique.
inline Amalgam canonical_amalgam(const AmalgamSpec& spec) {
    const auto part = detail::shared_part(spec);
    auto r1 = detail::closedness(spec.b1, part.in_b1, spec.b1.full_subset(), spec.delta);
    if (!r1.verdict) throw AmalgamPreconditionError(1, std::move(r1));
    auto r2 = detail::closedness(spec.b2, part.in_b2, spec.b2.full_subset(), spec.delta);
    if (!r2.verdict) throw AmalgamPreconditionError(2, std::move(r2));

    const auto gate1 = gate_map(spec.b1, part.in_b1);
    const auto gate2 = gate_map(spec.b2, part.in_b2);

    const std::size_t n1 = spec.b1.size();
    Amalgam out;
    out.from_b1.resize(n1);
    out.from_b2.resize(spec.b2.size());
    std::vector<std::string> labels = spec.b1.labels();
    std::set<std::string> taken(labels.begin(), labels.end());
    for (Index i = 0; i < n1; ++i) out.from_b1[i] = i;
    std::vector<Index> extra; // B2 indices of B2∖A
    for (Index j = 0; j < spec.b2.size(); ++j) {
        if (part.b2_to_b1[j]) {
            out.from_b2[j] = *part.b2_to_b1[j];
        } else {
            out.from_b2[j] = n1 + extra.size();
            extra.push_back(j);
            labels.push_back(detail::fresh_label(spec.b2.label(j), taken));
            taken.insert(labels.back());
        }
    }
    const std::size_t n = labels.size();
    std::vector<Rational> flat(n * n);
    auto at = [&](Index i, Index j) -> Rational& { return flat[i * n + j]; };
    for (Index i = 0; i < n1; ++i)
        for (Index j = 0; j < n1; ++j) at(i, j) = spec.b1.d(i, j);
    for (Index j = 0; j < spec.b2.size(); ++j)
        for (Index l = 0; l < spec.b2.size(); ++l) at(out.from_b2[j], out.from_b2[l]) = spec.b2.d(j, l);
    for (Index x = 0; x < n1; ++x) {
        if (part.in_b1.test(x)) continue;
        const Index gx = *gate1[x];
        for (Index y : extra) {
            const Index gy = *part.b2_to_b1[*gate2[y]];
            const Rational value = spec.b1.d(x, gx) + spec.b1.d(gx, gy) + spec.b2.d(*gate2[y], y);
            at(x, out.from_b2[y]) = value;
            at(out.from_b2[y], x) = value;
        }
    }
    out.space = FiniteMetricSpace(std::move(labels), std::move(flat));
    return out;
}

/// Outcome of re-verifying the amalgamation lemma on one instance.
struct AmalgamationLemmaReport {
    std::vector<std::string> precondition_failures;
    std::vector<std::string> conclusion_failures;
    std::optional<Amalgam> amalgam;
    std::optional<QuadrupleWitness> hyperbolicity_witness;
    std::optional<ClosednessReport> b1_report;
    std::optional<ClosednessReport> b2_report;

    bool preconditions_hold() const { return precondition_failures.empty(); }
    bool passed() const { return preconditions_hold() && conclusion_failures.empty(); }
};

/// Checks the hypotheses (hosts δ-hyperbolic, A δ-closed in both), builds
/// the amalgam and verifies by brute force that it is a δ-hyperbolic metric
/// space in which both hosts are δ-closed.
inline AmalgamationLemmaReport check_amalgamation_lemma(const AmalgamSpec& spec) {
    AmalgamationLemmaReport report;
    if (!validate_metric(spec.b1).valid()) report.precondition_failures.push_back("B1 is not a metric space");
    if (!validate_metric(spec.b2).valid()) report.precondition_failures.push_back("B2 is not a metric space");
    if (!is_delta_hyperbolic(spec.b1, spec.delta).holds) report.precondition_failures.push_back("B1 is not delta-hyperbolic");
    if (!is_delta_hyperbolic(spec.b2, spec.delta).holds) report.precondition_failures.push_back("B2 is not delta-hyperbolic");
    try {
        report.amalgam = canonical_amalgam(spec);
    } catch (const AmalgamPreconditionError& e) {
        report.precondition_failures.push_back(e.what());
        return report;
    }
    if (!report.preconditions_hold()) return report;

    const auto& d = report.amalgam->space;
    if (!validate_metric(d).valid()) report.conclusion_failures.push_back("amalgam violates a metric axiom");
    auto hyp = is_delta_hyperbolic(d, spec.delta);
    if (!hyp.holds) {
        report.conclusion_failures.push_back("amalgam is not delta-hyperbolic");
        report.hyperbolicity_witness = hyp.witness;
    }
    report.b1_report = is_delta_closed(d, report.amalgam->image_of_b1(), spec.delta);
    report.b2_report = is_delta_closed(d, report.amalgam->image_of_b2(), spec.delta);
    if (!report.b1_report->verdict) report.conclusion_failures.push_back("B1 is not delta-closed in the amalgam");
    if (!report.b2_report->verdict) report.conclusion_failures.push_back("B2 is not delta-closed in the amalgam");
    return report;
}

// ---------------------------------------------------------------------------
// Marked spaces

/// A space with a family of distinguished δ-closed subsets.
///
/// The family is either explicit, or (when `closed_size_cap` is set) the
/// implicit family of all δ-closed subsets with at most that many points.
struct MarkedSpace {
    FiniteMetricSpace space;
    Rational delta;
    std::vector<Subset> distinguished;
    std::optional<std::size_t> closed_size_cap;

    bool is_distinguished(const Subset& s) const {
        if (s.none()) return false;
        if (closed_size_cap) {
            return s.count() <= *closed_size_cap && is_delta_closed(space, s, delta).verdict;
        }
        return std::find(distinguished.begin(), distinguished.end(), s) != distinguished.end();
    }

    /// Explicit members; for the implicit family, every δ-closed subset up to the cap.
    std::vector<Subset> family() const {
        if (!closed_size_cap) return distinguished;
        std::vector<Subset> out;
        std::vector<Index> pool(space.size());
        for (Index i = 0; i < pool.size(); ++i) pool[i] = i;
        const std::size_t top = std::min(*closed_size_cap, space.size());
        for (std::size_t k = 1; k <= top; ++k) {
            detail::for_each_combination(pool, k, [&](const std::vector<std::size_t>& pick) {
                Subset s(space.size());
                for (auto p : pick) s.set(p);
                if (is_delta_closed(space, s, delta).verdict) out.push_back(std::move(s));
                return false;
            });
        }
        return out;
    }
};

/// Problems with the marked-space invariants; empty when all hold.
inline std::vector<std::string> validate_marked(const MarkedSpace& marked) {
    std::vector<std::string> problems;
    const auto fam = marked.family();
    bool has_singleton = false;
    for (const auto& s : fam) {
        if (s.size() != marked.space.size()) {
            problems.push_back("distinguished subset indexed for a different space");
            return problems;
        }
        if (s.count() == 1) has_singleton = true;
        if (s.none() || !is_delta_closed(marked.space, s, marked.delta).verdict) {
            problems.push_back("distinguished subset {" + [&] {
                std::string out;
                for (const auto& l : marked.space.labels_of(s)) out += (out.empty() ? "" : ",") + l;
                return out;
            }() + "} is not delta-closed");
        }
    }
    if (!has_singleton) problems.push_back("no distinguished singleton");
    if (!marked.closed_size_cap) {
        for (std::size_t i = 0; i < fam.size(); ++i) {
            for (std::size_t j = i + 1; j < fam.size(); ++j) {
                const Subset common = fam[i] & fam[j];
                if (common.any() && !marked.is_distinguished(common)) {
                    problems.push_back("family not closed under intersection");
                    return problems;
                }
            }
        }
    }
    return problems;
}

struct MarkedAmalgam {
    MarkedSpace marked;
    Amalgam amalgam;
    bool truncated = false; ///< family hit the configured cap
};

inline constexpr std::size_t kDefaultFamilyCap = 4096;

/// Amalgam of marked spaces over a subspace distinguished in both hosts.
///
/// Distinguished sets of the result are the δ-closed X whose traces on B1
/// and B2 are each empty or distinguished there. Candidates are unions
/// T1 ∪ T2 of host members agreeing on A; the family is then closed under
/// nonempty intersection. At most `family_cap` sets are kept.
inline MarkedAmalgam marked_amalgam(const MarkedSpace& b1, const MarkedSpace& b2,
                                    const std::vector<std::pair<Index, Index>>& correspondence,
                                    std::size_t family_cap = kDefaultFamilyCap) {
    if (b1.delta != b2.delta) throw InputError("marked hosts use different delta");
    AmalgamSpec spec{b1.space, b2.space, correspondence, b1.delta};
    const auto part = detail::shared_part(spec);
    if (!b1.is_distinguished(part.in_b1)) throw PreconditionError("shared subspace is not distinguished in B1");
    if (!b2.is_distinguished(part.in_b2)) throw PreconditionError("shared subspace is not distinguished in B2");

    MarkedAmalgam out{{}, canonical_amalgam(spec), false};
    const std::size_t n = out.amalgam.space.size();
    out.marked.space = out.amalgam.space;
    out.marked.delta = b1.delta;

    // A-part of a B2 subset, expressed in B1 indices.
    auto a_trace_b2 = [&](const Subset& t2) {
        Subset s(b1.space.size());
        for (Index j : members(t2 & part.in_b2)) s.set(*part.b2_to_b1[j]);
        return s;
    };
    auto lift = [&](const Subset& t, const std::vector<Index>& into) {
        Subset s(n);
        for (Index i : members(t)) s.set(into[i]);
        return s;
    };

    std::vector<Subset> fam1 = b1.family();
    std::vector<Subset> fam2 = b2.family();
    std::set<Subset> accepted;
    auto consider = [&](const Subset& candidate) {
        if (accepted.count(candidate)) return;
        if (accepted.size() >= family_cap) {
            out.truncated = true;
            return;
        }
        if (is_delta_closed(out.amalgam.space, candidate, out.marked.delta).verdict) accepted.insert(candidate);
    };
    for (const auto& t1 : fam1) {
        if ((t1 & part.in_b1).none()) consider(lift(t1, out.amalgam.from_b1));
    }
    for (const auto& t2 : fam2) {
        if ((t2 & part.in_b2).none()) consider(lift(t2, out.amalgam.from_b2));
    }
    for (const auto& t1 : fam1) {
        const Subset a1 = t1 & part.in_b1;
        if (a1.none()) continue;
        for (const auto& t2 : fam2) {
            if (a_trace_b2(t2) != a1) continue;
            consider(lift(t1, out.amalgam.from_b1) | lift(t2, out.amalgam.from_b2));
        }
    }
    bool grew = true;
    while (grew && !out.truncated) {
        grew = false;
        std::vector<Subset> current(accepted.begin(), accepted.end());
        for (std::size_t i = 0; i < current.size(); ++i) {
            for (std::size_t j = i + 1; j < current.size(); ++j) {
                Subset common = current[i] & current[j];
                if (common.none() || accepted.count(common)) continue;
                if (accepted.size() >= family_cap) {
                    out.truncated = true;
                    break;
                }
                accepted.insert(std::move(common));
                grew = true;
            }
        }
    }
    out.marked.distinguished.assign(accepted.begin(), accepted.end());
    return out;
}

} // namespace hyperlim
