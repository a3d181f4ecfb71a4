#pragma once

#include <algorithm>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperlim/hyperlim.hpp"

namespace hyperlim::cli {

enum ExitCode : int { kOk = 0, kRefuted = 1, kInputError = 2, kResourceLimit = 3 };

namespace detail {

struct Context {
    std::ostream& out;
    std::ostream& err;
};

inline std::vector<std::string> split_list(const std::string& text, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text + sep) {
        if (c == sep) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    return out;
}

inline std::string join(const std::vector<std::string>& parts, const char* sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

inline std::string labels(const FiniteMetricSpace& s, const Subset& subset) { return join(s.labels_of(subset)); }

inline std::string labels(const FiniteMetricSpace& s, const std::vector<Index>& idx) {
    std::vector<std::string> names;
    for (Index i : idx) names.push_back(s.label(i));
    return join(names);
}

inline std::string yes(bool b) { return b ? "yes" : "no"; }

inline Subset subset_arg(const FiniteMetricSpace& s, const std::string& text, const char* what) {
    const auto names = split_list(text);
    if (names.empty()) throw InputError(std::string(what) + " must list at least one point");
    return s.subset_of(names);
}

inline Rational resolve_delta(const std::string& flag, const SpaceDocument& doc) {
    if (!flag.empty()) return parse_rational(flag);
    if (doc.delta) return *doc.delta;
    throw InputError("no --delta given and the space file has no delta");
}

inline SpaceDocument load_metric(const std::string& path) {
    auto doc = load_space_document(path);
    const auto report = validate_metric(doc.space);
    if (!report.valid()) {
        const auto& v = report.violations.front();
        throw InputError(std::string("not a metric space: ") + to_string(v.axiom) + " fails at (" +
                         labels(doc.space, v.points) + ")");
    }
    return doc;
}

inline std::vector<std::pair<std::string, std::string>> pairs_arg(const std::string& text, char sep) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& item : split_list(text)) {
        const auto at = item.find(sep);
        if (at == std::string::npos || at == 0 || at + 1 == item.size()) {
            throw InputError("malformed pair \"" + item + "\", expected x" + std::string(1, sep) + "y");
        }
        out.emplace_back(item.substr(0, at), item.substr(at + 1));
    }
    return out;
}

inline std::vector<Subset> family_arg(const FiniteMetricSpace& s, const std::string& text) {
    std::vector<Subset> out;
    for (const auto& group : split_list(text, ';')) out.push_back(subset_arg(s, group, "--family member"));
    if (out.size() < 2) throw InputError("--family needs at least two sets separated by ';'");
    return out;
}

inline void print_matrix(std::ostream& out, const std::string& key, const FiniteMetricSpace& s) {
    out << key << "_POINTS: " << join(s.labels()) << "\n";
    for (Index i = 0; i < s.size(); ++i) {
        std::vector<std::string> row;
        for (Index j = 0; j < s.size(); ++j) row.push_back(to_string(s.d(i, j)));
        out << key << "_ROW " << s.label(i) << ": " << join(row, " ") << "\n";
    }
}

inline void emit_space(const Context& ctx, const std::string& path, const SpaceDocument& doc) {
    if (path.empty()) {
        ctx.out << serialize_space_document(doc);
    } else {
        write_text_file(path, serialize_space_document(doc));
        ctx.out << "WROTE: " << path << "\n";
    }
}

inline void print_witness(std::ostream& out, const FiniteMetricSpace& s, const QuadrupleWitness& w) {
    out << "QUADRUPLE: " << labels(s, std::vector<Index>(w.points.begin(), w.points.end())) << "\n";
    out << "SUMS: " << to_string(w.e) << "," << to_string(w.f) << "," << to_string(w.g) << "\n";
    out << "DEFECT: " << to_string(w.defect) << "\n";
}

inline void print_closedness(std::ostream& out, const FiniteMetricSpace& s, const ClosednessReport& r) {
    out << "CLOSED: " << yes(r.verdict) << "\n";
    if (!r.witness) return;
    if (r.witness->kind == ClosednessFailure::NoGate) {
        out << "FAILURE: no gate for " << s.label(r.witness->point) << "\n";
    } else {
        out << "FAILURE: no decomposition for " << s.label(r.witness->point) << "," << s.label(r.witness->other) << "\n";
    }
}

struct CatalogFlags {
    std::string delta;
    std::size_t max_size = 3;
    std::int64_t denominator = 1;
    std::string diameter = "2";
    bool graph = false;
    std::size_t work_limit = EnumerationParams{}.work_limit;

    void add_to(CLI::App* app) {
        app->add_option("--delta", delta, "hyperbolicity constant")->required();
        app->add_option("--max-size", max_size, "largest space size")->capture_default_str();
        app->add_option("--denominator", denominator, "largest denominator of a distance")->capture_default_str();
        app->add_option("--diameter", diameter, "largest distance")->capture_default_str();
        app->add_flag("--graph", graph, "graph metrics only");
        app->add_option("--work-limit", work_limit, "candidate extensions examined before giving up")->capture_default_str();
    }

    EnumerationParams params() const {
        EnumerationParams p;
        p.delta = parse_rational(delta);
        p.max_size = max_size;
        p.denominator_bound = denominator;
        p.diameter_bound = parse_rational(diameter);
        p.graph_mode = graph;
        p.work_limit = work_limit;
        validate(p);
        return p;
    }
};

inline std::string catalog_line(const FiniteMetricSpace& s) {
    std::vector<std::string> upper;
    for (Index i = 0; i < s.size(); ++i)
        for (Index j = i + 1; j < s.size(); ++j) upper.push_back(to_string(s.d(i, j)));
    return std::to_string(s.size()) + " [" + join(upper, " ") + "]";
}

} // namespace detail

/// Runs one command; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    Context ctx{out, err};
    CLI::App app{"Exact finite computations in delta-hyperbolic metric spaces", "hyperlim"};
    app.require_subcommand(1);
    std::function<int()> action;

    // Shared option storage; each subcommand binds what it needs.
    std::string space_path, delta_flag, subset, point, out_path, bundle, map_text, family, lengths;
    std::string a_text, b_text, c_text, b1_path, b2_path, shared, params_text;
    std::size_t work_limit = kDefaultClosureWorkLimit, steps = 0, budget = 1, samples = 500, constructions = 20;
    std::size_t cap = 4, homogeneity_every = 0, max_set = 2;
    std::int64_t grid = 10000;
    std::uint64_t seed = 0;
    CatalogFlags catalog;

    auto space_opt = [&](CLI::App* sub) { sub->add_option("--space", space_path, "space file")->required(); };
    auto delta_opt = [&](CLI::App* sub) { sub->add_option("--delta", delta_flag, "delta; defaults to the file's"); };

    {
        auto* sub = app.add_subcommand("check-hyp", "four-point condition");
        space_opt(sub);
        delta_opt(sub);
        sub->callback([&] {
            action = [&] {
                const auto doc = load_metric(space_path);
                const auto delta = resolve_delta(delta_flag, doc);
                const auto r = is_delta_hyperbolic(doc.space, delta);
                out << "POINTS: " << doc.space.size() << "\nDELTA: " << to_string(delta) << "\nHOLDS: " << yes(r.holds) << "\n";
                if (r.witness) print_witness(out, doc.space, *r.witness);
                return r.holds ? kOk : kRefuted;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("min-delta", "smallest delta for which the space is hyperbolic");
        space_opt(sub);
        sub->callback([&] {
            action = [&] {
                const auto doc = load_metric(space_path);
                out << "POINTS: " << doc.space.size() << "\nMIN_DELTA: " << to_string(min_hyperbolicity(doc.space)) << "\n";
                if (auto w = hyperlim::detail::worst_quadruple(doc.space)) print_witness(out, doc.space, *w);
                return kOk;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("gate", "gate of a point in a subset");
        space_opt(sub);
        sub->add_option("--subset", subset, "comma-separated labels")->required();
        sub->add_option("--point", point, "label")->required();
        sub->callback([&] {
            action = [&] {
                const auto doc = load_metric(space_path);
                const auto r = gate(doc.space, subset_arg(doc.space, subset, "--subset"), doc.space.index_of(point));
                out << "GATE: " << (r.gate ? doc.space.label(*r.gate) : "none") << "\n";
                return r.gate ? kOk : kRefuted;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("closed", "is a subset delta-closed");
        space_opt(sub);
        delta_opt(sub);
        sub->add_option("--subset", subset, "comma-separated labels")->required();
        sub->callback([&] {
            action = [&] {
                const auto doc = load_metric(space_path);
                const auto r = is_delta_closed(doc.space, subset_arg(doc.space, subset, "--subset"), resolve_delta(delta_flag, doc));
                print_closedness(out, doc.space, r);
                return r.verdict ? kOk : kRefuted;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("closure", "smallest delta-closed superset");
        space_opt(sub);
        delta_opt(sub);
        sub->add_option("--subset", subset, "comma-separated labels")->required();
        sub->add_option("--work-limit", work_limit, "candidate supersets examined")->capture_default_str();
        sub->callback([&] {
            action = [&] {
                const auto doc = load_metric(space_path);
                const auto a = subset_arg(doc.space, subset, "--subset");
                const auto cl = closure(doc.space, a, resolve_delta(delta_flag, doc), work_limit);
                out << "CLOSURE: " << labels(doc.space, cl) << "\nCONVEX_CLOSURE: " << labels(doc.space, convex_closure(doc.space, a))
                    << "\n";
                return kOk;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("amalgamate", "canonical amalgam of two spaces over a shared subspace");
        sub->add_option("--b1", b1_path, "first host")->required();
        sub->add_option("--b2", b2_path, "second host")->required();
        sub->add_option("--shared", shared, "identifications x=y (B1 label = B2 label)")->required();
        delta_opt(sub);
        sub->add_option("--out", out_path, "write the amalgam here instead of stdout");
        sub->callback([&] {
            action = [&] {
                const auto d1 = load_metric(b1_path);
                const auto d2 = load_metric(b2_path);
                const auto delta = resolve_delta(delta_flag, d1);
                const auto spec = make_amalgam_spec(d1.space, d2.space, pairs_arg(shared, '='), delta);
                const auto report = check_amalgamation_lemma(spec);
                if (!report.preconditions_hold()) {
                    for (const auto& p : report.precondition_failures) out << "PRECONDITION: " << p << "\n";
                    return kInputError;
                }
                const auto& am = *report.amalgam;
                out << "POINTS: " << am.space.size() << "\nHYPERBOLIC: " << yes(!report.hyperbolicity_witness)
                    << "\nB1_CLOSED: " << yes(report.b1_report->verdict) << "\nB2_CLOSED: " << yes(report.b2_report->verdict) << "\n";
                for (const auto& c : report.conclusion_failures) out << "VIOLATION: " << c << "\n";
                SpaceDocument doc;
                doc.delta = delta;
                doc.space = am.space;
                emit_space(ctx, out_path, doc);
                return report.passed() ? kOk : kRefuted;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("enumerate", "finite hyperbolic spaces up to isometry");
        catalog.add_to(sub);
        sub->callback([&] {
            action = [&] {
                const auto cat = enumerate_spaces(catalog.params());
                out << "COUNT: " << cat.spaces.size() << "\nTRUNCATED: " << yes(cat.truncated) << "\n";
                for (std::size_t i = 0; i < cat.spaces.size(); ++i) out << "SPACE " << i << ": " << catalog_line(cat.spaces[i]) << "\n";
                return cat.truncated ? kResourceLimit : kOk;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("stage-build", "build a finite stage and write its bundle");
        catalog.add_to(sub);
        sub->add_option("--steps", steps, "scheduled amalgamation steps")->required();
        sub->add_option("--seed", seed, "scheduler seed")->required();
        sub->add_option("--cap", cap, "largest distinguished subset")->capture_default_str();
        sub->add_option("--homogeneity-every", homogeneity_every, "every k-th step extends an isometry (0: never)")
            ->capture_default_str();
        sub->add_option("--out", out_path, "bundle directory")->required();
        sub->callback([&] {
            action = [&] {
                StageConfig config;
                config.catalog = catalog.params();
                config.distinguished_cap = cap;
                config.homogeneity_every = homogeneity_every;
                const auto cat = stage_catalog(config);
                const auto stage = build_stage(config, cat, steps, seed);
                write_bundle(out_path, stage, config, steps, seed);
                out << "CATALOG: " << cat.size() << "\nSTAGE_INDEX: " << stage.index << "\nPOINTS: " << stage.space().size()
                    << "\nHASH: " << hyperlim::detail::hex64(space_hash(stage.space())) << "\nWROTE: " << out_path << "\n";
                return kOk;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("stage-embed", "find a delta-closed copy of a space in a stage");
        sub->add_option("--bundle", bundle, "stage bundle directory")->required();
        space_opt(sub);
        sub->callback([&] {
            action = [&] {
                const auto loaded = load_bundle(bundle);
                const auto doc = load_metric(space_path);
                const auto r = find_closed_embedding(doc.space, loaded.stage, loaded.config);
                out << "EMBEDDED: " << yes(r.embedding.has_value()) << "\nNOTE: " << r.note << "\n";
                if (r.embedding) {
                    std::vector<std::string> m;
                    for (const auto& [a, b] : r.embedding->pairs) m.push_back(doc.space.label(a) + ">" + loaded.stage.space().label(b));
                    out << "MAP: " << join(m) << "\n";
                }
                return r.embedding ? kOk : kRefuted;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("extend-iso", "extend an isometry between distinguished subsets");
        sub->add_option("--bundle", bundle, "stage bundle directory")->required();
        sub->add_option("--map", map_text, "pairs x>y of stage labels")->required();
        sub->add_option("--budget", budget, "original points to add to the domain")->capture_default_str();
        sub->add_option("--out", out_path, "write the enlarged stage bundle here");
        sub->callback([&] {
            action = [&] {
                const auto loaded = load_bundle(bundle);
                const auto& s = loaded.stage.space();
                PartialIsometry f;
                for (const auto& [x, y] : pairs_arg(map_text, '>')) f.pairs.emplace_back(s.index_of(x), s.index_of(y));
                const auto ext = extend_isometry(loaded.stage, f, budget);
                const auto& t = ext.stage.space();
                std::vector<std::string> m;
                for (const auto& [a, b] : ext.map.pairs) m.push_back(t.label(a) + ">" + t.label(b));
                out << "AMALGAMATION_STEPS: " << ext.amalgamation_steps << "\nPOINTS: " << t.size()
                    << "\nISOMETRIC: " << yes(preserves_distances(t, t, ext.map)) << "\nMAP: " << join(m) << "\n";
                if (!out_path.empty()) {
                    write_bundle(out_path, ext.stage, loaded.config, ext.stage.log.size(), 0);
                    out << "WROTE: " << out_path << "\n";
                }
                return kOk;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("gates-set", "gate sets of two disjoint delta-closed subsets");
        space_opt(sub);
        delta_opt(sub);
        sub->add_option("--a", a_text, "first subset")->required();
        sub->add_option("--b", b_text, "second subset")->required();
        sub->callback([&] {
            action = [&] {
                const auto doc = load_metric(space_path);
                const auto& s = doc.space;
                const auto g = gate_set(s, subset_arg(s, a_text, "--a"), subset_arg(s, b_text, "--b"), resolve_delta(delta_flag, doc));
                out << "G_A(B): " << labels(s, g.gates_in_a) << "\nG_B(A): " << labels(s, g.gates_in_b)
                    << "\nDISTANCE: " << to_string(g.distance) << "\nINVARIANTS: " << (g.invariants_hold() ? "hold" : "violated")
                    << "\n";
                for (const auto& v : g.violations) out << "VIOLATION: " << v << "\n";
                return g.invariants_hold() ? kOk : kRefuted;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("proj", "projection distances of a family of disjoint delta-closed sets");
        space_opt(sub);
        delta_opt(sub);
        sub->add_option("--family", family, "sets separated by ';', points by ','")->required();
        sub->add_option("--out", out_path, "write the space file with the table block appended");
        sub->callback([&] {
            action = [&] {
                auto doc = load_metric(space_path);
                const auto delta = resolve_delta(delta_flag, doc);
                const auto t = projection_table(doc.space, family_arg(doc.space, family), delta);
                const auto k = t.family.size();
                for (std::size_t y = 0; y < k; ++y)
                    for (std::size_t x = 0; x < k; ++x)
                        for (std::size_t z = 0; z < k; ++z)
                            if (t.table[y][x][z]) out << "PROJ Y=" << y << " X=" << x << " Z=" << z << ": " << to_string(t.at(y, x, z)) << "\n";
                if (!out_path.empty()) {
                    doc.delta = delta;
                    doc.extra["projection_table"] = projection_table_json(doc.space, t);
                    emit_space(ctx, out_path, doc);
                }
                return kOk;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("pc-check", "projection complex axioms");
        space_opt(sub);
        delta_opt(sub);
        sub->add_option("--family", family, "sets separated by ';', points by ','")->required();
        sub->callback([&] {
            action = [&] {
                const auto doc = load_metric(space_path);
                const auto r = check_pc_axioms(doc.space, family_arg(doc.space, family), resolve_delta(delta_flag, doc));
                for (const auto& a : r.axioms) {
                    out << a.name << ": " << (a.passed ? "pass" : "fail") << " checked=" << a.checked;
                    if (!a.passed) out << " witness=" << a.witness;
                    out << "\n";
                }
                for (const auto& e : r.pc4) {
                    out << "PC4_COUNT X=" << e.x << " Z=" << e.z << ": " << e.count << " bound=" << to_string(e.bound) << "\n";
                }
                return r.passed() ? kOk : kRefuted;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("er-graph", "E_R graph, forest and geodesic checks");
        space_opt(sub);
        delta_opt(sub);
        sub->add_option("--lengths", lengths, "edge lengths R, comma-separated")->required();
        sub->add_option("--out", out_path, "write the space file with the edge list appended");
        sub->callback([&] {
            action = [&] {
                auto doc = load_metric(space_path);
                const auto delta = resolve_delta(delta_flag, doc);
                std::vector<Rational> r;
                for (const auto& v : split_list(lengths)) r.push_back(parse_rational(v));
                if (r.empty()) throw InputError("--lengths is empty");
                const auto g = er_graph(doc.space, delta, r);
                const auto forest = is_forest(g);
                out << "EDGES: " << g.edges.size() << "\n";
                for (const auto& [u, v] : g.edges) out << "EDGE: " << doc.space.label(u) << "-" << doc.space.label(v) << "\n";
                out << "FOREST: " << yes(forest.forest) << "\n";
                bool ok = forest.forest;
                if (!forest.forest) {
                    out << "CYCLE: " << labels(doc.space, forest.cycle) << "\n";
                } else {
                    const auto geo = geodetic_paths_check(doc.space, g);
                    out << "COMPONENTS: " << geo.components_checked << "\nPATHS_CHECKED: " << geo.paths_checked
                        << "\nGEODETIC: " << yes(geo.passed()) << "\n";
                    if (geo.non_geodetic_path) out << "NON_GEODETIC: " << labels(doc.space, *geo.non_geodetic_path) << "\n";
                    if (geo.non_closed_component) out << "NOT_CLOSED: " << labels(doc.space, *geo.non_closed_component) << "\n";
                    ok = geo.passed();
                }
                if (!out_path.empty()) {
                    doc.delta = delta;
                    doc.extra["er_graph"] = er_graph_json(doc.space, g);
                    emit_space(ctx, out_path, doc);
                }
                return ok ? kOk : kRefuted;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("indep", "is A independent from C over B");
        space_opt(sub);
        delta_opt(sub);
        sub->add_option("--a", a_text, "A")->required();
        sub->add_option("--b", b_text, "B, nonempty")->required();
        sub->add_option("--c", c_text, "C")->required();
        sub->callback([&] {
            action = [&] {
                const auto doc = load_metric(space_path);
                const auto& s = doc.space;
                auto opt_subset = [&](const std::string& t) { return split_list(t).empty() ? s.empty_subset() : s.subset_of(split_list(t)); };
                const auto q = indep(s, resolve_delta(delta_flag, doc), opt_subset(a_text), subset_arg(s, b_text, "--b"), opt_subset(c_text));
                out << "INDEPENDENT: " << yes(q.verdict) << "\n";
                if (!q.verdict) {
                    out << "REASON: " << q.reason << "\n";
                    print_matrix(out, "ACTUAL", q.actual);
                    print_matrix(out, "PREDICTED", q.predicted);
                }
                return q.verdict ? kOk : kRefuted;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("sir-check", "sampled stationary independence properties on a stage");
        sub->add_option("--bundle", bundle, "stage bundle directory")->required();
        sub->add_option("--seed", seed, "sampling seed")->required();
        sub->add_option("--samples", samples, "queries for invariance, monotonicity, symmetry")->capture_default_str();
        sub->add_option("--constructions", constructions, "instances for existence and stationarity")->capture_default_str();
        sub->add_option("--max-set", max_set, "largest sampled set")->capture_default_str();
        sub->callback([&] {
            action = [&] {
                const auto loaded = load_bundle(bundle);
                SirOptions opt;
                opt.samples = samples;
                opt.constructions = constructions;
                opt.max_set_size = max_set;
                opt.seed = seed;
                const auto r = check_sir_properties(loaded.stage, opt);
                for (const auto& item : r.items) {
                    std::string key = item.name;
                    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::toupper(c); });
                    out << key << ": " << (item.passed() ? "pass" : "fail") << " checked=" << item.checked
                        << " independent=" << item.positives << " violations=" << item.violations << "\n";
                    if (!item.passed()) out << key << "_WITNESS: " << item.witness << "\n";
                }
                out << "AMALGAMATION_STEPS: " << r.amalgamation_steps << "\n";
                return r.passed() ? kOk : kRefuted;
            };
        });
    }
    {
        auto* sub = app.add_subcommand("counterexample", "five-point family without an amalgam");
        sub->add_option("--delta", delta_flag, "delta > 0")->required();
        sub->add_option("--params", params_text, "x0,x1,z,z0,z1")->required();
        sub->add_option("--grid-denominator", grid, "denominator of the scanned values of d(a,b)")->capture_default_str();
        sub->callback([&] {
            action = [&] {
                const auto p = parse_counterexample_params(parse_rational(delta_flag), params_text);
                const auto r = verify_no_amalgam(p, grid);
                const auto& c = r.config;
                out << "DELTA: " << to_string(p.delta) << "\nPARAMS: " << to_string(p.x0) << "," << to_string(p.x1) << ","
                    << to_string(p.z) << "," << to_string(p.z0) << "," << to_string(p.z1) << "\n";
                for (std::size_t i = 0; i < c.distances.size(); ++i) out << distance_names[i] << ": " << to_string(c.distances[i]) << "\n";
                out << "B1_HYPERBOLIC: " << yes(r.b1_hyperbolic) << "\nB2_HYPERBOLIC: " << yes(r.b2_hyperbolic) << "\n";
                out << "INTERVAL: [" << to_string(r.lo) << ", " << to_string(r.hi) << "]" << (r.interval_empty ? " empty" : "") << "\n";
                for (std::size_t i = 0; i < r.affine.size(); ++i) {
                    const auto& a = r.affine[i];
                    out << "AFFINE_" << i + 1 << ": " << a.inequality << " " << (a.holds ? "holds" : "fails") << " lo: "
                        << to_string(a.lhs_at_lo) << ">" << to_string(a.rhs_at_lo) << " hi: " << to_string(a.lhs_at_hi) << ">"
                        << to_string(a.rhs_at_hi) << "\n";
                }
                out << "GRID_DENOMINATOR: " << r.grid_denominator << "\nGRID_POINTS: " << r.grid_points << "\n";
                if (!r.interval_empty) {
                    out << "WITNESS: a,b,c,d\nSUMS: " << to_string(r.witness.e) << "," << to_string(r.witness.f) << ","
                        << to_string(r.witness.g) << "\nDEFECT: " << to_string(r.witness.defect) << "\n";
                }
                if (r.admissible_r) out << "ADMISSIBLE_R: " << to_string(*r.admissible_r) << "\n";
                out << "RESULT: " << (r.no_admissible_r() ? "no admissible r" : "admissible r exists") << "\n";
                return r.no_admissible_r() ? kOk : kRefuted;
            };
        });
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }
    try {
        return action();
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << "\n";
        return kResourceLimit;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
}

} // namespace hyperlim::cli
