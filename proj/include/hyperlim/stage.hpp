#pragma once

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hyperlim/amalgam.hpp"
#include "hyperlim/enumerate.hpp"
#include "hyperlim/isometry.hpp"
#include "hyperlim/space_io.hpp"

namespace hyperlim {

/// Parameters of a chain of finite stages.
struct StageConfig {
    EnumerationParams catalog;
    /// Distinguished subsets of a stage: all δ-closed subsets of at most this size.
    std::size_t distinguished_cap = 4;
    /// Every k-th scheduled step is a homogeneity demand (0 disables them).
    std::size_t homogeneity_every = 0;

    const Rational& delta() const { return catalog.delta; }
};

/// One amalgamation of the current stage with an operand over a shared part.
///
/// The operand is either catalog entry `catalog_index` or, for `Copy`, the
/// subspace of the current stage on `copied`. `map` sends operand labels to
/// the stage labels they are identified with.
struct StepRecord {
    enum class Kind { Glue, Copy };
    Kind kind = Kind::Glue;
    std::size_t catalog_index = 0;
    std::vector<std::string> copied;
    std::uint64_t operand_hash = 0;
    std::vector<std::pair<std::string, std::string>> map;

    friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

/// A finite stage: a marked δ-hyperbolic space plus the steps that built it.
struct Stage {
    MarkedSpace marked;
    std::vector<StepRecord> log;
    std::size_t index = 0;

    const FiniteMetricSpace& space() const { return marked.space; }
    const Rational& delta() const { return marked.delta; }
};

/// 64-bit FNV-1a; stable across platforms, used to pin operands in logs.
inline std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t space_hash(const FiniteMetricSpace& space) { return fnv1a(serialize_space(space)); }

// ---------------------------------------------------------------------------
// Step log text form: one record per line,
//   glue catalog=<i> hash=<hex> map=<op>><stage>,...
//   copy subset=<l1>,<l2>,... hash=<hex> map=<op>><stage>,...

namespace detail {

inline std::string hex64(std::uint64_t v) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << v;
    return out.str();
}

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    if (text.empty()) return out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace detail

inline std::string format_step(const StepRecord& r) {
    std::string out = r.kind == StepRecord::Kind::Glue ? "glue catalog=" + std::to_string(r.catalog_index) : "copy subset=";
    if (r.kind == StepRecord::Kind::Copy) {
        for (std::size_t i = 0; i < r.copied.size(); ++i) out += (i ? "," : "") + r.copied[i];
    }
    out += " hash=" + detail::hex64(r.operand_hash) + " map=";
    for (std::size_t i = 0; i < r.map.size(); ++i) out += (i ? "," : "") + r.map[i].first + ">" + r.map[i].second;
    return out;
}

inline StepRecord parse_step(const std::string& line) {
    StepRecord r;
    std::istringstream in(line);
    std::string op, operand, hash, map;
    in >> op >> operand >> hash >> map;
    auto value_of = [&](const std::string& field, const std::string& key) {
        if (field.rfind(key + "=", 0) != 0) throw InputError("malformed step record: \"" + line + "\"");
        return field.substr(key.size() + 1);
    };
    if (op == "glue") {
        r.kind = StepRecord::Kind::Glue;
        try {
            r.catalog_index = std::stoull(value_of(operand, "catalog"));
        } catch (const std::logic_error&) {
            throw InputError("malformed catalog index in step record: \"" + line + "\"");
        }
    } else if (op == "copy") {
        r.kind = StepRecord::Kind::Copy;
        r.copied = detail::split(value_of(operand, "subset"), ',');
    } else {
        throw InputError("unknown step operation \"" + op + "\"");
    }
    try {
        r.operand_hash = std::stoull(value_of(hash, "hash"), nullptr, 16);
    } catch (const std::logic_error&) {
        throw InputError("malformed hash in step record: \"" + line + "\"");
    }
    for (const auto& pair : detail::split(value_of(map, "map"), ',')) {
        const auto gt = pair.find('>');
        if (gt == std::string::npos) throw InputError("malformed map entry \"" + pair + "\"");
        r.map.emplace_back(pair.substr(0, gt), pair.substr(gt + 1));
    }
    if (r.map.empty()) throw InputError("step record without a shared part: \"" + line + "\"");
    return r;
}

// ---------------------------------------------------------------------------
// Stage construction

inline Stage initial_stage(const StageConfig& config) {
    Stage s;
    s.marked.space = FiniteMetricSpace({"h0"}, {Rational(0)});
    s.marked.delta = config.delta();
    s.marked.closed_size_cap = config.distinguished_cap;
    return s;
}

struct AppliedStep {
    Stage stage;
    Amalgam amalgam; ///< positions of the old stage (B1) and the operand (B2)
};

/// Amalgamates the stage with the record's operand. New points are
/// labelled h<k> with k their position.
inline AppliedStep apply_step(const Stage& stage, const StepRecord& record, const std::vector<FiniteMetricSpace>& catalog) {
    FiniteMetricSpace operand;
    if (record.kind == StepRecord::Kind::Glue) {
        if (record.catalog_index >= catalog.size()) throw InputError("step refers to a missing catalog entry");
        operand = catalog[record.catalog_index];
    } else {
        operand = subspace(stage.space(), stage.space().subset_of(record.copied));
    }
    if (space_hash(operand) != record.operand_hash) throw InputError("step operand hash mismatch: \"" + format_step(record) + "\"");
    AmalgamSpec spec{stage.space(), operand, {}, stage.delta()};
    for (const auto& [from, to] : record.map) {
        spec.correspondence.emplace_back(stage.space().index_of(to), operand.index_of(from));
    }
    AppliedStep out{stage, canonical_amalgam(spec)};
    auto labels = out.amalgam.space.labels();
    for (Index i = stage.space().size(); i < labels.size(); ++i) labels[i] = "h" + std::to_string(i);
    out.amalgam.space = relabeled(out.amalgam.space, std::move(labels));
    out.stage.marked.space = out.amalgam.space;
    out.stage.log.push_back(record);
    out.stage.index = stage.index + 1;
    return out;
}

/// Re-applies a step log from the initial singleton.
inline Stage replay_stage(const StageConfig& config, const std::vector<FiniteMetricSpace>& catalog,
                          const std::vector<StepRecord>& log) {
    Stage s = initial_stage(config);
    for (const auto& r : log) s = apply_step(s, r, catalog).stage;
    return s;
}

/// Thrown if a step produced a space violating the amalgamation lemma.
class StageInvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace detail {

// Platform-independent pick in [0, n).
inline std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

inline std::vector<Subset> overlap_candidates(const FiniteMetricSpace& x, const Rational& delta, std::size_t cap) {
    std::vector<Subset> out;
    if (x.size() < 3) return out;
    std::vector<Index> pool(x.size());
    for (Index i = 0; i < pool.size(); ++i) pool[i] = i;
    const std::size_t top = std::min(cap, x.size() - 1);
    for (std::size_t k = 2; k <= top; ++k) {
        for_each_combination(pool, k, [&](const std::vector<std::size_t>& pick) {
            Subset s(x.size());
            for (auto p : pick) s.set(p);
            if (is_delta_closed(x, s, delta).verdict) out.push_back(std::move(s));
            return false;
        });
    }
    return out;
}

// Distance-preserving maps of `x` into the stage whose image is δ-closed.
inline std::vector<PartialIsometry> closed_embeddings(const FiniteMetricSpace& x, const FiniteMetricSpace& host,
                                                      const Rational& delta, std::size_t limit) {
    std::vector<PartialIsometry> out;
    for_each_embedding(x, host, {}, [&](const PartialIsometry& f) {
        if (is_delta_closed(host, f.codomain(host.size()), delta).verdict) out.push_back(f);
        return out.size() >= limit;
    });
    return out;
}

inline StepRecord glue_demand(const Stage& stage, const std::vector<FiniteMetricSpace>& catalog, std::size_t entry,
                              std::size_t round, const StageConfig& config, std::mt19937_64& rng) {
    const auto& x = catalog[entry];
    StepRecord r;
    r.kind = StepRecord::Kind::Glue;
    r.catalog_index = entry;
    r.operand_hash = space_hash(x);
    if (round > 0) {
        // Later rounds glue over a larger distinguished part when the stage
        // already holds a δ-closed copy of it.
        auto overlaps = overlap_candidates(x, config.delta(), config.distinguished_cap);
        if (!overlaps.empty()) {
            const Subset& s = overlaps[pick(rng, overlaps.size())];
            const auto sub = subspace(x, s);
            auto embeds = closed_embeddings(sub, stage.space(), config.delta(), 32);
            if (!embeds.empty()) {
                const auto& f = embeds[pick(rng, embeds.size())];
                const auto idx = members(s);
                for (const auto& [a, b] : f.pairs) r.map.emplace_back(x.label(idx[a]), stage.space().label(b));
                return r;
            }
        }
    }
    const Index from = pick(rng, x.size());
    const Index to = pick(rng, stage.space().size());
    r.map.emplace_back(x.label(from), stage.space().label(to));
    return r;
}

// One forth step of the back-and-forth for a random pair of points:
// copy cl({p, x}) over p, identifying p with q.
inline StepRecord homogeneity_demand(const Stage& stage, std::mt19937_64& rng) {
    const auto& space = stage.space();
    const std::size_t n = space.size();
    const Index p = pick(rng, n);
    const Index q = pick(rng, n);
    Subset seed = space.singleton(p);
    if (n > 1) {
        Index x = pick(rng, n - 1);
        if (x >= p) ++x;
        seed.set(x);
    }
    const Subset s = closure(space, seed, stage.delta());
    StepRecord r;
    r.kind = StepRecord::Kind::Copy;
    r.copied = space.labels_of(s);
    r.operand_hash = space_hash(subspace(space, s));
    r.map.emplace_back(space.label(p), space.label(q));
    return r;
}

} // namespace detail

/// All stages stage_0 (a distinguished singleton) ... stage_steps.
///
/// Demands are served round-robin over the catalog (ordered by size, then
/// canonical form): in round 0 each entry is glued over a point, in later
/// rounds over a larger distinguished part where possible. Choices are drawn
/// from a generator seeded by `seed`, so the chain is reproducible. Every
/// step is checked against the amalgamation lemma.
inline std::vector<Stage> build_chain(const StageConfig& config, const std::vector<FiniteMetricSpace>& catalog,
                                      std::size_t steps, std::uint64_t seed) {
    if (catalog.empty()) throw InputError("empty catalog");
    std::mt19937_64 rng(seed);
    std::vector<Stage> chain{initial_stage(config)};
    std::size_t served = 0;
    for (std::size_t t = 0; t < steps; ++t) {
        const Stage& current = chain.back();
        StepRecord record;
        if (config.homogeneity_every > 0 && (t + 1) % config.homogeneity_every == 0) {
            record = detail::homogeneity_demand(current, rng);
        } else {
            record = detail::glue_demand(current, catalog, served % catalog.size(), served / catalog.size(), config, rng);
            ++served;
        }
        auto applied = apply_step(current, record, catalog);
        const auto& next = applied.stage.space();
        if (!is_delta_hyperbolic_from(next, current.space().size(), config.delta()).holds) {
            throw StageInvariantError("stage " + std::to_string(applied.stage.index) + " is not delta-hyperbolic");
        }
        chain.push_back(std::move(applied.stage));
    }
    return chain;
}

inline std::vector<FiniteMetricSpace> stage_catalog(const StageConfig& config) {
    auto catalog = enumerate_spaces(config.catalog);
    if (catalog.truncated) throw ResourceError("catalog enumeration exceeded its work limit");
    return std::move(catalog.spaces);
}

inline Stage build_stage(const StageConfig& config, const std::vector<FiniteMetricSpace>& catalog, std::size_t steps,
                         std::uint64_t seed) {
    return std::move(build_chain(config, catalog, steps, seed).back());
}

inline Stage build_stage(const StageConfig& config, std::size_t steps, std::uint64_t seed) {
    return build_stage(config, stage_catalog(config), steps, seed);
}

// ---------------------------------------------------------------------------
// Queries

struct ClosedEmbedding {
    std::optional<PartialIsometry> embedding; ///< from A's points into the stage
    std::string note;
};

/// Distances of `a` all allowed by the enumeration bounds?
inline bool within_bounds(const FiniteMetricSpace& a, const EnumerationParams& p) {
    for (Index i = 0; i < a.size(); ++i) {
        for (Index j = i + 1; j < a.size(); ++j) {
            const auto& v = a.d(i, j);
            if (v > p.diameter_bound || v.denominator() > (p.graph_mode ? 1 : p.denominator_bound)) return false;
        }
    }
    return true;
}

/// Looks for a copy of `a` inside the stage that is δ-closed there. Absence
/// at a finite stage only means the demand has not been served yet.
inline ClosedEmbedding find_closed_embedding(const FiniteMetricSpace& a, const Stage& stage, const StageConfig& config) {
    if (a.size() == 0) throw InputError("cannot embed an empty space");
    if (!within_bounds(a, config.catalog)) return {std::nullopt, "out of bounds"};
    auto found = detail::closed_embeddings(a, stage.space(), stage.delta(), 1);
    if (found.empty()) return {std::nullopt, "no delta-closed copy at stage " + std::to_string(stage.index)};
    return {found.front(), "found"};
}

struct IsometryExtension {
    Stage stage;
    PartialIsometry map;               ///< extends the input map, indices in `stage`
    std::size_t amalgamation_steps = 0;
};

/// Extends an isometry between distinguished subsets of the stage so that
/// at least `budget` more points of the original stage enter its domain,
/// enlarging the stage where needed.
///
/// Forth step: for the first original point x outside the domain, copy
/// S = cl(dom ∪ {x}) into the stage over dom, glued along the map. Back
/// steps do the same for the inverse map and alternate with forth steps.
/// Domain and range stay δ-closed throughout, so each glue is a legal
/// canonical amalgam.
inline IsometryExtension extend_isometry(const Stage& stage, const PartialIsometry& f, std::size_t budget) {
    const auto& space = stage.space();
    const std::size_t n0 = space.size();
    if (f.pairs.empty()) throw InputError("extend_isometry needs a nonempty map");
    if (!preserves_distances(space, space, f)) throw InputError("map is not a distance-preserving injection");
    if (!stage.marked.is_distinguished(f.domain(n0))) throw InputError("domain of the map is not distinguished");
    if (!stage.marked.is_distinguished(f.codomain(n0))) throw InputError("codomain of the map is not distinguished");

    IsometryExtension out{stage, f, 0};
    out.map.normalize();
    auto original_outside = [&](const Subset& covered) -> std::optional<Index> {
        for (Index i = 0; i < n0; ++i) {
            if (!covered.test(i)) return i;
        }
        return std::nullopt;
    };
    auto domain_gain = [&](const PartialIsometry& g) {
        std::size_t k = 0;
        for (const auto& [a, b] : g.pairs) k += a < n0;
        return k;
    };
    const std::size_t start = domain_gain(out.map);

    if (out.map.is_identity()) {
        Subset dom = out.map.domain(n0);
        while (domain_gain(out.map) - start < budget) {
            auto x = original_outside(dom);
            if (!x) break;
            dom.set(*x);
            out.map.pairs.emplace_back(*x, *x);
            out.map.normalize();
        }
        return out;
    }

    // Copies cl(dom(g) ∪ {x}) over dom(g) along g and returns the extended map.
    auto forth = [&](const PartialIsometry& g, Index x) {
        const auto& cur = out.stage.space();
        Subset seed = g.domain(cur.size());
        seed.set(x);
        const Subset s = closure(cur, seed, out.stage.delta());
        StepRecord r;
        r.kind = StepRecord::Kind::Copy;
        r.copied = cur.labels_of(s);
        r.operand_hash = space_hash(subspace(cur, s));
        for (const auto& [a, b] : g.pairs) r.map.emplace_back(cur.label(a), cur.label(b));
        auto applied = apply_step(out.stage, r, {});
        const auto idx = members(s);
        PartialIsometry extended;
        for (std::size_t k = 0; k < idx.size(); ++k) extended.pairs.emplace_back(idx[k], applied.amalgam.from_b2[k]);
        extended.normalize();
        out.stage = std::move(applied.stage);
        ++out.amalgamation_steps;
        return extended;
    };

    bool forward = true;
    while (domain_gain(out.map) - start < budget) {
        const auto& cur = out.stage.space();
        auto x = original_outside(out.map.domain(cur.size()));
        if (!x) break;
        auto y = original_outside(out.map.codomain(cur.size()));
        if (forward || !y) {
            out.map = forth(out.map, *x);
        } else {
            out.map = forth(out.map.inverse(), *y).inverse();
        }
        forward = !forward;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bundles: <dir>/space.json, <dir>/steps.log, <dir>/params.json

inline Json config_to_json(const StageConfig& c, std::size_t steps, std::uint64_t seed) {
    Json j;
    j["delta"] = to_string(c.catalog.delta);
    j["max_size"] = c.catalog.max_size;
    j["denominator_bound"] = c.catalog.denominator_bound;
    j["diameter_bound"] = to_string(c.catalog.diameter_bound);
    j["graph_mode"] = c.catalog.graph_mode;
    j["work_limit"] = c.catalog.work_limit;
    j["distinguished_cap"] = c.distinguished_cap;
    j["homogeneity_every"] = c.homogeneity_every;
    j["steps"] = steps;
    j["seed"] = seed;
    return j;
}

inline StageConfig config_from_json(const Json& j) {
    try {
        StageConfig c;
        c.catalog.delta = parse_rational(j.at("delta").get<std::string>());
        c.catalog.max_size = j.at("max_size").get<std::size_t>();
        c.catalog.denominator_bound = j.at("denominator_bound").get<std::int64_t>();
        c.catalog.diameter_bound = parse_rational(j.at("diameter_bound").get<std::string>());
        c.catalog.graph_mode = j.at("graph_mode").get<bool>();
        c.catalog.work_limit = j.at("work_limit").get<std::size_t>();
        c.distinguished_cap = j.at("distinguished_cap").get<std::size_t>();
        c.homogeneity_every = j.at("homogeneity_every").get<std::size_t>();
        validate(c.catalog);
        return c;
    } catch (const Json::exception& e) {
        throw InputError(std::string("malformed params block: ") + e.what());
    }
}

inline std::string format_log(const std::vector<StepRecord>& log) {
    std::string out;
    for (const auto& r : log) out += format_step(r) + "\n";
    return out;
}

inline std::vector<StepRecord> parse_log(const std::string& text) {
    std::vector<StepRecord> log;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) log.push_back(parse_step(line));
    }
    return log;
}

inline void write_bundle(const std::filesystem::path& dir, const Stage& stage, const StageConfig& config,
                         std::size_t steps, std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    SpaceDocument doc;
    doc.delta = stage.delta();
    doc.space = stage.space();
    doc.extra["stage_index"] = stage.index;
    write_text_file((dir / "space.json").string(), serialize_space_document(doc));
    write_text_file((dir / "steps.log").string(), format_log(stage.log));
    write_text_file((dir / "params.json").string(), config_to_json(config, steps, seed).dump(2) + "\n");
}

struct LoadedBundle {
    StageConfig config;
    Stage stage;
    std::vector<FiniteMetricSpace> catalog;
};

/// Reads a bundle and replays its log; the replayed space must match the
/// stored space file byte for byte.
inline LoadedBundle load_bundle(const std::filesystem::path& dir) {
    Json params;
    try {
        params = Json::parse(read_text_file((dir / "params.json").string()));
    } catch (const Json::parse_error& e) {
        throw InputError(std::string("params.json is not valid JSON: ") + e.what());
    }
    LoadedBundle out;
    out.config = config_from_json(params);
    out.catalog = stage_catalog(out.config);
    const auto log = parse_log(read_text_file((dir / "steps.log").string()));
    out.stage = replay_stage(out.config, out.catalog, log);
    SpaceDocument doc;
    doc.delta = out.stage.delta();
    doc.space = out.stage.space();
    doc.extra["stage_index"] = out.stage.index;
    if (serialize_space_document(doc) != read_text_file((dir / "space.json").string())) {
        throw InputError("bundle space file does not match its replayed step log");
    }
    return out;
}

} // namespace hyperlim
