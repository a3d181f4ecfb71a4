#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hyperlim/metric_space.hpp"

namespace hyperlim {

using Json = nlohmann::ordered_json;

/// Contents of a space file: the space, an optional δ, optional marked
/// subsets (as label lists) and any extra blocks appended by tools
/// (projection tables, edge lists), kept in insertion order.
struct SpaceDocument {
    std::optional<Rational> delta;
    FiniteMetricSpace space;
    std::vector<std::vector<std::string>> marked;
    Json extra = Json::object();
};

namespace detail {

inline Rational rational_from_json(const Json& value, const std::string& where) {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer()) {
        const auto n = value.get<std::int64_t>();
        if (n > kRationalInputBound || n < -kRationalInputBound) throw InputError(where + ": integer out of range");
        return Rational(n);
    }
    throw InputError(where + ": expected a rational string or integer");
}

inline std::string quoted(const std::string& s) { return Json(s).dump(); }

} // namespace detail

inline SpaceDocument parse_space_document(const std::string& text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(std::string("space file is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw InputError("space file must be a JSON object");
    if (!root.contains("points") || !root["points"].is_array()) throw InputError("space file needs a \"points\" list");
    if (!root.contains("dist") || !root["dist"].is_array()) throw InputError("space file needs a \"dist\" matrix");

    SpaceDocument doc;
    std::vector<std::string> labels;
    for (const auto& p : root["points"]) {
        if (!p.is_string()) throw InputError("point labels must be strings");
        labels.push_back(p.get<std::string>());
    }
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 0; i < root["dist"].size(); ++i) {
        const auto& row = root["dist"][i];
        if (!row.is_array()) throw InputError("dist row " + std::to_string(i) + " is not a list");
        rows.emplace_back();
        for (std::size_t j = 0; j < row.size(); ++j) {
            rows.back().push_back(
                detail::rational_from_json(row[j], "dist[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
        }
    }
    doc.space = FiniteMetricSpace::from_rows(std::move(labels), rows);
    if (root.contains("delta") && !root["delta"].is_null()) doc.delta = detail::rational_from_json(root["delta"], "delta");
    if (root.contains("marked")) {
        if (!root["marked"].is_array()) throw InputError("\"marked\" must be a list of label lists");
        for (const auto& group : root["marked"]) {
            if (!group.is_array()) throw InputError("\"marked\" must be a list of label lists");
            std::vector<std::string> names;
            for (const auto& l : group) {
                if (!l.is_string()) throw InputError("marked labels must be strings");
                doc.space.index_of(l.get<std::string>());
                names.push_back(l.get<std::string>());
            }
            doc.marked.push_back(std::move(names));
        }
    }
    for (auto it = root.begin(); it != root.end(); ++it) {
        if (it.key() == "delta" || it.key() == "points" || it.key() == "dist" || it.key() == "marked") continue;
        doc.extra[it.key()] = it.value();
    }
    return doc;
}

/// Deterministic text form: one matrix row per line, canonical rationals.
inline std::string serialize_space_document(const SpaceDocument& doc) {
    std::ostringstream out;
    const auto& s = doc.space;
    out << "{\n";
    if (doc.delta) out << "  \"delta\": " << detail::quoted(to_string(*doc.delta)) << ",\n";
    out << "  \"points\": [";
    for (Index i = 0; i < s.size(); ++i) out << (i ? ", " : "") << detail::quoted(s.label(i));
    out << "],\n  \"dist\": [";
    for (Index i = 0; i < s.size(); ++i) {
        out << (i ? ",\n    [" : "\n    [");
        for (Index j = 0; j < s.size(); ++j) out << (j ? ", " : "") << detail::quoted(to_string(s.d(i, j)));
        out << "]";
    }
    out << (s.size() ? "\n  ]" : "]");
    if (!doc.marked.empty()) {
        out << ",\n  \"marked\": [";
        for (std::size_t g = 0; g < doc.marked.size(); ++g) {
            out << (g ? ", [" : "[");
            for (std::size_t k = 0; k < doc.marked[g].size(); ++k) out << (k ? ", " : "") << detail::quoted(doc.marked[g][k]);
            out << "]";
        }
        out << "]";
    }
    for (auto it = doc.extra.begin(); it != doc.extra.end(); ++it) {
        out << ",\n  " << detail::quoted(it.key()) << ": " << it.value().dump();
    }
    out << "\n}\n";
    return out.str();
}

inline std::string serialize_space(const FiniteMetricSpace& space, std::optional<Rational> delta = std::nullopt) {
    SpaceDocument doc;
    doc.space = space;
    doc.delta = delta;
    return serialize_space_document(doc);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write \"" + path + "\"");
    out << text;
}

inline SpaceDocument load_space_document(const std::string& path) { return parse_space_document(read_text_file(path)); }

} // namespace hyperlim
