#pragma once

// JSON documents for bisheaves and stratifications, plus the plain-text
// exporters used by the command line.
//
// Bisheaf document (schema_version "1"):
//   {
//     "schema_version": "1",
//     "prime": 2,                                   optional, default 2
//     "complex": [[0,1],[1,2]],                     maximal simplices
//     "stalks":       [{"simplex": [0], "dim": 1}, ...],
//     "costalks":     [{"simplex": [0], "dim": 1}, ...],
//     "restrictions": [{"face": [1], "coface": [0,1], "matrix": [[0]]}, ...],
//     "extensions":   [{"face": [1], "coface": [0,1], "matrix": [[1]]}, ...],
//     "verticals":    [{"simplex": [0], "matrix": [[1]]}, ...]
//   }
// Omitted dimensions are 0, omitted matrices are zero. Matrices are lists of
// rows; entries are arbitrary integers reduced mod p.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bisheaf.hpp"
#include "complex.hpp"
#include "errors.hpp"
#include "field_matrix.hpp"
#include "stratification.hpp"
#include "stratify.hpp"

namespace bistrat {

inline constexpr const char* schema_version = "1";

class ParseError : public Error {
public:
    ParseError(std::string path, std::string message, std::optional<std::size_t> line = std::nullopt)
        : Error(format(path, message, line)), path_(std::move(path)), line_(line) {}

    const std::string& path() const noexcept { return path_; }
    std::optional<std::size_t> line() const noexcept { return line_; }

private:
    static std::string format(const std::string& path, const std::string& message, std::optional<std::size_t> line) {
        std::string out;
        if (line) out += "line " + std::to_string(*line) + ": ";
        if (!path.empty()) out += path + ": ";
        return out + message;
    }

    std::string path_;
    std::optional<std::size_t> line_;
};

// Raised after a successful parse when the bisheaf axioms fail.
class InvalidBisheafError : public BisheafError {
public:
    InvalidBisheafError(std::string message, std::vector<std::string> violations)
        : BisheafError(std::move(message)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

namespace detail {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

inline json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        throw ParseError("", std::string("syntax error: ") + e.what(), line);
    }
}

inline const json& member(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path, std::string("missing key \"") + key + "\"");
    return *it;
}

inline std::int64_t as_integer(const json& v, const std::string& path) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_unsigned() && v.get<std::uint64_t>() <= static_cast<std::uint64_t>(INT64_MAX))
        return static_cast<std::int64_t>(v.get<std::uint64_t>());
    throw ParseError(path, "expected an integer");
}

inline const json& as_array(const json& v, const std::string& path) {
    if (!v.is_array()) throw ParseError(path, "expected an array");
    return v;
}

inline Simplex as_simplex(const json& v, const std::string& path) {
    std::vector<std::int64_t> ids;
    for (std::size_t i = 0; i < as_array(v, path).size(); ++i) ids.push_back(as_integer(v[i], path + "/" + std::to_string(i)));
    try {
        return Simplex::from_unsorted(ids);
    } catch (const ComplexError& e) {
        throw ParseError(path, e.what());
    }
}

inline SimplexId lookup_simplex(const Complex& c, const json& v, const std::string& path) {
    auto s = as_simplex(v, path);
    auto id = c.find(s);
    if (!id) throw ParseError(path, "unknown simplex [" + s.to_string() + "]");
    return *id;
}

inline FieldMatrix as_matrix(const json& v, Prime p, std::size_t rows, std::size_t cols, const std::string& path) {
    as_array(v, path);
    if (v.size() != rows)
        throw ParseError(path, "shape mismatch: expected " + std::to_string(rows) + " rows, got " + std::to_string(v.size()));
    FieldMatrix m(p, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string row_path = path + "/" + std::to_string(r);
        const auto& row = as_array(v[r], row_path);
        if (row.size() != cols)
            throw ParseError(row_path, "shape mismatch: expected " + std::to_string(cols) + " columns, got " +
                                           std::to_string(row.size()));
        for (std::size_t c = 0; c < cols; ++c) m.set(r, c, p.reduce(as_integer(row[c], row_path + "/" + std::to_string(c))));
    }
    return m;
}

inline Complex complex_from_json(const json& tops, const std::string& path) {
    as_array(tops, path);
    if (tops.empty()) throw ParseError(path, "complex needs at least one simplex");
    std::vector<Simplex> simplices;
    for (std::size_t i = 0; i < tops.size(); ++i) simplices.push_back(as_simplex(tops[i], path + "/" + std::to_string(i)));
    try {
        return build_complex(std::span<const Simplex>(simplices));
    } catch (const ComplexError& e) {
        throw ParseError(path, e.what());
    }
}

inline ordered simplex_json(const Complex& c, SimplexId s) { return ordered(c.simplex(s).vertices()); }

inline ordered matrix_json(const FieldMatrix& m) {
    ordered rows = ordered::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        ordered row = ordered::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

// Top-level object with one compact entry per line for list members.
inline std::string layout(const std::vector<std::pair<std::string, ordered>>& fields) {
    std::string out = "{\n";
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto& [key, value] = fields[i];
        out += "  \"" + key + "\": ";
        if (value.is_array() && !value.empty() && (value.front().is_object() || key == "frontier")) {
            out += "[\n";
            for (std::size_t j = 0; j < value.size(); ++j)
                out += "    " + value[j].dump() + (j + 1 < value.size() ? ",\n" : "\n");
            out += "  ]";
        } else {
            out += value.dump();
        }
        out += i + 1 < fields.size() ? ",\n" : "\n";
    }
    return out + "}\n";
}

} // namespace detail

inline Complex parse_complex(const std::string& text) {
    auto doc = detail::parse_json(text);
    if (doc.is_array()) return detail::complex_from_json(doc, "");
    return detail::complex_from_json(detail::member(doc, "complex", ""), "/complex");
}

// Reads a bisheaf document. With check_axioms, a bisheaf whose squares or
// diamonds fail is rejected with InvalidBisheafError.
inline Bisheaf parse_bisheaf(const std::string& text, bool check_axioms = true) {
    using namespace detail;
    auto doc = parse_json(text);
    if (!doc.is_object()) throw ParseError("", "expected a bisheaf document object");
    const auto& version = member(doc, "schema_version", "");
    if (!version.is_string() || version.get<std::string>() != schema_version)
        throw ParseError("/schema_version", std::string("unsupported schema version, expected \"") + schema_version + "\"");

    std::int64_t modulus = 2;
    if (doc.contains("prime")) modulus = as_integer(doc["prime"], "/prime");
    if (modulus < 2 || !is_prime(static_cast<std::uint64_t>(modulus)) || modulus > static_cast<std::int64_t>(UINT32_MAX))
        throw ParseError("/prime", "modulus " + std::to_string(modulus) + " is not a prime below 2^32");
    const Prime p(static_cast<std::uint64_t>(modulus));

    auto c = std::make_shared<const Complex>(complex_from_json(member(doc, "complex", ""), "/complex"));
    const std::size_t n = c->size();

    auto read_dims = [&](const char* key) {
        std::vector<std::size_t> dims(n, 0);
        std::vector<char> seen(n, 0);
        if (!doc.contains(key)) return dims;
        const std::string path = std::string("/") + key;
        const auto& list = as_array(doc[key], path);
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string item = path + "/" + std::to_string(i);
            auto s = lookup_simplex(*c, member(list[i], "simplex", item), item + "/simplex");
            auto d = as_integer(member(list[i], "dim", item), item + "/dim");
            if (d < 0) throw ParseError(item + "/dim", "dimension must be nonnegative");
            if (seen[s]++) throw ParseError(item, "duplicate entry for simplex [" + c->simplex(s).to_string() + "]");
            dims[s] = static_cast<std::size_t>(d);
        }
        return dims;
    };
    auto stalks = read_dims("stalks");
    auto costalks = read_dims("costalks");

    auto read_maps = [&](const char* key, bool sheaf_side) {
        std::map<Relation, FieldMatrix> maps;
        for (auto rel : c->covering_relations())
            maps.emplace(rel, sheaf_side ? FieldMatrix(p, stalks[rel.second], stalks[rel.first])
                                         : FieldMatrix(p, costalks[rel.first], costalks[rel.second]));
        if (!doc.contains(key)) return maps;
        std::vector<Relation> seen;
        const std::string path = std::string("/") + key;
        const auto& list = as_array(doc[key], path);
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string item = path + "/" + std::to_string(i);
            auto face = lookup_simplex(*c, member(list[i], "face", item), item + "/face");
            auto coface = lookup_simplex(*c, member(list[i], "coface", item), item + "/coface");
            Relation rel{face, coface};
            auto it = maps.find(rel);
            if (it == maps.end())
                throw ParseError(item, "[" + c->simplex(face).to_string() + "] < [" + c->simplex(coface).to_string() +
                                           "] is not a covering relation");
            if (std::find(seen.begin(), seen.end(), rel) != seen.end()) throw ParseError(item, "duplicate entry");
            seen.push_back(rel);
            it->second = as_matrix(member(list[i], "matrix", item), p, it->second.rows(), it->second.cols(), item + "/matrix");
        }
        return maps;
    };
    auto restrictions = read_maps("restrictions", true);
    auto extensions = read_maps("extensions", false);

    std::vector<FieldMatrix> verticals;
    for (SimplexId s = 0; s < n; ++s) verticals.emplace_back(p, costalks[s], stalks[s]);
    if (doc.contains("verticals")) {
        std::vector<char> seen(n, 0);
        const auto& list = as_array(doc["verticals"], "/verticals");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string item = "/verticals/" + std::to_string(i);
            auto s = lookup_simplex(*c, member(list[i], "simplex", item), item + "/simplex");
            if (seen[s]++) throw ParseError(item, "duplicate entry for simplex [" + c->simplex(s).to_string() + "]");
            verticals[s] = as_matrix(member(list[i], "matrix", item), p, costalks[s], stalks[s], item + "/matrix");
        }
    }

    Bisheaf b(c, p, std::move(stalks), std::move(costalks), std::move(restrictions), std::move(extensions),
              std::move(verticals));
    if (check_axioms) {
        auto violations = validate(b);
        if (!violations.empty()) {
            std::vector<std::string> lines;
            for (const auto& v : violations) lines.push_back(describe(*c, v));
            throw InvalidBisheafError("bisheaf fails " + std::to_string(violations.size()) + " axiom check(s)",
                                      std::move(lines));
        }
    }
    return b;
}

// Complete document: every stalk, costalk and map written out.
inline std::string serialize_bisheaf(const Bisheaf& b) {
    using namespace detail;
    const Complex& c = b.complex();
    ordered tops = ordered::array();
    for (const auto& s : c.maximal_simplices()) tops.push_back(s.vertices());
    ordered stalks = ordered::array(), costalks = ordered::array(), verticals = ordered::array();
    for (SimplexId s = 0; s < c.size(); ++s) {
        stalks.push_back(ordered{{"simplex", simplex_json(c, s)}, {"dim", b.stalk_dim(s)}});
        costalks.push_back(ordered{{"simplex", simplex_json(c, s)}, {"dim", b.costalk_dim(s)}});
        verticals.push_back(ordered{{"simplex", simplex_json(c, s)}, {"matrix", matrix_json(b.vertical(s))}});
    }
    ordered restrictions = ordered::array(), extensions = ordered::array();
    for (auto rel : c.covering_relations()) {
        restrictions.push_back(ordered{{"face", simplex_json(c, rel.first)},
                                       {"coface", simplex_json(c, rel.second)},
                                       {"matrix", matrix_json(b.restriction(rel))}});
        extensions.push_back(ordered{{"face", simplex_json(c, rel.first)},
                                     {"coface", simplex_json(c, rel.second)},
                                     {"matrix", matrix_json(b.extension(rel))}});
    }
    return layout({{"schema_version", schema_version},
                   {"prime", b.prime().value()},
                   {"complex", tops},
                   {"stalks", stalks},
                   {"costalks", costalks},
                   {"restrictions", restrictions},
                   {"extensions", extensions},
                   {"verticals", verticals}});
}

inline std::string serialize_stratification(const Complex& c, const Stratification& s) {
    using namespace detail;
    ordered strata = ordered::array();
    for (StratumId id = 0; id < s.strata().size(); ++id) {
        ordered members = ordered::array();
        for (auto x : s.stratum(id).simplices) members.push_back(simplex_json(c, x));
        strata.push_back(ordered{{"id", id}, {"dimension", s.stratum(id).dimension}, {"simplices", members}});
    }
    ordered filtration = ordered::array();
    for (int d = -1; d <= s.top_level(); ++d) {
        ordered members = ordered::array();
        for (auto x : s.level(d).members()) members.push_back(simplex_json(c, x));
        filtration.push_back(ordered{{"level", d}, {"simplices", members}});
    }
    ordered frontier = ordered::array();
    for (auto [lo, hi] : s.frontier()) frontier.push_back(ordered::array({lo, hi}));
    ordered labels = ordered::array();
    for (SimplexId x = 0; x < c.size(); ++x)
        labels.push_back(ordered{{"simplex", simplex_json(c, x)}, {"stratum", s.stratum_of(x)}});
    return layout({{"schema_version", schema_version},
                   {"dimension", c.dimension()},
                   {"strata", strata},
                   {"filtration", filtration},
                   {"frontier", frontier},
                   {"labels", labels}});
}

// Reads a stratification document against a known complex. Only structure is
// checked here; use verify_stratification for the axioms.
inline Stratification parse_stratification(const std::string& text, const Complex& c) {
    using namespace detail;
    auto doc = parse_json(text);
    const auto& version = member(doc, "schema_version", "");
    if (!version.is_string() || version.get<std::string>() != schema_version)
        throw ParseError("/schema_version", "unsupported schema version");

    std::vector<Stratum> strata;
    const auto& strata_json = as_array(member(doc, "strata", ""), "/strata");
    for (std::size_t i = 0; i < strata_json.size(); ++i) {
        const std::string item = "/strata/" + std::to_string(i);
        if (as_integer(member(strata_json[i], "id", item), item + "/id") != static_cast<std::int64_t>(i))
            throw ParseError(item + "/id", "strata must be listed in id order");
        Stratum st;
        st.dimension = static_cast<int>(as_integer(member(strata_json[i], "dimension", item), item + "/dimension"));
        const auto& members = as_array(member(strata_json[i], "simplices", item), item + "/simplices");
        for (std::size_t j = 0; j < members.size(); ++j)
            st.simplices.push_back(lookup_simplex(c, members[j], item + "/simplices/" + std::to_string(j)));
        std::sort(st.simplices.begin(), st.simplices.end());
        strata.push_back(std::move(st));
    }

    std::vector<SubcomplexMask> filtration;
    const auto& levels = as_array(member(doc, "filtration", ""), "/filtration");
    if (levels.size() != static_cast<std::size_t>(c.dimension() + 2))
        throw ParseError("/filtration", "expected one entry per level -1.." + std::to_string(c.dimension()));
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const std::string item = "/filtration/" + std::to_string(i);
        if (as_integer(member(levels[i], "level", item), item + "/level") != static_cast<std::int64_t>(i) - 1)
            throw ParseError(item + "/level", "levels must run from -1 upwards");
        SubcomplexMask mask = SubcomplexMask::none(c);
        const auto& members = as_array(member(levels[i], "simplices", item), item + "/simplices");
        for (std::size_t j = 0; j < members.size(); ++j)
            mask.insert(lookup_simplex(c, members[j], item + "/simplices/" + std::to_string(j)));
        filtration.push_back(std::move(mask));
    }

    std::vector<FrontierPair> frontier;
    const auto& pairs = as_array(member(doc, "frontier", ""), "/frontier");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const std::string item = "/frontier/" + std::to_string(i);
        const auto& pair = as_array(pairs[i], item);
        if (pair.size() != 2) throw ParseError(item, "expected a pair of stratum ids");
        auto lo = as_integer(pair[0], item + "/0"), hi = as_integer(pair[1], item + "/1");
        if (lo < 0 || hi < 0 || static_cast<std::size_t>(lo) >= strata.size() || static_cast<std::size_t>(hi) >= strata.size())
            throw ParseError(item, "unknown stratum id");
        frontier.emplace_back(static_cast<StratumId>(lo), static_cast<StratumId>(hi));
    }

    std::vector<StratumId> labels(c.size(), strata.size());
    const auto& label_json = as_array(member(doc, "labels", ""), "/labels");
    for (std::size_t i = 0; i < label_json.size(); ++i) {
        const std::string item = "/labels/" + std::to_string(i);
        auto s = lookup_simplex(c, member(label_json[i], "simplex", item), item + "/simplex");
        auto id = as_integer(member(label_json[i], "stratum", item), item + "/stratum");
        if (id < 0 || static_cast<std::size_t>(id) >= strata.size()) throw ParseError(item + "/stratum", "unknown stratum id");
        labels[s] = static_cast<StratumId>(id);
    }
    for (SimplexId s = 0; s < c.size(); ++s)
        if (labels[s] == strata.size()) throw ParseError("/labels", "no label for simplex [" + c.simplex(s).to_string() + "]");
    return Stratification(std::move(filtration), std::move(strata), std::move(labels), std::move(frontier));
}

// One line per simplex: "<vertices> <stratum id>".
inline std::string format_labels(const Complex& c, const Stratification& s) {
    std::string out;
    for (SimplexId x = 0; x < c.size(); ++x) out += c.simplex(x).to_string() + " " + std::to_string(s.stratum_of(x)) + "\n";
    return out;
}

// One line per filtration level: "M_<d>: <simplex> <simplex> ...".
inline std::string format_filtration(const Complex& c, const Stratification& s) {
    std::string out;
    for (int d = -1; d <= s.top_level(); ++d) {
        out += "M_" + std::to_string(d) + ":";
        for (auto x : s.level(d).members()) out += " " + c.simplex(x).to_string();
        out += "\n";
    }
    return out;
}

// Frontier order as a Graphviz digraph, nodes labelled "<dimension>:<least simplex>".
inline std::string format_dot(const Complex& c, const Stratification& s) {
    std::string out = "digraph frontier {\n";
    for (StratumId id = 0; id < s.strata().size(); ++id)
        out += "  s" + std::to_string(id) + " [label=\"" + std::to_string(s.stratum(id).dimension) + ":" +
               c.simplex(s.stratum(id).simplices.front()).to_string() + "\"];\n";
    for (auto [lo, hi] : s.frontier()) out += "  s" + std::to_string(lo) + " -> s" + std::to_string(hi) + ";\n";
    return out + "}\n";
}

} // namespace bistrat
