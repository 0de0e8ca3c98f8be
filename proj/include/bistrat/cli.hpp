#pragma once

// The bistrat command line. run_cli is the whole program; tools/bistrat.cpp
// only forwards argv to it, which keeps every subcommand testable in-process.
//
// Exit codes: 0 ok, 1 domain violation (invalid bisheaf, failed
// certification), 2 usage, I/O or parse error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bisheaf.hpp"
#include "complex.hpp"
#include "errors.hpp"
#include "field_matrix.hpp"
#include "io.hpp"
#include "localize.hpp"
#include "oracle.hpp"
#include "random_bisheaf.hpp"
#include "stratification.hpp"
#include "stratify.hpp"

namespace bistrat {

namespace detail {

struct CliFailure {
    int code;
    std::string kind;
    std::string message;
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

inline void report(std::ostream& err, const CliFailure& f) {
    nlohmann::ordered_json body{{"kind", f.kind}, {"message", f.message}};
    for (const auto& [key, value] : f.extra.items()) body[key] = value;
    err << nlohmann::ordered_json{{"error", body}}.dump() << "\n";
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliFailure{2, "io", "cannot read " + path};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline SimplexId parse_simplex_arg(const Complex& c, const std::string& text, const char* flag) {
    std::vector<std::int64_t> ids;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            ids.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CliFailure{2, "usage", std::string(flag) + " expects comma-separated vertices, got \"" + text + "\""};
        }
    }
    try {
        auto id = c.find(Simplex::from_unsorted(ids));
        if (!id) throw CliFailure{2, "usage", std::string(flag) + ": unknown simplex " + text};
        return *id;
    } catch (const ComplexError& e) {
        throw CliFailure{2, "usage", std::string(flag) + ": " + e.what()};
    }
}

inline Bisheaf load_bisheaf(const std::string& path, bool check_axioms = true) {
    return parse_bisheaf(read_file(path), check_axioms);
}

} // namespace detail

// args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using detail::CliFailure;

    CLI::App app{"Canonical stratifications of bisheaves on simplicial complexes", "bistrat"};
    app.require_subcommand(1);

    std::string file;

    auto* validate_cmd = app.add_subcommand("validate", "Check the bisheaf axioms");
    validate_cmd->add_option("file", file, "Bisheaf document")->required();

    std::string out_path, format = "json";
    auto* stratify_cmd = app.add_subcommand("stratify", "Compute the canonical stratification");
    stratify_cmd->add_option("file", file, "Bisheaf document")->required();
    stratify_cmd->add_option("--out", out_path, "Write to this file instead of standard output");
    stratify_cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "labels", "filtration", "dot"}));

    std::size_t limit = default_oracle_limit;
    auto* certify_cmd = app.add_subcommand("certify", "Check minimality by exhaustive enumeration");
    certify_cmd->add_option("file", file, "Bisheaf document")->required();
    certify_cmd->add_option("--limit", limit, "Largest complex size to enumerate");

    std::string from, to;
    int level = 0;
    auto* zigzag_cmd = app.add_subcommand("zigzag", "Find a W-zigzag and transport along it");
    zigzag_cmd->add_option("file", file, "Bisheaf document")->required();
    zigzag_cmd->add_option("--from", from, "Source simplex, e.g. 0,1")->required();
    zigzag_cmd->add_option("--to", to, "Target simplex")->required();
    zigzag_cmd->add_option("--level", level, "Use the relation set W_d");

    std::string kind, complex_path;
    std::uint64_t modulus = 2, seed = 0;
    std::size_t dim = 1, max_dim = 2;
    auto* generate_cmd = app.add_subcommand("generate", "Emit a bisheaf document");
    generate_cmd->add_option("--kind", kind, "constant or random")
        ->required()
        ->check(CLI::IsMember({"constant", "random"}));
    generate_cmd->add_option("--complex", complex_path, "Complex document")->required();
    generate_cmd->add_option("--p", modulus, "Prime modulus");
    generate_cmd->add_option("--seed", seed, "Random seed");
    generate_cmd->add_option("--dim", dim, "Stalk dimension of a constant bisheaf");
    generate_cmd->add_option("--max-dim", max_dim, "Largest stalk dimension of a random bisheaf");

    try {
        std::vector<std::string> reversed_args(args.rbegin(), args.rend());
        app.parse(reversed_args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        detail::report(err, {2, "usage", e.what()});
        return 2;
    }

    try {
        if (validate_cmd->parsed()) {
            auto b = detail::load_bisheaf(file, false);
            auto violations = validate(b);
            if (violations.empty()) {
                out << "valid\n";
                return 0;
            }
            for (const auto& v : violations) out << describe(b.complex(), v) << "\n";
            return 1;
        }

        if (stratify_cmd->parsed()) {
            auto b = detail::load_bisheaf(file);
            auto s = canonical_stratification(b);
            std::string text;
            if (format == "labels") text = format_labels(b.complex(), s);
            else if (format == "filtration") text = format_filtration(b.complex(), s);
            else if (format == "dot") text = format_dot(b.complex(), s);
            else text = serialize_stratification(b.complex(), s);
            if (out_path.empty()) {
                out << text;
            } else {
                std::ofstream f(out_path, std::ios::binary);
                if (!(f << text)) throw CliFailure{2, "io", "cannot write " + out_path};
            }
            return 0;
        }

        if (certify_cmd->parsed()) {
            auto b = detail::load_bisheaf(file);
            auto r = certify_canonical(b, limit);
            out << "simplices: " << b.complex().size() << "\n";
            out << "strata in canonical: " << r.canonical.strata().size() << "\n";
            out << "valid stratifications: " << r.valid_count << "\n";
            out << "canonical found: " << (r.canonical_found ? "yes" : "no") << "\n";
            out << "all refine canonical: " << (r.all_refine_canonical ? "yes" : "no") << "\n";
            if (r.counterexample) out << "counterexample:\n" << format_labels(b.complex(), *r.counterexample);
            out << "result: " << (r.passed() ? "pass" : "fail") << "\n";
            return r.passed() ? 0 : 1;
        }

        if (zigzag_cmd->parsed()) {
            auto b = detail::load_bisheaf(file);
            const Complex& c = b.complex();
            auto a = detail::parse_simplex_arg(c, from, "--from");
            auto z = detail::parse_simplex_arg(c, to, "--to");
            if (level < 0 || level > c.dimension())
                throw CliFailure{2, "usage", "--level must lie in 0.." + std::to_string(c.dimension())};
            auto trace = stratification_sweep(b);
            auto w = find_zigzag(c, trace.level(level).w, a, z);
            if (!w) {
                out << "none\n";
                return 0;
            }
            auto t = transport(b, *w);
            out << "witness:";
            for (std::size_t i = 0; i < w->simplices.size(); ++i) {
                if (i > 0) out << (w->directions[i - 1] == Direction::forward ? " <=" : " >=");
                out << " " << c.simplex(w->simplices[i]).to_string();
            }
            out << "\nphi: " << to_string(t.phi) << "\npsi: " << to_string(t.psi) << "\n";
            return 0;
        }

        if (generate_cmd->parsed()) {
            if (modulus < 2 || modulus > UINT32_MAX || !is_prime(modulus))
                throw CliFailure{2, "usage", "--p " + std::to_string(modulus) + " is not a prime below 2^32"};
            auto c = std::make_shared<const Complex>(parse_complex(detail::read_file(complex_path)));
            const Prime p(modulus);
            auto b = kind == "constant" ? constant_bisheaf(c, p, dim) : random_bisheaf(c, p, max_dim, seed);
            out << serialize_bisheaf(b);
            return 0;
        }
    } catch (const CliFailure& f) {
        detail::report(err, f);
        return f.code;
    } catch (const ParseError& e) {
        CliFailure f{2, "parse", e.what()};
        if (!e.path().empty()) f.extra["path"] = e.path();
        if (e.line()) f.extra["line"] = *e.line();
        detail::report(err, f);
        return 2;
    } catch (const InvalidBisheafError& e) {
        detail::report(err, {1, "invalid_bisheaf", e.what(), {{"violations", e.violations()}}});
        return 1;
    } catch (const OracleError& e) {
        detail::report(err, {2, "oracle_limit", e.what()});
        return 2;
    } catch (const Error& e) {
        detail::report(err, {1, "domain", e.what()});
        return 1;
    } catch (const std::exception& e) {
        detail::report(err, {3, "internal", e.what()});
        return 3;
    }
    return 2;
}

} // namespace bistrat
