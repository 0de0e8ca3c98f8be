#pragma once

// Brute-force certification of the canonical stratification on tiny inputs:
// enumerate every stratification that satisfies the axioms and check that
// each one refines the canonical stratification.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bisheaf.hpp"
#include "complex.hpp"
#include "errors.hpp"
#include "stratification.hpp"
#include "stratify.hpp"
#include "union_find.hpp"

namespace bistrat {

inline constexpr std::size_t default_oracle_limit = 8;

namespace detail {

inline bool parts_connected(const Complex& c, const std::vector<std::size_t>& label, std::size_t part_count) {
    UnionFind uf(c.size());
    for (SimplexId s = 0; s < c.size(); ++s)
        for (auto co : c.cofaces(s))
            if (label[s] == label[co]) uf.unite(s, co);
    std::vector<std::size_t> root(part_count, c.size());
    for (SimplexId s = 0; s < c.size(); ++s) {
        auto r = uf.find(s);
        if (root[label[s]] == c.size()) root[label[s]] = r;
        else if (root[label[s]] != r) return false;
    }
    return true;
}

// Calls visit(label, part_count) for every set partition of {0..n-1}, encoded
// as a restricted growth string.
template <class Visit>
void for_each_partition(std::size_t n, Visit&& visit) {
    if (n == 0) {
        std::vector<std::size_t> empty;
        visit(empty, std::size_t{0});
        return;
    }
    std::vector<std::size_t> label(n, 0), highest(n, 0);
    for (;;) {
        visit(label, highest[n - 1] + 1);
        std::size_t i = n - 1;
        while (i > 0 && label[i] == highest[i - 1] + 1) --i;
        if (i == 0) return;
        ++label[i];
        highest[i] = std::max(highest[i - 1], label[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            label[j] = 0;
            highest[j] = highest[i];
        }
    }
}

} // namespace detail

// Every stratification of the complex satisfying the axioms for b.
inline std::vector<Stratification> enumerate_stratifications(const Bisheaf& b,
                                                             std::size_t limit = default_oracle_limit) {
    const Complex& c = b.complex();
    if (c.size() > limit)
        throw OracleError("complex has " + std::to_string(c.size()) + " simplices, oracle limit is " +
                          std::to_string(limit));
    const RelationSet e = compute_E(b);
    std::vector<Stratification> out;
    detail::for_each_partition(c.size(), [&](const std::vector<std::size_t>& label, std::size_t parts) {
        // Constructibility is the cheapest axiom to test on the raw labels.
        for (auto [face, coface] : face_relations(c))
            if (label[face] == label[coface] && !e.contains(face, coface)) return;
        if (!detail::parts_connected(c, label, parts)) return;
        std::vector<std::vector<SimplexId>> grouped(parts);
        for (SimplexId s = 0; s < c.size(); ++s) grouped[label[s]].push_back(s);
        auto candidate = make_stratification(c, grouped);
        if (verify_stratification(b, e, candidate).empty()) out.push_back(std::move(candidate));
    });
    return out;
}

struct OracleReport {
    std::size_t valid_count = 0;
    bool canonical_found = false;
    bool all_refine_canonical = false;
    std::optional<Stratification> counterexample;  // a valid stratification not refining the canonical one
    Stratification canonical;

    bool passed() const { return canonical_found && all_refine_canonical; }
};

inline OracleReport certify_canonical(const Bisheaf& b, std::size_t limit = default_oracle_limit) {
    OracleReport report;
    report.canonical = canonical_stratification(b);
    auto all = enumerate_stratifications(b, limit);
    report.valid_count = all.size();
    report.all_refine_canonical = true;
    for (const auto& s : all) {
        if (s == report.canonical) report.canonical_found = true;
        if (!refines(s, report.canonical) && report.all_refine_canonical) {
            report.all_refine_canonical = false;
            report.counterexample = s;
        }
    }
    return report;
}

} // namespace bistrat
