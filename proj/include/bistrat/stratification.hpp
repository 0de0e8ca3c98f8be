#pragma once

// Stratifications of a simplicial complex: filtration by subcomplexes,
// strata, and the frontier order between strata.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "complex.hpp"
#include "errors.hpp"

namespace bistrat {

struct Stratum {
    int dimension = -1;
    std::vector<SimplexId> simplices;  // sorted

    friend bool operator==(const Stratum&, const Stratum&) = default;
};

using StratumId = std::size_t;
using FrontierPair = std::pair<StratumId, StratumId>;

class Stratification {
public:
    Stratification() = default;

    // Raw constructor; no axiom checking. filtration[k] is the mask of level
    // k - 1, so filtration.front() is the level -1 mask.
    Stratification(std::vector<SubcomplexMask> filtration, std::vector<Stratum> strata,
                   std::vector<StratumId> stratum_of, std::vector<FrontierPair> frontier)
        : filtration_(std::move(filtration)),
          strata_(std::move(strata)),
          stratum_of_(std::move(stratum_of)),
          frontier_(std::move(frontier)) {}

    // Highest filtration level m.
    int top_level() const noexcept { return static_cast<int>(filtration_.size()) - 2; }

    const SubcomplexMask& level(int d) const {
        if (d < -1 || d > top_level()) throw StratificationError("filtration level " + std::to_string(d) + " out of range");
        return filtration_[static_cast<std::size_t>(d + 1)];
    }
    const std::vector<SubcomplexMask>& filtration() const noexcept { return filtration_; }
    const std::vector<Stratum>& strata() const noexcept { return strata_; }
    const Stratum& stratum(StratumId id) const { return strata_.at(id); }
    StratumId stratum_of(SimplexId s) const { return stratum_of_.at(s); }
    const std::vector<StratumId>& labels() const noexcept { return stratum_of_; }
    const std::vector<FrontierPair>& frontier() const noexcept { return frontier_; }

    friend bool operator==(const Stratification&, const Stratification&) = default;

private:
    std::vector<SubcomplexMask> filtration_;
    std::vector<Stratum> strata_;
    std::vector<StratumId> stratum_of_;
    std::vector<FrontierPair> frontier_;
};

// Transitive closure of "some simplex of S is a face of some simplex of S'",
// without reflexive pairs, sorted.
inline std::vector<FrontierPair> frontier_poset(const Complex& c, const std::vector<StratumId>& stratum_of,
                                                std::size_t stratum_count) {
    std::vector<std::vector<char>> reach(stratum_count, std::vector<char>(stratum_count, 0));
    for (SimplexId s = 0; s < c.size(); ++s)
        for (auto co : c.cofaces(s)) reach[stratum_of.at(s)][stratum_of.at(co)] = 1;
    for (std::size_t k = 0; k < stratum_count; ++k)
        for (std::size_t i = 0; i < stratum_count; ++i)
            if (reach[i][k])
                for (std::size_t j = 0; j < stratum_count; ++j)
                    if (reach[k][j]) reach[i][j] = 1;
    std::vector<FrontierPair> out;
    for (std::size_t i = 0; i < stratum_count; ++i)
        for (std::size_t j = 0; j < stratum_count; ++j)
            if (i != j && reach[i][j]) out.emplace_back(i, j);
    return out;
}

inline std::vector<FrontierPair> frontier_poset(const Complex& c, const Stratification& s) {
    return frontier_poset(c, s.labels(), s.strata().size());
}

// Assembles a stratification from labelled parts: ids are assigned by
// (dimension descending, least simplex), level d of the filtration is the
// union of the parts labelled <= d, and the frontier is recomputed.
inline Stratification make_stratification(const Complex& c, std::vector<Stratum> parts) {
    std::vector<char> seen(c.size(), 0);
    for (auto& part : parts) {
        if (part.simplices.empty()) throw StratificationError("empty stratum");
        std::sort(part.simplices.begin(), part.simplices.end());
        for (auto s : part.simplices) {
            if (s >= c.size()) throw StratificationError("stratum references an unknown simplex");
            if (seen[s]++) throw StratificationError("simplex {" + c.simplex(s).to_string() + "} lies in two strata");
        }
    }
    for (SimplexId s = 0; s < c.size(); ++s)
        if (!seen[s]) throw StratificationError("simplex {" + c.simplex(s).to_string() + "} lies in no stratum");

    std::sort(parts.begin(), parts.end(), [](const Stratum& a, const Stratum& b) {
        if (a.dimension != b.dimension) return a.dimension > b.dimension;
        return a.simplices.front() < b.simplices.front();
    });
    std::vector<StratumId> stratum_of(c.size());
    for (StratumId id = 0; id < parts.size(); ++id)
        for (auto s : parts[id].simplices) stratum_of[s] = id;

    const int m = c.dimension();
    std::vector<SubcomplexMask> filtration;
    for (int d = -1; d <= m; ++d) {
        SubcomplexMask mask = SubcomplexMask::none(c);
        for (const auto& part : parts)
            if (part.dimension <= d)
                for (auto s : part.simplices) mask.insert(s);
        filtration.push_back(std::move(mask));
    }
    auto frontier = frontier_poset(c, stratum_of, parts.size());
    return Stratification(std::move(filtration), std::move(parts), std::move(stratum_of), std::move(frontier));
}

// Parts labelled with their largest simplex dimension.
inline Stratification make_stratification(const Complex& c, const std::vector<std::vector<SimplexId>>& parts) {
    std::vector<Stratum> labelled;
    for (const auto& part : parts) {
        int d = -1;
        for (auto s : part) d = std::max(d, c.dimension_of(s));
        labelled.push_back({d, part});
    }
    return make_stratification(c, std::move(labelled));
}

// Every d-simplex its own d-stratum.
inline Stratification skeletal_stratification(const Complex& c) {
    std::vector<std::vector<SimplexId>> parts;
    for (SimplexId s = 0; s < c.size(); ++s) parts.push_back({s});
    return make_stratification(c, parts);
}

// Every stratum of fine lies inside a single stratum of coarse.
inline bool refines(const Stratification& fine, const Stratification& coarse) {
    if (fine.labels().size() != coarse.labels().size())
        throw StratificationError("stratifications live on different complexes");
    for (const auto& stratum : fine.strata()) {
        const StratumId target = coarse.stratum_of(stratum.simplices.front());
        for (auto s : stratum.simplices)
            if (coarse.stratum_of(s) != target) return false;
    }
    return true;
}

// Same strata as simplex sets, ignoring ids.
inline bool same_partition(const Stratification& a, const Stratification& b) {
    return refines(a, b) && refines(b, a);
}

} // namespace bistrat
