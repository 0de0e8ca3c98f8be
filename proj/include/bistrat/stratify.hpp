#pragma once

// The canonical stratification of a complex along a bisheaf.
//
// E holds the face relations on which both the restriction and the extension
// are isomorphisms. The sweep runs d = m, ..., 0 over a shrinking subcomplex
// M_d: U_d collects the simplices of M_d whose whole open star in M_d is
// reached through E, W_d extends W_{d+1} by the star relations of U_d, and
// the d-strata are the classes of d-simplices of M_d under W_d-connectivity.
// Those classes are then removed to form M_{d-1}.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bisheaf.hpp"
#include "complex.hpp"
#include "errors.hpp"
#include "field_matrix.hpp"
#include "stratification.hpp"
#include "union_find.hpp"

namespace bistrat {

class RelationSet {
public:
    RelationSet() = default;
    explicit RelationSet(std::string tag) : tag_(std::move(tag)) {}

    const std::string& tag() const noexcept { return tag_; }
    void set_tag(std::string tag) { tag_ = std::move(tag); }

    bool contains(Relation r) const { return pairs_.count(r) != 0; }
    bool contains(SimplexId face, SimplexId coface) const { return contains({face, coface}); }
    void insert(Relation r) { pairs_.insert(r); }
    std::size_t size() const noexcept { return pairs_.size(); }
    bool empty() const noexcept { return pairs_.empty(); }
    auto begin() const { return pairs_.begin(); }
    auto end() const { return pairs_.end(); }

    std::vector<Relation> pairs() const { return {pairs_.begin(), pairs_.end()}; }

    bool is_subset_of(const RelationSet& other) const {
        return std::includes(other.pairs_.begin(), other.pairs_.end(), pairs_.begin(), pairs_.end());
    }

    // (a<b), (b<c) in the set imply (a<c) in the set.
    bool is_closed() const {
        for (auto [a, b] : pairs_)
            for (auto it = pairs_.lower_bound({b, 0}); it != pairs_.end() && it->first == b; ++it)
                if (!contains(a, it->second)) return false;
        return true;
    }

    friend bool operator==(const RelationSet& a, const RelationSet& b) { return a.pairs_ == b.pairs_; }

private:
    std::set<Relation> pairs_;
    std::string tag_;
};

inline void require_valid(const Bisheaf& b) {
    auto violations = validate(b);
    if (!violations.empty())
        throw BisheafError("invalid bisheaf (" + std::to_string(violations.size()) +
                           " violations), first: " + describe(b.complex(), violations.front()));
}

// Strict face relations where derived restriction and extension are both isomorphisms.
inline RelationSet compute_E(const Bisheaf& b) {
    require_valid(b);
    RelationSet e("E");
    for (auto [face, coface] : face_relations(b.complex()))
        if (is_isomorphism(derived_restriction(b, face, coface)) && is_isomorphism(derived_extension(b, face, coface)))
            e.insert({face, coface});
    return e;
}

struct UWResult {
    std::vector<SimplexId> u;  // sorted
    RelationSet w;
};

// U_d and W_d at one sweep level. W_prev is W_{d+1}, empty at the top level.
inline UWResult compute_UW(const Complex& c, const SubcomplexMask& mask, const RelationSet& e,
                           const RelationSet& w_prev) {
    if (!is_face_closed(c, mask)) throw StratificationError("sweep mask is not face-closed");
    UWResult out{{}, w_prev};
    for (SimplexId s = 0; s < c.size(); ++s) {
        if (!mask.contains(s)) continue;
        auto star = open_star(c, mask, s);
        bool all_in_e = std::all_of(star.begin(), star.end(), [&](SimplexId t) { return t == s || e.contains(s, t); });
        if (!all_in_e) continue;
        out.u.push_back(s);
        for (auto t : star)
            if (t != s) out.w.insert({s, t});
    }
    return out;
}

struct SweepLevel {
    int d = 0;
    SubcomplexMask mask;  // M_d
    std::vector<SimplexId> u;
    RelationSet w;
    std::vector<std::vector<SimplexId>> strata;  // sorted, by least simplex
};

struct SweepTrace {
    RelationSet e;
    std::vector<SweepLevel> levels;  // d = m down to 0
    Stratification result;

    const SweepLevel& level(int d) const {
        for (const auto& l : levels)
            if (l.d == d) return l;
        throw StratificationError("no sweep level " + std::to_string(d));
    }
};

inline SweepTrace stratification_sweep(const Bisheaf& b) {
    const Complex& c = b.complex();
    SweepTrace trace;
    trace.e = compute_E(b);
    const int m = c.dimension();

    UnionFind components(c.size());
    SubcomplexMask mask = SubcomplexMask::full(c);
    RelationSet w_prev;
    std::vector<Stratum> parts;

    for (int d = m; d >= 0; --d) {
        auto [u, w] = compute_UW(c, mask, trace.e, w_prev);
        w.set_tag("W_" + std::to_string(d));
        for (auto rel : w)
            if (!w_prev.contains(rel)) components.unite(rel.first, rel.second);

        std::map<std::size_t, std::vector<SimplexId>> classes;
        for (SimplexId s = 0; s < c.size(); ++s)
            if (mask.contains(s) && c.dimension_of(s) == d) classes[components.find(s)];
        for (SimplexId s = 0; s < c.size(); ++s) {
            auto it = classes.find(components.find(s));
            if (it == classes.end()) continue;
            if (!mask.contains(s))
                throw InternalError("simplex {" + c.simplex(s).to_string() + "} removed above level " +
                                    std::to_string(d) + " is W-connected to a " + std::to_string(d) +
                                    "-simplex of M_" + std::to_string(d));
            it->second.push_back(s);
        }

        SweepLevel level{d, mask, std::move(u), w, {}};
        for (auto& [root, members] : classes) {
            for (auto s : members) mask.erase(s);
            parts.push_back({d, members});
            level.strata.push_back(std::move(members));
        }
        std::sort(level.strata.begin(), level.strata.end());
        trace.levels.push_back(std::move(level));
        w_prev = std::move(w);
    }
    if (mask.count() != 0) throw InternalError("simplices left over after the level-0 sweep");

    trace.result = make_stratification(c, std::move(parts));
    for (int d = -1; d <= m; ++d) {
        const auto& expected = d < 0 ? SubcomplexMask::none(c) : trace.level(d).mask;
        if (!(trace.result.level(d) == expected)) throw InternalError("assembled filtration disagrees with the sweep");
    }
    return trace;
}

inline Stratification canonical_stratification(const Bisheaf& b) { return stratification_sweep(b).result; }

// Strata read off a single W-graph: for each level d, the W-components of the
// d-simplices of M_d.
inline std::vector<Stratum> single_category_strata(const Complex& c, const RelationSet& w,
                                                   const std::vector<SubcomplexMask>& filtration) {
    UnionFind components(c.size());
    for (auto [a, b] : w) components.unite(a, b);
    std::vector<Stratum> out;
    for (int d = static_cast<int>(filtration.size()) - 2; d >= 0; --d) {
        const auto& mask = filtration[static_cast<std::size_t>(d + 1)];
        std::map<std::size_t, std::vector<SimplexId>> classes;
        for (SimplexId s = 0; s < c.size(); ++s)
            if (mask.contains(s) && c.dimension_of(s) == d) classes[components.find(s)];
        for (SimplexId s = 0; s < c.size(); ++s) {
            auto it = classes.find(components.find(s));
            if (it != classes.end()) it->second.push_back(s);
        }
        for (auto& [root, members] : classes) out.push_back({d, std::move(members)});
    }
    std::sort(out.begin(), out.end(), [](const Stratum& a, const Stratum& b) {
        if (a.dimension != b.dimension) return a.dimension > b.dimension;
        return a.simplices < b.simplices;
    });
    return out;
}

struct AxiomViolation {
    enum class Kind { filtration, connectivity, dimension, frontier, constructibility };

    Kind kind;
    std::string detail;

    friend bool operator==(const AxiomViolation&, const AxiomViolation&) = default;
};

inline const char* to_string(AxiomViolation::Kind k) {
    switch (k) {
    case AxiomViolation::Kind::filtration: return "filtration";
    case AxiomViolation::Kind::connectivity: return "connectivity";
    case AxiomViolation::Kind::dimension: return "dimension";
    case AxiomViolation::Kind::frontier: return "frontier";
    case AxiomViolation::Kind::constructibility: return "constructibility";
    }
    return "unknown";
}

namespace detail {

inline void check_well_formed(const Complex& c, const Stratification& s) {
    if (s.filtration().size() != static_cast<std::size_t>(c.dimension() + 2))
        throw StratificationError("filtration must have one level per d = -1, ..., " + std::to_string(c.dimension()));
    for (const auto& mask : s.filtration())
        if (mask.universe() != c.size()) throw StratificationError("filtration mask sized for another complex");
    if (s.labels().size() != c.size()) throw StratificationError("stratum labels sized for another complex");
    std::vector<char> seen(c.size(), 0);
    for (StratumId id = 0; id < s.strata().size(); ++id) {
        const auto& st = s.stratum(id);
        if (st.simplices.empty()) throw StratificationError("stratum " + std::to_string(id) + " is empty");
        for (auto x : st.simplices) {
            if (x >= c.size()) throw StratificationError("stratum references an unknown simplex");
            if (seen[x]++) throw StratificationError("simplex lies in two strata");
            if (s.stratum_of(x) != id) throw StratificationError("stratum labels disagree with strata");
        }
    }
    if (std::count(seen.begin(), seen.end(), 0) != 0) throw StratificationError("strata do not cover the complex");
}

} // namespace detail

// All axiom failures of a candidate stratification, given the bisheaf's E.
inline std::vector<AxiomViolation> verify_stratification(const Bisheaf& b, const RelationSet& e,
                                                         const Stratification& s) {
    const Complex& c = b.complex();
    detail::check_well_formed(c, s);
    using K = AxiomViolation::Kind;
    std::vector<AxiomViolation> out;
    auto name = [&](SimplexId x) { return "{" + c.simplex(x).to_string() + "}"; };
    const int m = c.dimension();

    if (s.level(-1).count() != 0) out.push_back({K::filtration, "level -1 is not empty"});
    if (!(s.level(m) == SubcomplexMask::full(c))) out.push_back({K::filtration, "top level is not the whole complex"});
    for (int d = -1; d <= m; ++d) {
        const auto& mask = s.level(d);
        if (!is_face_closed(c, mask)) out.push_back({K::filtration, "level " + std::to_string(d) + " is not a subcomplex"});
        if (mask_dimension(c, mask) > d)
            out.push_back({K::filtration, "level " + std::to_string(d) + " has dimension above " + std::to_string(d)});
        if (d > -1 && !s.level(d - 1).is_subset_of(mask))
            out.push_back({K::filtration, "level " + std::to_string(d - 1) + " is not inside level " + std::to_string(d)});
        if (d > -1)
            for (SimplexId x = 0; x < c.size(); ++x) {
                bool in_difference = mask.contains(x) && !s.level(d - 1).contains(x);
                bool in_d_stratum = s.stratum(s.stratum_of(x)).dimension == d;
                if (in_difference != in_d_stratum)
                    out.push_back({K::filtration, name(x) + " is " + (in_d_stratum ? "" : "not ") +
                                                      "in a " + std::to_string(d) + "-stratum but " +
                                                      (in_difference ? "" : "not ") + "in M_" + std::to_string(d) +
                                                      " - M_" + std::to_string(d - 1)});
            }
    }

    for (StratumId id = 0; id < s.strata().size(); ++id) {
        const auto& st = s.stratum(id);
        UnionFind uf(c.size());
        int top = -1;
        for (auto x : st.simplices) {
            top = std::max(top, c.dimension_of(x));
            for (auto co : c.cofaces(x))
                if (s.stratum_of(co) == id) uf.unite(x, co);
        }
        for (auto x : st.simplices)
            if (!uf.same(x, st.simplices.front())) {
                out.push_back({K::connectivity, "stratum " + std::to_string(id) + " is disconnected"});
                break;
            }
        if (top != st.dimension)
            out.push_back({K::dimension, "stratum " + std::to_string(id) + " is labelled " +
                                             std::to_string(st.dimension) + " but its top simplex has dimension " +
                                             std::to_string(top)});
    }

    auto closure = frontier_poset(c, s);
    if (closure != s.frontier()) out.push_back({K::frontier, "stored frontier is not the closure of the face relation"});
    for (auto [lo, hi] : closure)
        if (s.stratum(lo).dimension >= s.stratum(hi).dimension)
            out.push_back({K::frontier, "stratum " + std::to_string(lo) + " (dim " + std::to_string(s.stratum(lo).dimension) +
                                            ") precedes stratum " + std::to_string(hi) + " (dim " +
                                            std::to_string(s.stratum(hi).dimension) + ")"});

    for (auto [face, coface] : face_relations(c))
        if (s.stratum_of(face) == s.stratum_of(coface) && !e.contains(face, coface))
            out.push_back({K::constructibility, name(face) + " < " + name(coface) + " lies in one stratum but not in E"});
    return out;
}

inline std::vector<AxiomViolation> verify_stratification(const Bisheaf& b, const Stratification& s) {
    return verify_stratification(b, compute_E(b), s);
}

} // namespace bistrat
