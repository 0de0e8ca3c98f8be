#pragma once

// Finite abstract simplicial complexes, their face posets, open stars, and
// subcomplex masks.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace bistrat {

using Vertex = std::uint32_t;
using SimplexId = std::size_t;

// Strictly increasing, nonempty vertex list. Ordered lexicographically.
class Simplex {
public:
    Simplex() = default;

    explicit Simplex(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
        if (vertices_.empty()) throw ComplexError("simplex must have at least one vertex");
        for (std::size_t i = 1; i < vertices_.size(); ++i)
            if (vertices_[i - 1] >= vertices_[i])
                throw ComplexError("simplex vertices must be strictly increasing: " + to_string());
    }

    Simplex(std::initializer_list<Vertex> vertices) : Simplex(std::vector<Vertex>(vertices)) {}

    // Sorts the input; rejects repeated or negative vertex ids.
    static Simplex from_unsorted(std::span<const std::int64_t> ids) {
        std::vector<Vertex> v;
        v.reserve(ids.size());
        for (auto id : ids) {
            if (id < 0 || id > static_cast<std::int64_t>(UINT32_MAX))
                throw ComplexError("vertex id out of range: " + std::to_string(id));
            v.push_back(static_cast<Vertex>(id));
        }
        std::sort(v.begin(), v.end());
        if (std::adjacent_find(v.begin(), v.end()) != v.end())
            throw ComplexError("duplicate vertex in simplex");
        return Simplex(std::move(v));
    }

    const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
    int dimension() const noexcept { return static_cast<int>(vertices_.size()) - 1; }

    // True when *this is a face of other (non-strict).
    bool is_face_of(const Simplex& other) const {
        return std::includes(other.vertices_.begin(), other.vertices_.end(), vertices_.begin(), vertices_.end());
    }

    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(vertices_[i]);
        }
        return out;
    }

    friend auto operator<=>(const Simplex&, const Simplex&) = default;

private:
    std::vector<Vertex> vertices_;
};

// A pair (face, coface) of simplex ids with face < coface.
using Relation = std::pair<SimplexId, SimplexId>;

class Complex {
public:
    // The empty complex, of dimension -1.
    Complex() = default;

    std::size_t size() const noexcept { return simplices_.size(); }
    bool empty() const noexcept { return simplices_.empty(); }
    int dimension() const noexcept { return dimension_; }

    const Simplex& simplex(SimplexId id) const { return simplices_.at(id); }
    const std::vector<Simplex>& simplices() const noexcept { return simplices_; }

    std::optional<SimplexId> find(const Simplex& s) const {
        auto it = std::lower_bound(simplices_.begin(), simplices_.end(), s);
        if (it == simplices_.end() || *it != s) return std::nullopt;
        return static_cast<SimplexId>(it - simplices_.begin());
    }

    SimplexId id_of(const Simplex& s) const {
        auto id = find(s);
        if (!id) throw ComplexError("simplex {" + s.to_string() + "} is not in the complex");
        return *id;
    }

    int dimension_of(SimplexId id) const { return simplices_.at(id).dimension(); }

    // Codimension-one faces and cofaces, sorted.
    const std::vector<SimplexId>& facets(SimplexId id) const { return facets_.at(id); }
    const std::vector<SimplexId>& cofacets(SimplexId id) const { return cofacets_.at(id); }

    // All strict faces and cofaces, sorted.
    const std::vector<SimplexId>& faces(SimplexId id) const { return faces_.at(id); }
    const std::vector<SimplexId>& cofaces(SimplexId id) const { return cofaces_.at(id); }

    bool is_face(SimplexId a, SimplexId b) const { return simplices_.at(a).is_face_of(simplices_.at(b)); }

    const std::vector<Relation>& covering_relations() const noexcept { return coverings_; }

    std::vector<Simplex> maximal_simplices() const {
        std::vector<Simplex> out;
        for (SimplexId i = 0; i < size(); ++i)
            if (cofacets_[i].empty()) out.push_back(simplices_[i]);
        return out;
    }

    friend bool operator==(const Complex& a, const Complex& b) { return a.simplices_ == b.simplices_; }

    friend Complex build_complex(std::span<const std::vector<std::int64_t>> maximal_simplices);
    friend Complex build_complex(std::span<const Simplex> maximal_simplices);

private:
    std::vector<Simplex> simplices_;
    int dimension_ = -1;
    std::vector<std::vector<SimplexId>> facets_, cofacets_, faces_, cofaces_;
    std::vector<Relation> coverings_;
};

inline constexpr std::size_t max_simplex_vertices = 16;

// Face closure of the given simplices.
inline Complex build_complex(std::span<const Simplex> maximal_simplices) {
    if (maximal_simplices.empty()) throw ComplexError("complex needs at least one simplex");
    std::set<Simplex> all;
    for (const auto& top : maximal_simplices) {
        const auto& v = top.vertices();
        if (v.size() > max_simplex_vertices)
            throw ComplexError("simplex {" + top.to_string() + "} has too many vertices");
        const std::uint32_t n = static_cast<std::uint32_t>(v.size());
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            std::vector<Vertex> face;
            for (std::uint32_t i = 0; i < n; ++i)
                if (mask & (1u << i)) face.push_back(v[i]);
            all.insert(Simplex(std::move(face)));
        }
    }

    Complex c;
    c.simplices_.assign(all.begin(), all.end());
    const std::size_t n = c.simplices_.size();
    c.facets_.resize(n);
    c.cofacets_.resize(n);
    c.faces_.resize(n);
    c.cofaces_.resize(n);
    for (SimplexId id = 0; id < n; ++id) {
        const auto& v = c.simplices_[id].vertices();
        c.dimension_ = std::max(c.dimension_, c.simplices_[id].dimension());
        if (v.size() > 1)
            for (std::size_t skip = 0; skip < v.size(); ++skip) {
                std::vector<Vertex> face;
                for (std::size_t i = 0; i < v.size(); ++i)
                    if (i != skip) face.push_back(v[i]);
                SimplexId f = *c.find(Simplex(std::move(face)));
                c.facets_[id].push_back(f);
                c.cofacets_[f].push_back(id);
            }
        const std::uint32_t k = static_cast<std::uint32_t>(v.size());
        for (std::uint32_t mask = 1; mask + 1 < (1u << k); ++mask) {
            std::vector<Vertex> face;
            for (std::uint32_t i = 0; i < k; ++i)
                if (mask & (1u << i)) face.push_back(v[i]);
            SimplexId f = *c.find(Simplex(std::move(face)));
            c.faces_[id].push_back(f);
            c.cofaces_[f].push_back(id);
        }
    }
    for (SimplexId id = 0; id < n; ++id) {
        std::sort(c.facets_[id].begin(), c.facets_[id].end());
        std::sort(c.cofacets_[id].begin(), c.cofacets_[id].end());
        std::sort(c.faces_[id].begin(), c.faces_[id].end());
        std::sort(c.cofaces_[id].begin(), c.cofaces_[id].end());
        for (auto f : c.facets_[id]) c.coverings_.emplace_back(f, id);
    }
    std::sort(c.coverings_.begin(), c.coverings_.end());
    return c;
}

inline Complex build_complex(std::span<const std::vector<std::int64_t>> maximal_simplices) {
    std::vector<Simplex> tops;
    tops.reserve(maximal_simplices.size());
    for (const auto& s : maximal_simplices) tops.push_back(Simplex::from_unsorted(s));
    return build_complex(std::span<const Simplex>(tops));
}

inline Complex build_complex(std::initializer_list<std::vector<std::int64_t>> maximal_simplices) {
    std::vector<std::vector<std::int64_t>> tops(maximal_simplices);
    return build_complex(std::span<const std::vector<std::int64_t>>(tops));
}

// Every strict face relation, sorted lexicographically.
inline std::vector<Relation> face_relations(const Complex& c) {
    std::vector<Relation> out;
    for (SimplexId id = 0; id < c.size(); ++id)
        for (auto co : c.cofaces(id)) out.emplace_back(id, co);
    return out;
}

// One membership flag per simplex of a parent complex.
class SubcomplexMask {
public:
    SubcomplexMask() = default;
    explicit SubcomplexMask(std::size_t n, bool value = false) : bits_(n, value ? 1 : 0) {}

    static SubcomplexMask full(const Complex& c) { return SubcomplexMask(c.size(), true); }
    static SubcomplexMask none(const Complex& c) { return SubcomplexMask(c.size(), false); }

    std::size_t universe() const noexcept { return bits_.size(); }
    bool contains(SimplexId id) const { return bits_.at(id) != 0; }
    void insert(SimplexId id) { bits_.at(id) = 1; }
    void erase(SimplexId id) { bits_.at(id) = 0; }

    std::size_t count() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)); }

    std::vector<SimplexId> members() const {
        std::vector<SimplexId> out;
        for (SimplexId i = 0; i < bits_.size(); ++i)
            if (bits_[i]) out.push_back(i);
        return out;
    }

    bool is_subset_of(const SubcomplexMask& other) const {
        for (SimplexId i = 0; i < bits_.size(); ++i)
            if (bits_[i] && !other.contains(i)) return false;
        return true;
    }

    friend bool operator==(const SubcomplexMask&, const SubcomplexMask&) = default;

private:
    std::vector<char> bits_;
};

inline bool is_face_closed(const Complex& c, const SubcomplexMask& mask) {
    for (SimplexId id = 0; id < c.size(); ++id)
        if (mask.contains(id))
            for (auto f : c.facets(id))
                if (!mask.contains(f)) return false;
    return true;
}

// Largest simplex dimension in the mask, -1 when empty.
inline int mask_dimension(const Complex& c, const SubcomplexMask& mask) {
    int d = -1;
    for (SimplexId id = 0; id < c.size(); ++id)
        if (mask.contains(id)) d = std::max(d, c.dimension_of(id));
    return d;
}

// All simplices of the mask having s as a face, s included.
inline std::vector<SimplexId> open_star(const Complex& c, const SubcomplexMask& mask, SimplexId s) {
    if (!mask.contains(s)) throw ComplexError("simplex {" + c.simplex(s).to_string() + "} is not in the mask");
    std::vector<SimplexId> out{s};
    for (auto co : c.cofaces(s))
        if (mask.contains(co)) out.push_back(co);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace bistrat
