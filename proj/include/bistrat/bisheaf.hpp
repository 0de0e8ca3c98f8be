#pragma once

// Bisheaves around a simplicial complex: a sheaf (stalks, restriction maps), a
// cosheaf (costalks, extension maps) and one vertical map per simplex, with
// every square  ext(s<t) * F_t * res(s<t) == F_s  commuting.
//
// Maps are stored on covering relations only. Longer relations are composites
// along saturated chains, which is well defined once every diamond commutes.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "complex.hpp"
#include "errors.hpp"
#include "field_matrix.hpp"

namespace bistrat {

class Bisheaf {
public:
    Bisheaf(std::shared_ptr<const Complex> complex, Prime p, std::vector<std::size_t> stalk_dims,
            std::vector<std::size_t> costalk_dims, std::map<Relation, FieldMatrix> restrictions,
            std::map<Relation, FieldMatrix> extensions, std::vector<FieldMatrix> verticals)
        : complex_(std::move(complex)),
          p_(p),
          stalk_dims_(std::move(stalk_dims)),
          costalk_dims_(std::move(costalk_dims)),
          restrictions_(std::move(restrictions)),
          extensions_(std::move(extensions)),
          verticals_(std::move(verticals)) {
        check_shapes();
    }

    const Complex& complex() const noexcept { return *complex_; }
    const std::shared_ptr<const Complex>& complex_ptr() const noexcept { return complex_; }
    Prime prime() const noexcept { return p_; }

    std::size_t stalk_dim(SimplexId s) const { return stalk_dims_.at(s); }
    std::size_t costalk_dim(SimplexId s) const { return costalk_dims_.at(s); }
    const std::vector<std::size_t>& stalk_dims() const noexcept { return stalk_dims_; }
    const std::vector<std::size_t>& costalk_dims() const noexcept { return costalk_dims_; }

    // Covering relation (face, coface) -> matrix of shape stalk(coface) x stalk(face).
    const FieldMatrix& restriction(Relation covering) const { return lookup(restrictions_, covering, "restriction"); }
    // Covering relation (face, coface) -> matrix of shape costalk(face) x costalk(coface).
    const FieldMatrix& extension(Relation covering) const { return lookup(extensions_, covering, "extension"); }
    // costalk(s) x stalk(s).
    const FieldMatrix& vertical(SimplexId s) const { return verticals_.at(s); }

    const std::map<Relation, FieldMatrix>& restrictions() const noexcept { return restrictions_; }
    const std::map<Relation, FieldMatrix>& extensions() const noexcept { return extensions_; }
    const std::vector<FieldMatrix>& verticals() const noexcept { return verticals_; }

    friend bool operator==(const Bisheaf& a, const Bisheaf& b) {
        return *a.complex_ == *b.complex_ && a.p_ == b.p_ && a.stalk_dims_ == b.stalk_dims_ &&
               a.costalk_dims_ == b.costalk_dims_ && a.restrictions_ == b.restrictions_ &&
               a.extensions_ == b.extensions_ && a.verticals_ == b.verticals_;
    }

private:
    static const FieldMatrix& lookup(const std::map<Relation, FieldMatrix>& maps, Relation rel, const char* what) {
        auto it = maps.find(rel);
        if (it == maps.end()) throw BisheafError(std::string("no ") + what + " map on a non-covering relation");
        return it->second;
    }

    void check_shapes() const {
        if (!complex_) throw BisheafError("bisheaf needs a complex");
        const Complex& c = *complex_;
        auto shape = [](const FieldMatrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); };
        auto where = [&](Relation r) {
            return "{" + c.simplex(r.first).to_string() + "} < {" + c.simplex(r.second).to_string() + "}";
        };
        if (stalk_dims_.size() != c.size() || costalk_dims_.size() != c.size() || verticals_.size() != c.size())
            throw BisheafError("stalk, costalk and vertical data must cover every simplex");
        if (restrictions_.size() != c.covering_relations().size() ||
            extensions_.size() != c.covering_relations().size())
            throw BisheafError("restriction and extension maps must cover exactly the covering relations");
        for (auto rel : c.covering_relations()) {
            auto r = restrictions_.find(rel);
            auto e = extensions_.find(rel);
            if (r == restrictions_.end()) throw BisheafError("missing restriction at " + where(rel));
            if (e == extensions_.end()) throw BisheafError("missing extension at " + where(rel));
            if (r->second.rows() != stalk_dims_[rel.second] || r->second.cols() != stalk_dims_[rel.first])
                throw BisheafError("restriction at " + where(rel) + " has shape " + shape(r->second));
            if (e->second.rows() != costalk_dims_[rel.first] || e->second.cols() != costalk_dims_[rel.second])
                throw BisheafError("extension at " + where(rel) + " has shape " + shape(e->second));
            if (r->second.prime() != p_ || e->second.prime() != p_)
                throw BisheafError("modulus mismatch at " + where(rel));
        }
        for (SimplexId s = 0; s < c.size(); ++s) {
            const auto& f = verticals_[s];
            if (f.rows() != costalk_dims_[s] || f.cols() != stalk_dims_[s])
                throw BisheafError("vertical map at {" + c.simplex(s).to_string() + "} has shape " + shape(f));
            if (f.prime() != p_) throw BisheafError("modulus mismatch at {" + c.simplex(s).to_string() + "}");
        }
    }

    std::shared_ptr<const Complex> complex_;
    Prime p_;
    std::vector<std::size_t> stalk_dims_;
    std::vector<std::size_t> costalk_dims_;
    std::map<Relation, FieldMatrix> restrictions_;
    std::map<Relation, FieldMatrix> extensions_;
    std::vector<FieldMatrix> verticals_;
};

namespace detail {

// Saturated chain face = c_0 < c_1 < ... < c_k = coface, adding the missing
// vertices in increasing order.
inline std::vector<SimplexId> canonical_chain(const Complex& c, SimplexId face, SimplexId coface) {
    if (face != coface && !c.is_face(face, coface))
        throw BisheafError("{" + c.simplex(face).to_string() + "} is not a face of {" +
                           c.simplex(coface).to_string() + "}");
    std::vector<SimplexId> chain{face};
    std::vector<Vertex> current = c.simplex(face).vertices();
    for (auto v : c.simplex(coface).vertices()) {
        if (std::binary_search(current.begin(), current.end(), v)) continue;
        current.insert(std::upper_bound(current.begin(), current.end(), v), v);
        chain.push_back(c.id_of(Simplex(current)));
    }
    return chain;
}

} // namespace detail

// Restriction F(face) -> F(coface) for any face relation, identity on equality.
inline FieldMatrix derived_restriction(const Bisheaf& b, SimplexId face, SimplexId coface) {
    auto chain = detail::canonical_chain(b.complex(), face, coface);
    FieldMatrix result = FieldMatrix::identity(b.prime(), b.stalk_dim(face));
    for (std::size_t i = 1; i < chain.size(); ++i)
        result = multiply(b.restriction({chain[i - 1], chain[i]}), result);
    return result;
}

// Extension F^(coface) -> F^(face) for any face relation, identity on equality.
inline FieldMatrix derived_extension(const Bisheaf& b, SimplexId face, SimplexId coface) {
    auto chain = detail::canonical_chain(b.complex(), face, coface);
    FieldMatrix result = FieldMatrix::identity(b.prime(), b.costalk_dim(face));
    for (std::size_t i = 1; i < chain.size(); ++i)
        result = multiply(result, b.extension({chain[i - 1], chain[i]}));
    return result;
}

struct Violation {
    enum class Kind { restriction_diamond, extension_diamond, square };

    Kind kind;
    SimplexId face;
    SimplexId coface;
    // For diamonds: the two intermediate simplices. Unused for squares.
    SimplexId via_first = 0;
    SimplexId via_second = 0;
    FieldMatrix lhs;
    FieldMatrix rhs;

    friend bool operator==(const Violation&, const Violation&) = default;
};

inline std::string describe(const Complex& c, const Violation& v) {
    auto s = [&](SimplexId id) { return "{" + c.simplex(id).to_string() + "}"; };
    switch (v.kind) {
    case Violation::Kind::square:
        return "square " + s(v.face) + " < " + s(v.coface) + ": ext*F*res = " + to_string(v.lhs) +
               " but F = " + to_string(v.rhs);
    case Violation::Kind::restriction_diamond:
    case Violation::Kind::extension_diamond:
        return std::string(v.kind == Violation::Kind::restriction_diamond ? "restriction" : "extension") +
               " diamond " + s(v.face) + " < " + s(v.coface) + ": via " + s(v.via_first) + " gives " +
               to_string(v.lhs) + ", via " + s(v.via_second) + " gives " + to_string(v.rhs);
    }
    return {};
}

// Every failing diamond and commuting square, ordered by (face, coface, kind).
inline std::vector<Violation> validate(const Bisheaf& b) {
    const Complex& c = b.complex();
    std::vector<Violation> out;
    for (auto rel : c.covering_relations()) {
        auto lhs = multiply(b.extension(rel), multiply(b.vertical(rel.second), b.restriction(rel)));
        if (lhs != b.vertical(rel.first))
            out.push_back({Violation::Kind::square, rel.first, rel.second, 0, 0, lhs, b.vertical(rel.first)});
    }
    for (SimplexId top = 0; top < c.size(); ++top) {
        for (auto mid1 : c.facets(top))
            for (auto mid2 : c.facets(top)) {
                if (mid2 <= mid1) continue;
                // mid1 and mid2 meet in exactly one codimension-two face.
                std::vector<Vertex> meet;
                const auto& a = c.simplex(mid1).vertices();
                const auto& bb = c.simplex(mid2).vertices();
                std::set_intersection(a.begin(), a.end(), bb.begin(), bb.end(), std::back_inserter(meet));
                if (meet.empty()) continue;
                SimplexId low = c.id_of(Simplex(meet));
                auto r1 = multiply(b.restriction({mid1, top}), b.restriction({low, mid1}));
                auto r2 = multiply(b.restriction({mid2, top}), b.restriction({low, mid2}));
                if (r1 != r2) out.push_back({Violation::Kind::restriction_diamond, low, top, mid1, mid2, r1, r2});
                auto e1 = multiply(b.extension({low, mid1}), b.extension({mid1, top}));
                auto e2 = multiply(b.extension({low, mid2}), b.extension({mid2, top}));
                if (e1 != e2) out.push_back({Violation::Kind::extension_diamond, low, top, mid1, mid2, e1, e2});
            }
    }
    std::stable_sort(out.begin(), out.end(), [](const Violation& x, const Violation& y) {
        return std::tie(x.face, x.coface, x.kind, x.via_first, x.via_second) <
               std::tie(y.face, y.coface, y.kind, y.via_first, y.via_second);
    });
    return out;
}

inline Bisheaf constant_bisheaf(std::shared_ptr<const Complex> c, Prime p, std::size_t n) {
    const std::size_t size = c->size();
    std::map<Relation, FieldMatrix> res, ext;
    for (auto rel : c->covering_relations()) {
        res.emplace(rel, FieldMatrix::identity(p, n));
        ext.emplace(rel, FieldMatrix::identity(p, n));
    }
    std::vector<FieldMatrix> vert(size, FieldMatrix::identity(p, n));
    return Bisheaf(std::move(c), p, std::vector<std::size_t>(size, n), std::vector<std::size_t>(size, n),
                   std::move(res), std::move(ext), std::move(vert));
}

inline Bisheaf constant_bisheaf(const Complex& c, Prime p, std::size_t n) {
    return constant_bisheaf(std::make_shared<const Complex>(c), p, n);
}

} // namespace bistrat
