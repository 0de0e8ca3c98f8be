#pragma once

// Test-only generators: random complexes, relabelings and the hand-built
// fixtures shared by the unit and acceptance suites.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "bistrat/bisheaf.hpp"
#include "bistrat/complex.hpp"
#include "bistrat/random_bisheaf.hpp"

namespace bistrat::testing {

using detail::SeededRng;

// Face closure of a few random simplices on a small vertex pool, with at most
// max_simplices simplices in total and dimension at most max_dim.
inline Complex random_complex(SeededRng& rng, std::size_t max_simplices, int max_dim, std::size_t vertex_pool = 6) {
    for (;;) {
        std::vector<std::vector<std::int64_t>> tops;
        const std::size_t count = 1 + rng.below(4);
        for (std::size_t k = 0; k < count; ++k) {
            std::vector<std::int64_t> pool(vertex_pool);
            for (std::size_t i = 0; i < vertex_pool; ++i) pool[i] = static_cast<std::int64_t>(i);
            for (std::size_t i = vertex_pool; i > 1; --i) std::swap(pool[i - 1], pool[rng.below(i)]);
            const std::size_t size = 1 + rng.below(static_cast<std::uint64_t>(max_dim) + 1);
            tops.emplace_back(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
        }
        auto c = build_complex(std::span<const std::vector<std::int64_t>>(tops));
        if (c.size() <= max_simplices) return c;
    }
}

// Pure and connected: each new m-simplex shares at least one vertex with an
// earlier one.
inline Complex random_pure_connected(SeededRng& rng, int m, std::size_t top_count) {
    std::vector<std::vector<std::int64_t>> tops;
    std::vector<std::int64_t> first;
    for (int i = 0; i <= m; ++i) first.push_back(i);
    tops.push_back(first);
    std::int64_t next_vertex = m + 1;
    for (std::size_t k = 1; k < top_count; ++k) {
        const auto& anchor = tops[rng.below(tops.size())];
        const std::size_t shared = 1 + rng.below(m > 0 ? static_cast<std::uint64_t>(m) : 1);
        std::vector<std::int64_t> simplex(anchor.begin(), anchor.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(shared, anchor.size())));
        while (simplex.size() < static_cast<std::size_t>(m + 1)) simplex.push_back(next_vertex++);
        tops.push_back(simplex);
    }
    return build_complex(std::span<const std::vector<std::int64_t>>(tops));
}

// The same bisheaf after renaming vertex v to perm[v].
inline Bisheaf relabel(const Bisheaf& b, const std::vector<Vertex>& perm) {
    const Complex& c = b.complex();
    auto rename = [&](const Simplex& s) {
        std::vector<std::int64_t> v;
        for (auto x : s.vertices()) v.push_back(perm.at(x));
        return Simplex::from_unsorted(v);
    };
    std::vector<Simplex> tops;
    for (const auto& s : c.maximal_simplices()) tops.push_back(rename(s));
    auto nc = std::make_shared<const Complex>(build_complex(std::span<const Simplex>(tops)));
    std::vector<SimplexId> to_new(c.size());
    for (SimplexId s = 0; s < c.size(); ++s) to_new[s] = nc->id_of(rename(c.simplex(s)));

    std::vector<std::size_t> stalks(c.size()), costalks(c.size());
    std::vector<FieldMatrix> vert(c.size());
    for (SimplexId s = 0; s < c.size(); ++s) {
        stalks[to_new[s]] = b.stalk_dim(s);
        costalks[to_new[s]] = b.costalk_dim(s);
        vert[to_new[s]] = b.vertical(s);
    }
    std::map<Relation, FieldMatrix> res, ext;
    for (const auto& [rel, m] : b.restrictions()) res.emplace(Relation{to_new[rel.first], to_new[rel.second]}, m);
    for (const auto& [rel, m] : b.extensions()) ext.emplace(Relation{to_new[rel.first], to_new[rel.second]}, m);
    return Bisheaf(nc, b.prime(), stalks, costalks, res, ext, vert);
}

// Path [[0,1],[1,2]] over GF(2), dim-1 stalks and costalks, the restriction
// {1} < {0,1} zero and every other restriction and extension the identity.
// The squares force the vertical maps at {1}, {1,2}, {2} to vanish; all
// vertical maps are zero.
inline Bisheaf path_zero_restriction() {
    auto c = std::make_shared<const Complex>(build_complex({{0, 1}, {1, 2}}));
    const Prime p(2);
    std::map<Relation, FieldMatrix> res, ext;
    const SimplexId v1 = c->id_of(Simplex{1}), e01 = c->id_of(Simplex{0, 1});
    for (auto rel : c->covering_relations()) {
        res.emplace(rel, rel == Relation{v1, e01} ? FieldMatrix(p, 1, 1) : FieldMatrix::identity(p, 1));
        ext.emplace(rel, FieldMatrix::identity(p, 1));
    }
    return Bisheaf(c, p, std::vector<std::size_t>(c->size(), 1), std::vector<std::size_t>(c->size(), 1), res, ext,
                   std::vector<FieldMatrix>(c->size(), FieldMatrix(p, 1, 1)));
}

// Hand-built bisheaf data. Unset maps become the identity where square and
// zero otherwise; unset verticals are zero.
class Draft {
public:
    Draft(std::initializer_list<std::vector<std::int64_t>> tops, Prime p, std::size_t stalk, std::size_t costalk)
        : c_(std::make_shared<const Complex>(build_complex(tops))),
          p_(p),
          stalks_(c_->size(), stalk),
          costalks_(c_->size(), costalk) {}

    const Complex& complex() const { return *c_; }
    SimplexId id(std::initializer_list<Vertex> v) const { return c_->id_of(Simplex(v)); }

    Draft& stalk(std::initializer_list<Vertex> s, std::size_t n) { stalks_[id(s)] = n; return *this; }
    Draft& costalk(std::initializer_list<Vertex> s, std::size_t n) { costalks_[id(s)] = n; return *this; }
    Draft& res(std::initializer_list<Vertex> f, std::initializer_list<Vertex> cf, FieldMatrix m) {
        res_[{id(f), id(cf)}] = std::move(m);
        return *this;
    }
    Draft& ext(std::initializer_list<Vertex> f, std::initializer_list<Vertex> cf, FieldMatrix m) {
        ext_[{id(f), id(cf)}] = std::move(m);
        return *this;
    }
    Draft& vertical(std::initializer_list<Vertex> s, FieldMatrix m) { vert_[id(s)] = std::move(m); return *this; }
    Draft& identity_verticals() {
        for (SimplexId s = 0; s < c_->size(); ++s) vert_[s] = FieldMatrix::identity(p_, stalks_[s]);
        return *this;
    }

    Bisheaf build() const {
        auto fill = [&](std::size_t rows, std::size_t cols) {
            return rows == cols ? FieldMatrix::identity(p_, rows) : FieldMatrix(p_, rows, cols);
        };
        std::map<Relation, FieldMatrix> res, ext;
        for (auto rel : c_->covering_relations()) {
            auto r = res_.find(rel);
            res.emplace(rel, r != res_.end() ? r->second : fill(stalks_[rel.second], stalks_[rel.first]));
            auto e = ext_.find(rel);
            ext.emplace(rel, e != ext_.end() ? e->second : fill(costalks_[rel.first], costalks_[rel.second]));
        }
        std::vector<FieldMatrix> vert;
        for (SimplexId s = 0; s < c_->size(); ++s) {
            auto v = vert_.find(s);
            vert.push_back(v != vert_.end() ? v->second : FieldMatrix(p_, costalks_[s], stalks_[s]));
        }
        return Bisheaf(c_, p_, stalks_, costalks_, res, ext, vert);
    }

private:
    std::shared_ptr<const Complex> c_;
    Prime p_;
    std::vector<std::size_t> stalks_, costalks_;
    std::map<Relation, FieldMatrix> res_, ext_;
    std::map<SimplexId, FieldMatrix> vert_;
};

// A random bisheaf on a random complex, as used by the fuzz suites.
struct Instance {
    std::uint64_t seed;
    Bisheaf bisheaf;
};

inline Instance random_instance(std::uint64_t seed, std::size_t max_simplices, int max_dim, std::size_t max_stalk,
                                std::vector<std::uint64_t> primes = {2, 3}) {
    SeededRng rng(seed);
    auto c = std::make_shared<const Complex>(random_complex(rng, max_simplices, max_dim, max_simplices > 12 ? 7 : 5));
    const Prime p(primes[rng.below(primes.size())]);
    return {seed, random_bisheaf(c, p, max_stalk, seed)};
}

inline std::vector<Vertex> random_permutation(SeededRng& rng, std::size_t n) {
    std::vector<Vertex> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<Vertex>(i);
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    return perm;
}

} // namespace bistrat::testing
