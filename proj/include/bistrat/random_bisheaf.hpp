#pragma once

// Seeded generator of valid bisheaves.
//
// Every stalk is a subquotient S_s / (S_s n K_s) of a fixed ambient space V,
// with S and K growing towards cofaces; every costalk is a subquotient of a
// second space V' with S' and K' shrinking towards cofaces. Restriction and
// extension maps are induced by the identity, vertical maps by one global
// linear map G : V -> V'. The cosheaf subspaces absorb G(S_s) and
// G(S_s n K_s), so every induced map is well defined and every diamond and
// square commutes. A random change of basis per stalk and costalk finishes
// the data.

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "bisheaf.hpp"
#include "complex.hpp"
#include "field_matrix.hpp"

namespace bistrat {

namespace detail {

class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, n); n > 0. Plain modulo keeps the stream portable.
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }
    bool chance(std::uint64_t numerator, std::uint64_t denominator) { return below(denominator) < numerator; }

private:
    std::mt19937_64 engine_;
};

inline FieldMatrix random_matrix(SeededRng& rng, Prime p, std::size_t rows, std::size_t cols) {
    FieldMatrix m(p, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.set(i, j, static_cast<std::int64_t>(rng.below(p.value())));
    return m;
}

inline FieldMatrix random_invertible(SeededRng& rng, Prime p, std::size_t n) {
    for (;;) {
        auto m = random_matrix(rng, p, n, n);
        if (is_isomorphism(m)) return m;
    }
}

// A subspace of an ambient space, as a matrix whose columns are a basis.
struct Subspace {
    FieldMatrix basis;
    std::size_t dim() const { return basis.cols(); }
};

inline Subspace span(const FieldMatrix& generators) { return {column_basis(generators)}; }

inline Subspace sum(const Subspace& a, const Subspace& b) { return span(hstack(a.basis, b.basis)); }

inline Subspace intersect(const Subspace& a, const Subspace& b) {
    const Prime p = a.basis.prime();
    FieldMatrix neg_b(p, b.basis.rows(), b.basis.cols());
    for (std::size_t i = 0; i < neg_b.rows(); ++i)
        for (std::size_t j = 0; j < neg_b.cols(); ++j) neg_b.set(i, j, p.neg(b.basis(i, j)));
    auto kernel = nullspace(hstack(a.basis, neg_b));
    FieldMatrix coeffs(p, a.dim(), kernel.cols());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < kernel.cols(); ++j) coeffs.set(i, j, kernel(i, j));
    return span(multiply(a.basis, coeffs));
}

inline Subspace image(const FieldMatrix& map, const Subspace& s) { return span(multiply(map, s.basis)); }

// Quotient top / (top n bottom), with a basis of chosen representatives.
struct Subquotient {
    FieldMatrix representatives;  // columns complementing the intersection inside top
    FieldMatrix intersection;     // basis of top n bottom
    std::size_t dim() const { return representatives.cols(); }
};

inline Subquotient make_subquotient(const Subspace& top, const Subspace& bottom) {
    auto meet = intersect(top, bottom);
    auto pivots = row_reduce(hstack(meet.basis, top.basis)).pivot_cols;
    std::vector<std::size_t> extra;
    for (auto c : pivots)
        if (c >= meet.dim()) extra.push_back(c - meet.dim());
    return {select_columns(top.basis, extra), meet.basis};
}

// Matrix of the map induced by `map` from one subquotient to another.
inline FieldMatrix induced(const FieldMatrix& map, const Subquotient& from, const Subquotient& to) {
    auto images = multiply(map, from.representatives);
    auto coords = solve(hstack(to.representatives, to.intersection), images);
    if (!coords) throw InternalError("induced map leaves the target subquotient");
    FieldMatrix out(map.prime(), to.dim(), from.dim());
    for (std::size_t i = 0; i < to.dim(); ++i)
        for (std::size_t j = 0; j < from.dim(); ++j) out.set(i, j, (*coords)(i, j));
    return out;
}

inline Subspace random_subspace(SeededRng& rng, Prime p, std::size_t ambient, std::size_t generators) {
    return span(random_matrix(rng, p, ambient, generators));
}

// Zero or one random generator, the latter with probability num/den.
inline Subspace maybe_vector(SeededRng& rng, Prime p, std::size_t ambient, std::uint64_t num, std::uint64_t den) {
    return random_subspace(rng, p, ambient, rng.chance(num, den) ? 1 : 0);
}

} // namespace detail

// Deterministic in (complex, p, max_dim, seed); every stalk and costalk has
// dimension at most max_dim; validate() of the result is always empty.
inline Bisheaf random_bisheaf(std::shared_ptr<const Complex> cp, Prime p, std::size_t max_dim, std::uint64_t seed) {
    using namespace detail;
    const Complex& c = *cp;
    const std::size_t n = c.size();
    const std::size_t amb = max_dim;
    SeededRng rng(seed);

    Subspace sheaf_top0 = random_subspace(rng, p, amb, amb == 0 ? 0 : 1 + rng.below(amb));
    Subspace sheaf_bot0 = maybe_vector(rng, p, amb, 1, 4);
    Subspace cosheaf_top0 = random_subspace(rng, p, amb, rng.below(amb + 1));
    Subspace cosheaf_bot0 = maybe_vector(rng, p, amb, 1, 4);
    FieldMatrix global = rng.chance(1, 5) ? FieldMatrix(p, amb, amb) : random_matrix(rng, p, amb, amb);

    std::vector<Subspace> grow_top, grow_bot, shrink_top, shrink_bot;
    for (std::size_t s = 0; s < n; ++s) {
        grow_top.push_back(maybe_vector(rng, p, amb, 1, 4));
        grow_bot.push_back(maybe_vector(rng, p, amb, 1, 5));
        shrink_top.push_back(maybe_vector(rng, p, amb, 1, 4));
        shrink_bot.push_back(maybe_vector(rng, p, amb, 1, 5));
    }

    // Sheaf side: accumulate contributions of every face (itself included).
    std::vector<Subspace> top(n, sheaf_top0), bot(n, sheaf_bot0);
    for (SimplexId s = 0; s < n; ++s) {
        top[s] = sum(top[s], grow_top[s]);
        bot[s] = sum(bot[s], grow_bot[s]);
        for (auto f : c.faces(s)) {
            top[s] = sum(top[s], grow_top[f]);
            bot[s] = sum(bot[s], grow_bot[f]);
        }
    }
    std::vector<Subquotient> stalks;
    for (SimplexId s = 0; s < n; ++s) stalks.push_back(make_subquotient(top[s], bot[s]));

    // Cosheaf side: accumulate contributions of every coface (itself included),
    // each carrying the image of its sheaf data under the global map.
    std::vector<Subspace> co_top_local(n), co_bot_local(n);
    for (SimplexId s = 0; s < n; ++s) {
        co_top_local[s] = sum(shrink_top[s], image(global, top[s]));
        co_bot_local[s] = sum(shrink_bot[s], image(global, Subspace{stalks[s].intersection}));
    }
    std::vector<Subspace> co_top(n, cosheaf_top0), co_bot(n, cosheaf_bot0);
    for (SimplexId s = 0; s < n; ++s) {
        co_top[s] = sum(co_top[s], co_top_local[s]);
        co_bot[s] = sum(co_bot[s], co_bot_local[s]);
        for (auto f : c.cofaces(s)) {
            co_top[s] = sum(co_top[s], co_top_local[f]);
            co_bot[s] = sum(co_bot[s], co_bot_local[f]);
        }
    }
    std::vector<Subquotient> costalks;
    for (SimplexId s = 0; s < n; ++s) costalks.push_back(make_subquotient(co_top[s], co_bot[s]));

    std::vector<FieldMatrix> stalk_basis, stalk_basis_inv, costalk_basis, costalk_basis_inv;
    for (SimplexId s = 0; s < n; ++s) {
        stalk_basis.push_back(random_invertible(rng, p, stalks[s].dim()));
        stalk_basis_inv.push_back(inverse(stalk_basis.back()));
        costalk_basis.push_back(random_invertible(rng, p, costalks[s].dim()));
        costalk_basis_inv.push_back(inverse(costalk_basis.back()));
    }

    const FieldMatrix id_amb = FieldMatrix::identity(p, amb);
    std::map<Relation, FieldMatrix> res, ext;
    for (auto rel : c.covering_relations()) {
        auto [f, t] = rel;
        res.emplace(rel, multiply(stalk_basis[t],
                                  multiply(induced(id_amb, stalks[f], stalks[t]), stalk_basis_inv[f])));
        ext.emplace(rel, multiply(costalk_basis[f],
                                  multiply(induced(id_amb, costalks[t], costalks[f]), costalk_basis_inv[t])));
    }
    std::vector<std::size_t> stalk_dims, costalk_dims;
    std::vector<FieldMatrix> vert;
    for (SimplexId s = 0; s < n; ++s) {
        stalk_dims.push_back(stalks[s].dim());
        costalk_dims.push_back(costalks[s].dim());
        vert.push_back(
            multiply(costalk_basis[s], multiply(induced(global, stalks[s], costalks[s]), stalk_basis_inv[s])));
    }
    return Bisheaf(std::move(cp), p, std::move(stalk_dims), std::move(costalk_dims), std::move(res), std::move(ext),
                   std::move(vert));
}

inline Bisheaf random_bisheaf(const Complex& c, Prime p, std::size_t max_dim, std::uint64_t seed) {
    return random_bisheaf(std::make_shared<const Complex>(c), p, max_dim, seed);
}

} // namespace bistrat
