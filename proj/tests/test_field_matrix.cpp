#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <vector>

#include "bistrat/field_matrix.hpp"
#include "bistrat/random_bisheaf.hpp"

using namespace bistrat;

namespace {

// Determinant by permutation expansion, independent of row reduction.
std::int64_t permutation_determinant(const FieldMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::int64_t total = 0;
    do {
        std::int64_t term = 1;
        for (std::size_t i = 0; i < n; ++i) term *= m(i, perm[i]);
        std::size_t inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        total += inversions % 2 == 0 ? term : -term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    const std::int64_t p = m.modulus();
    return ((total % p) + p) % p;
}

// Calls visit on every rows x cols matrix over GF(p).
template <class Visit>
void for_each_matrix(Prime p, std::size_t rows, std::size_t cols, Visit&& visit) {
    std::vector<std::int64_t> entries(rows * cols, 0);
    for (;;) {
        visit(FieldMatrix(p, rows, cols, entries));
        std::size_t i = 0;
        while (i < entries.size() && ++entries[i] == p.value()) entries[i++] = 0;
        if (i == entries.size()) return;
    }
}

} // namespace

TEST_CASE("prime validation") {
    CHECK(is_prime(2));
    CHECK(is_prime(4294967291ULL));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(9));
    CHECK_THROWS_AS(Prime(4), LinalgError);
    CHECK_THROWS_AS(Prime(0), LinalgError);
    CHECK(Prime(7).inv(3) == 5);
    CHECK(Prime(3).reduce(-4) == 2);
}

TEST_CASE("multiply examples") {
    const Prime two(2), three(3);
    auto m = FieldMatrix::from_rows(two, {{1, 0}, {1, 1}});
    CHECK(multiply(FieldMatrix::identity(two, 2), m) == m);

    auto u = FieldMatrix::from_rows(two, {{1, 1}, {0, 1}});
    CHECK(multiply(u, u) == FieldMatrix::identity(two, 2));

    auto a = FieldMatrix::from_rows(three, {{2, 1}, {1, 1}});
    auto b = FieldMatrix::from_rows(three, {{1, 2}, {2, 1}});
    CHECK(multiply(a, b) == FieldMatrix::from_rows(three, {{1, 2}, {0, 0}}));
}

TEST_CASE("multiply rejects mismatched inputs") {
    const Prime two(2), three(3);
    CHECK_THROWS_AS(multiply(FieldMatrix(two, 2, 3), FieldMatrix(two, 2, 3)), LinalgError);
    CHECK_THROWS_AS(multiply(FieldMatrix(two, 1, 1), FieldMatrix(three, 1, 1)), LinalgError);
}

TEST_CASE("is_isomorphism examples") {
    CHECK(is_isomorphism(FieldMatrix::identity(Prime(2), 3)));
    CHECK_FALSE(is_isomorphism(FieldMatrix::from_rows(Prime(2), {{1, 1}, {1, 1}})));
    CHECK(is_isomorphism(FieldMatrix::from_rows(Prime(3), {{2, 1}, {1, 1}})));
    CHECK(is_isomorphism(FieldMatrix(Prime(5), 0, 0)));
    CHECK_FALSE(is_isomorphism(FieldMatrix(Prime(2), 0, 1)));
    CHECK_FALSE(is_isomorphism(FieldMatrix(Prime(2), 1, 0)));
    CHECK_FALSE(is_isomorphism(FieldMatrix::from_rows(Prime(2), {{1, 0, 0}, {0, 1, 0}})));
}

TEST_CASE("inverse examples") {
    const Prime five(5), two(2), three(3);
    CHECK(inverse(FieldMatrix::identity(five, 2)) == FieldMatrix::identity(five, 2));
    auto swap = FieldMatrix::from_rows(two, {{0, 1}, {1, 0}});
    CHECK(inverse(swap) == swap);
    auto a = FieldMatrix::from_rows(three, {{2, 1}, {1, 1}});
    auto inv = inverse(a);
    CHECK(inv == FieldMatrix::from_rows(three, {{1, 2}, {2, 2}}));
    CHECK(multiply(a, inv) == FieldMatrix::identity(three, 2));
    CHECK_THROWS_AS(inverse(FieldMatrix::from_rows(two, {{1, 1}, {1, 1}})), LinalgError);
}

TEST_CASE("is_isomorphism agrees with the permutation determinant on all small matrices") {
    for (std::uint64_t q : {2u, 3u}) {
        const Prime p(q);
        for (std::size_t n = 1; n <= 3; ++n) {
            for_each_matrix(p, n, n, [&](const FieldMatrix& m) {
                const bool invertible = permutation_determinant(m) != 0;
                REQUIRE(is_isomorphism(m) == invertible);
                REQUIRE((rank(m) == n) == invertible);
                if (invertible) {
                    auto inv = inverse(m);
                    REQUIRE(multiply(m, inv) == FieldMatrix::identity(p, n));
                    REQUIRE(multiply(inv, m) == FieldMatrix::identity(p, n));
                }
            });
        }
    }
}

TEST_CASE("associativity on random matrices") {
    detail::SeededRng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const Prime p(trial % 2 == 0 ? 2 : 7);
        auto a = detail::random_matrix(rng, p, 1 + rng.below(4), 1 + rng.below(4));
        auto b = detail::random_matrix(rng, p, a.cols(), 1 + rng.below(4));
        auto c = detail::random_matrix(rng, p, b.cols(), 1 + rng.below(4));
        REQUIRE(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
    }
}

TEST_CASE("rank, nullspace and solve") {
    const Prime three(3);
    auto m = FieldMatrix::from_rows(three, {{1, 2, 0}, {2, 1, 0}});
    CHECK(rank(m) == 1);
    auto k = nullspace(m);
    CHECK(k.cols() == 2);
    CHECK(multiply(m, k).is_zero());

    auto a = FieldMatrix::from_rows(three, {{1, 1}, {0, 1}});
    auto b = FieldMatrix::from_rows(three, {{2}, {1}});
    auto x = solve(a, b);
    REQUIRE(x);
    CHECK(multiply(a, *x) == b);
    CHECK_FALSE(solve(FieldMatrix::from_rows(three, {{1, 0}, {0, 0}}), FieldMatrix::from_rows(three, {{0}, {1}})));
}

TEST_CASE("entries are reduced and printed") {
    auto m = FieldMatrix::from_rows(Prime(3), {{-1, 4}, {3, 5}});
    CHECK(to_string(m) == "[[2,1],[0,2]]");
    CHECK(to_string(FieldMatrix(Prime(2), 0, 0)) == "[]");
}
