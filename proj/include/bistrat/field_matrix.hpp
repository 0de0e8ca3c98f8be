#pragma once

// Exact dense linear algebra over the prime field GF(p).

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace bistrat {

using Residue = std::uint32_t;

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

// A validated prime modulus.
class Prime {
public:
    explicit Prime(std::uint64_t value) {
        if (value > UINT32_MAX || !is_prime(value))
            throw LinalgError("modulus " + std::to_string(value) + " is not a prime below 2^32");
        value_ = static_cast<Residue>(value);
    }

    Residue value() const noexcept { return value_; }

    Residue reduce(std::int64_t x) const noexcept {
        auto r = x % static_cast<std::int64_t>(value_);
        return static_cast<Residue>(r < 0 ? r + value_ : r);
    }

    Residue add(Residue a, Residue b) const noexcept {
        return static_cast<Residue>((std::uint64_t{a} + b) % value_);
    }
    Residue sub(Residue a, Residue b) const noexcept {
        return static_cast<Residue>((std::uint64_t{a} + value_ - b) % value_);
    }
    Residue mul(Residue a, Residue b) const noexcept {
        return static_cast<Residue>((std::uint64_t{a} * b) % value_);
    }
    Residue neg(Residue a) const noexcept { return a == 0 ? 0 : value_ - a; }

    // Multiplicative inverse by Fermat; a must be nonzero.
    Residue inv(Residue a) const {
        if (a == 0) throw LinalgError("zero has no inverse");
        std::uint64_t result = 1, base = a, e = value_ - 2;
        while (e) {
            if (e & 1) result = result * base % value_;
            base = base * base % value_;
            e >>= 1;
        }
        return static_cast<Residue>(result);
    }

    friend bool operator==(const Prime&, const Prime&) = default;

private:
    Residue value_{2};
};

class FieldMatrix {
public:
    FieldMatrix() : FieldMatrix(Prime(2), 0, 0) {}

    // Zero matrix.
    FieldMatrix(Prime p, std::size_t rows, std::size_t cols)
        : p_(p), rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

    // Row-major entries, reduced mod p.
    FieldMatrix(Prime p, std::size_t rows, std::size_t cols, std::span<const std::int64_t> entries)
        : FieldMatrix(p, rows, cols) {
        if (entries.size() != rows * cols)
            throw LinalgError("expected " + std::to_string(rows * cols) + " entries, got " +
                              std::to_string(entries.size()));
        for (std::size_t i = 0; i < entries.size(); ++i) entries_[i] = p.reduce(entries[i]);
    }

    static FieldMatrix from_rows(Prime p, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
        std::size_t r = rows.size();
        std::size_t c = r ? rows.begin()->size() : 0;
        std::vector<std::int64_t> flat;
        flat.reserve(r * c);
        for (const auto& row : rows) {
            if (row.size() != c) throw LinalgError("ragged row list");
            flat.insert(flat.end(), row.begin(), row.end());
        }
        return FieldMatrix(p, r, c, flat);
    }

    static FieldMatrix identity(Prime p, std::size_t n) {
        FieldMatrix m(p, n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }

    Prime prime() const noexcept { return p_; }
    Residue modulus() const noexcept { return p_.value(); }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    std::span<const Residue> entries() const noexcept { return entries_; }

    Residue operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    void set(std::size_t r, std::size_t c, std::int64_t value) {
        entries_[r * cols_ + c] = p_.reduce(value);
    }

    bool is_zero() const {
        for (auto e : entries_)
            if (e != 0) return false;
        return true;
    }

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

private:
    Prime p_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Residue> entries_;
};

inline std::string to_string(const FieldMatrix& m) {
    std::string out = "[";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out += r ? ",[" : "[";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out += ',';
            out += std::to_string(m(r, c));
        }
        out += ']';
    }
    return out + "]";
}

inline FieldMatrix multiply(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.prime() != b.prime()) throw LinalgError("modulus mismatch in multiply");
    if (a.cols() != b.rows())
        throw LinalgError("dimension mismatch in multiply: " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " times " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()));
    const Prime p = a.prime();
    FieldMatrix out(p, a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc = (acc + std::uint64_t{p.mul(a(i, k), b(k, j))}) % p.value();
            out.set(i, j, static_cast<std::int64_t>(acc));
        }
    return out;
}

inline FieldMatrix add(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.prime() != b.prime()) throw LinalgError("modulus mismatch in add");
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw LinalgError("dimension mismatch in add");
    FieldMatrix out(a.prime(), a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.set(i, j, a.prime().add(a(i, j), b(i, j)));
    return out;
}

// Horizontal concatenation [a | b].
inline FieldMatrix hstack(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.prime() != b.prime()) throw LinalgError("modulus mismatch in hstack");
    if (a.rows() != b.rows()) throw LinalgError("row count mismatch in hstack");
    FieldMatrix out(a.prime(), a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out.set(i, j, a(i, j));
        for (std::size_t j = 0; j < b.cols(); ++j) out.set(i, a.cols() + j, b(i, j));
    }
    return out;
}

inline FieldMatrix select_columns(const FieldMatrix& m, std::span<const std::size_t> cols) {
    FieldMatrix out(m.prime(), m.rows(), cols.size());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out.set(i, j, m(i, cols[j]));
    return out;
}

struct RowEchelon {
    FieldMatrix reduced;                  // reduced row echelon form
    std::vector<std::size_t> pivot_cols;  // one per nonzero row, increasing
};

// Gauss-Jordan elimination. The pivot in each column is the nonzero entry with
// the lowest row index among the rows not yet used.
inline RowEchelon row_reduce(FieldMatrix m) {
    const Prime p = m.prime();
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t pivot = row;
        while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
        if (pivot == m.rows()) continue;
        if (pivot != row)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                auto tmp = m(row, j);
                m.set(row, j, m(pivot, j));
                m.set(pivot, j, tmp);
            }
        const Residue scale = p.inv(m(row, col));
        for (std::size_t j = 0; j < m.cols(); ++j) m.set(row, j, p.mul(m(row, j), scale));
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col) == 0) continue;
            const Residue factor = m(i, col);
            for (std::size_t j = 0; j < m.cols(); ++j) m.set(i, j, p.sub(m(i, j), p.mul(factor, m(row, j))));
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const FieldMatrix& m) { return row_reduce(m).pivot_cols.size(); }

// Square and of full rank. The 0x0 matrix qualifies; other empty shapes do not.
inline bool is_isomorphism(const FieldMatrix& m) {
    return m.is_square() && rank(m) == m.rows();
}

inline FieldMatrix inverse(const FieldMatrix& m) {
    if (!m.is_square()) throw LinalgError("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    auto ech = row_reduce(hstack(m, FieldMatrix::identity(m.prime(), n)));
    if (ech.pivot_cols.size() < n || (n > 0 && ech.pivot_cols[n - 1] >= n))
        throw LinalgError("matrix is not invertible");
    FieldMatrix out(m.prime(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.set(i, j, ech.reduced(i, n + j));
    return out;
}

// Columns form a basis of ker(m).
inline FieldMatrix nullspace(const FieldMatrix& m) {
    const Prime p = m.prime();
    auto ech = row_reduce(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : ech.pivot_cols) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    FieldMatrix basis(p, m.cols(), free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        basis.set(free_cols[k], k, 1);
        for (std::size_t r = 0; r < ech.pivot_cols.size(); ++r)
            basis.set(ech.pivot_cols[r], k, p.neg(ech.reduced(r, free_cols[k])));
    }
    return basis;
}

// Columns form a basis of the column space, chosen among the columns of m.
inline FieldMatrix column_basis(const FieldMatrix& m) {
    auto pivots = row_reduce(m).pivot_cols;
    return select_columns(m, pivots);
}

// Some x with a x = b, if one exists.
inline std::optional<FieldMatrix> solve(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.rows() != b.rows()) throw LinalgError("dimension mismatch in solve");
    const std::size_t n = a.cols();
    auto ech = row_reduce(hstack(a, b));
    for (auto c : ech.pivot_cols)
        if (c >= n) return std::nullopt;
    FieldMatrix x(a.prime(), n, b.cols());
    for (std::size_t r = 0; r < ech.pivot_cols.size(); ++r)
        for (std::size_t j = 0; j < b.cols(); ++j) x.set(ech.pivot_cols[r], j, ech.reduced(r, n + j));
    return x;
}

} // namespace bistrat
