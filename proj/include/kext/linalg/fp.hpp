#pragma once

// Dense Gaussian elimination over F_p with p < 2^31. Characteristic 2 uses
// bit-packed rows.

#include "kext/error.hpp"
#include "kext/numeric.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace kext::linalg {

struct FpMat {
    std::uint64_t p = 2;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint32_t> a;

    FpMat() = default;
    FpMat(std::uint64_t prime, std::size_t m, std::size_t n) : p(prime), rows(m), cols(n), a(m * n, 0) {}

    std::uint32_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    std::uint32_t at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

struct FpEchelon {
    FpMat reduced;                    // reduced row echelon form
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

namespace detail {

struct BitRows {
    std::size_t rows = 0, cols = 0, words = 0;
    std::vector<std::uint64_t> bits;

    explicit BitRows(const FpMat& m) : rows(m.rows), cols(m.cols), words((m.cols + 63) / 64), bits(rows * words, 0)
    {
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                if (m.at(i, j) & 1) bits[i * words + j / 64] |= std::uint64_t{1} << (j % 64);
    }

    bool get(std::size_t i, std::size_t j) const { return (bits[i * words + j / 64] >> (j % 64)) & 1; }

    void xor_row(std::size_t dst, std::size_t src, std::size_t from_word)
    {
        std::uint64_t* d = &bits[dst * words];
        const std::uint64_t* s = &bits[src * words];
        for (std::size_t w = from_word; w < words; ++w) d[w] ^= s[w];
    }

    void swap_rows(std::size_t x, std::size_t y)
    {
        if (x == y) return;
        for (std::size_t w = 0; w < words; ++w) std::swap(bits[x * words + w], bits[y * words + w]);
    }

    FpMat to_mat() const
    {
        FpMat m(2, rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = get(i, j) ? 1 : 0;
        return m;
    }
};

inline std::vector<std::size_t> bit_rref(BitRows& b, bool full)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < b.cols && r < b.rows; ++c) {
        std::size_t piv = r;
        while (piv < b.rows && !b.get(piv, c)) ++piv;
        if (piv == b.rows) continue;
        b.swap_rows(piv, r);
        std::size_t w0 = c / 64;
        for (std::size_t i = full ? 0 : r + 1; i < b.rows; ++i)
            if (i != r && b.get(i, c)) b.xor_row(i, r, w0);
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::vector<std::size_t> fp_rref_inplace(FpMat& m, bool full)
{
    const std::uint64_t p = m.p;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t piv = r;
        while (piv < m.rows && m.at(piv, c) == 0) ++piv;
        if (piv == m.rows) continue;
        if (piv != r)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
        std::uint64_t inv = static_cast<std::uint64_t>(*num::inverse_mod(m.at(r, c), static_cast<std::int64_t>(p)));
        if (inv != 1)
            for (std::size_t j = c; j < m.cols; ++j) m.at(r, j) = static_cast<std::uint32_t>(m.at(r, j) * inv % p);
        std::uint32_t* pr = &m.a[r * m.cols];
        for (std::size_t i = full ? 0 : r + 1; i < m.rows; ++i) {
            if (i == r) continue;
            std::uint64_t f = m.at(i, c);
            if (!f) continue;
            std::uint64_t g = p - f;
            std::uint32_t* pi = &m.a[i * m.cols];
            for (std::size_t j = c; j < m.cols; ++j)
                if (pr[j]) pi[j] = static_cast<std::uint32_t>((pi[j] + g * pr[j]) % p);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace detail

inline FpEchelon fp_rref(FpMat m)
{
    if (m.p == 2) {
        detail::BitRows b(m);
        auto piv = detail::bit_rref(b, true);
        return {b.to_mat(), piv};
    }
    auto piv = detail::fp_rref_inplace(m, true);
    return {std::move(m), piv};
}

inline std::size_t fp_rank(FpMat m)
{
    if (m.p == 2) {
        detail::BitRows b(m);
        return detail::bit_rref(b, false).size();
    }
    return detail::fp_rref_inplace(m, false).size();
}

/// Columns form a basis of {x : m x = 0}.
inline FpMat fp_kernel(const FpMat& m)
{
    FpEchelon e = fp_rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : e.pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    FpMat k(m.p, m.cols, free_cols.size());
    for (std::size_t t = 0; t < free_cols.size(); ++t) {
        std::size_t f = free_cols[t];
        k.at(f, t) = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r) {
            std::uint32_t v = e.reduced.at(r, f);
            if (v) k.at(e.pivots[r], t) = static_cast<std::uint32_t>(m.p - v);
        }
    }
    return k;
}

inline std::optional<std::vector<std::uint32_t>> fp_solve(const FpMat& m, const std::vector<std::uint32_t>& b)
{
    if (b.size() != m.rows) fail(ErrorCode::DimensionMismatch, "linalg", "right-hand side length mismatch");
    FpMat aug(m.p, m.rows, m.cols + 1);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = b[i];
    }
    FpEchelon e = fp_rref(aug);
    if (!e.pivots.empty() && e.pivots.back() == m.cols) return std::nullopt;
    std::vector<std::uint32_t> x(m.cols, 0);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced.at(r, m.cols);
    return x;
}

} // namespace kext::linalg
