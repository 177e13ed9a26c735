#pragma once

// Howell form over Z/n by unimodular row operations. The left transform U is
// square over the zero-padded input: U * [A; 0] = T, and U_inv * U = I.

#include "kext/error.hpp"
#include "kext/numeric.hpp"

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

namespace kext::linalg {

struct I64Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::int64_t> a;

    I64Mat() = default;
    I64Mat(std::size_t m, std::size_t n) : rows(m), cols(n), a(m * n, 0) {}

    std::int64_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    std::int64_t at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static I64Mat identity(std::size_t n)
    {
        I64Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
};

struct HowellForm {
    std::int64_t n = 2;
    I64Mat form;                      // all rows; rows >= rank are zero
    std::size_t rank = 0;             // number of nonzero rows
    std::vector<std::size_t> pivots;  // pivot column per nonzero row
    bool tracked = false;
    I64Mat left;                      // U, square over padded rows
    I64Mat left_inv;
};

namespace detail {

class HowellBuilder {
public:
    HowellBuilder(const I64Mat& a, std::int64_t n, bool track) : n_(n), track_(track), w_(a)
    {
        for (auto& v : w_.a) v = num::mod(v, n_);
        if (track_) {
            u_ = I64Mat::identity(w_.rows);
            uinv_ = I64Mat::identity(w_.rows);
        }
    }

    HowellForm run()
    {
        std::size_t r = 0;
        for (std::size_t j = 0; j < w_.cols; ++j) {
            for (std::size_t i = r + 1; i < w_.rows; ++i) {
                std::int64_t y = w_.at(i, j);
                if (y == 0) continue;
                std::int64_t x = w_.at(r, j);
                if (x == 0) {
                    swap_rows(r, i);
                    continue;
                }
                auto [g, s, t] = num::ext_gcd(x, y);
                combine(r, i, s, t, -(y / g), x / g);
            }
            if (r >= w_.rows || w_.at(r, j) == 0) continue;
            std::int64_t u = num::normalizing_unit(w_.at(r, j), n_);
            if (u != 1) scale_row(r, u);
            std::int64_t d = w_.at(r, j);
            for (std::size_t i = 0; i < r; ++i) {
                std::int64_t q = w_.at(i, j) / d;
                if (q) add_multiple(i, r, n_ - q % n_);
            }
            std::int64_t ann = n_ / d;
            if (ann != n_ && ann != 1) {
                bool nonzero = false;
                for (std::size_t c = j + 1; c < w_.cols && !nonzero; ++c)
                    if (num::mulmod(ann, w_.at(r, c), n_)) nonzero = true;
                if (nonzero) add_multiple(zero_row_after(r), r, ann);
            }
            pivots_.push_back(j);
            ++r;
        }
        HowellForm h;
        h.n = n_;
        h.form = w_;
        h.rank = r;
        h.pivots = pivots_;
        h.tracked = track_;
        h.left = u_;
        h.left_inv = uinv_;
        return h;
    }

private:
    std::size_t zero_row_after(std::size_t r)
    {
        for (std::size_t i = r + 1; i < w_.rows; ++i) {
            bool zero = true;
            for (std::size_t c = 0; c < w_.cols && zero; ++c)
                if (w_.at(i, c)) zero = false;
            if (zero) return i;
        }
        append_row();
        return w_.rows - 1;
    }

    void append_row()
    {
        w_.a.resize(w_.a.size() + w_.cols, 0);
        ++w_.rows;
        if (!track_) return;
        std::size_t m = u_.rows;
        I64Mat nu = I64Mat::identity(m + 1), ninv = I64Mat::identity(m + 1);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k) {
                nu.at(i, k) = u_.at(i, k);
                ninv.at(i, k) = uinv_.at(i, k);
            }
        u_ = nu;
        uinv_ = ninv;
    }

    void row_op(I64Mat& m, std::size_t r, std::size_t i, std::int64_t s, std::int64_t t, std::int64_t b, std::int64_t a)
    {
        for (std::size_t c = 0; c < m.cols; ++c) {
            std::int64_t x = m.at(r, c), y = m.at(i, c);
            m.at(r, c) = num::addmod(num::mulmod(num::mod(s, n_), x, n_), num::mulmod(num::mod(t, n_), y, n_), n_);
            m.at(i, c) = num::addmod(num::mulmod(num::mod(b, n_), x, n_), num::mulmod(num::mod(a, n_), y, n_), n_);
        }
    }

    // rows (r, i) <- [[s, t], [b, a]] (r, i), determinant 1
    void combine(std::size_t r, std::size_t i, std::int64_t s, std::int64_t t, std::int64_t b, std::int64_t a)
    {
        row_op(w_, r, i, s, t, b, a);
        if (!track_) return;
        row_op(u_, r, i, s, t, b, a);
        // inverse [[a, -t], [-b, s]] applied on the right to columns (r, i)
        for (std::size_t k = 0; k < uinv_.rows; ++k) {
            std::int64_t x = uinv_.at(k, r), y = uinv_.at(k, i);
            uinv_.at(k, r) = num::addmod(num::mulmod(x, num::mod(a, n_), n_), num::mulmod(y, num::mod(-b, n_), n_), n_);
            uinv_.at(k, i) = num::addmod(num::mulmod(x, num::mod(-t, n_), n_), num::mulmod(y, num::mod(s, n_), n_), n_);
        }
    }

    void swap_rows(std::size_t r, std::size_t i)
    {
        for (std::size_t c = 0; c < w_.cols; ++c) std::swap(w_.at(r, c), w_.at(i, c));
        if (!track_) return;
        for (std::size_t c = 0; c < u_.cols; ++c) std::swap(u_.at(r, c), u_.at(i, c));
        for (std::size_t k = 0; k < uinv_.rows; ++k) std::swap(uinv_.at(k, r), uinv_.at(k, i));
    }

    void scale_row(std::size_t r, std::int64_t u)
    {
        for (std::size_t c = 0; c < w_.cols; ++c) w_.at(r, c) = num::mulmod(w_.at(r, c), u, n_);
        if (!track_) return;
        std::int64_t inv = *num::inverse_mod(u, n_);
        for (std::size_t c = 0; c < u_.cols; ++c) u_.at(r, c) = num::mulmod(u_.at(r, c), u, n_);
        for (std::size_t k = 0; k < uinv_.rows; ++k) uinv_.at(k, r) = num::mulmod(uinv_.at(k, r), inv, n_);
    }

    // row_dst += c * row_src
    void add_multiple(std::size_t dst, std::size_t src, std::int64_t c)
    {
        c = num::mod(c, n_);
        for (std::size_t k = 0; k < w_.cols; ++k)
            w_.at(dst, k) = num::addmod(w_.at(dst, k), num::mulmod(c, w_.at(src, k), n_), n_);
        if (!track_) return;
        for (std::size_t k = 0; k < u_.cols; ++k)
            u_.at(dst, k) = num::addmod(u_.at(dst, k), num::mulmod(c, u_.at(src, k), n_), n_);
        for (std::size_t k = 0; k < uinv_.rows; ++k)
            uinv_.at(k, src) = num::submod(uinv_.at(k, src), num::mulmod(c, uinv_.at(k, dst), n_), n_);
    }

    std::int64_t n_;
    bool track_;
    I64Mat w_;
    I64Mat u_, uinv_;
    std::vector<std::size_t> pivots_;
};

} // namespace detail

inline HowellForm howell_form(const I64Mat& a, std::int64_t n, bool track = false)
{
    return detail::HowellBuilder(a, n, track).run();
}

/// Columns generate {x : A x = 0} over Z/n.
inline I64Mat howell_kernel(const I64Mat& a, std::int64_t n)
{
    std::size_t m = a.rows, k = a.cols;
    I64Mat aug(k, m + k);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) aug.at(j, i) = a.at(i, j);
    for (std::size_t j = 0; j < k; ++j) aug.at(j, m + j) = 1;
    HowellForm h = howell_form(aug, n);
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < h.rank; ++r)
        if (h.pivots[r] >= m) rows.push_back(r);
    I64Mat out(k, rows.size());
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (std::size_t j = 0; j < k; ++j) out.at(j, t) = h.form.at(rows[t], m + j);
    return out;
}

/// Some x with A x = b over Z/n, or nullopt.
inline std::optional<std::vector<std::int64_t>> howell_solve(const I64Mat& a, const std::vector<std::int64_t>& b,
                                                             std::int64_t n)
{
    if (b.size() != a.rows) fail(ErrorCode::DimensionMismatch, "linalg", "right-hand side length mismatch");
    std::size_t m = a.rows, k = a.cols;
    I64Mat aug(k, m + k);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) aug.at(j, i) = a.at(i, j);
    for (std::size_t j = 0; j < k; ++j) aug.at(j, m + j) = 1;
    HowellForm h = howell_form(aug, n);
    std::vector<std::int64_t> v(m + k, 0);
    for (std::size_t i = 0; i < m; ++i) v[i] = num::mod(b[i], n);
    for (std::size_t r = 0; r < h.rank; ++r) {
        std::size_t c = h.pivots[r];
        if (c >= m) break;
        std::int64_t d = h.form.at(r, c);
        if (v[c] % d != 0) return std::nullopt;
        std::int64_t q = v[c] / d;
        if (!q) continue;
        for (std::size_t t = 0; t < m + k; ++t) v[t] = num::submod(v[t], num::mulmod(q, h.form.at(r, t), n), n);
    }
    for (std::size_t i = 0; i < m; ++i)
        if (v[i]) return std::nullopt;
    std::vector<std::int64_t> x(k);
    for (std::size_t j = 0; j < k; ++j) x[j] = num::mod(-v[m + j], n);
    return x;
}

/// Number of elements in the row span: product of n / pivot.
inline BigInt howell_span_size(const HowellForm& h)
{
    BigInt s = 1;
    for (std::size_t r = 0; r < h.rank; ++r) s *= h.n / h.form.at(r, h.pivots[r]);
    return s;
}

} // namespace kext::linalg
