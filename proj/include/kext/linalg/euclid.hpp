#pragma once

// Hermite and Smith forms over Euclidean rings (Z and univariate F_p[x]),
// with unimodular transforms and their recorded inverses, plus invariant
// factors over Z/n.

#include "kext/linalg/howell.hpp"
#include "kext/matrix.hpp"

#include <numeric>
#include <optional>
#include <vector>

namespace kext::linalg {

/// A * V = H with H in column echelon form: column c has its first nonzero
/// entry in row pivot_rows[c], strictly increasing; columns >= rank are zero.
struct ColumnHermite {
    Matrix h;
    Matrix v;
    Matrix v_inv;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_rows;
};

/// U * A * V = D diagonal with d_1 | d_2 | ... in normalized form.
struct SmithForm {
    Matrix d;
    Matrix u, u_inv;
    Matrix v, v_inv;
    std::vector<Elem> diagonal;  // nonzero diagonal entries
};

namespace detail {

inline void require_euclidean(const Ring& r)
{
    if (!r->is_euclidean()) fail(ErrorCode::CapabilityMissing, "linalg", r->descriptor() + " is not Euclidean");
}

inline void col_axpy(Matrix& m, std::size_t dst, std::size_t src, const Elem& c)
{
    const Ring& r = m.ring;
    if (r->is_zero(c)) return;
    for (std::size_t i = 0; i < m.rows; ++i)
        if (!r->is_zero(m.at(i, src))) m.at(i, dst) = r->add(m.at(i, dst), r->mul(c, m.at(i, src)));
}

inline void row_axpy(Matrix& m, std::size_t dst, std::size_t src, const Elem& c)
{
    const Ring& r = m.ring;
    if (r->is_zero(c)) return;
    for (std::size_t j = 0; j < m.cols; ++j)
        if (!r->is_zero(m.at(src, j))) m.at(dst, j) = r->add(m.at(dst, j), r->mul(c, m.at(src, j)));
}

inline void col_swap(Matrix& m, std::size_t a, std::size_t b)
{
    if (a == b) return;
    for (std::size_t i = 0; i < m.rows; ++i) std::swap(m.at(i, a), m.at(i, b));
}

inline void row_swap(Matrix& m, std::size_t a, std::size_t b)
{
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(a, j), m.at(b, j));
}

inline void col_scale(Matrix& m, std::size_t c, const Elem& u)
{
    for (std::size_t i = 0; i < m.rows; ++i) m.at(i, c) = m.ring->mul(m.at(i, c), u);
}

inline void row_scale(Matrix& m, std::size_t r, const Elem& u)
{
    for (std::size_t j = 0; j < m.cols; ++j) m.at(r, j) = m.ring->mul(m.at(r, j), u);
}

} // namespace detail

inline ColumnHermite column_hermite(const Matrix& a)
{
    detail::require_euclidean(a.ring);
    const Ring& r = a.ring;
    ColumnHermite out;
    out.h = a;
    out.v = mat_identity(r, a.cols);
    out.v_inv = mat_identity(r, a.cols);
    Matrix& h = out.h;
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.rows && c < a.cols; ++i) {
        for (;;) {
            std::size_t best = a.cols;
            long best_size = 0;
            for (std::size_t k = c; k < a.cols; ++k) {
                if (r->is_zero(h.at(i, k))) continue;
                long s = r->euclid_size(h.at(i, k));
                if (best == a.cols || s < best_size) {
                    best = k;
                    best_size = s;
                }
            }
            if (best == a.cols) break;
            if (best != c) {
                detail::col_swap(h, best, c);
                detail::col_swap(out.v, best, c);
                detail::row_swap(out.v_inv, best, c);
            }
            bool others = false;
            for (std::size_t k = c + 1; k < a.cols; ++k) {
                if (r->is_zero(h.at(i, k))) continue;
                Elem q = r->divmod(h.at(i, k), h.at(i, c)).first;
                Elem mq = r->neg(q);
                detail::col_axpy(h, k, c, mq);
                detail::col_axpy(out.v, k, c, mq);
                detail::row_axpy(out.v_inv, c, k, q);
                if (!r->is_zero(h.at(i, k))) others = true;
            }
            if (!others) break;
        }
        if (r->is_zero(h.at(i, c))) continue;
        Elem u = r->normalizing_unit(h.at(i, c));
        if (u != r->one()) {
            detail::col_scale(h, c, u);
            detail::col_scale(out.v, c, u);
            Elem inv = *r->inverse(u);
            detail::row_scale(out.v_inv, c, inv);
        }
        out.pivot_rows.push_back(i);
        ++c;
    }
    out.rank = c;
    return out;
}

/// Solves H y = b for H in column echelon form (first `rank` columns).
inline std::optional<Matrix> solve_column_echelon(const Matrix& h, std::size_t rank, const std::vector<std::size_t>& pivot_rows,
                                                  const Matrix& b)
{
    const Ring& r = h.ring;
    Matrix y(r, h.cols, b.cols);
    for (std::size_t col = 0; col < b.cols; ++col) {
        std::vector<Elem> res(h.rows);
        for (std::size_t i = 0; i < h.rows; ++i) res[i] = b.at(i, col);
        std::size_t row = 0;
        for (std::size_t c = 0; c < rank; ++c) {
            std::size_t p = pivot_rows[c];
            for (; row < p; ++row)
                if (!r->is_zero(res[row])) return std::nullopt;
            auto [q, rem] = r->divmod(res[p], h.at(p, c));
            if (!r->is_zero(rem)) return std::nullopt;
            y.at(c, col) = q;
            for (std::size_t i = p; i < h.rows; ++i)
                if (!r->is_zero(h.at(i, c))) res[i] = r->sub(res[i], r->mul(q, h.at(i, c)));
            row = p + 1;
        }
        for (; row < h.rows; ++row)
            if (!r->is_zero(res[row])) return std::nullopt;
    }
    return y;
}

inline SmithForm smith_form(const Matrix& a)
{
    detail::require_euclidean(a.ring);
    const Ring& r = a.ring;
    SmithForm s;
    s.d = a;
    s.u = mat_identity(r, a.rows);
    s.u_inv = mat_identity(r, a.rows);
    s.v = mat_identity(r, a.cols);
    s.v_inv = mat_identity(r, a.cols);
    Matrix& d = s.d;
    auto rswap = [&](std::size_t x, std::size_t y) {
        detail::row_swap(d, x, y);
        detail::row_swap(s.u, x, y);
        detail::col_swap(s.u_inv, x, y);
    };
    auto cswap = [&](std::size_t x, std::size_t y) {
        detail::col_swap(d, x, y);
        detail::col_swap(s.v, x, y);
        detail::row_swap(s.v_inv, x, y);
    };
    // row_dst += c * row_src
    auto raxpy = [&](std::size_t dst, std::size_t src, const Elem& c) {
        detail::row_axpy(d, dst, src, c);
        detail::row_axpy(s.u, dst, src, c);
        detail::col_axpy(s.u_inv, src, dst, r->neg(c));
    };
    auto caxpy = [&](std::size_t dst, std::size_t src, const Elem& c) {
        detail::col_axpy(d, dst, src, c);
        detail::col_axpy(s.v, dst, src, c);
        detail::row_axpy(s.v_inv, src, dst, r->neg(c));
    };
    std::size_t lim = std::min(a.rows, a.cols);
    for (std::size_t t = 0; t < lim; ++t) {
        std::size_t bi = a.rows, bj = a.cols;
        long best = 0;
        for (std::size_t i = t; i < a.rows; ++i)
            for (std::size_t j = t; j < a.cols; ++j) {
                if (r->is_zero(d.at(i, j))) continue;
                long sz = r->euclid_size(d.at(i, j));
                if (bi == a.rows || sz < best) {
                    bi = i;
                    bj = j;
                    best = sz;
                }
            }
        if (bi == a.rows) break;
        rswap(t, bi);
        cswap(t, bj);
        for (;;) {
            bool changed = false;
            for (std::size_t i = t + 1; i < a.rows && !changed; ++i) {
                if (r->is_zero(d.at(i, t))) continue;
                auto [q, rem] = r->divmod(d.at(i, t), d.at(t, t));
                raxpy(i, t, r->neg(q));
                if (!r->is_zero(rem)) {
                    rswap(t, i);
                    changed = true;
                }
            }
            if (changed) continue;
            for (std::size_t j = t + 1; j < a.cols && !changed; ++j) {
                if (r->is_zero(d.at(t, j))) continue;
                auto [q, rem] = r->divmod(d.at(t, j), d.at(t, t));
                caxpy(j, t, r->neg(q));
                if (!r->is_zero(rem)) {
                    cswap(t, j);
                    changed = true;
                }
            }
            if (changed) continue;
            for (std::size_t i = t + 1; i < a.rows && !changed; ++i)
                for (std::size_t j = t + 1; j < a.cols && !changed; ++j) {
                    if (r->is_zero(d.at(i, j))) continue;
                    if (!r->is_zero(r->divmod(d.at(i, j), d.at(t, t)).second)) {
                        raxpy(t, i, r->one());
                        changed = true;
                    }
                }
            if (!changed) break;
        }
        Elem u = r->normalizing_unit(d.at(t, t));
        if (u != r->one()) {
            detail::row_scale(d, t, u);
            detail::row_scale(s.u, t, u);
            detail::col_scale(s.u_inv, t, *r->inverse(u));
        }
        s.diagonal.push_back(d.at(t, t));
    }
    return s;
}

/// Invariant factors of Z^a / (column span of c + n Z^a), each a divisor of n
/// greater than 1, in divisibility order.
inline std::vector<std::int64_t> lattice_quotient_factors(I64Mat c, std::int64_t n)
{
    for (auto& v : c.a) v = num::mod(v, n);
    std::size_t m = c.rows, k = c.cols;
    auto rswap = [&](std::size_t x, std::size_t y) {
        if (x != y)
            for (std::size_t j = 0; j < k; ++j) std::swap(c.at(x, j), c.at(y, j));
    };
    auto cswap = [&](std::size_t x, std::size_t y) {
        if (x != y)
            for (std::size_t i = 0; i < m; ++i) std::swap(c.at(i, x), c.at(i, y));
    };
    auto rcomb = [&](std::size_t t, std::size_t i, std::int64_t s_, std::int64_t t_, std::int64_t b, std::int64_t a) {
        for (std::size_t j = 0; j < k; ++j) {
            std::int64_t x = c.at(t, j), y = c.at(i, j);
            c.at(t, j) = num::addmod(num::mulmod(num::mod(s_, n), x, n), num::mulmod(num::mod(t_, n), y, n), n);
            c.at(i, j) = num::addmod(num::mulmod(num::mod(b, n), x, n), num::mulmod(num::mod(a, n), y, n), n);
        }
    };
    auto ccomb = [&](std::size_t t, std::size_t j, std::int64_t s_, std::int64_t t_, std::int64_t b, std::int64_t a) {
        for (std::size_t i = 0; i < m; ++i) {
            std::int64_t x = c.at(i, t), y = c.at(i, j);
            c.at(i, t) = num::addmod(num::mulmod(num::mod(s_, n), x, n), num::mulmod(num::mod(t_, n), y, n), n);
            c.at(i, j) = num::addmod(num::mulmod(num::mod(b, n), x, n), num::mulmod(num::mod(a, n), y, n), n);
        }
    };
    std::vector<std::int64_t> factors;
    std::size_t lim = std::min(m, k);
    std::size_t t = 0;
    for (; t < lim; ++t) {
        std::size_t bi = m, bj = k;
        std::int64_t best = n;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < k; ++j) {
                if (!c.at(i, j)) continue;
                std::int64_t g = std::gcd(c.at(i, j), n);
                if (g < best) {
                    best = g;
                    bi = i;
                    bj = j;
                }
            }
        if (bi == m) break;
        rswap(t, bi);
        cswap(t, bj);
        for (;;) {
            std::int64_t u = num::normalizing_unit(c.at(t, t), n);
            if (u != 1)
                for (std::size_t j = 0; j < k; ++j) c.at(t, j) = num::mulmod(c.at(t, j), u, n);
            std::int64_t d = c.at(t, t);
            bool changed = false;
            for (std::size_t i = t + 1; i < m && !changed; ++i) {
                std::int64_t y = c.at(i, t);
                if (!y) continue;
                if (y % d == 0) {
                    std::int64_t q = y / d;
                    for (std::size_t j = 0; j < k; ++j) c.at(i, j) = num::submod(c.at(i, j), num::mulmod(q, c.at(t, j), n), n);
                } else {
                    auto [g, s_, t_] = num::ext_gcd(d, y);
                    rcomb(t, i, s_, t_, -(y / g), d / g);
                    changed = true;
                }
            }
            if (changed) continue;
            for (std::size_t j = t + 1; j < k && !changed; ++j) {
                std::int64_t y = c.at(t, j);
                if (!y) continue;
                if (y % d == 0) {
                    std::int64_t q = y / d;
                    for (std::size_t i = 0; i < m; ++i) c.at(i, j) = num::submod(c.at(i, j), num::mulmod(q, c.at(i, t), n), n);
                } else {
                    auto [g, s_, t_] = num::ext_gcd(d, y);
                    ccomb(t, j, s_, t_, -(y / g), d / g);
                    changed = true;
                }
            }
            if (changed) continue;
            for (std::size_t i = t + 1; i < m && !changed; ++i)
                for (std::size_t j = t + 1; j < k && !changed; ++j)
                    if (c.at(i, j) % d != 0) {
                        for (std::size_t jj = 0; jj < k; ++jj) c.at(t, jj) = num::addmod(c.at(t, jj), c.at(i, jj), n);
                        changed = true;
                    }
            if (!changed) break;
        }
        std::int64_t d = std::gcd(c.at(t, t), n);
        if (d > 1) factors.push_back(d);
    }
    for (; t < m; ++t) factors.push_back(n);
    return factors;
}

} // namespace kext::linalg
