#pragma once

// Linear algebra over fields given as Rings (Q, F_p), plus conversion to the
// typed F_p engine and restriction of scalars for finite-dimensional algebras.

#include "kext/linalg/fp.hpp"
#include "kext/linalg/howell.hpp"
#include "kext/matrix.hpp"

#include <optional>
#include <vector>

namespace kext::linalg {

inline bool is_field(const Ring& r) { return r->kind() == RingKind::PrimeField || r->kind() == RingKind::Rationals; }

inline FpMat to_fp(const Matrix& a)
{
    FpMat m(static_cast<std::uint64_t>(a.ring->characteristic()), a.rows, a.cols);
    for (std::size_t i = 0; i < a.data.size(); ++i) m.a[i] = static_cast<std::uint32_t>(std::get<std::int64_t>(a.data[i]));
    return m;
}

inline Matrix from_fp(const Ring& r, const FpMat& m)
{
    Matrix a(r, m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) a.data[i] = std::int64_t{m.a[i]};
    return a;
}

inline I64Mat to_i64(const Matrix& a)
{
    I64Mat m(a.rows, a.cols);
    for (std::size_t i = 0; i < a.data.size(); ++i) m.a[i] = std::get<std::int64_t>(a.data[i]);
    return m;
}

inline Matrix from_i64(const Ring& r, const I64Mat& m)
{
    Matrix a(r, m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) a.data[i] = r->from_int(BigInt(m.a[i]));
    return a;
}

struct Echelon {
    Matrix reduced;
    Matrix u, u_inv;  // u * a = reduced (only when tracked)
    std::vector<std::size_t> pivots;
};

/// Reduced row echelon form over a field ring; pivots are the first unit
/// entries scanning columns left to right.
inline Echelon rref(const Matrix& a, bool track)
{
    const Ring& r = a.ring;
    if (!is_field(r)) fail(ErrorCode::CapabilityMissing, "linalg", r->descriptor() + " is not a field");
    Echelon e;
    if (!track && r->kind() == RingKind::PrimeField) {
        FpEchelon f = fp_rref(to_fp(a));
        e.reduced = from_fp(r, f.reduced);
        e.pivots = f.pivots;
        return e;
    }
    e.reduced = a;
    Matrix& m = e.reduced;
    if (track) {
        e.u = mat_identity(r, a.rows);
        e.u_inv = mat_identity(r, a.rows);
    }
    std::size_t row = 0;
    for (std::size_t c = 0; c < a.cols && row < a.rows; ++c) {
        std::size_t piv = row;
        while (piv < a.rows && r->is_zero(m.at(piv, c))) ++piv;
        if (piv == a.rows) continue;
        if (piv != row) {
            for (std::size_t j = 0; j < a.cols; ++j) std::swap(m.at(piv, j), m.at(row, j));
            if (track) {
                for (std::size_t j = 0; j < a.rows; ++j) std::swap(e.u.at(piv, j), e.u.at(row, j));
                for (std::size_t i = 0; i < a.rows; ++i) std::swap(e.u_inv.at(i, piv), e.u_inv.at(i, row));
            }
        }
        Elem pv = m.at(row, c);
        Elem inv = *r->inverse(pv);
        for (std::size_t j = 0; j < a.cols; ++j) m.at(row, j) = r->mul(m.at(row, j), inv);
        if (track) {
            for (std::size_t j = 0; j < a.rows; ++j) e.u.at(row, j) = r->mul(e.u.at(row, j), inv);
            for (std::size_t i = 0; i < a.rows; ++i) e.u_inv.at(i, row) = r->mul(e.u_inv.at(i, row), pv);
        }
        for (std::size_t i = 0; i < a.rows; ++i) {
            if (i == row || r->is_zero(m.at(i, c))) continue;
            Elem f = m.at(i, c);
            for (std::size_t j = 0; j < a.cols; ++j)
                if (!r->is_zero(m.at(row, j))) m.at(i, j) = r->sub(m.at(i, j), r->mul(f, m.at(row, j)));
            if (track) {
                for (std::size_t j = 0; j < a.rows; ++j)
                    if (!r->is_zero(e.u.at(row, j))) e.u.at(i, j) = r->sub(e.u.at(i, j), r->mul(f, e.u.at(row, j)));
                for (std::size_t k = 0; k < a.rows; ++k)
                    if (!r->is_zero(e.u_inv.at(k, i)))
                        e.u_inv.at(k, row) = r->add(e.u_inv.at(k, row), r->mul(f, e.u_inv.at(k, i)));
            }
        }
        e.pivots.push_back(c);
        ++row;
    }
    return e;
}

inline std::size_t field_rank(const Matrix& a)
{
    if (a.empty()) return 0;
    if (a.ring->kind() == RingKind::PrimeField) return fp_rank(to_fp(a));
    return rref(a, false).pivots.size();
}

inline Matrix field_kernel(const Matrix& a)
{
    const Ring& r = a.ring;
    if (r->kind() == RingKind::PrimeField) return from_fp(r, fp_kernel(to_fp(a)));
    Echelon e = rref(a, false);
    std::vector<bool> is_pivot(a.cols, false);
    for (auto c : e.pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < a.cols; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Matrix k(r, a.cols, free_cols.size());
    for (std::size_t t = 0; t < free_cols.size(); ++t) {
        std::size_t f = free_cols[t];
        k.at(f, t) = r->one();
        for (std::size_t row = 0; row < e.pivots.size(); ++row)
            k.at(e.pivots[row], t) = r->neg(e.reduced.at(row, f));
    }
    return k;
}

inline std::optional<Matrix> field_solve(const Matrix& a, const Matrix& b)
{
    const Ring& r = a.ring;
    Matrix aug = hstack(a, b);
    Echelon e = rref(aug, false);
    Matrix x(r, a.cols, b.cols);
    for (std::size_t row = 0; row < e.pivots.size(); ++row) {
        if (e.pivots[row] >= a.cols) return std::nullopt;
        for (std::size_t j = 0; j < b.cols; ++j) x.at(e.pivots[row], j) = e.reduced.at(row, a.cols + j);
    }
    return x;
}

/// Restriction of scalars: an m x n matrix over a d-dimensional algebra becomes
/// an (m d) x (n d) matrix over the coefficient field.
inline Matrix expand_scalars(const Matrix& a)
{
    const Ring& r = a.ring;
    auto dim = r->algebra_dimension();
    if (!dim) fail(ErrorCode::CapabilityMissing, "linalg", r->descriptor() + " is not a finite-dimensional algebra");
    std::size_t d = *dim;
    Ring k = r->coefficient_field();
    Matrix out(k, a.rows * d, a.cols * d);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) {
            if (r->is_zero(a.at(i, j))) continue;
            std::vector<Elem> mm = r->mult_matrix(a.at(i, j));
            for (std::size_t x = 0; x < d; ++x)
                for (std::size_t y = 0; y < d; ++y) out.at(i * d + x, j * d + y) = mm[x * d + y];
        }
    return out;
}

/// Column vectors over the coefficient field (length n d) back to the algebra.
inline Matrix collapse_scalars(const Ring& r, const Matrix& k_cols)
{
    std::size_t d = *r->algebra_dimension();
    std::size_t n = d ? k_cols.rows / d : 0;
    Matrix out(r, n, k_cols.cols);
    for (std::size_t t = 0; t < k_cols.cols; ++t)
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<Elem> c(d);
            for (std::size_t x = 0; x < d; ++x) c[x] = k_cols.at(i * d + x, t);
            out.at(i, t) = r->from_coords(c);
        }
    return out;
}

inline Matrix flatten_scalars(const Matrix& a)
{
    const Ring& r = a.ring;
    std::size_t d = *r->algebra_dimension();
    Matrix out(r->coefficient_field(), a.rows * d, a.cols);
    for (std::size_t t = 0; t < a.cols; ++t)
        for (std::size_t i = 0; i < a.rows; ++i) {
            std::vector<Elem> c = r->coords(a.at(i, t));
            for (std::size_t x = 0; x < d; ++x) out.at(i * d + x, t) = c[x];
        }
    return out;
}

/// Incrementally maintained span of vectors over a field ring.
class FieldSpan {
public:
    FieldSpan(Ring k, std::size_t length) : k_(std::move(k)), len_(length)
    {
        fast_ = k_->kind() == RingKind::PrimeField;
        if (fast_) p_ = static_cast<std::uint64_t>(k_->characteristic());
    }

    std::size_t dimension() const { return pivots_.size(); }

    /// Inserts v; returns true when it enlarged the span.
    bool insert(const std::vector<Elem>& v)
    {
        if (fast_) {
            std::vector<std::uint32_t> w(len_);
            for (std::size_t i = 0; i < len_; ++i) w[i] = static_cast<std::uint32_t>(std::get<std::int64_t>(v[i]));
            std::size_t piv = reduce_fast(w);
            if (piv == len_) return false;
            std::uint64_t inv = static_cast<std::uint64_t>(*num::inverse_mod(w[piv], static_cast<std::int64_t>(p_)));
            for (auto& x : w) x = static_cast<std::uint32_t>(x * inv % p_);
            fast_rows_.push_back(std::move(w));
            pivots_.push_back(piv);
            return true;
        }
        std::vector<Elem> w = v;
        std::size_t piv = reduce_slow(w);
        if (piv == len_) return false;
        Elem inv = *k_->inverse(w[piv]);
        for (auto& x : w) x = k_->mul(x, inv);
        slow_rows_.push_back(std::move(w));
        pivots_.push_back(piv);
        return true;
    }

    bool contains(const std::vector<Elem>& v) const
    {
        if (fast_) {
            std::vector<std::uint32_t> w(len_);
            for (std::size_t i = 0; i < len_; ++i) w[i] = static_cast<std::uint32_t>(std::get<std::int64_t>(v[i]));
            return reduce_fast(w) == len_;
        }
        std::vector<Elem> w = v;
        return reduce_slow(w) == len_;
    }

private:
    std::size_t reduce_fast(std::vector<std::uint32_t>& w) const
    {
        for (std::size_t r = 0; r < fast_rows_.size(); ++r) {
            std::uint64_t f = w[pivots_[r]];
            if (!f) continue;
            std::uint64_t g = p_ - f;
            const auto& row = fast_rows_[r];
            for (std::size_t j = 0; j < len_; ++j)
                if (row[j]) w[j] = static_cast<std::uint32_t>((w[j] + g * row[j]) % p_);
        }
        for (std::size_t j = 0; j < len_; ++j)
            if (w[j]) return j;
        return len_;
    }

    std::size_t reduce_slow(std::vector<Elem>& w) const
    {
        for (std::size_t r = 0; r < slow_rows_.size(); ++r) {
            Elem f = w[pivots_[r]];
            if (k_->is_zero(f)) continue;
            const auto& row = slow_rows_[r];
            for (std::size_t j = 0; j < len_; ++j)
                if (!k_->is_zero(row[j])) w[j] = k_->sub(w[j], k_->mul(f, row[j]));
        }
        for (std::size_t j = 0; j < len_; ++j)
            if (!k_->is_zero(w[j])) return j;
        return len_;
    }

    Ring k_;
    std::size_t len_;
    bool fast_ = false;
    std::uint64_t p_ = 2;
    std::vector<std::vector<std::uint32_t>> fast_rows_;
    std::vector<std::vector<Elem>> slow_rows_;
    std::vector<std::size_t> pivots_;
};

} // namespace kext::linalg
