#pragma once

// One operation surface over every ring with the linear_solve capability:
// echelon forms over fields, Howell forms over Z/n, Hermite/Smith forms over
// Z and F_p[x], restriction of scalars over finite-dimensional algebras.

#include "kext/linalg/euclid.hpp"
#include "kext/linalg/field.hpp"
#include "kext/linalg/howell.hpp"
#include "kext/matrix.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kext {

enum class FormTag { Echelon, Smith, Howell };

inline const char* form_name(FormTag f)
{
    switch (f) {
    case FormTag::Echelon: return "echelon";
    case FormTag::Smith: return "smith";
    case FormTag::Howell: return "howell";
    }
    return "echelon";
}

/// left * padded(original) * right = transformed, where padded appends zero
/// rows until the original has `padded_rows` rows (Howell form only).
struct NormalFormResult {
    FormTag form = FormTag::Echelon;
    Matrix transformed;
    Matrix left, left_inv;
    Matrix right, right_inv;
    std::size_t padded_rows = 0;
};

enum class RingTier { Field, ModN, Euclidean, Algebra, None };

inline RingTier ring_tier(const Ring& r)
{
    switch (r->kind()) {
    case RingKind::Rationals:
    case RingKind::PrimeField: return RingTier::Field;
    case RingKind::IntegersModN: return RingTier::ModN;
    case RingKind::Integers: return RingTier::Euclidean;
    case RingKind::PolyQuotient:
        if (r->algebra_dimension()) return RingTier::Algebra;
        if (r->is_euclidean()) return RingTier::Euclidean;
        return RingTier::None;
    }
    return RingTier::None;
}

inline void require_linear_solve(const Ring& r)
{
    if (!r->caps().linear_solve || ring_tier(r) == RingTier::None)
        fail(ErrorCode::CapabilityMissing, "linalg", "linear solving is unavailable over " + r->descriptor());
}

/// Summary of a finitely generated module arising as a subquotient.
struct ModuleSummary {
    RingTier tier = RingTier::Field;
    Ring ring;
    std::size_t rank = 0;             // dimension, free rank, or dimension over the coefficient field
    std::vector<Elem> torsion;        // invariant factors that are neither zero nor units
    std::vector<BigInt> cyclic_orders;  // Z/n: orders of the cyclic summands, ascending by divisibility
    std::optional<BigInt> cardinality;

    bool is_zero() const { return rank == 0 && torsion.empty() && cyclic_orders.empty(); }

    std::string describe() const
    {
        if (is_zero()) return "0";
        if (tier == RingTier::Algebra)
            return "dim_" + ring->coefficient_field()->descriptor() + " " + std::to_string(rank);
        std::vector<std::string> parts;
        if (rank) parts.push_back(ring->descriptor() + "^" + std::to_string(rank));
        for (const auto& c : cyclic_orders) parts.push_back("Z/" + c.str());
        for (const auto& t : torsion) {
            if (ring->kind() == RingKind::Integers) parts.push_back("Z/" + ring->print(t));
            else parts.push_back(ring->descriptor() + "/(" + ring->print(t) + ")");
        }
        std::string out;
        for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " + " : "") + parts[i];
        return out;
    }
};

namespace linalg {

inline Matrix empty_cols(const Ring& r, std::size_t rows) { return Matrix(r, rows, 0); }

/// Minimal generating set (Nakayama) of the algebra-module spanned by the
/// coefficient-field column vectors `k_cols`.
inline Matrix algebra_module_generators(const Ring& r, const Matrix& k_cols)
{
    std::size_t d = *r->algebra_dimension();
    Ring k = r->coefficient_field();
    std::size_t len = k_cols.rows;
    std::size_t n = d ? len / d : 0;
    // multiplication matrices of the basis monomials
    std::vector<std::vector<Elem>> mult;
    for (std::size_t b = 0; b < d; ++b) {
        std::vector<Elem> c(d, k->zero());
        c[b] = k->one();
        mult.push_back(r->mult_matrix(r->from_coords(c)));
    }
    auto times = [&](std::size_t b, std::size_t col) {
        std::vector<Elem> out(len, k->zero());
        const auto& m = mult[b];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t x = 0; x < d; ++x) {
                Elem acc = k->zero();
                for (std::size_t y = 0; y < d; ++y) {
                    const Elem& v = k_cols.at(i * d + y, col);
                    if (!k->is_zero(v) && !k->is_zero(m[x * d + y])) acc = k->add(acc, k->mul(m[x * d + y], v));
                }
                out[i * d + x] = acc;
            }
        return out;
    };
    FieldSpan span(k, len);
    bool local = r->caps().local;
    if (local) {
        // the maximal ideal is spanned by the non-constant basis monomials (basis index 0 is 1)
        for (std::size_t col = 0; col < k_cols.cols; ++col)
            for (std::size_t b = 1; b < d; ++b) span.insert(times(b, col));
    }
    std::vector<std::size_t> chosen;
    for (std::size_t col = 0; col < k_cols.cols; ++col) {
        std::vector<Elem> v(len);
        for (std::size_t i = 0; i < len; ++i) v[i] = k_cols.at(i, col);
        if (span.contains(v)) continue;
        chosen.push_back(col);
        if (local) span.insert(v);
        else
            for (std::size_t b = 0; b < d; ++b) span.insert(times(b, col));
    }
    Matrix sel(k, len, chosen.size());
    for (std::size_t t = 0; t < chosen.size(); ++t)
        for (std::size_t i = 0; i < len; ++i) sel.at(i, t) = k_cols.at(i, chosen[t]);
    return collapse_scalars(r, sel);
}

/// Rank over the coefficient field of a matrix over a field or finite algebra.
inline std::size_t k_rank(const Matrix& a)
{
    if (a.empty()) return 0;
    if (ring_tier(a.ring) == RingTier::Algebra) return field_rank(expand_scalars(a));
    return field_rank(a);
}

/// Cardinality of the Z/n-span of the columns of g.
inline BigInt modn_span_size(const Matrix& g, std::int64_t n)
{
    if (g.cols == 0 || g.rows == 0) return 1;
    return howell_span_size(howell_form(to_i64(transpose(g)), n));
}

inline Matrix scale_cols(const Matrix& g, std::int64_t c)
{
    return mat_scale(g.ring->from_int(BigInt(c)), g);
}

} // namespace linalg

/// Columns generate {x : a x = 0}: a basis over fields and PIDs, a generating
/// set over Z/n, a minimal generating set over local finite algebras.
inline Matrix kernel_basis(const Matrix& a)
{
    const Ring& r = a.ring;
    require_linear_solve(r);
    if (a.cols == 0) return Matrix(r, 0, 0);
    if (a.rows == 0) return mat_identity(r, a.cols);
    switch (ring_tier(r)) {
    case RingTier::Field: return linalg::field_kernel(a);
    case RingTier::ModN: {
        auto n = static_cast<std::int64_t>(r->characteristic());
        return linalg::from_i64(r, linalg::howell_kernel(linalg::to_i64(a), n));
    }
    case RingTier::Euclidean: {
        linalg::ColumnHermite h = linalg::column_hermite(a);
        return submatrix(h.v, 0, h.rank, a.cols, a.cols - h.rank);
    }
    case RingTier::Algebra: {
        Matrix k = linalg::field_kernel(linalg::expand_scalars(a));
        return linalg::algebra_module_generators(r, k);
    }
    case RingTier::None: break;
    }
    fail(ErrorCode::CapabilityMissing, "linalg", "no kernel algorithm for " + r->descriptor());
}

/// Some x with a x = b (b may have several columns), or nullopt.
inline std::optional<Matrix> solve(const Matrix& a, const Matrix& b)
{
    const Ring& r = a.ring;
    require_linear_solve(r);
    require_same_ring(r, b.ring, "linalg");
    if (a.rows != b.rows) fail(ErrorCode::DimensionMismatch, "linalg", "solve: row count mismatch");
    if (a.cols == 0) {
        if (!mat_is_zero(b)) return std::nullopt;
        return Matrix(r, 0, b.cols);
    }
    switch (ring_tier(r)) {
    case RingTier::Field: return linalg::field_solve(a, b);
    case RingTier::ModN: {
        auto n = static_cast<std::int64_t>(r->characteristic());
        linalg::I64Mat ai = linalg::to_i64(a);
        Matrix x(r, a.cols, b.cols);
        for (std::size_t j = 0; j < b.cols; ++j) {
            std::vector<std::int64_t> rhs(b.rows);
            for (std::size_t i = 0; i < b.rows; ++i) rhs[i] = std::get<std::int64_t>(b.at(i, j));
            auto sol = linalg::howell_solve(ai, rhs, n);
            if (!sol) return std::nullopt;
            for (std::size_t i = 0; i < a.cols; ++i) x.at(i, j) = (*sol)[i];
        }
        return x;
    }
    case RingTier::Euclidean: {
        linalg::ColumnHermite h = linalg::column_hermite(a);
        auto y = linalg::solve_column_echelon(h.h, h.rank, h.pivot_rows, b);
        if (!y) return std::nullopt;
        return mat_mul(h.v, *y);
    }
    case RingTier::Algebra: {
        auto y = linalg::field_solve(linalg::expand_scalars(a), linalg::flatten_scalars(b));
        if (!y) return std::nullopt;
        return linalg::collapse_scalars(r, *y);
    }
    case RingTier::None: break;
    }
    fail(ErrorCode::CapabilityMissing, "linalg", "no solver for " + r->descriptor());
}

/// Every column of b lies in the column span of a.
inline bool in_column_span(const Matrix& a, const Matrix& b) { return solve(a, b).has_value(); }

inline NormalFormResult matrix_normal_form(const Matrix& a)
{
    const Ring& r = a.ring;
    require_linear_solve(r);
    NormalFormResult out;
    switch (ring_tier(r)) {
    case RingTier::Field: {
        linalg::Echelon e = linalg::rref(a, true);
        out.form = FormTag::Echelon;
        out.transformed = e.reduced;
        out.left = e.u;
        out.left_inv = e.u_inv;
        out.right = mat_identity(r, a.cols);
        out.right_inv = mat_identity(r, a.cols);
        out.padded_rows = a.rows;
        return out;
    }
    case RingTier::ModN: {
        auto n = static_cast<std::int64_t>(r->characteristic());
        linalg::HowellForm h = linalg::howell_form(linalg::to_i64(a), n, true);
        out.form = FormTag::Howell;
        out.transformed = linalg::from_i64(r, h.form);
        out.left = linalg::from_i64(r, h.left);
        out.left_inv = linalg::from_i64(r, h.left_inv);
        out.right = mat_identity(r, a.cols);
        out.right_inv = mat_identity(r, a.cols);
        out.padded_rows = h.form.rows;
        return out;
    }
    case RingTier::Euclidean: {
        linalg::SmithForm s = linalg::smith_form(a);
        out.form = FormTag::Smith;
        out.transformed = s.d;
        out.left = s.u;
        out.left_inv = s.u_inv;
        out.right = s.v;
        out.right_inv = s.v_inv;
        out.padded_rows = a.rows;
        return out;
    }
    default: break;
    }
    fail(ErrorCode::CapabilityMissing, "linalg", "no matrix normal form over " + r->descriptor());
}

/// Re-checks left * padded(a) * right = transformed and both inverse records.
inline bool verify_normal_form(const Matrix& a, const NormalFormResult& nf)
{
    const Ring& r = a.ring;
    Matrix padded(r, nf.padded_rows, a.cols);
    place(padded, a, 0, 0);
    if (!(mat_mul(mat_mul(nf.left, padded), nf.right) == nf.transformed)) return false;
    if (!(mat_mul(nf.left_inv, nf.left) == mat_identity(r, nf.left.rows))) return false;
    if (!(mat_mul(nf.right, nf.right_inv) == mat_identity(r, nf.right.rows))) return false;
    return true;
}

namespace linalg {

/// Generators (columns) of P = {v : l v in span(wp)}.
inline Matrix preimage_generators(const Matrix& l, const Matrix& wp)
{
    const Ring& r = l.ring;
    std::size_t a = l.cols;
    if (l.rows == 0) return mat_identity(r, a);
    Matrix k = kernel_basis(hstack(l, wp));
    return submatrix(k, 0, 0, a, k.cols);
}

inline ModuleSummary modn_subquotient(const Matrix& pg, const Matrix& qg)
{
    const Ring& r = pg.ring;
    auto n = static_cast<std::int64_t>(r->characteristic());
    ModuleSummary s;
    s.tier = RingTier::ModN;
    s.ring = r;
    BigInt q_size = modn_span_size(qg, n);
    BigInt p_size = modn_span_size(hstack(pg, qg), n);
    s.cardinality = p_size / q_size;
    // per prime: t_i = log_p |p^i H| - log_p |p^(i+1) H| counts summands of order > p^i
    std::vector<std::pair<std::int64_t, int>> primes;
    std::int64_t m = n;
    for (std::int64_t p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        int k = 0;
        while (m % p == 0) {
            m /= p;
            ++k;
        }
        primes.emplace_back(p, k);
    }
    if (m > 1) primes.emplace_back(m, 1);
    std::vector<std::vector<int>> exps;  // per prime, descending exponents of the cyclic p-parts
    for (auto [p, k] : primes) {
        std::vector<int> logs;
        std::int64_t pi = 1;
        for (int i = 0; i <= k; ++i) {
            BigInt sz = modn_span_size(hstack(scale_cols(pg, pi), qg), n) / q_size;
            int v = 0;
            while (sz % p == 0) {
                sz /= p;
                ++v;
            }
            logs.push_back(v);
            pi *= p;
        }
        std::vector<int> parts;
        for (int j = k; j >= 1; --j) {
            int ge_j = logs[j - 1] - logs[j];
            int ge_next = j < k ? logs[j] - logs[j + 1] : 0;
            for (int c = 0; c < ge_j - ge_next; ++c) parts.push_back(j);
        }
        exps.push_back(parts);
    }
    std::size_t count = 0;
    for (const auto& e : exps) count = std::max(count, e.size());
    std::vector<std::int64_t> factors(count, 1);
    for (std::size_t q = 0; q < primes.size(); ++q)
        for (std::size_t i = 0; i < exps[q].size(); ++i)
            for (int j = 0; j < exps[q][i]; ++j) factors[i] *= primes[q].first;
    std::reverse(factors.begin(), factors.end());
    for (auto f : factors) s.cyclic_orders.push_back(BigInt(f));
    return s;
}

inline ModuleSummary pid_subquotient(const Matrix& pg, const Matrix& qg)
{
    const Ring& r = pg.ring;
    ModuleSummary s;
    s.tier = RingTier::Euclidean;
    s.ring = r;
    ColumnHermite hb = column_hermite(pg);
    Matrix basis = submatrix(hb.h, 0, 0, pg.rows, hb.rank);
    auto coords = solve_column_echelon(basis, hb.rank, hb.pivot_rows, qg);
    if (!coords)
        fail(ErrorCode::NotAComplex, "linalg", "subquotient denominator is not contained in the numerator");
    std::size_t rk = hb.rank;
    if (coords->rows == 0 || coords->cols == 0) {
        s.rank = rk;
        return s;
    }
    SmithForm sm = smith_form(*coords);
    s.rank = rk - sm.diagonal.size();
    for (const auto& d : sm.diagonal)
        if (!r->is_unit(d)) s.torsion.push_back(d);
    return s;
}

} // namespace linalg

/// The module {v : l v in span(wp)} / (span(lprev) + span(w)). Callers must
/// ensure the denominator lies in the numerator.
inline ModuleSummary subquotient(const Matrix& l, const Matrix& wp, const Matrix& lprev, const Matrix& w)
{
    const Ring& r = l.ring;
    require_linear_solve(r);
    RingTier tier = ring_tier(r);
    std::size_t a = l.cols;
    if (tier == RingTier::Field || tier == RingTier::Algebra) {
        ModuleSummary s;
        s.tier = tier;
        s.ring = r;
        std::size_t scale = tier == RingTier::Algebra ? *r->algebra_dimension() : 1;
        std::size_t p_dim = a * scale - linalg::k_rank(hstack(l, wp)) + linalg::k_rank(wp);
        std::size_t q_dim = linalg::k_rank(hstack(lprev, w));
        if (q_dim > p_dim) fail(ErrorCode::NotAComplex, "linalg", "subquotient denominator exceeds numerator");
        s.rank = p_dim - q_dim;
        BigInt ch = tier == RingTier::Algebra ? r->coefficient_field()->characteristic() : r->characteristic();
        if (ch != 0) {
            BigInt c = 1;
            for (std::size_t i = 0; i < s.rank; ++i) c *= ch;
            s.cardinality = c;
        }
        return s;
    }
    Matrix pg = linalg::preimage_generators(l, wp);
    Matrix qg = hstack(lprev, w);
    if (tier == RingTier::ModN) return linalg::modn_subquotient(pg, qg);
    return linalg::pid_subquotient(pg, qg);
}

/// ker(d_out) / im(d_in), with d_out * d_in = 0 checked.
inline ModuleSummary homology_module(const Matrix& d_in, const Matrix& d_out)
{
    require_same_ring(d_in.ring, d_out.ring, "linalg");
    if (d_out.cols != d_in.rows) fail(ErrorCode::DimensionMismatch, "linalg", "homology: incompatible shapes");
    if (!mat_is_zero(mat_mul(d_out, d_in)))
        fail(ErrorCode::NotAComplex, "linalg", "outgoing differential does not annihilate the incoming one");
    const Ring& r = d_in.ring;
    return subquotient(d_out, Matrix(r, d_out.rows, 0), d_in, Matrix(r, d_in.rows, 0));
}

} // namespace kext
