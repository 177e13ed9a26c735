#pragma once

#include "kext/error.hpp"
#include "kext/homomorphism.hpp"
#include "kext/linalg/linear_engine.hpp"
#include "kext/matrix.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kext {

/// Bounded complex of finite-rank free modules, homologically graded.
/// Degrees lo .. lo + ranks.size() - 1; diffs[k] is d(lo + k), of shape
/// rank(lo + k - 1) x rank(lo + k). Zero ranks at both ends are trimmed.
struct ChainComplex {
    Ring ring;
    int lo = 0;
    std::vector<std::size_t> ranks;
    std::vector<Matrix> diffs;

    bool is_zero() const { return ranks.empty(); }
    int hi() const { return lo + static_cast<int>(ranks.size()) - 1; }

    std::size_t rank(int n) const
    {
        if (ranks.empty() || n < lo || n > hi()) return 0;
        return ranks[static_cast<std::size_t>(n - lo)];
    }

    Matrix diff(int n) const
    {
        if (!ranks.empty() && n >= lo && n <= hi()) return diffs[static_cast<std::size_t>(n - lo)];
        return Matrix(ring, rank(n - 1), rank(n));
    }

    friend bool operator==(const ChainComplex& a, const ChainComplex& b)
    {
        return same_ring(a.ring, b.ring) && a.lo == b.lo && a.ranks == b.ranks && a.diffs == b.diffs;
    }
};

namespace detail {

inline ChainComplex assemble(const Ring& ring, int lo, std::vector<std::size_t> ranks, std::vector<Matrix> diffs, bool check)
{
    if (diffs.size() + 1 == ranks.size()) diffs.insert(diffs.begin(), Matrix(ring, 0, ranks.empty() ? 0 : ranks[0]));
    if (diffs.size() != ranks.size())
        fail(ErrorCode::DimensionMismatch, "complex", "expected one differential per degree");
    for (std::size_t k = 0; k < ranks.size(); ++k) {
        std::size_t below = k ? ranks[k - 1] : 0;
        const Matrix& d = diffs[k];
        require_same_ring(ring, d.ring, "complex");
        if (d.rows != below || d.cols != ranks[k])
            fail(ErrorCode::DimensionMismatch, "complex",
                 "d" + std::to_string(lo + static_cast<int>(k)) + " has shape " + std::to_string(d.rows) + "x" +
                     std::to_string(d.cols) + ", expected " + std::to_string(below) + "x" + std::to_string(ranks[k]));
    }
    if (check)
        for (std::size_t k = 1; k + 1 < ranks.size(); ++k)
            if (!mat_is_zero(mat_mul(diffs[k], diffs[k + 1])))
                throw NotAComplexError(lo + static_cast<int>(k),
                                       "d" + std::to_string(lo + static_cast<int>(k)) + " * d" +
                                           std::to_string(lo + static_cast<int>(k) + 1) + " != 0");
    // trim zero ranks at both ends
    std::size_t a = 0, b = ranks.size();
    while (a < b && ranks[a] == 0) ++a;
    while (b > a && ranks[b - 1] == 0) --b;
    ChainComplex c;
    c.ring = ring;
    if (a == b) return c;
    c.lo = lo + static_cast<int>(a);
    c.ranks.assign(ranks.begin() + static_cast<long>(a), ranks.begin() + static_cast<long>(b));
    c.diffs.assign(diffs.begin() + static_cast<long>(a), diffs.begin() + static_cast<long>(b));
    c.diffs[0] = Matrix(ring, 0, c.ranks[0]);
    return c;
}

} // namespace detail

/// Validated complex; `diffs` lists d(lo+1) .. d(hi) (or d(lo) .. d(hi)).
inline ChainComplex make_complex(const Ring& ring, int lo, std::vector<std::size_t> ranks, std::vector<Matrix> diffs)
{
    return detail::assemble(ring, lo, std::move(ranks), std::move(diffs), true);
}

inline ChainComplex zero_complex(const Ring& ring)
{
    ChainComplex c;
    c.ring = ring;
    return c;
}

/// Free module of rank r concentrated in degree n.
inline ChainComplex module_complex(const Ring& ring, std::size_t r, int n = 0)
{
    return make_complex(ring, n, {r}, {});
}

/// Re-checks d(n) d(n+1) = 0; returns the first offending degree.
inline std::optional<int> first_d2_violation(const ChainComplex& c)
{
    for (int n = c.lo + 1; n < c.hi(); ++n)
        if (!mat_is_zero(mat_mul(c.diff(n), c.diff(n + 1)))) return n;
    return std::nullopt;
}

/// (Sigma^m M)_n = M_{n-m} with differential (-1)^m d.
inline ChainComplex shift(const ChainComplex& m, int by)
{
    if (m.is_zero()) return m;
    ChainComplex c = m;
    c.lo = m.lo + by;
    if (by % 2)
        for (auto& d : c.diffs) d = mat_neg(d);
    return c;
}

/// Hard truncation keeping degrees >= m; d_n vanishes for n <= m.
inline ChainComplex truncate_above(const ChainComplex& c, int m)
{
    if (c.is_zero()) return c;
    int lo = std::max(c.lo, m);
    if (lo > c.hi()) return zero_complex(c.ring);
    std::vector<std::size_t> ranks;
    std::vector<Matrix> diffs;
    for (int n = lo; n <= c.hi(); ++n) {
        ranks.push_back(c.rank(n));
        diffs.push_back(n == lo ? Matrix(c.ring, 0, c.rank(n)) : c.diff(n));
    }
    return detail::assemble(c.ring, lo, ranks, diffs, false);
}

/// Hard truncation keeping degrees <= m; d_n vanishes for n > m.
inline ChainComplex truncate_below(const ChainComplex& c, int m)
{
    if (c.is_zero()) return c;
    int hi = std::min(c.hi(), m);
    if (hi < c.lo) return zero_complex(c.ring);
    std::vector<std::size_t> ranks;
    std::vector<Matrix> diffs;
    for (int n = c.lo; n <= hi; ++n) {
        ranks.push_back(c.rank(n));
        diffs.push_back(c.diff(n));
    }
    return detail::assemble(c.ring, c.lo, ranks, diffs, false);
}

/// Offsets of the summands M_{n-p} (x) N_p of (M (x) N)_n, p ascending over
/// N's degrees; entry p - N.lo holds the offset, the last entry the total rank.
inline std::vector<std::size_t> tensor_offsets(const ChainComplex& m, const ChainComplex& nn, int n)
{
    std::vector<std::size_t> off;
    std::size_t acc = 0;
    for (int p = nn.lo; p <= nn.hi(); ++p) {
        off.push_back(acc);
        acc += m.rank(n - p) * nn.rank(p);
    }
    off.push_back(acc);
    return off;
}

/// Differential of M (x) N in degree n, Koszul sign (-1)^{|x|} on the right factor.
inline Matrix tensor_diff(const ChainComplex& m, const ChainComplex& nn, int n)
{
    const Ring& r = m.ring;
    auto src = tensor_offsets(m, nn, n);
    auto dst = tensor_offsets(m, nn, n - 1);
    Matrix d(r, dst.back(), src.back());
    for (int p = nn.lo; p <= nn.hi(); ++p) {
        std::size_t k = static_cast<std::size_t>(p - nn.lo);
        std::size_t a = m.rank(n - p), b = nn.rank(p);
        if (a == 0 || b == 0) continue;
        if (m.rank(n - p - 1)) place(d, kron(m.diff(n - p), mat_identity(r, b)), dst[k], src[k]);
        if (p - 1 >= nn.lo && nn.rank(p - 1)) {
            Matrix blk = kron(mat_identity(r, a), nn.diff(p));
            if ((n - p) % 2) blk = mat_neg(blk);
            place(d, blk, dst[k - 1], src[k]);
        }
    }
    return d;
}

inline ChainComplex tensor(const ChainComplex& m, const ChainComplex& nn)
{
    require_same_ring(m.ring, nn.ring, "complex");
    if (m.is_zero() || nn.is_zero()) return zero_complex(m.ring);
    int lo = m.lo + nn.lo, hi = m.hi() + nn.hi();
    std::vector<std::size_t> ranks;
    std::vector<Matrix> diffs;
    for (int n = lo; n <= hi; ++n) {
        ranks.push_back(tensor_offsets(m, nn, n).back());
        diffs.push_back(n == lo ? Matrix(m.ring, 0, ranks.back()) : tensor_diff(m, nn, n));
    }
    return detail::assemble(m.ring, lo, ranks, diffs, false);
}

/// Offsets of the components Hom(M_i, N_{i+n}) of Hom(M,N)_n, i ascending over
/// M's degrees; each component is a rank(N_{i+n}) x rank(M_i) matrix stored row-major.
inline std::vector<std::size_t> hom_offsets(const ChainComplex& m, const ChainComplex& nn, int n)
{
    std::vector<std::size_t> off;
    std::size_t acc = 0;
    for (int i = m.lo; i <= m.hi(); ++i) {
        off.push_back(acc);
        acc += nn.rank(i + n) * m.rank(i);
    }
    off.push_back(acc);
    return off;
}

/// d(f)_i = d^N f_i - (-1)^n f_{i-1} d^M_i.
inline Matrix hom_diff(const ChainComplex& m, const ChainComplex& nn, int n)
{
    const Ring& r = m.ring;
    auto src = hom_offsets(m, nn, n);
    auto dst = hom_offsets(m, nn, n - 1);
    Matrix d(r, dst.back(), src.back());
    for (int i = m.lo; i <= m.hi(); ++i) {
        std::size_t k = static_cast<std::size_t>(i - m.lo);
        std::size_t mi = m.rank(i);
        if (!mi) continue;
        // from component i of degree n: d^N_{i+n} f_i
        if (nn.rank(i + n) && nn.rank(i + n - 1)) place(d, kron(nn.diff(i + n), mat_identity(r, mi)), dst[k], src[k]);
        // from component i-1 of degree n: -(-1)^n f_{i-1} d^M_i
        if (i - 1 >= m.lo && m.rank(i - 1) && nn.rank(i - 1 + n)) {
            Matrix blk = kron(mat_identity(r, nn.rank(i - 1 + n)), transpose(m.diff(i)));
            if (n % 2 == 0) blk = mat_neg(blk);
            place(d, blk, dst[k], src[k - 1]);
        }
    }
    return d;
}

inline ChainComplex hom_complex(const ChainComplex& m, const ChainComplex& nn)
{
    require_same_ring(m.ring, nn.ring, "complex");
    if (m.is_zero() || nn.is_zero()) return zero_complex(m.ring);
    int lo = nn.lo - m.hi(), hi = nn.hi() - m.lo;
    std::vector<std::size_t> ranks;
    std::vector<Matrix> diffs;
    for (int n = lo; n <= hi; ++n) {
        ranks.push_back(hom_offsets(m, nn, n).back());
        diffs.push_back(n == lo ? Matrix(m.ring, 0, ranks.back()) : hom_diff(m, nn, n));
    }
    return detail::assemble(m.ring, lo, ranks, diffs, false);
}

/// Degree-0 chain map; absent components are zero.
struct ChainMap {
    ChainComplex source;
    ChainComplex target;
    std::map<int, Matrix> comps;

    Matrix component(int n) const
    {
        auto it = comps.find(n);
        if (it != comps.end()) return it->second;
        return Matrix(source.ring, target.rank(n), source.rank(n));
    }
};

inline ChainMap identity_map(const ChainComplex& c)
{
    ChainMap f{c, c, {}};
    for (int n = c.lo; n <= c.hi() && !c.is_zero(); ++n) f.comps[n] = mat_identity(c.ring, c.rank(n));
    return f;
}

inline ChainMap zero_map(const ChainComplex& s, const ChainComplex& t) { return ChainMap{s, t, {}}; }

inline ChainMap compose(const ChainMap& f, const ChainMap& g)
{
    ChainMap h{g.source, f.target, {}};
    int lo = std::min(g.source.lo, f.target.lo), hi = std::max(g.source.hi(), f.target.hi());
    for (int n = lo; n <= hi; ++n) h.comps[n] = mat_mul(f.component(n), g.component(n));
    return h;
}

inline int map_lo(const ChainMap& f) { return std::min(f.source.lo, f.target.lo); }
inline int map_hi(const ChainMap& f) { return std::max(f.source.hi(), f.target.hi()); }

inline void check_map_shapes(const ChainMap& f)
{
    for (const auto& [n, m] : f.comps)
        if (m.rows != f.target.rank(n) || m.cols != f.source.rank(n))
            fail(ErrorCode::DimensionMismatch, "complex", "chain map component " + std::to_string(n) + " has wrong shape");
}

/// d^T_n f_n = f_{n-1} d^S_n for every n.
inline bool is_chain_map(const ChainMap& f)
{
    check_map_shapes(f);
    for (int n = map_lo(f); n <= map_hi(f) + 1; ++n)
        if (!(mat_mul(f.target.diff(n), f.component(n)) == mat_mul(f.component(n - 1), f.source.diff(n)))) return false;
    return true;
}

/// sigma_n : source_n -> target_{n+1}.
struct Homotopy {
    std::map<int, Matrix> comps;

    Matrix component(int n, const ChainComplex& s, const ChainComplex& t) const
    {
        auto it = comps.find(n);
        if (it != comps.end()) return it->second;
        return Matrix(s.ring, t.rank(n + 1), s.rank(n));
    }
};

/// f_n = d^T_{n+1} sigma_n + sigma_{n-1} d^S_n for every n.
inline bool is_null_homotopy(const Homotopy& sigma, const ChainMap& f)
{
    check_map_shapes(f);
    const ChainComplex& s = f.source;
    const ChainComplex& t = f.target;
    for (const auto& [n, m] : sigma.comps)
        if (m.rows != t.rank(n + 1) || m.cols != s.rank(n))
            fail(ErrorCode::DimensionMismatch, "complex", "homotopy component " + std::to_string(n) + " has wrong shape");
    for (int n = map_lo(f) - 1; n <= map_hi(f) + 1; ++n) {
        Matrix lhs = mat_add(mat_mul(t.diff(n + 1), sigma.component(n, s, t)), mat_mul(sigma.component(n - 1, s, t), s.diff(n)));
        if (!(lhs == f.component(n))) return false;
    }
    return true;
}

/// sigma_{n-1} d_n + d_{n+1} sigma_n = 1 for every n.
inline bool is_contraction(const Homotopy& sigma, const ChainComplex& c)
{
    return is_null_homotopy(sigma, identity_map(c));
}

/// Cone(f)_n = T_n (+) S_{n-1}, d = [[d^T_n, f_{n-1}], [0, -d^S_{n-1}]].
inline ChainComplex cone(const ChainMap& f)
{
    const ChainComplex& s = f.source;
    const ChainComplex& t = f.target;
    const Ring& r = s.ring;
    require_same_ring(r, t.ring, "complex");
    if (s.is_zero() && t.is_zero()) return zero_complex(r);
    int lo = s.is_zero() ? t.lo : (t.is_zero() ? s.lo + 1 : std::min(t.lo, s.lo + 1));
    int hi = s.is_zero() ? t.hi() : (t.is_zero() ? s.hi() + 1 : std::max(t.hi(), s.hi() + 1));
    std::vector<std::size_t> ranks;
    std::vector<Matrix> diffs;
    for (int n = lo; n <= hi; ++n) {
        ranks.push_back(t.rank(n) + s.rank(n - 1));
        if (n == lo) {
            diffs.push_back(Matrix(r, 0, ranks.back()));
            continue;
        }
        diffs.push_back(mat_block({{t.diff(n), f.component(n - 1)},
                                   {Matrix(r, s.rank(n - 2), t.rank(n)), mat_neg(s.diff(n - 1))}}));
    }
    return detail::assemble(r, lo, ranks, diffs, false);
}

inline ChainComplex base_change(const RingHom& f, const ChainComplex& m)
{
    require_same_ring(f.source(), m.ring, "complex");
    if (m.is_zero()) return zero_complex(f.target());
    std::vector<Matrix> diffs;
    for (const auto& d : m.diffs) diffs.push_back(f(d));
    return detail::assemble(f.target(), m.lo, m.ranks, diffs, false);
}

inline ModuleSummary homology(const ChainComplex& c, int n)
{
    return homology_module(c.diff(n + 1), c.diff(n));
}

struct HomologyBounds {
    bool acyclic = true;
    int sup = 0;
    int inf = 0;
};

inline HomologyBounds sup_inf(const ChainComplex& c)
{
    HomologyBounds b;
    if (c.is_zero()) return b;
    for (int n = c.lo; n <= c.hi(); ++n) {
        if (homology(c, n).is_zero()) continue;
        if (b.acyclic) b.inf = n;
        b.acyclic = false;
        b.sup = n;
    }
    return b;
}

inline bool is_exact(const ChainComplex& c) { return sup_inf(c).acyclic; }

/// Every differential entry lies in the maximal ideal.
inline bool is_minimal(const ChainComplex& c)
{
    if (!c.ring->caps().local) fail(ErrorCode::NotLocal, "complex", c.ring->descriptor() + " is not certified local");
    for (const auto& d : c.diffs)
        for (const auto& x : d.data)
            if (c.ring->is_unit(x)) return false;
    return true;
}

/// Drops redundant columns: over local rings the result is a minimal generating
/// set of the column span (Nakayama), otherwise the generators are returned unchanged.
inline Matrix minimize_generators(const Matrix& g)
{
    const Ring& r = g.ring;
    if (!r->caps().local || g.cols == 0) return g;
    switch (ring_tier(r)) {
    case RingTier::Field: {
        linalg::Echelon e = linalg::rref(g, false);
        Matrix out(r, g.rows, e.pivots.size());
        for (std::size_t t = 0; t < e.pivots.size(); ++t)
            for (std::size_t i = 0; i < g.rows; ++i) out.at(i, t) = g.at(i, e.pivots[t]);
        return out;
    }
    case RingTier::ModN: {
        std::int64_t p = num::prime_power(r->spec().modulus)->first;
        Matrix mg = mat_scale(r->from_int(BigInt(p)), g);
        std::vector<std::size_t> chosen;
        for (std::size_t j = 0; j < g.cols; ++j) {
            Matrix basis = mg;
            for (auto c : chosen) basis = hstack(basis, column(g, c));
            if (!in_column_span(basis, column(g, j))) chosen.push_back(j);
        }
        Matrix out(r, g.rows, chosen.size());
        for (std::size_t t = 0; t < chosen.size(); ++t)
            for (std::size_t i = 0; i < g.rows; ++i) out.at(i, t) = g.at(i, chosen[t]);
        return out;
    }
    case RingTier::Algebra: return linalg::algebra_module_generators(r, linalg::flatten_scalars(g));
    default: return g;
    }
}

/// Generators of ker(a), minimal over local rings.
inline Matrix kernel_generators(const Matrix& a) { return minimize_generators(kernel_basis(a)); }

struct AugmentResult {
    ChainComplex complex;
    bool terminated = true;  // the added resolution reached a zero kernel
    int top = 0;             // highest degree of the output
};

/// Extends a complex supported in degrees <= m by a free resolution of
/// ker(d_m), adding at most depth_budget degrees.
inline AugmentResult augment_by_resolution(const ChainComplex& a, int m, int depth_budget, std::size_t rank_cap = 100000)
{
    const Ring& r = a.ring;
    require_linear_solve(r);
    if (!a.is_zero() && a.hi() > m)
        fail(ErrorCode::InvalidArgument, "complex", "complex has degrees above " + std::to_string(m));
    std::vector<std::size_t> ranks;
    std::vector<Matrix> diffs;
    int lo = a.is_zero() ? m : a.lo;
    for (int n = lo; n <= m; ++n) {
        ranks.push_back(a.rank(n));
        diffs.push_back(a.diff(n));
    }
    Matrix prev = a.diff(m);
    AugmentResult out;
    out.terminated = true;
    int n = m;
    for (int step = 0; step < depth_budget; ++step) {
        Matrix k = kernel_generators(prev);
        if (k.cols == 0) break;
        if (k.cols > rank_cap) fail(ErrorCode::BudgetExceeded, "complex", "resolution rank exceeded the cap");
        ++n;
        ranks.push_back(k.cols);
        diffs.push_back(k);
        prev = k;
        if (step + 1 == depth_budget) out.terminated = kernel_basis(prev).cols == 0;
    }
    out.complex = detail::assemble(r, lo, ranks, diffs, true);
    out.top = n;
    return out;
}

} // namespace kext
