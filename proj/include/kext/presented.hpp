#pragma once

// Finitely presented modules and complexes of them. A presented module is
// coker(rel : R^q -> R^g); a presented complex stores in each degree the
// generator count, a relation matrix and a lifted differential between the
// free covers that maps relations into relations.

#include "kext/complexes.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kext {

struct ModulePresentation {
    Ring ring;
    Matrix relations;  // generators x relations

    std::size_t generators() const { return relations.rows; }

    friend bool operator==(const ModulePresentation& a, const ModulePresentation& b)
    {
        return same_ring(a.ring, b.ring) && a.relations == b.relations;
    }
};

inline ModulePresentation free_module(const Ring& r, std::size_t rank) { return ModulePresentation{r, Matrix(r, rank, 0)}; }

/// R^g / (columns of rel).
inline ModulePresentation presentation(const Matrix& rel) { return ModulePresentation{rel.ring, rel}; }

/// Residue field k = R / m of a certified local ring, presented by the variables
/// (or by the prime for Z/p^k).
inline ModulePresentation residue_module(const Ring& r)
{
    if (!r->caps().local) fail(ErrorCode::NotLocal, "presented", r->descriptor() + " is not certified local");
    std::vector<Elem> gens;
    if (r->kind() == RingKind::IntegersModN) {
        auto pk = num::prime_power(r->spec().modulus);
        if (pk->second > 1) gens.push_back(r->from_int(BigInt(pk->first)));
    }
    else if (r->kind() == RingKind::PolyQuotient) {
        for (std::size_t i = 0; i < r->variables().size(); ++i) gens.push_back(r->variable(i));
    }
    Matrix rel(r, 1, gens.size());
    for (std::size_t j = 0; j < gens.size(); ++j) rel.at(0, j) = gens[j];
    return ModulePresentation{r, rel};
}

/// Removes generators killed by unit relations; over local rings also drops
/// redundant relations, giving a minimal presentation.
inline ModulePresentation minimize_presentation(const ModulePresentation& m)
{
    const Ring& r = m.ring;
    Matrix q = m.relations;
    for (;;) {
        std::optional<std::pair<std::size_t, std::size_t>> piv;
        for (std::size_t i = 0; i < q.rows && !piv; ++i)
            for (std::size_t j = 0; j < q.cols && !piv; ++j)
                if (r->is_unit(q.at(i, j))) piv = std::make_pair(i, j);
        if (!piv) break;
        auto [pi, pj] = *piv;
        Elem inv = *r->inverse(q.at(pi, pj));
        Matrix out(r, q.rows - 1, q.cols - 1);
        for (std::size_t c = 0, oc = 0; c < q.cols; ++c) {
            if (c == pj) continue;
            Elem f = r->mul(q.at(pi, c), inv);
            for (std::size_t i = 0, oi = 0; i < q.rows; ++i) {
                if (i == pi) continue;
                out.at(oi, oc) = r->sub(q.at(i, c), r->mul(f, q.at(i, pj)));
                ++oi;
            }
            ++oc;
        }
        q = out;
    }
    // drop zero relations
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < q.cols; ++j)
        for (std::size_t i = 0; i < q.rows; ++i)
            if (!r->is_zero(q.at(i, j))) {
                keep.push_back(j);
                break;
            }
    Matrix nz(r, q.rows, keep.size());
    for (std::size_t t = 0; t < keep.size(); ++t)
        for (std::size_t i = 0; i < q.rows; ++i) nz.at(i, t) = q.at(i, keep[t]);
    if (nz.cols) nz = minimize_generators(nz);
    return ModulePresentation{r, nz};
}

struct Resolution {
    ChainComplex complex;    // F_0 <- F_1 <- ... <- F_length
    ModulePresentation module;  // the (minimized) presentation being resolved, F_0 = R^g
    bool terminated = false;    // a zero kernel was reached
};

/// Free resolution F of coker(rel) through degree `length` (d_length included).
/// With minimize = false the given generators are kept as the basis of F_0.
inline Resolution free_resolution(const ModulePresentation& m, int length, std::size_t rank_cap = 100000, bool minimize = true)
{
    const Ring& r = m.ring;
    require_linear_solve(r);
    Resolution res;
    res.module = minimize ? minimize_presentation(m) : m;
    std::vector<std::size_t> ranks{res.module.generators()};
    std::vector<Matrix> diffs;
    Matrix prev = res.module.relations;
    res.terminated = false;
    for (int n = 1; n <= length; ++n) {
        if (prev.cols == 0) {
            res.terminated = true;
            break;
        }
        if (prev.cols > rank_cap) fail(ErrorCode::BudgetExceeded, "presented", "resolution rank exceeded the cap");
        ranks.push_back(prev.cols);
        diffs.push_back(prev);
        prev = kernel_generators(prev);
    }
    if (prev.cols == 0) res.terminated = true;
    res.complex = make_complex(r, 0, ranks, diffs);
    return res;
}

struct PresentedComplex {
    Ring ring;
    int lo = 0;
    std::vector<std::size_t> gens;
    std::vector<Matrix> diffs;  // diffs[k] = d(lo + k), gens(n - 1) x gens(n)
    std::vector<Matrix> rels;   // rels[k] : gens(lo + k) x q

    int hi() const { return lo + static_cast<int>(gens.size()) - 1; }
    bool in_range(int n) const { return !gens.empty() && n >= lo && n <= hi(); }
    std::size_t rank(int n) const { return in_range(n) ? gens[static_cast<std::size_t>(n - lo)] : 0; }

    Matrix diff(int n) const
    {
        if (in_range(n)) return diffs[static_cast<std::size_t>(n - lo)];
        return Matrix(ring, rank(n - 1), rank(n));
    }

    Matrix rel(int n) const
    {
        if (in_range(n)) return rels[static_cast<std::size_t>(n - lo)];
        return Matrix(ring, rank(n), 0);
    }

    /// The generator data as an (unvalidated) free complex, for the block formulas.
    ChainComplex cover() const
    {
        ChainComplex c;
        c.ring = ring;
        c.lo = lo;
        c.ranks = gens;
        c.diffs = diffs;
        return c;
    }
};

inline PresentedComplex presented_from_cover(const ChainComplex& c, std::vector<Matrix> rels)
{
    PresentedComplex p;
    p.ring = c.ring;
    p.lo = c.lo;
    p.gens = c.ranks;
    p.diffs = c.diffs;
    p.rels = std::move(rels);
    return p;
}

inline PresentedComplex presented(const ChainComplex& c)
{
    std::vector<Matrix> rels;
    for (int n = c.lo; n <= c.hi() && !c.is_zero(); ++n) rels.push_back(Matrix(c.ring, c.rank(n), 0));
    return presented_from_cover(c, rels);
}

inline PresentedComplex presented(const ModulePresentation& m, int degree = 0)
{
    PresentedComplex p;
    p.ring = m.ring;
    p.lo = degree;
    p.gens = {m.generators()};
    p.diffs = {Matrix(m.ring, 0, m.generators())};
    p.rels = {m.relations};
    return p;
}

/// Checks that d maps relations into relations and d^2 lands in the relations.
inline std::optional<int> presented_violation(const PresentedComplex& p)
{
    for (int n = p.lo; n <= p.hi() + 1; ++n) {
        if (!in_column_span(p.rel(n - 1), mat_mul(p.diff(n), p.rel(n)))) return n;
        if (!in_column_span(p.rel(n - 2), mat_mul(p.diff(n - 1), p.diff(n)))) return n;
    }
    return std::nullopt;
}

inline ModuleSummary homology(const PresentedComplex& p, int n)
{
    return subquotient(p.diff(n), p.rel(n - 1), p.diff(n + 1), p.rel(n));
}

/// K (x) Y for a free complex K and a presented complex Y.
inline PresentedComplex tensor(const ChainComplex& k, const PresentedComplex& y)
{
    const Ring& r = k.ring;
    require_same_ring(r, y.ring, "presented");
    PresentedComplex out;
    out.ring = r;
    if (k.is_zero() || y.gens.empty()) return out;
    ChainComplex yc = y.cover();
    out.lo = k.lo + y.lo;
    for (int n = out.lo; n <= k.hi() + y.hi(); ++n) {
        auto off = tensor_offsets(k, yc, n);
        out.gens.push_back(off.back());
        out.diffs.push_back(n == out.lo ? Matrix(r, 0, off.back()) : tensor_diff(k, yc, n));
        std::size_t relcols = 0;
        std::vector<Matrix> blocks;
        for (int p = y.lo; p <= y.hi(); ++p) blocks.push_back(kron(mat_identity(r, k.rank(n - p)), y.rel(p)));
        for (const auto& b : blocks) relcols += b.cols;
        Matrix rel(r, off.back(), relcols);
        std::size_t c0 = 0;
        for (std::size_t t = 0; t < blocks.size(); ++t) {
            place(rel, blocks[t], off[t], c0);
            c0 += blocks[t].cols;
        }
        out.rels.push_back(rel);
    }
    return out;
}

/// Hom(F, Y) for a free complex F and a presented complex Y; components
/// Hom(F_i, Y_{i+n}) are stored row-major as in hom_complex.
inline PresentedComplex hom_complex(const ChainComplex& f, const PresentedComplex& y)
{
    const Ring& r = f.ring;
    require_same_ring(r, y.ring, "presented");
    PresentedComplex out;
    out.ring = r;
    if (f.is_zero() || y.gens.empty()) return out;
    ChainComplex yc = y.cover();
    out.lo = y.lo - f.hi();
    for (int n = out.lo; n <= y.hi() - f.lo; ++n) {
        auto off = hom_offsets(f, yc, n);
        out.gens.push_back(off.back());
        out.diffs.push_back(n == out.lo ? Matrix(r, 0, off.back()) : hom_diff(f, yc, n));
        std::vector<Matrix> blocks;
        for (int i = f.lo; i <= f.hi(); ++i) blocks.push_back(kron(y.rel(i + n), mat_identity(r, f.rank(i))));
        std::size_t relcols = 0;
        for (const auto& b : blocks) relcols += b.cols;
        Matrix rel(r, off.back(), relcols);
        std::size_t c0 = 0;
        for (std::size_t t = 0; t < blocks.size(); ++t) {
            place(rel, blocks[t], off[t], c0);
            c0 += blocks[t].cols;
        }
        out.rels.push_back(rel);
    }
    return out;
}

/// Cone of a degree-0 map from a free complex S into a presented complex T,
/// given by lifted components f_n : S_n -> gens(T_n).
inline PresentedComplex presented_cone(const ChainComplex& s, const PresentedComplex& t, const std::map<int, Matrix>& f)
{
    const Ring& r = s.ring;
    PresentedComplex out;
    out.ring = r;
    int lo = std::min(t.gens.empty() ? 1 : t.lo, s.is_zero() ? 1 : s.lo + 1);
    int hi = std::max(t.gens.empty() ? 0 : t.hi(), s.is_zero() ? 0 : s.hi() + 1);
    out.lo = lo;
    auto comp = [&](int n) {
        auto it = f.find(n);
        return it != f.end() ? it->second : Matrix(r, t.rank(n), s.rank(n));
    };
    for (int n = lo; n <= hi; ++n) {
        out.gens.push_back(t.rank(n) + s.rank(n - 1));
        if (n == lo) out.diffs.push_back(Matrix(r, 0, out.gens.back()));
        else
            out.diffs.push_back(mat_block({{t.diff(n), comp(n - 1)}, {Matrix(r, s.rank(n - 2), t.rank(n)), mat_neg(s.diff(n - 1))}}));
        Matrix tr = t.rel(n);
        Matrix rel(r, out.gens.back(), tr.cols);
        place(rel, tr, 0, 0);
        out.rels.push_back(rel);
    }
    return out;
}

/// Ext^i(M, N) for i = 0..depth as subquotients of Hom(F, N).
struct ExtTable {
    Resolution resolution;
    std::vector<ModuleSummary> ext;  // ext[i] = Ext^i
};

inline ExtTable ext_table(const ModulePresentation& m, const ModulePresentation& n, int depth, std::size_t rank_cap = 100000)
{
    require_same_ring(m.ring, n.ring, "presented");
    ExtTable t;
    t.resolution = free_resolution(m, depth + 1, rank_cap);
    PresentedComplex h = hom_complex(t.resolution.complex, presented(n));
    for (int i = 0; i <= depth; ++i) t.ext.push_back(homology(h, -i));
    return t;
}

} // namespace kext
