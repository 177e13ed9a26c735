#pragma once

// Windowed checks for semidualizing modules, derived biduality, Ext sup through
// the Koszul complex, and liftings along a regular sequence.

#include "kext/homomorphism.hpp"
#include "kext/koszul.hpp"
#include "kext/presented.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kext {

inline constexpr int kDefaultWindow = 6;

enum class SdcKind { Semidualizing, NotSemidualizing, Inconclusive };

inline const char* sdc_kind_name(SdcKind k)
{
    switch (k) {
    case SdcKind::Semidualizing: return "Semidualizing";
    case SdcKind::NotSemidualizing: return "NotSemidualizing";
    default: return "Inconclusive";
    }
}

struct SdcVerdict {
    SdcKind kind = SdcKind::Inconclusive;
    int window = kDefaultWindow;
    int scan_lo = 0, scan_hi = 0;              // homological degrees of the homothety cone that were inspected
    std::optional<int> witness;                // highest degree with nonzero cone homology
    std::optional<int> ext_witness;            // least i >= 1 with Ext^i(C, C) != 0 (module level only)
    std::string reason;
    std::vector<ModuleSummary> ext;            // Ext^i(C, C), i = 0..window (module level only)
    std::optional<bool> homothety_injective;
    std::optional<bool> homothety_surjective;
    std::vector<std::size_t> betti;

    std::string str() const
    {
        std::string s = sdc_kind_name(kind);
        s += "(window " + std::to_string(window) + ")";
        if (witness) s += " witness degree " + std::to_string(*witness);
        if (!reason.empty()) s += ": " + reason;
        if (ext_witness) s += "; Ext^" + std::to_string(*ext_witness) + "(C,C) != 0";
        return s;
    }
};

namespace detail {

/// Lifted homothety components from a free complex S = K into Hom(F, K (x) C):
/// u |-> (f |-> u (x) f), using that F_0 and C share generators.
inline std::map<int, Matrix> homothety_components(const ChainComplex& kc, const PresentedComplex& h, std::size_t g)
{
    const Ring& r = kc.ring;
    std::map<int, Matrix> comps;
    for (int n = kc.lo; n <= kc.hi() && !kc.is_zero(); ++n) {
        Matrix m(r, h.rank(n), kc.rank(n));
        // component i = 0 sits first because F starts in degree 0
        for (std::size_t s = 0; s < kc.rank(n); ++s)
            for (std::size_t c = 0; c < g; ++c) m.at((s * g + c) * g + c, s) = r->one();
        comps[n] = m;
    }
    return comps;
}

/// Homology of the homothety cone K -> Hom(F, K (x) C) over [lo, hi]; returns
/// the highest degree with nonzero homology.
inline std::optional<int> homothety_scan(const ChainComplex& kc, const Resolution& res, int lo, int hi)
{
    PresentedComplex y = tensor(kc, presented(res.module));
    PresentedComplex h = hom_complex(res.complex, y);
    PresentedComplex cone = presented_cone(kc, h, homothety_components(kc, h, res.module.generators()));
    for (int n = hi; n >= lo; --n)
        if (!homology(cone, n).is_zero()) return n;
    return std::nullopt;
}

inline std::vector<std::size_t> betti_numbers(const ChainComplex& f)
{
    std::vector<std::size_t> b;
    for (int n = 0; n <= f.hi() && !f.is_zero(); ++n) b.push_back(f.rank(n));
    return b;
}

} // namespace detail

/// Module-level check: R -> Hom(C, C) bijective and Ext^i(C, C) = 0 for 1 <= i <= window.
inline SdcVerdict homothety_check(const ModulePresentation& c, int window = kDefaultWindow, std::size_t rank_cap = 100000)
{
    if (window < 1) fail(ErrorCode::InvalidArgument, "duality", "window must be at least 1");
    const Ring& r = c.ring;
    SdcVerdict v;
    v.window = window;
    v.scan_lo = -window;
    v.scan_hi = 1;
    Resolution res;
    try {
        res = free_resolution(c, window + 1, rank_cap);
    }
    catch (const Error& e) {
        if (e.code() != ErrorCode::BudgetExceeded) throw;
        v.kind = SdcKind::Inconclusive;
        v.reason = "resolution exceeded the rank budget";
        return v;
    }
    v.betti = detail::betti_numbers(res.complex);
    std::size_t g = res.module.generators();
    PresentedComplex h = hom_complex(res.complex, presented(res.module));
    for (int i = 0; i <= window; ++i) v.ext.push_back(homology(h, -i));

    Matrix id(r, h.rank(0), 1);
    for (std::size_t a = 0; a < g; ++a) id.at(a * g + a, 0) = r->one();
    Matrix w0 = h.rel(0);
    Matrix k = kernel_basis(hstack(id, w0));
    bool inj = true;
    for (std::size_t j = 0; j < k.cols; ++j)
        if (!r->is_zero(k.at(0, j))) inj = false;
    Matrix cocycles = linalg::preimage_generators(h.diff(0), h.rel(-1));
    bool surj = in_column_span(hstack(id, w0), cocycles);
    v.homothety_injective = inj;
    v.homothety_surjective = surj;
    for (int i = 1; i <= window && !v.ext_witness; ++i)
        if (!v.ext[static_cast<std::size_t>(i)].is_zero()) v.ext_witness = i;

    if (!inj) {
        v.kind = SdcKind::NotSemidualizing;
        v.witness = 1;
        v.reason = "homothety R -> Hom(C,C) has a kernel";
        return v;
    }
    if (!surj) {
        v.kind = SdcKind::NotSemidualizing;
        v.witness = 0;
        v.reason = "homothety R -> Hom(C,C) is not onto (Hom(C,C) = " + v.ext[0].describe() + ")";
        return v;
    }
    for (int i = 1; i <= window; ++i)
        if (!v.ext[static_cast<std::size_t>(i)].is_zero()) {
            v.kind = SdcKind::NotSemidualizing;
            v.witness = -i;
            v.reason = "Ext^" + std::to_string(i) + "(C,C) = " + v.ext[static_cast<std::size_t>(i)].describe();
            return v;
        }
    v.kind = SdcKind::Semidualizing;
    v.reason = res.terminated ? "finite resolution" : "no obstruction within window";
    return v;
}

/// DG-level check for K (x) C through Hom_R(F, K (x) C) with F a resolution of C;
/// inspects cone degrees [e - window, e + 1].
inline SdcVerdict dg_homothety_check(const KoszulAlgebra& k, const ModulePresentation& c, int window = kDefaultWindow,
                                     std::size_t rank_cap = 100000)
{
    if (window < 1) fail(ErrorCode::InvalidArgument, "duality", "window must be at least 1");
    require_same_ring(k.ring, c.ring, "duality");
    SdcVerdict v;
    v.window = window;
    int e = k.e();
    v.scan_lo = e - window;
    v.scan_hi = e + 1;
    Resolution res;
    try {
        res = free_resolution(c, window + 1, rank_cap);
    }
    catch (const Error& err) {
        if (err.code() != ErrorCode::BudgetExceeded) throw;
        v.kind = SdcKind::Inconclusive;
        v.reason = "resolution exceeded the rank budget";
        return v;
    }
    v.betti = detail::betti_numbers(res.complex);
    v.witness = detail::homothety_scan(k.complex(), res, v.scan_lo, v.scan_hi);
    if (v.witness) {
        v.kind = SdcKind::NotSemidualizing;
        v.reason = "homothety cone has homology in degree " + std::to_string(*v.witness);
    }
    else {
        v.kind = SdcKind::Semidualizing;
        v.reason = "homothety cone exact on the window";
    }
    return v;
}

struct SdcTransfer {
    SdcVerdict r_level;
    SdcVerdict dg_level;
    bool verdicts_agree = false;
    bool witness_sandwich = true;  // w_R <= w_K <= w_R + e when both fail inside the scanned range

    std::string str() const
    {
        return "R: " + r_level.str() + "\nK: " + dg_level.str() + "\nagree: " + (verdicts_agree ? "yes" : "no");
    }
};

inline SdcTransfer koszul_sdc_transfer(const KoszulAlgebra& k, const ModulePresentation& c, int window = kDefaultWindow)
{
    SdcTransfer t;
    t.r_level = homothety_check(c, window);
    t.dg_level = dg_homothety_check(k, c, window);
    t.verdicts_agree = t.r_level.kind == t.dg_level.kind;
    if (t.r_level.witness && t.dg_level.witness && *t.r_level.witness >= t.dg_level.scan_lo) {
        int wr = *t.r_level.witness, wk = *t.dg_level.witness;
        t.witness_sandwich = wr <= wk && wk <= wr + k.e();
    }
    return t;
}

enum class BidualityKind { Reflexive, NotReflexive, Inconclusive };

inline const char* biduality_kind_name(BidualityKind k)
{
    switch (k) {
    case BidualityKind::Reflexive: return "Reflexive";
    case BidualityKind::NotReflexive: return "NotReflexive";
    default: return "Inconclusive";
    }
}

struct BidualityVerdict {
    BidualityKind kind = BidualityKind::Inconclusive;
    int window = kDefaultWindow;
    std::optional<int> witness;
    std::string reason;
    std::vector<ModuleSummary> ext;       // Ext^i(X, C)
    std::vector<ModuleSummary> dual_ext;  // Ext^i(Hom(X, C), C)

    std::string str() const
    {
        std::string s = biduality_kind_name(kind);
        s += "(window " + std::to_string(window) + ")";
        if (witness) s += " witness degree " + std::to_string(*witness);
        if (!reason.empty()) s += ": " + reason;
        return s;
    }
};

/// Presentation of the cocycle module {v : l v in span(wp)} / span(w).
inline ModulePresentation cocycle_presentation(const Matrix& cocycles, const Matrix& w)
{
    Matrix k = kernel_basis(hstack(cocycles, w));
    return ModulePresentation{cocycles.ring, submatrix(k, 0, 0, cocycles.cols, k.cols)};
}

/// Windowed check that X -> RHom(RHom(X, C), C) is an isomorphism, for modules
/// X whose Ext^{>0}(X, C) vanishes on the window.
inline BidualityVerdict biduality_check(const ModulePresentation& x, const ModulePresentation& c, int window = kDefaultWindow)
{
    if (window < 1) fail(ErrorCode::InvalidArgument, "duality", "window must be at least 1");
    require_same_ring(x.ring, c.ring, "duality");
    const Ring& r = x.ring;
    BidualityVerdict v;
    v.window = window;

    Resolution fx = free_resolution(x, window + 1);
    PresentedComplex cm = presented(c);
    PresentedComplex hx = hom_complex(fx.complex, cm);
    for (int i = 0; i <= window; ++i) v.ext.push_back(homology(hx, -i));
    if (!v.ext.back().is_zero()) {
        v.kind = BidualityKind::NotReflexive;
        v.witness = window;
        v.reason = "Ext^" + std::to_string(window) + "(X,C) = " + v.ext.back().describe() + " at the window top";
        return v;
    }
    for (int i = 1; i < window; ++i)
        if (!v.ext[static_cast<std::size_t>(i)].is_zero()) {
            v.kind = BidualityKind::Inconclusive;
            v.witness = i;
            v.reason = "RHom(X,C) is bounded on the window but not concentrated in degree 0";
            return v;
        }

    std::size_t a0 = fx.module.generators();
    std::size_t nc = c.generators();
    Matrix p = linalg::preimage_generators(hx.diff(0), hx.rel(-1));
    ModulePresentation y = cocycle_presentation(p, hx.rel(0));
    std::size_t py = y.generators();

    Resolution fy = free_resolution(y, window + 1, 100000, false);
    PresentedComplex hy = hom_complex(fy.complex, cm);
    for (int i = 0; i <= window; ++i) v.dual_ext.push_back(homology(hy, -i));
    for (int i = 1; i <= window; ++i)
        if (!v.dual_ext[static_cast<std::size_t>(i)].is_zero()) {
            v.kind = BidualityKind::NotReflexive;
            v.witness = i;
            v.reason = "Ext^" + std::to_string(i) + "(Hom(X,C),C) = " + v.dual_ext[static_cast<std::size_t>(i)].describe();
            return v;
        }

    // evaluation x_j |-> (f |-> f(x_j))
    Matrix delta(r, hy.rank(0), a0);
    for (std::size_t j = 0; j < a0; ++j)
        for (std::size_t cc = 0; cc < nc; ++cc)
            for (std::size_t t = 0; t < py; ++t) delta.at(cc * py + t, j) = p.at(cc * a0 + j, t);
    Matrix w2 = hy.rel(0);
    Matrix cocycles2 = linalg::preimage_generators(hy.diff(0), hy.rel(-1));
    bool well_defined = in_column_span(hstack(w2, hy.diff(1)), mat_mul(delta, fx.module.relations));
    bool onto = in_column_span(hstack(delta, w2), cocycles2);
    Matrix kk = kernel_basis(hstack(delta, w2));
    bool into = in_column_span(fx.module.relations, submatrix(kk, 0, 0, a0, kk.cols));
    if (!well_defined || !onto || !into) {
        v.kind = BidualityKind::NotReflexive;
        v.witness = 0;
        v.reason = std::string("biduality map X -> Hom(Hom(X,C),C) is not ") + (!onto ? "onto" : "injective");
        return v;
    }
    v.kind = BidualityKind::Reflexive;
    v.reason = "biduality map is an isomorphism and both Ext tables vanish on the window";
    return v;
}

struct ExtSup {
    std::optional<int> value;  // largest i in the window with Ext^i != 0
    bool reaches_window_top = false;

    std::string str(int window) const
    {
        if (!value) return "-inf";
        if (reaches_window_top) return ">= " + std::to_string(window) + " (nonzero throughout window)";
        return std::to_string(*value);
    }

    friend bool operator==(const ExtSup& a, const ExtSup& b)
    {
        return a.value == b.value && a.reaches_window_top == b.reaches_window_top;
    }
};

struct ExtSupComparison {
    int window = kDefaultWindow;
    ExtSup direct;
    ExtSup koszul;
    bool agree() const { return direct == koszul; }
};

/// sup{i : Ext^i(M, X) != 0} directly and as -inf Hom(F, K (x) X).
inline ExtSupComparison ext_sup_via_koszul(const ModulePresentation& m, const ModulePresentation& x, const KoszulAlgebra& k,
                                           int window = kDefaultWindow)
{
    require_same_ring(m.ring, x.ring, "duality");
    require_same_ring(m.ring, k.ring, "duality");
    ExtSupComparison out;
    out.window = window;
    ExtTable t = ext_table(m, x, window);
    for (int i = window; i >= 0; --i)
        if (!t.ext[static_cast<std::size_t>(i)].is_zero()) {
            out.direct.value = i;
            out.direct.reaches_window_top = i == window;
            break;
        }
    int e = k.e();
    Resolution f = free_resolution(m, window + e + 1);
    PresentedComplex h = hom_complex(f.complex, tensor(k.complex(), presented(x)));
    for (int n = -window; n <= e; ++n)
        if (!homology(h, n).is_zero()) {
            out.koszul.value = -n;
            out.koszul.reaches_window_top = -n == window;
            break;
        }
    if (out.koszul.value && *out.koszul.value < 0) out.koszul.value = 0;
    return out;
}

struct IsoSearch {
    bool found = false;
    bool definitive_negative = false;
    std::optional<Matrix> map;
    std::string reason;
};

/// Checks that phi : coker(qa) -> coker(qb) is well defined and bijective.
inline bool is_module_isomorphism(const Matrix& phi, const Matrix& qa, const Matrix& qb)
{
    const Ring& r = phi.ring;
    if (!in_column_span(qb, mat_mul(phi, qa))) return false;
    if (!in_column_span(hstack(phi, qb), mat_identity(r, qb.rows))) return false;
    Matrix k = kernel_basis(hstack(phi, qb));
    return in_column_span(qa, submatrix(k, 0, 0, phi.cols, k.cols));
}

namespace detail {

inline std::vector<std::size_t> complement_indices(const Matrix& basis, std::size_t rows)
{
    const Ring& r = basis.ring;
    Matrix span = basis;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rows; ++i) {
        Matrix ei(r, rows, 1);
        ei.at(i, 0) = r->one();
        if (!in_column_span(span, ei)) {
            out.push_back(i);
            span = hstack(span, ei);
        }
    }
    return out;
}

} // namespace detail

/// Searches for an explicit isomorphism coker(a) -> coker(b). Over fields the
/// answer is complete; elsewhere only identical minimal presentations are matched.
inline IsoSearch module_isomorphism(const ModulePresentation& a, const ModulePresentation& b)
{
    require_same_ring(a.ring, b.ring, "duality");
    const Ring& r = a.ring;
    IsoSearch out;
    if (ring_tier(r) == RingTier::Field) {
        linalg::Echelon ea = linalg::rref(a.relations, false), eb = linalg::rref(b.relations, false);
        Matrix wa(r, a.generators(), ea.pivots.size());
        for (std::size_t t = 0; t < ea.pivots.size(); ++t)
            for (std::size_t i = 0; i < a.generators(); ++i) wa.at(i, t) = a.relations.at(i, ea.pivots[t]);
        auto ia = detail::complement_indices(wa, a.generators());
        std::size_t db = b.generators() - eb.pivots.size();
        if (ia.size() != db) {
            out.definitive_negative = true;
            out.reason = "dimensions " + std::to_string(ia.size()) + " and " + std::to_string(db) + " differ";
            return out;
        }
        Matrix wb(r, b.generators(), eb.pivots.size());
        for (std::size_t t = 0; t < eb.pivots.size(); ++t)
            for (std::size_t i = 0; i < b.generators(); ++i) wb.at(i, t) = b.relations.at(i, eb.pivots[t]);
        auto ib = detail::complement_indices(wb, b.generators());
        Matrix pm = wa, tm(r, b.generators(), wa.cols + ia.size());
        for (std::size_t t = 0; t < ia.size(); ++t) {
            Matrix ei(r, a.generators(), 1);
            ei.at(ia[t], 0) = r->one();
            pm = hstack(pm, ei);
            tm.at(ib[t], wa.cols + t) = r->one();
        }
        auto pinv = solve(pm, mat_identity(r, a.generators()));
        Matrix phi = mat_mul(tm, *pinv);
        if (is_module_isomorphism(phi, a.relations, b.relations)) {
            out.found = true;
            out.map = phi;
            out.reason = "bases matched";
        }
        return out;
    }
    ModulePresentation ma = minimize_presentation(a), mb = minimize_presentation(b);
    if (ma.generators() == mb.generators() && in_column_span(ma.relations, mb.relations) &&
        in_column_span(mb.relations, ma.relations)) {
        Matrix phi = mat_identity(r, ma.generators());
        // express the minimized generators in terms of the originals
        if (ma.generators() == a.generators() && mb.generators() == b.generators() &&
            is_module_isomorphism(phi, a.relations, b.relations)) {
            out.found = true;
            out.map = phi;
            out.reason = "equal relation spans";
            return out;
        }
    }
    out.reason = "no isomorphism found by the search";
    return out;
}

struct LiftingReport {
    bool regular = false;
    std::vector<ModuleSummary> tor;  // Tor_i^R(S, M), i = 1..length
    ModulePresentation reduction;    // S (x) M over S
    IsoSearch iso;
    bool is_lifting = false;
    std::string reason;

    std::string str() const
    {
        std::string s = std::string("regular: ") + (regular ? "yes" : "no");
        for (std::size_t i = 0; i < tor.size(); ++i) s += "\nTor_" + std::to_string(i + 1) + ": " + tor[i].describe();
        s += std::string("\niso: ") + (iso.found ? "found" : (iso.definitive_negative ? "none" : "not found"));
        s += std::string("\nlifting: ") + (is_lifting ? "yes" : "no");
        if (!reason.empty()) s += " (" + reason + ")";
        return s;
    }
};

/// Is x regular on R: x_i a nonzerodivisor on R / (x_1, ..., x_{i-1}) and the quotient nonzero.
inline bool is_regular_sequence(const Ring& r, const std::vector<Elem>& x)
{
    Matrix prev(r, 1, 0);
    for (const auto& xi : x) {
        Matrix l(r, 1, 1);
        l.at(0, 0) = xi;
        if (!subquotient(l, prev, Matrix(r, 1, 0), prev).is_zero()) return false;
        prev = hstack(prev, l);
    }
    return !in_column_span(prev, mat_identity(r, 1));
}

/// Decides whether M over R lifts N over S = R/(x): Tor_{>=1}(S, M) = 0 and S (x) M = N.
inline LiftingReport lifting_verify(const RingHom& to_s, const std::vector<Elem>& x, const ModulePresentation& m,
                                    const ModulePresentation& n)
{
    const Ring& r = to_s.source();
    require_same_ring(r, m.ring, "duality");
    require_same_ring(to_s.target(), n.ring, "duality");
    for (const auto& xi : x)
        if (!to_s.target()->is_zero(to_s(xi)))
            fail(ErrorCode::InvalidArgument, "duality", "the sequence does not map to zero in the quotient ring");
    if (!is_regular_sequence(r, x)) fail(ErrorCode::NotRegular, "duality", "the sequence is not regular");
    LiftingReport rep;
    rep.regular = true;
    KoszulAlgebra k = koszul(r, x);
    PresentedComplex km = tensor(k.complex(), presented(m));
    bool tor_clean = true;
    for (int i = 1; i <= k.e(); ++i) {
        rep.tor.push_back(homology(km, i));
        if (!rep.tor.back().is_zero()) tor_clean = false;
    }
    rep.reduction = ModulePresentation{to_s.target(), to_s(m.relations)};
    rep.iso = module_isomorphism(rep.reduction, n);
    rep.is_lifting = tor_clean && rep.iso.found;
    if (!tor_clean) rep.reason = "Tor_{>=1}(S,M) != 0";
    else if (!rep.iso.found) rep.reason = rep.iso.definitive_negative ? "S (x) M is not isomorphic to N" : rep.iso.reason;
    return rep;
}

} // namespace kext
