#pragma once

#include "kext/koszul.hpp"

#include <map>
#include <string>
#include <vector>

namespace kext {

/// DG module over a Koszul algebra; action[h] maps degree n to the matrix of
/// multiplication by basis element h from degree n to degree n + |h|.
struct DGModule {
    KoszulAlgebra algebra;
    ChainComplex underlying;
    std::vector<std::map<int, Matrix>> action;

    Matrix act(std::size_t h, int n) const
    {
        auto it = action[h].find(n);
        if (it != action[h].end()) return it->second;
        return Matrix(underlying.ring, underlying.rank(n + algebra.deg(h)), underlying.rank(n));
    }
};

inline int dg_lo(const DGModule& d) { return d.underlying.is_zero() ? 0 : d.underlying.lo; }
inline int dg_hi(const DGModule& d) { return d.underlying.is_zero() ? -1 : d.underlying.hi(); }

/// Multiplication by h on K (x) M in degree n: blockwise t^h_{n-p} (x) 1 on the summands K_{n-p} (x) M_p.
inline Matrix extension_action(const KoszulAlgebra& k, const ChainComplex& kc, const ChainComplex& m, std::size_t h, int n)
{
    const Ring& r = k.ring;
    int dh = k.deg(h);
    auto src = tensor_offsets(kc, m, n);
    auto dst = tensor_offsets(kc, m, n + dh);
    Matrix a(r, dst.back(), src.back());
    for (int p = m.lo; p <= m.hi(); ++p) {
        std::size_t idx = static_cast<std::size_t>(p - m.lo);
        if (!m.rank(p) || !k.rank(n - p) || !k.rank(n - p + dh)) continue;
        place(a, kron(k.t(h, n - p), mat_identity(r, m.rank(p))), dst[idx], src[idx]);
    }
    return a;
}

/// K (x) M with the action u (v (x) x) = (u v) (x) x.
inline DGModule extend(const KoszulAlgebra& k, const ChainComplex& m)
{
    require_same_ring(k.ring, m.ring, "dg");
    DGModule d;
    d.algebra = k;
    ChainComplex kc = k.complex();
    d.underlying = tensor(kc, m);
    d.action.resize(k.size());
    if (m.is_zero()) return d;
    for (std::size_t h = 0; h < k.size(); ++h)
        for (int n = d.underlying.lo; n <= d.underlying.hi(); ++n) {
            if (!d.underlying.rank(n + k.deg(h))) continue;
            d.action[h][n] = extension_action(k, kc, m, h, n);
        }
    return d;
}

/// Unitality, associativity and Leibniz for the stored action matrices.
inline AxiomReport verify_dg_module(const DGModule& d)
{
    const KoszulAlgebra& k = d.algebra;
    const ChainComplex& c = d.underlying;
    const Ring& r = c.ring;
    AxiomReport rep;
    auto record = [&](const std::string& name, std::optional<std::string> bad) {
        rep.results.push_back(AxiomResult{name, !bad.has_value(), bad.value_or("")});
    };
    int lo = dg_lo(d), hi = dg_hi(d);
    std::optional<std::string> bad;

    if (d.action.size() != k.size()) {
        record("shape", "expected " + std::to_string(k.size()) + " action families");
        return rep;
    }
    for (std::size_t h = 0; h < k.size() && !bad; ++h)
        for (const auto& [n, m] : d.action[h])
            if (m.rows != c.rank(n + k.deg(h)) || m.cols != c.rank(n)) {
                bad = "A^" + subset_label(k.basis[h]) + " in degree " + std::to_string(n);
                break;
            }
    record("shape", bad);
    if (bad) return rep;

    bad.reset();
    if (auto n = first_d2_violation(c)) bad = "d" + std::to_string(*n) + " * d" + std::to_string(*n + 1);
    record("d_squared", bad);

    bad.reset();
    for (int n = lo; n <= hi && !bad; ++n)
        if (!(d.act(0, n) == mat_identity(r, c.rank(n)))) bad = "degree " + std::to_string(n);
    record("unitality", bad);

    bad.reset();
    for (std::size_t g = 0; g < k.size() && !bad; ++g)
        for (std::size_t h = 0; h < k.size() && !bad; ++h) {
            int dg = k.deg(g), dh = k.deg(h);
            Matrix gh = detail::basis_product(k, g, h);
            for (int n = lo; n <= hi && !bad; ++n) {
                Matrix lhs = mat_mul(d.act(g, n + dh), d.act(h, n));
                Matrix rhs(r, c.rank(n + dg + dh), c.rank(n));
                for (std::size_t i = 0; i < gh.rows; ++i)
                    if (!r->is_zero(gh.at(i, 0)))
                        rhs = mat_add(rhs, mat_scale(gh.at(i, 0), d.act(k.degree[static_cast<std::size_t>(dg + dh)][i], n)));
                if (!(lhs == rhs)) bad = detail::pair_label(k, g, h) + " in degree " + std::to_string(n);
            }
        }
    record("associativity", bad);

    bad.reset();
    for (std::size_t h = 0; h < k.size() && !bad; ++h) {
        int dh = k.deg(h);
        Matrix dcol = mat_mul(k.diff(dh), detail::basis_column(k, h));
        for (int n = lo; n <= hi + 1 && !bad; ++n) {
            Matrix lhs = mat_mul(c.diff(n + dh), d.act(h, n));
            Matrix second = mat_mul(d.act(h, n - 1), c.diff(n));
            lhs = dh % 2 ? mat_add(lhs, second) : mat_sub(lhs, second);
            Matrix rhs(r, c.rank(n + dh - 1), c.rank(n));
            for (std::size_t i = 0; i < dcol.rows; ++i)
                if (!r->is_zero(dcol.at(i, 0)))
                    rhs = mat_add(rhs, mat_scale(dcol.at(i, 0), d.act(k.degree[static_cast<std::size_t>(dh - 1)][i], n)));
            if (!(lhs == rhs)) bad = "A^" + subset_label(k.basis[h]) + " in degree " + std::to_string(n);
        }
    }
    record("leibniz", bad);
    return rep;
}

/// phi_{n+|h|} A^h_n(source) = A^h_n(target) phi_n for every basis element and degree.
inline bool is_k_linear(const ChainMap& phi, const DGModule& source, const DGModule& target)
{
    if (!(phi.source == source.underlying) || !(phi.target == target.underlying))
        fail(ErrorCode::DimensionMismatch, "dg", "chain map does not connect the given DG modules");
    if (source.algebra.size() != target.algebra.size())
        fail(ErrorCode::DimensionMismatch, "dg", "DG modules over different algebras");
    check_map_shapes(phi);
    const KoszulAlgebra& k = source.algebra;
    int lo = map_lo(phi), hi = map_hi(phi);
    for (std::size_t h = 0; h < k.size(); ++h)
        for (int n = lo; n <= hi; ++n) {
            int up = n + k.deg(h);
            if (!(mat_mul(phi.component(up), source.act(h, n)) == mat_mul(target.act(h, n), phi.component(n)))) return false;
        }
    return true;
}

/// From psi : M -> N (underlying) the K-linear map K (x) M -> N, e_h (x) x |-> e_h psi(x).
inline ChainMap adjunction_forward(const KoszulAlgebra& k, const ChainComplex& m, const DGModule& nn, const ChainMap& psi)
{
    if (!(psi.source == m) || !(psi.target == nn.underlying))
        fail(ErrorCode::DimensionMismatch, "dg", "map does not go from M to the DG module");
    check_map_shapes(psi);
    ChainComplex kc = k.complex();
    ChainComplex ext = tensor(kc, m);
    ChainMap out{ext, nn.underlying, {}};
    const Ring& r = m.ring;
    if (ext.is_zero()) return out;
    for (int n = ext.lo; n <= ext.hi(); ++n) {
        auto off = tensor_offsets(kc, m, n);
        Matrix phi(r, nn.underlying.rank(n), ext.rank(n));
        for (int p = m.lo; p <= m.hi(); ++p) {
            std::size_t idx = static_cast<std::size_t>(p - m.lo);
            std::size_t mp = m.rank(p);
            if (!mp || !k.rank(n - p)) continue;
            Matrix psi_p = psi.component(p);
            for (std::size_t s = 0; s < k.rank(n - p); ++s) {
                std::size_t h = k.degree[static_cast<std::size_t>(n - p)][s];
                place(phi, mat_mul(nn.act(h, p), psi_p), 0, off[idx] + s * mp);
            }
        }
        out.comps[n] = phi;
    }
    return out;
}

/// Restriction of a map K (x) M -> N to the summand 1 (x) M.
inline ChainMap adjunction_backward(const KoszulAlgebra& k, const ChainComplex& m, const DGModule& nn, const ChainMap& phi)
{
    ChainComplex kc = k.complex();
    if (!(phi.target == nn.underlying) || !(phi.source == tensor(kc, m)))
        fail(ErrorCode::DimensionMismatch, "dg", "map does not go from K (x) M to the DG module");
    ChainMap out{m, nn.underlying, {}};
    if (m.is_zero()) return out;
    for (int n = m.lo; n <= m.hi(); ++n) {
        auto off = tensor_offsets(kc, m, n);
        std::size_t idx = static_cast<std::size_t>(n - m.lo);
        out.comps[n] = submatrix(phi.component(n), 0, off[idx], nn.underlying.rank(n), m.rank(n));
    }
    return out;
}

/// Multiplication K (x) K -> K, as a map of DG modules extend(K, K) -> extend(K, R).
inline ChainMap multiplication_map(const KoszulAlgebra& k)
{
    ChainComplex kc = k.complex();
    DGModule self = extend(k, module_complex(k.ring, 1));
    ChainMap id{kc, self.underlying, {}};
    for (int n = 0; n <= k.e(); ++n) id.comps[n] = mat_identity(k.ring, k.rank(n));
    return adjunction_forward(k, kc, self, id);
}

/// Offset of the summand K_{n-p} (x) M_p inside (K (x) M)_n.
inline std::size_t summand_offset(const ChainComplex& kc, const ChainComplex& m, int n, int p)
{
    std::size_t off = 0;
    for (int q = m.lo; q < p && !m.is_zero(); ++q) off += kc.rank(n - q) * m.rank(q);
    return off;
}

/// Componentwise extension of a chain map f : M -> M' to K (x) M -> K (x) M'.
inline ChainMap extend_map(const KoszulAlgebra& k, const ChainMap& f)
{
    ChainComplex kc = k.complex();
    ChainMap out{tensor(kc, f.source), tensor(kc, f.target), {}};
    const Ring& r = k.ring;
    for (int n = map_lo(out); n <= map_hi(out); ++n) {
        Matrix c(r, out.target.rank(n), out.source.rank(n));
        for (int p = map_lo(f); p <= map_hi(f); ++p) {
            std::size_t a = k.rank(n - p);
            if (!a || !f.source.rank(p) || !f.target.rank(p)) continue;
            place(c, kron(mat_identity(r, a), f.component(p)), summand_offset(kc, f.target, n, p),
                  summand_offset(kc, f.source, n, p));
        }
        out.comps[n] = c;
    }
    return out;
}

} // namespace kext
