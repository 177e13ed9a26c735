#pragma once

#include "kext/complexes.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kext {

/// Exterior basis element of K(a): a subset of {1..e} stored as a bitmask.
using Subset = std::uint32_t;

inline int subset_size(Subset s) { return std::popcount(s); }

inline std::string subset_label(Subset s)
{
    if (!s) return "1";
    std::string out;
    for (int i = 0; s >> i; ++i)
        if (s >> i & 1u) out += (out.empty() ? "e" : "^e") + std::to_string(i + 1);
    return out;
}

/// Sign of e_S * e_T for disjoint S, T: (-1)^{#{(s, t) : s > t}}.
inline int shuffle_sign(Subset s, Subset t)
{
    int inv = 0;
    for (int i = 0; t >> i; ++i)
        if (t >> i & 1u) inv += std::popcount(s >> (i + 1));
    return inv % 2 ? -1 : 1;
}

/// Koszul complex on a sequence as an explicit DG algebra. Basis elements are
/// indexed h = 0 .. 2^e - 1 in (size, lexicographic) order; h = 0 is the unit.
struct KoszulAlgebra {
    Ring ring;
    std::vector<Elem> seq;
    std::vector<Subset> basis;                     // global order
    std::vector<std::vector<std::size_t>> degree;  // degree n -> global indices
    std::vector<std::size_t> position;             // global index -> index within its degree
    std::vector<Matrix> diffs;                     // diffs[n] = d_n, n = 0 .. e
    std::vector<std::vector<Matrix>> mult;         // mult[h][n] = t^h_n : K_n -> K_{n+|h|}

    int e() const { return static_cast<int>(seq.size()); }
    std::size_t size() const { return basis.size(); }
    int deg(std::size_t h) const { return subset_size(basis[h]); }
    std::size_t rank(int n) const { return n < 0 || n > e() ? 0 : degree[static_cast<std::size_t>(n)].size(); }

    Matrix diff(int n) const
    {
        if (n >= 1 && n <= e()) return diffs[static_cast<std::size_t>(n)];
        return Matrix(ring, rank(n - 1), rank(n));
    }

    Matrix t(std::size_t h, int n) const
    {
        if (n >= 0 && n <= e()) return mult[h][static_cast<std::size_t>(n)];
        return Matrix(ring, rank(n + deg(h)), rank(n));
    }

    std::size_t index_of(Subset s) const
    {
        for (std::size_t h = 0; h < basis.size(); ++h)
            if (basis[h] == s) return h;
        fail(ErrorCode::InvalidArgument, "koszul", "subset is not a basis label");
    }

    ChainComplex complex() const
    {
        std::vector<std::size_t> ranks;
        for (int n = 0; n <= e(); ++n) ranks.push_back(rank(n));
        std::vector<Matrix> d;
        for (int n = 1; n <= e(); ++n) d.push_back(diff(n));
        return make_complex(ring, 0, ranks, d);
    }
};

inline std::vector<Subset> koszul_basis(int e)
{
    std::vector<Subset> out;
    for (int n = 0; n <= e; ++n) {
        std::vector<Subset> level;
        for (Subset s = 0; s < (Subset{1} << e); ++s)
            if (subset_size(s) == n) level.push_back(s);
        // lexicographic order of the sorted element lists
        std::sort(level.begin(), level.end(), [](Subset a, Subset b) {
            while (a && b) {
                int x = std::countr_zero(a), y = std::countr_zero(b);
                if (x != y) return x < y;
                a &= a - 1;
                b &= b - 1;
            }
            return false;
        });
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

struct AxiomResult {
    std::string axiom;
    bool pass = true;
    std::string counterexample;
};

struct AxiomReport {
    std::vector<AxiomResult> results;

    bool all_pass() const
    {
        for (const auto& r : results)
            if (!r.pass) return false;
        return true;
    }

    std::string str() const
    {
        std::string out;
        for (const auto& r : results) {
            out += r.axiom + ": " + (r.pass ? "pass" : "FAIL " + r.counterexample) + "\n";
        }
        return out;
    }
};

namespace detail {

/// Coordinates of a basis element as a column over K_{|h|}.
inline Matrix basis_column(const KoszulAlgebra& k, std::size_t h)
{
    Matrix v(k.ring, k.rank(k.deg(h)), 1);
    v.at(k.position[h], 0) = k.ring->one();
    return v;
}

/// Product of basis elements g * h read from the stored t matrices.
inline Matrix basis_product(const KoszulAlgebra& k, std::size_t g, std::size_t h)
{
    return mat_mul(k.t(g, k.deg(h)), basis_column(k, h));
}

/// Product u * v of homogeneous vectors of degrees du, dv.
inline Matrix product(const KoszulAlgebra& k, const Matrix& u, int du, const Matrix& v, int dv)
{
    Matrix out(k.ring, k.rank(du + dv), 1);
    if (du < 0 || du > k.e()) return out;
    for (std::size_t i = 0; i < u.rows; ++i) {
        if (k.ring->is_zero(u.at(i, 0))) continue;
        std::size_t g = k.degree[static_cast<std::size_t>(du)][i];
        out = mat_add(out, mat_scale(u.at(i, 0), mat_mul(k.t(g, dv), v)));
    }
    return out;
}

inline std::string pair_label(const KoszulAlgebra& k, std::size_t g, std::size_t h)
{
    return "(" + subset_label(k.basis[g]) + ", " + subset_label(k.basis[h]) + ")";
}

} // namespace detail

/// Checks every DG algebra axiom on the finite basis using the stored matrices.
inline AxiomReport verify_dga(const KoszulAlgebra& k)
{
    using detail::basis_column;
    using detail::basis_product;
    const Ring& r = k.ring;
    AxiomReport rep;
    auto record = [&](const std::string& name, std::optional<std::string> bad) {
        rep.results.push_back(AxiomResult{name, !bad.has_value(), bad.value_or("")});
    };
    std::size_t n_basis = k.size();

    std::optional<std::string> bad;
    for (int n = 1; n < k.e() && !bad; ++n)
        if (!mat_is_zero(mat_mul(k.diff(n), k.diff(n + 1)))) bad = "d" + std::to_string(n) + " * d" + std::to_string(n + 1);
    record("d_squared", bad);

    bad.reset();
    for (int n = 0; n <= k.e() && !bad; ++n)
        if (!(k.t(0, n) == mat_identity(r, k.rank(n)))) bad = "t^1 in degree " + std::to_string(n);
    for (std::size_t h = 0; h < n_basis && !bad; ++h)
        if (!(basis_product(k, h, 0) == basis_column(k, h))) bad = detail::pair_label(k, h, 0);
    record("unitality", bad);

    bad.reset();
    for (std::size_t f = 0; f < n_basis && !bad; ++f)
        for (std::size_t g = 0; g < n_basis && !bad; ++g) {
            Matrix fg = basis_product(k, f, g);
            int dfg = k.deg(f) + k.deg(g);
            for (std::size_t h = 0; h < n_basis && !bad; ++h) {
                Matrix lhs = detail::product(k, fg, dfg, basis_column(k, h), k.deg(h));
                Matrix rhs = mat_mul(k.t(f, k.deg(g) + k.deg(h)), basis_product(k, g, h));
                if (!(lhs == rhs))
                    bad = "(" + subset_label(k.basis[f]) + ", " + subset_label(k.basis[g]) + ", " +
                          subset_label(k.basis[h]) + ")";
            }
        }
    record("associativity", bad);

    bad.reset();
    for (std::size_t g = 0; g < n_basis && !bad; ++g)
        for (std::size_t h = 0; h < n_basis && !bad; ++h) {
            Matrix gh = basis_product(k, g, h);
            Matrix hg = basis_product(k, h, g);
            if ((k.deg(g) * k.deg(h)) % 2) hg = mat_neg(hg);
            if (!(gh == hg)) bad = detail::pair_label(k, g, h);
        }
    record("graded_commutativity", bad);

    bad.reset();
    for (std::size_t g = 0; g < n_basis && !bad; ++g)
        if (k.deg(g) % 2 && !mat_is_zero(basis_product(k, g, g))) bad = subset_label(k.basis[g]);
    record("odd_squares", bad);

    bad.reset();
    for (std::size_t g = 0; g < n_basis && !bad; ++g)
        for (std::size_t h = 0; h < n_basis && !bad; ++h) {
            int dg = k.deg(g), dh = k.deg(h);
            Matrix lhs = mat_mul(k.diff(dg + dh), basis_product(k, g, h));
            Matrix dgv = mat_mul(k.diff(dg), basis_column(k, g));
            Matrix dhv = mat_mul(k.diff(dh), basis_column(k, h));
            Matrix rhs = detail::product(k, dgv, dg - 1, basis_column(k, h), dh);
            Matrix second = mat_mul(k.t(g, dh - 1), dhv);
            rhs = dg % 2 ? mat_sub(rhs, second) : mat_add(rhs, second);
            if (!(lhs == rhs)) bad = detail::pair_label(k, g, h);
        }
    record("leibniz", bad);
    return rep;
}

/// Full axiom verification at construction is run up to this length.
inline constexpr int kFullVerifyLength = 5;

inline KoszulAlgebra koszul(const Ring& ring, const std::vector<Elem>& a)
{
    int e = static_cast<int>(a.size());
    if (e > 16) fail(ErrorCode::InvalidArgument, "koszul", "sequence too long");
    for (const auto& x : a)
        if (x.index() != ring->zero().index())
            fail(ErrorCode::MixedRings, "koszul", "sequence element does not belong to " + ring->descriptor());
    KoszulAlgebra k;
    k.ring = ring;
    k.seq = a;
    k.basis = koszul_basis(e);
    k.degree.assign(static_cast<std::size_t>(e) + 1, {});
    k.position.resize(k.basis.size());
    std::vector<std::size_t> global_of(std::size_t{1} << e);
    for (std::size_t h = 0; h < k.basis.size(); ++h) {
        auto n = static_cast<std::size_t>(subset_size(k.basis[h]));
        k.position[h] = k.degree[n].size();
        k.degree[n].push_back(h);
        global_of[k.basis[h]] = h;
    }
    k.diffs.push_back(Matrix(ring, 0, 1));
    for (int n = 1; n <= e; ++n) {
        Matrix d(ring, k.rank(n - 1), k.rank(n));
        for (std::size_t j = 0; j < k.rank(n); ++j) {
            Subset s = k.basis[k.degree[static_cast<std::size_t>(n)][j]];
            int pos = 0;
            for (int i = 0; i < e; ++i) {
                if (!(s >> i & 1u)) continue;
                Elem c = a[static_cast<std::size_t>(i)];
                if (pos % 2) c = ring->neg(c);
                d.at(k.position[global_of[s & ~(Subset{1} << i)]], j) = c;
                ++pos;
            }
        }
        k.diffs.push_back(d);
    }
    k.mult.resize(k.basis.size());
    for (std::size_t h = 0; h < k.basis.size(); ++h) {
        Subset sh = k.basis[h];
        for (int n = 0; n <= e; ++n) {
            Matrix t(ring, k.rank(n + k.deg(h)), k.rank(n));
            for (std::size_t j = 0; j < k.rank(n); ++j) {
                Subset s = k.basis[k.degree[static_cast<std::size_t>(n)][j]];
                if (s & sh) continue;
                Elem one = ring->one();
                t.at(k.position[global_of[s | sh]], j) = shuffle_sign(sh, s) < 0 ? ring->neg(one) : one;
            }
            k.mult[h].push_back(t);
        }
    }
    if (e <= kFullVerifyLength) {
        AxiomReport rep = verify_dga(k);
        if (!rep.all_pass()) fail(ErrorCode::VerificationFailed, "koszul", "constructed algebra fails:\n" + rep.str());
    }
    else if (auto n = first_d2_violation(k.complex())) {
        throw NotAComplexError(*n, "Koszul differential");
    }
    return k;
}

inline KoszulAlgebra koszul(const Ring& ring, const std::vector<std::string>& a)
{
    std::vector<Elem> seq;
    for (const auto& s : a) seq.push_back(ring->parse(s));
    return koszul(ring, seq);
}

inline KoszulAlgebra koszul_base_change(const RingHom& f, const KoszulAlgebra& k)
{
    require_same_ring(f.source(), k.ring, "koszul");
    KoszulAlgebra out = k;
    out.ring = f.target();
    for (auto& x : out.seq) x = f(x);
    for (auto& d : out.diffs) d = f(d);
    for (auto& row : out.mult)
        for (auto& t : row) t = f(t);
    return out;
}

enum class CoCompleteness { Yes, Unknown };

/// Finite quotients R/(a) are complete; anything else is reported as unknown.
inline CoCompleteness co_complete(const KoszulAlgebra& k)
{
    const Ring& r = k.ring;
    if (is_finite_ring(r)) return CoCompleteness::Yes;
    bool any_nonzero = false;
    for (const auto& x : k.seq)
        if (!r->is_zero(x)) any_nonzero = true;
    switch (r->kind()) {
    case RingKind::Integers:
    case RingKind::Rationals: return any_nonzero ? CoCompleteness::Yes : CoCompleteness::Unknown;
    case RingKind::PolyQuotient:
        // F_p[x] modulo a nonzero element is finite
        if (any_nonzero && r->is_euclidean()) return CoCompleteness::Yes;
        return CoCompleteness::Unknown;
    default: return CoCompleteness::Unknown;
    }
}

/// sup of H(K (x) M), the depth-sensitivity probe.
inline HomologyBounds depth_sensitivity_probe(const KoszulAlgebra& k, const ChainComplex& m)
{
    return sup_inf(tensor(k.complex(), m));
}

} // namespace kext
