#include "support.hpp"

#include "kext/dg_module.hpp"

#include <gtest/gtest.h>

using namespace kext;
using namespace kext::testing;

namespace {

bool same_algebra(const KoszulAlgebra& a, const KoszulAlgebra& b)
{
    if (!same_ring(a.ring, b.ring) || a.seq != b.seq || a.basis != b.basis) return false;
    for (int n = 0; n <= a.e() + 1; ++n)
        if (!(a.diff(n) == b.diff(n))) return false;
    for (std::size_t h = 0; h < a.size(); ++h)
        for (int n = 0; n <= a.e(); ++n)
            if (!(a.t(h, n) == b.t(h, n))) return false;
    return true;
}

const AxiomResult& axiom(const AxiomReport& rep, const std::string& name)
{
    for (const auto& r : rep.results)
        if (r.axiom == name) return r;
    throw std::runtime_error("missing axiom " + name);
}

/// Random endomorphism c * id + d h + h d of a complex.
ChainMap random_endomorphism(const ChainComplex& m, Rng& g)
{
    const Ring& r = m.ring;
    ChainMap f{m, m, {}};
    if (m.is_zero()) return f;
    Elem c = random_elem(r, g);
    std::map<int, Matrix> h;
    for (int n = m.lo - 1; n <= m.hi(); ++n) h[n] = random_matrix(r, m.rank(n + 1), m.rank(n), g);
    for (int n = m.lo; n <= m.hi(); ++n) {
        Matrix fn = mat_scale(c, mat_identity(r, m.rank(n)));
        fn = mat_add(fn, mat_mul(m.diff(n + 1), h[n]));
        fn = mat_add(fn, mat_mul(h[n - 1], m.diff(n)));
        f.comps[n] = fn;
    }
    return f;
}

/// Random chain map M -> K (x) M: inclusion of 1 (x) M times a scalar plus a null-homotopic part.
ChainMap random_map_into_extension(const KoszulAlgebra& k, const ChainComplex& m, Rng& g)
{
    const Ring& r = m.ring;
    ChainComplex kc = k.complex();
    ChainComplex t = tensor(kc, m);
    ChainMap f{m, t, {}};
    Elem c = random_elem(r, g);
    std::map<int, Matrix> h;
    for (int n = m.lo - 1; n <= m.hi(); ++n) h[n] = random_matrix(r, t.rank(n + 1), m.rank(n), g);
    for (int n = m.lo; n <= m.hi(); ++n) {
        Matrix fn(r, t.rank(n), m.rank(n));
        place(fn, mat_scale(c, mat_identity(r, m.rank(n))), summand_offset(kc, m, n, n), 0);
        fn = mat_add(fn, mat_mul(t.diff(n + 1), h[n]));
        fn = mat_add(fn, mat_mul(h[n - 1], m.diff(n)));
        f.comps[n] = fn;
    }
    return f;
}

TEST(Koszul, LengthTwoDifferentials)
{
    Ring z = integers();
    KoszulAlgebra k = koszul(z, {z->from_int(5), z->from_int(7)});
    EXPECT_EQ(k.diff(1), from_ints(z, {{5, 7}}));
    EXPECT_EQ(k.diff(2), from_ints(z, {{-7}, {5}}));
    EXPECT_TRUE(mat_is_zero(mat_mul(k.diff(1), k.diff(2))));
    EXPECT_EQ(k.diff(2).rows, 2u);
    EXPECT_EQ(k.diff(2).cols, 1u);
    EXPECT_EQ(k.size(), 4u);
}

TEST(Koszul, EmptySequenceIsTheRing)
{
    Ring z4 = make_ring("Z/4");
    KoszulAlgebra k = koszul(z4, std::vector<Elem>{});
    EXPECT_EQ(k.complex(), module_complex(z4, 1));
    EXPECT_EQ(k.size(), 1u);
    EXPECT_EQ(k.t(0, 0), mat_identity(z4, 1));
    EXPECT_TRUE(verify_dga(k).all_pass());
}

TEST(Koszul, MixedRings)
{
    Ring z = integers(), z4 = make_ring("Z/4");
    EXPECT_EQ(error_code_of([&] { koszul(z, {z->from_int(2), z4->from_int(1)}); }), ErrorCode::MixedRings);
}

TEST(VerifyDga, RandomSequencesPass)
{
    Rng g(41);
    for (const char* desc : {"Z/8", "F7", "F2[x,y]/(x^2,x*y,y^2)", "Z"}) {
        Ring r = make_ring(desc);
        for (int t = 0; t < 8; ++t) {
            KoszulAlgebra k = koszul(r, random_sequence(r, static_cast<int>(uniform(g, 0, 4)), g));
            AxiomReport rep = verify_dga(k);
            ASSERT_TRUE(rep.all_pass()) << desc << "\n" << rep.str();
        }
    }
}

TEST(VerifyDga, SignFlipLocatesGradedCommutativity)
{
    Ring z = integers();
    KoszulAlgebra k = koszul(z, {z->from_int(2), z->from_int(3)});
    std::size_t e1 = k.index_of(0b01);
    k.mult[e1][1] = mat_neg(k.mult[e1][1]);
    AxiomReport rep = verify_dga(k);
    EXPECT_FALSE(rep.all_pass());
    const AxiomResult& gc = axiom(rep, "graded_commutativity");
    EXPECT_FALSE(gc.pass);
    EXPECT_NE(gc.counterexample.find("e1"), std::string::npos) << gc.counterexample;
}

TEST(VerifyDga, OddSquareOnLengthOne)
{
    Ring f5 = make_ring("F5");
    KoszulAlgebra k = koszul(f5, {f5->from_int(3)});
    EXPECT_TRUE(axiom(verify_dga(k), "odd_squares").pass);
    EXPECT_EQ(k.t(1, 1).rows, 0u);
    EXPECT_TRUE(mat_is_zero(detail::basis_product(k, 1, 1)));
}

TEST(VerifyDga, MultiplicationConsistentWithDifferential)
{
    Rng g(43);
    Ring r = make_ring("Z/8");
    for (int t = 0; t < 10; ++t) {
        KoszulAlgebra k = koszul(r, random_sequence(r, static_cast<int>(uniform(g, 1, 3)), g));
        for (std::size_t h = 0; h < k.size(); ++h) {
            int dh = k.deg(h);
            // d(e_h) as a combination of basis elements of degree dh - 1
            Matrix col(r, k.rank(dh), 1);
            col.at(k.position[h], 0) = r->one();
            Matrix dcol = mat_mul(k.diff(dh), col);
            for (int n = 0; n <= k.e(); ++n) {
                Matrix lhs = mat_mul(k.diff(n + dh), k.t(h, n));
                Matrix second = mat_mul(k.t(h, n - 1), k.diff(n));
                lhs = dh % 2 ? mat_add(lhs, second) : mat_sub(lhs, second);
                Matrix rhs(r, k.rank(n + dh - 1), k.rank(n));
                for (std::size_t s = 0; s < dcol.rows; ++s) {
                    std::size_t g2 = k.degree[static_cast<std::size_t>(dh - 1)][s];
                    rhs = mat_add(rhs, mat_scale(dcol.at(s, 0), k.t(g2, n)));
                }
                ASSERT_EQ(lhs, rhs) << "h=" << h << " n=" << n;
            }
        }
    }
}

TEST(BaseChange, Examples)
{
    Ring z = integers(), z4 = make_ring("Z/4"), f3 = make_ring("F3");
    KoszulAlgebra k = koszul(z, {z->from_int(2)});
    EXPECT_TRUE(same_algebra(koszul_base_change(canonical_hom(z, z4), k), koszul(z4, {z4->from_int(2)})));
    EXPECT_TRUE(same_algebra(koszul_base_change(identity_hom(z), k), k));
    KoszulAlgebra k3 = koszul_base_change(canonical_hom(z, f3), koszul(z, {z->from_int(3), z->one()}));
    EXPECT_EQ(k3.diff(1), from_ints(f3, {{0, 1}}));
}

TEST(BaseChange, CommutesWithConstruction)
{
    Rng g(47);
    Ring z = integers(), z8 = make_ring("Z/8");
    RingHom f = canonical_hom(z, z8);
    for (int t = 0; t < 20; ++t) {
        std::vector<Elem> a = random_sequence(z, static_cast<int>(uniform(g, 0, 3)), g);
        std::vector<Elem> fa;
        for (const auto& x : a) fa.push_back(f(x));
        ASSERT_TRUE(same_algebra(koszul(z8, fa), koszul_base_change(f, koszul(z, a))));
    }
}

TEST(DepthProbe, Examples)
{
    Ring z = integers();
    HomologyBounds b = depth_sensitivity_probe(koszul(z, {z->from_int(2)}), module_complex(z, 1));
    EXPECT_EQ(b.sup, 0);
    Ring z4 = make_ring("Z/4");
    EXPECT_EQ(depth_sensitivity_probe(koszul(z4, {z4->from_int(2)}), module_complex(z4, 1)).sup, 1);
    EXPECT_TRUE(depth_sensitivity_probe(koszul(z4, {z4->from_int(2)}), zero_complex(z4)).acyclic);
}

TEST(DepthProbe, TopHomologyShiftsByLengthOnFiniteLengthComplexes)
{
    Rng g(53);
    for (const char* desc : {"Z/8", "Z/9"}) {
        Ring r = make_ring(desc);
        for (int t = 0; t < 15; ++t) {
            ChainComplex m = random_complex(r, g, 0, 2, 2, true);
            ChainComplex ka = tensor(koszul(r, random_sequence(r, static_cast<int>(uniform(g, 0, 2)), g)).complex(), m);
            HomologyBounds inner = sup_inf(ka);
            if (inner.acyclic) continue;
            int e = static_cast<int>(uniform(g, 1, 2));
            KoszulAlgebra kx = koszul(r, random_sequence(r, e, g, true));
            HomologyBounds outer = sup_inf(tensor(kx.complex(), ka));
            ASSERT_FALSE(outer.acyclic);
            ASSERT_EQ(outer.sup, inner.sup + e);
        }
    }
}

TEST(CoComplete, FiniteRingsOnly)
{
    Ring z = integers(), z4 = make_ring("Z/4");
    EXPECT_EQ(co_complete(koszul(z4, {z4->from_int(2)})), CoCompleteness::Yes);
    EXPECT_EQ(co_complete(koszul(z, {z->from_int(2)})), CoCompleteness::Yes);
    EXPECT_EQ(co_complete(koszul(z, {z->zero()})), CoCompleteness::Unknown);
}

TEST(Extend, UnitModuleIsTheAlgebra)
{
    Ring z4 = make_ring("Z/4");
    KoszulAlgebra k = koszul(z4, {z4->from_int(2), z4->zero()});
    DGModule d = extend(k, module_complex(z4, 1));
    EXPECT_EQ(d.underlying, k.complex());
    for (std::size_t h = 0; h < k.size(); ++h)
        for (int n = 0; n <= k.e(); ++n) EXPECT_EQ(d.act(h, n), k.t(h, n));
}

TEST(Extend, AxiomsHoldAndSignFlipIsLocated)
{
    Ring z4 = make_ring("Z/4");
    KoszulAlgebra k = koszul(z4, {z4->from_int(2), z4->from_int(2)});
    ChainComplex p = make_complex(z4, 0, {1, 1}, {from_ints(z4, {{2}})});
    DGModule d = extend(k, p);
    EXPECT_TRUE(verify_dg_module(d).all_pass()) << verify_dg_module(d).str();
    DGModule bad = d;
    std::size_t e1 = k.index_of(0b01);
    Elem& entry = bad.action[e1][0].at(0, 0);
    entry = z4->add(entry, z4->one());
    AxiomReport rep = verify_dg_module(bad);
    EXPECT_FALSE(axiom(rep, "leibniz").pass);
    EXPECT_TRUE(verify_dg_module(extend(k, zero_complex(z4))).all_pass());
}

TEST(Extend, ResidueReductionDetectsMinimality)
{
    Rng g(59);
    Ring z4 = make_ring("Z/4");
    RingHom to_k(z4, residue_field(z4), {});
    for (int t = 0; t < 20; ++t) {
        bool minimal = uniform(g, 0, 1) == 1;
        ChainComplex p = random_complex(z4, g, 0, 3, 3, minimal);
        KoszulAlgebra k = koszul(z4, random_sequence(z4, static_cast<int>(uniform(g, 0, 2)), g, true));
        ChainComplex reduced = base_change(to_k, extend(k, p).underlying);
        bool zero_diff = true;
        for (const auto& d : reduced.diffs) zero_diff = zero_diff && mat_is_zero(d);
        ASSERT_EQ(zero_diff, is_minimal(p));
    }
}

TEST(KLinear, Examples)
{
    Ring z4 = make_ring("Z/4");
    KoszulAlgebra k = koszul(z4, {z4->from_int(2), z4->from_int(2)});
    ChainComplex p = make_complex(z4, 0, {1, 1}, {from_ints(z4, {{2}})});
    DGModule d = extend(k, p);
    EXPECT_TRUE(is_k_linear(identity_map(d.underlying), d, d));
    ChainMap three = identity_map(d.underlying);
    for (auto& [n, c] : three.comps) c = mat_scale(z4->from_int(3), c);
    EXPECT_TRUE(is_k_linear(three, d, d));

    DGModule self = extend(k, module_complex(z4, 1));
    ChainMap swap = identity_map(self.underlying);
    swap.comps[1] = from_ints(z4, {{0, 1}, {1, 0}});
    ASSERT_TRUE(is_chain_map(swap));
    EXPECT_FALSE(is_k_linear(swap, self, self));
}

TEST(Adjunction, IdentityAndZero)
{
    Ring z4 = make_ring("Z/4");
    KoszulAlgebra k = koszul(z4, {z4->from_int(2)});
    ChainComplex m = make_complex(z4, 0, {1, 1}, {from_ints(z4, {{2}})});
    DGModule n = extend(k, m);
    ChainComplex kc = k.complex();
    ChainMap incl{m, n.underlying, {}};
    for (int d = m.lo; d <= m.hi(); ++d) {
        Matrix c(z4, n.underlying.rank(d), m.rank(d));
        place(c, mat_identity(z4, m.rank(d)), summand_offset(kc, m, d, d), 0);
        incl.comps[d] = c;
    }
    ChainMap phi = adjunction_forward(k, m, n, incl);
    EXPECT_TRUE(is_chain_map(phi));
    for (int d = n.underlying.lo; d <= n.underlying.hi(); ++d)
        EXPECT_EQ(phi.component(d), mat_identity(z4, n.underlying.rank(d)));
    ChainMap zero = adjunction_forward(k, m, n, zero_map(m, n.underlying));
    for (const auto& [d, c] : zero.comps) EXPECT_TRUE(mat_is_zero(c));
}

TEST(Adjunction, RoundTripOverF3)
{
    Rng g(61);
    Ring f3 = make_ring("F3");
    for (int t = 0; t < 15; ++t) {
        KoszulAlgebra k = koszul(f3, random_sequence(f3, 2, g));
        ChainComplex m = random_complex(f3, g, 0, 2, 3);
        DGModule n = extend(k, m);
        ChainMap psi = random_map_into_extension(k, m, g);
        ASSERT_TRUE(is_chain_map(psi));
        ChainMap phi = adjunction_forward(k, m, n, psi);
        ASSERT_TRUE(is_chain_map(phi));
        ASSERT_TRUE(is_k_linear(phi, extend(k, m), n));
        ChainMap back = adjunction_backward(k, m, n, phi);
        for (int d = m.lo; d <= m.hi() && !m.is_zero(); ++d) ASSERT_EQ(back.component(d), psi.component(d));
    }
}

TEST(ExtendMap, Functorial)
{
    Rng g(67);
    Ring z9 = make_ring("Z/9");
    for (int t = 0; t < 15; ++t) {
        KoszulAlgebra k = koszul(z9, random_sequence(z9, static_cast<int>(uniform(g, 1, 2)), g));
        ChainComplex m = random_complex(z9, g, 0, 3, 3);
        ChainMap f = random_endomorphism(m, g), h = random_endomorphism(m, g);
        ASSERT_TRUE(is_chain_map(f));
        ChainMap lhs = extend_map(k, compose(f, h));
        ChainMap rhs = compose(extend_map(k, f), extend_map(k, h));
        for (int n = map_lo(lhs); n <= map_hi(lhs); ++n) ASSERT_EQ(lhs.component(n), rhs.component(n));
        ASSERT_TRUE(is_k_linear(lhs, extend(k, m), extend(k, m)));
    }
}

TEST(ExtendMap, IsomorphismGivesCertifiedQuasiIsomorphism)
{
    Rng g(71);
    Ring z4 = make_ring("Z/4");
    for (int t = 0; t < 10; ++t) {
        KoszulAlgebra k = koszul(z4, random_sequence(z4, static_cast<int>(uniform(g, 1, 2)), g, true));
        ChainComplex c = random_complex(z4, g, 0, 3, 3);
        // C' = C conjugated by invertible u_n, phi = u : C -> C'
        ChainComplex c2 = c;
        ChainMap u{c, c2, {}}, u_inv{c2, c, {}};
        for (int n = c.lo; n <= c.hi(); ++n) {
            auto [a, a_inv] = random_invertible(z4, c.rank(n), g);
            u.comps[n] = a;
            u_inv.comps[n] = a_inv;
        }
        for (int n = c.lo + 1; n <= c.hi(); ++n)
            c2.diffs[static_cast<std::size_t>(n - c.lo)] = mat_mul(u.comps[n - 1], mat_mul(c.diff(n), u_inv.comps[n]));
        u.target = c2;
        u_inv.source = c2;
        ASSERT_TRUE(is_chain_map(u));
        ChainMap phi = extend_map(k, u), phi_inv = extend_map(k, u_inv);
        DGModule d1 = extend(k, c), d2 = extend(k, c2);
        ASSERT_TRUE(is_k_linear(phi, d1, d2));
        ChainComplex cn = cone(phi);
        Homotopy sigma;
        const ChainComplex& s = phi.source;
        const ChainComplex& tg = phi.target;
        for (int n = cn.lo - 1; n <= cn.hi() + 1; ++n) {
            Matrix blk(z4, tg.rank(n + 1) + s.rank(n), tg.rank(n) + s.rank(n - 1));
            place(blk, phi_inv.component(n), tg.rank(n + 1), 0);
            sigma.comps[n] = blk;
        }
        ASSERT_TRUE(is_contraction(sigma, cn));
        for (int n = -1; n <= 5; ++n) ASSERT_EQ(homology(c, n).cardinality, homology(c2, n).cardinality);
    }
}

TEST(MultiplicationMap, KLinearSurjectiveChainMap)
{
    Ring z4 = make_ring("Z/4");
    KoszulAlgebra k = koszul(z4, {z4->from_int(2), z4->zero()});
    ChainMap mu = multiplication_map(k);
    ASSERT_TRUE(is_chain_map(mu));
    EXPECT_TRUE(is_k_linear(mu, extend(k, k.complex()), extend(k, module_complex(z4, 1))));
    for (int n = 0; n <= k.e(); ++n)
        EXPECT_TRUE(in_column_span(mu.component(n), mat_identity(z4, k.rank(n))));
}

} // namespace
