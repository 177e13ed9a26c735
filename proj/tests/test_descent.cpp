#include "oracles.hpp"

#include "kext/descent.hpp"

#include <gtest/gtest.h>

using namespace kext;
using namespace kext::testing;

namespace {

struct Instance {
    KoszulAlgebra k;
    ChainComplex p;
    DGModule f;
    PolynomialSystem sys;
    Assignment canonical;
};

Instance random_instance(const Ring& r, Rng& g)
{
    int m = static_cast<int>(uniform(g, 0, 3));
    ChainComplex p = random_complex(r, g, 0, m + 1, static_cast<std::size_t>(uniform(g, 1, 3)), true);
    KoszulAlgebra k = koszul(r, random_sequence(r, static_cast<int>(uniform(g, 0, 2)), g, true));
    DGModule f = extend(k, p);
    PolynomialSystem sys = generate_system(k, p, f);
    return Instance{k, p, f, sys, canonical_solution(k, p, f)};
}

std::vector<BigInt> homology_window(const ChainComplex& c) { return homology_sizes(c, -1, 8); }

TEST(GenerateSystem, CountsForSmallestShape)
{
    Ring z4 = make_ring("Z/4");
    KoszulAlgebra k = koszul(z4, {z4->from_int(2)});
    ChainComplex p = make_complex(z4, 0, {1, 1}, {from_ints(z4, {{2}})});
    PolynomialSystem sys = generate_system(k, p, extend(k, p));
    EXPECT_EQ(sys.shape.r, (std::vector<std::size_t>{1, 2, 1}));
    EXPECT_EQ(sys.count('X'), 1u);
    EXPECT_EQ(sys.count('Y'), 6u);
    EXPECT_EQ(sys.count('Z'), 15u);
}

TEST(GenerateSystem, CountsMatchClosedFormOnRandomShapes)
{
    Rng g(101);
    for (const char* desc : {"Z/4", "F2[x]/(x^2)"}) {
        Ring r = make_ring(desc);
        for (int t = 0; t < 15; ++t) {
            Instance in = random_instance(r, g);
            Counts c = closed_form(in.k.e(), support_ranks(in.p));
            ASSERT_EQ(in.sys.count('X'), c.x);
            ASSERT_EQ(in.sys.count('Y'), c.y);
            ASSERT_EQ(in.sys.count('Z'), c.z);
            for (int s = 1; s <= 4; ++s) ASSERT_EQ(in.sys.count_equations(s), c.eq[s]) << "S" << s;
        }
    }
}

TEST(GenerateSystem, ModuleCaseHasNoFirstSubsystem)
{
    Ring z4 = make_ring("Z/4");
    KoszulAlgebra k = koszul(z4, {z4->from_int(2)});
    ChainComplex p = module_complex(z4, 1);
    PolynomialSystem sys = generate_system(k, p, extend(k, p));
    EXPECT_EQ(sys.count('X'), 0u);
    EXPECT_EQ(sys.count_equations(1), 0u);
    EXPECT_GT(sys.count_equations(2), 0u);
    EXPECT_GT(sys.count_equations(4), 0u);
}

TEST(GenerateSystem, Errors)
{
    Ring z4 = make_ring("Z/4");
    KoszulAlgebra k = koszul(z4, {z4->from_int(2)});
    ChainComplex p = make_complex(z4, 0, {1, 1}, {from_ints(z4, {{1}})});
    EXPECT_EQ(error_code_of([&] { generate_system(k, p, extend(k, p)); }), ErrorCode::NotMinimal);
    ChainComplex q = make_complex(z4, 0, {1, 1}, {from_ints(z4, {{2}})});
    EXPECT_EQ(error_code_of([&] { generate_system(k, q, extend(k, module_complex(z4, 1))); }), ErrorCode::RankMismatch);
    DGModule broken = extend(k, q);
    broken.action[1][0].at(0, 0) = z4->add(broken.action[1][0].at(0, 0), z4->one());
    EXPECT_EQ(error_code_of([&] { generate_system(k, q, broken); }), ErrorCode::UnverifiedF);
    EXPECT_EQ(error_code_of([&] { canonical_solution(k, q, broken); }), ErrorCode::NonCanonicalF);
}

TEST(BBlocks, MatchTensorDifferential)
{
    Rng g(103);
    for (const char* desc : {"Z/4", "F2[x]/(x^2)", "Z/9"}) {
        Ring r = make_ring(desc);
        for (int t = 0; t < 17; ++t) {
            ChainComplex p = random_complex(r, g, 0, static_cast<int>(uniform(g, 1, 4)), 3, true);
            KoszulAlgebra k = koszul(r, random_sequence(r, static_cast<int>(uniform(g, 0, 2)), g));
            ChainComplex kp = tensor(k.complex(), p);
            int top = (p.is_zero() ? 0 : std::max(0, p.hi())) + k.e();
            for (int n = 1; n <= top; ++n) ASSERT_EQ(b_matrix(k, p, n), kp.diff(n)) << desc << " n=" << n;
        }
    }
}

TEST(BBlocks, HandExpandedLengthOne)
{
    Ring z4 = make_ring("Z/4");
    KoszulAlgebra k = koszul(z4, {z4->from_int(2)});
    ChainComplex p = make_complex(z4, 0, {1, 1}, {from_ints(z4, {{2}})});
    // (K (x) P)_1 = K_1 (x) P_0 + K_0 (x) P_1: d = [a_1, (+1) x]
    EXPECT_EQ(b_matrix(k, p, 1), from_ints(z4, {{2, 2}}));
    // (K (x) P)_2 = K_1 (x) P_1: d = [(-1) x ; a_1]
    EXPECT_EQ(b_matrix(k, p, 2), from_ints(z4, {{-2}, {2}}));
}

TEST(CanonicalSolution, PassesAndReconstructsP)
{
    Rng g(107);
    for (const char* desc : {"Z/4", "F2[x]/(x^2)"}) {
        Ring r = make_ring(desc);
        for (int t = 0; t < 10; ++t) {
            Instance in = random_instance(r, g);
            SystemReport rep = verify_assignment(in.sys, in.canonical);
            ASSERT_TRUE(rep.all_pass()) << rep.str();
            ASSERT_EQ(rep.str(), "S1 ok S2 ok S3 ok S4 ok");
            DescentCertificate cert = reconstruct(in.k, in.f, in.sys, in.canonical);
            ASSERT_TRUE(cert.complex_ok && cert.chain_map_ok && cert.k_linear_ok && cert.contraction_ok);
            for (int n = 0; n <= 3; ++n) {
                ASSERT_EQ(cert.a.rank(n), in.p.rank(n));
                if (n >= 1) ASSERT_EQ(cert.a.diff(n), in.p.diff(n));
            }
            for (const auto& [n, c] : cert.phi.comps) ASSERT_EQ(c, mat_identity(r, c.rows));
        }
    }
}

TEST(CanonicalSolution, ZeroComplexIsVacuous)
{
    Ring z4 = make_ring("Z/4");
    KoszulAlgebra k = koszul(z4, {z4->from_int(2)});
    ChainComplex p = zero_complex(z4);
    PolynomialSystem sys = generate_system(k, p, extend(k, p));
    Assignment a = canonical_solution(k, p);
    EXPECT_TRUE(a.values.empty());
    EXPECT_TRUE(verify_assignment(sys, a).all_pass());
}

TEST(VerifyAssignment, PerturbedYIsLocated)
{
    Ring z4 = make_ring("Z/4");
    KoszulAlgebra k = koszul(z4, {z4->from_int(2)});
    ChainComplex p = make_complex(z4, 0, {1, 1}, {from_ints(z4, {{2}})});
    DGModule f = extend(k, p);
    PolynomialSystem sys = generate_system(k, p, f);
    Assignment a = canonical_solution(k, p);
    a.values["Y_1_1_1"] = z4->add(a.values["Y_1_1_1"], z4->one());
    SystemReport rep = verify_assignment(sys, a);
    EXPECT_TRUE(rep.results[0].pass);
    EXPECT_TRUE(!rep.results[1].pass || !rep.results[2].pass);
    EXPECT_NE(rep.str().find("FAIL"), std::string::npos);
    EXPECT_EQ(error_code_of([&] { reconstruct(k, f, sys, a); }), ErrorCode::VerificationFailed);
    Assignment partial = canonical_solution(k, p);
    partial.values.erase("Z_0_1_1");
    EXPECT_EQ(error_code_of([&] { verify_assignment(sys, partial); }), ErrorCode::IncompleteAssignment);
}

TEST(VerifyAssignment, SingleUnitMutations)
{
    // X and Y mutations are always detected. A Z entry can be unconstrained (the
    // contraction is not unique); an undetected mutation must then be a genuine
    // solution whose certificate passes.
    Rng g(109);
    for (const char* desc : {"Z/4", "F2[x]/(x^2)"}) {
        Ring r = make_ring(desc);
        for (int t = 0; t < 10; ++t) {
            Instance in = random_instance(r, g);
            for (const auto& [name, value] : in.canonical.values) {
                Assignment a = in.canonical;
                a.values[name] = r->add(value, random_unit(r, g));
                if (!verify_assignment(in.sys, a).all_pass()) continue;
                ASSERT_EQ(name[0], 'Z') << name;
                DescentCertificate cert = reconstruct(in.k, in.f, in.sys, a);
                ASSERT_TRUE(cert.contraction_ok);
            }
        }
    }
}

TEST(Conjugation, PassesAndPreservesHomology)
{
    Rng g(113);
    for (const char* desc : {"Z/4", "F2[x]/(x^2)"}) {
        Ring r = make_ring(desc);
        for (int t = 0; t < 10; ++t) {
            Instance in = random_instance(r, g);
            std::vector<Matrix> gs, gi;
            for (std::size_t s : in.sys.shape.s) {
                auto [a, b] = random_invertible(r, s, g);
                gs.push_back(a);
                gi.push_back(b);
            }
            Assignment c = conjugate_solution(in.k, in.sys, in.canonical, gs, gi);
            SystemReport rep = verify_assignment(in.sys, c);
            ASSERT_TRUE(rep.all_pass()) << rep.str();
            DescentCertificate cert = reconstruct(in.k, in.f, in.sys, c);
            ASSERT_EQ(homology_window(tensor(in.k.complex(), cert.a)), homology_window(tensor(in.k.complex(), in.p)));
        }
    }
}

TEST(Reconstruct, ThroughRingHomomorphism)
{
    Ring z8 = make_ring("Z/8"), z4 = make_ring("Z/4");
    RingHom hom(z8, z4, {});
    KoszulAlgebra k = koszul(z8, {z8->from_int(2)});
    ChainComplex p = make_complex(z8, 0, {1, 2, 1}, {from_ints(z8, {{2, 4}}), from_ints(z8, {{4}, {6}})});
    DGModule f = extend(k, p);
    PolynomialSystem sys = generate_system(k, p, f);
    Assignment a = canonical_solution(k, p);
    Assignment mapped{z4, {}};
    for (const auto& [name, v] : a.values) mapped.values[name] = hom(v);
    SystemReport rep = verify_assignment(sys, mapped, hom);
    ASSERT_TRUE(rep.all_pass()) << rep.str();
    DescentCertificate cert = reconstruct(k, f, sys, mapped, hom);
    EXPECT_TRUE(same_ring(cert.a.ring, z4));
    EXPECT_EQ(cert.a.diff(1), from_ints(z4, {{2, 0}}));
    EXPECT_TRUE(cert.contraction_ok);
}

TEST(TruncateExtend, ExactInputIsUnchanged)
{
    Ring z4 = make_ring("Z/4");
    KoszulAlgebra k = koszul(z4, {z4->from_int(2)});
    ChainComplex a = module_complex(z4, 1);
    TruncateExtendResult res = truncate_extend(k, a, 0, 3, 4);
    EXPECT_EQ(res.m, a);
    EXPECT_EQ(res.window_lo, 2);
    EXPECT_EQ(res.window_hi, 2);
}

TEST(TruncateExtend, TruncatedKoszulExtension)
{
    Ring z4 = make_ring("Z/4");
    KoszulAlgebra k = koszul(z4, {z4->from_int(2)});
    ChainComplex kp = tensor(k.complex(), module_complex(z4, 1));
    int s_bound = sup_inf(kp).sup;
    ASSERT_EQ(s_bound, 1);
    TruncateExtendResult res = truncate_extend(k, truncate_below(kp, 4), s_bound, 4, 4);
    HomologyBounds b = sup_inf(res.m);
    EXPECT_LE(b.sup, s_bound + k.e());
    EXPECT_EQ(b.sup, 1);
}

TEST(TruncateExtend, ResolutionTruncationsOverLocalRings)
{
    Rng g(127);
    for (const char* desc : {"Z/4", "F2[x]/(x^2)", "F3[x]/(x^3)"}) {
        Ring r = make_ring(desc);
        for (int t = 0; t < 5; ++t) {
            int e = static_cast<int>(uniform(g, 1, 2));
            KoszulAlgebra k = koszul(r, random_sequence(r, e, g, true));
            int m = 2 * e + 1;
            Resolution res = free_resolution(random_module(r, g, 2, 2), m + 2);
            ChainComplex a = truncate_below(res.complex, m);
            TruncateExtendResult out = truncate_extend(k, a, 0, m, 4);
            ASSERT_EQ(truncate_below(out.m, m), a);
            for (int i = e + 1; i < m; ++i) ASSERT_TRUE(homology(out.m, i).is_zero());
        }
    }
}

TEST(TruncateExtend, PlantedCycleIsRejected)
{
    Ring z4 = make_ring("Z/4");
    KoszulAlgebra k = koszul(z4, {z4->from_int(2)});
    ChainComplex a = module_complex(z4, 1, 2);
    EXPECT_EQ(error_code_of([&] { truncate_extend(k, a, 0, 3, 4); }), ErrorCode::WindowViolated);
    EXPECT_EQ(error_code_of([&] { truncate_extend(k, a, 0, 2, 4); }), ErrorCode::InvalidArgument);
}

} // namespace
