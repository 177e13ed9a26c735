#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace kext;
using namespace kext::testing;

namespace {

TEST(KernelBasis, Examples)
{
    Ring f5 = make_ring("F5");
    Matrix k = kernel_basis(from_ints(f5, {{1, 2}}));
    ASSERT_EQ(k.cols, 1u);
    Elem scale = *f5->inverse(k.at(1, 0));
    EXPECT_EQ(f5->mul(k.at(0, 0), scale), f5->from_int(3));
    Ring z4 = make_ring("Z/4");
    Matrix k4 = kernel_basis(from_ints(z4, {{2}}));
    EXPECT_EQ(column_span(k4, 4), (std::set<Vec>{{0}, {2}}));
    EXPECT_EQ(kernel_basis(mat_identity(integers(), 3)).cols, 0u);
}

TEST(KernelBasis, CapabilityMissing)
{
    Ring r = make_ring("F2[x,y]");
    EXPECT_EQ(error_code_of([&] { kernel_basis(Matrix(r, 1, 1)); }), ErrorCode::CapabilityMissing);
}

TEST(Solve, Examples)
{
    Ring z = integers();
    EXPECT_FALSE(solve(from_ints(z, {{2}}), from_ints(z, {{3}})).has_value());
    Ring z4 = make_ring("Z/4");
    auto x = solve(from_ints(z4, {{2}}), from_ints(z4, {{2}}));
    ASSERT_TRUE(x.has_value());
    EXPECT_EQ(mat_mul(from_ints(z4, {{2}}), *x), from_ints(z4, {{2}}));
    Ring f7 = make_ring("F7");
    Matrix a = from_ints(f7, {{1, 2}, {3, 4}});
    Matrix b = from_ints(f7, {{5}, {6}});
    auto y = solve(a, b);
    ASSERT_TRUE(y.has_value());
    EXPECT_EQ(mat_mul(a, *y), b);
    EXPECT_EQ(error_code_of([&] { solve(a, from_ints(f7, {{1}})); }), ErrorCode::DimensionMismatch);
}

TEST(HomologyModule, KoszulOnTwo)
{
    Ring z = integers();
    Matrix d = from_ints(z, {{2}});
    EXPECT_EQ(homology_module(d, Matrix(z, 0, 1)).describe(), "Z/2");
    EXPECT_TRUE(homology_module(Matrix(z, 1, 0), d).is_zero());
    Ring z4 = make_ring("Z/4");
    Matrix d4 = from_ints(z4, {{2}});
    ModuleSummary h0 = homology_module(d4, Matrix(z4, 0, 1));
    ModuleSummary h1 = homology_module(Matrix(z4, 1, 0), d4);
    EXPECT_EQ(h0.cardinality, BigInt(2));
    EXPECT_EQ(h1.cardinality, BigInt(2));
    Matrix id = mat_identity(z4, 2);
    EXPECT_TRUE(homology_module(id, Matrix(z4, 0, 2)).is_zero());
    EXPECT_EQ(error_code_of([&] { homology_module(d, d); }), ErrorCode::NotAComplex);
}

TEST(KernelOracle, Z12AgainstEnumeration)
{
    Ring r = make_ring("Z/12");
    Rng g(12);
    for (int t = 0; t < 500; ++t) {
        std::size_t m = static_cast<std::size_t>(uniform(g, 1, 3)), n = static_cast<std::size_t>(uniform(g, 1, 3));
        Matrix a = random_matrix(r, m, n, g);
        Matrix k = kernel_basis(a);
        ASSERT_TRUE(mat_is_zero(mat_mul(a, k)));
        ASSERT_EQ(column_span(k, 12), brute_kernel(a, 12)) << print_matrix(a);
        NormalFormResult nf = matrix_normal_form(a);
        ASSERT_EQ(nf.form, FormTag::Howell);
        ASSERT_TRUE(verify_normal_form(a, nf));
    }
}

TEST(KernelOracle, F5AgainstEnumeration)
{
    Ring r = make_ring("F5");
    Rng g(5);
    for (int t = 0; t < 200; ++t) {
        std::size_t m = static_cast<std::size_t>(uniform(g, 1, 3)), n = static_cast<std::size_t>(uniform(g, 1, 3));
        Matrix a = random_matrix(r, m, n, g);
        Matrix k = kernel_basis(a);
        ASSERT_TRUE(mat_is_zero(mat_mul(a, k)));
        ASSERT_EQ(column_span(k, 5), brute_kernel(a, 5));
        std::size_t size = 1;
        for (std::size_t i = 0; i < k.cols; ++i) size *= 5;
        ASSERT_EQ(size, brute_kernel(a, 5).size()) << "kernel columns must be independent";
        ASSERT_TRUE(verify_normal_form(a, matrix_normal_form(a)));
    }
}

TEST(SmithForm, DivisibilityChainMatchesDeterminantalDivisors)
{
    Ring z = integers();
    Rng g(2024);
    for (int t = 0; t < 150; ++t) {
        std::size_t m = static_cast<std::size_t>(uniform(g, 1, 3)), n = static_cast<std::size_t>(uniform(g, 1, 3));
        Matrix a = random_matrix(z, m, n, g);
        NormalFormResult nf = matrix_normal_form(a);
        ASSERT_EQ(nf.form, FormTag::Smith);
        ASSERT_TRUE(verify_normal_form(a, nf));
        std::vector<BigInt> diag;
        for (std::size_t i = 0; i < std::min(m, n); ++i) {
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) ASSERT_TRUE(z->is_zero(nf.transformed.at(i, j)));
            diag.push_back(std::get<BigInt>(nf.transformed.at(i, i)));
        }
        for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
            ASSERT_GE(diag[i], 0);
            if (diag[i] == 0) ASSERT_EQ(diag[i + 1], 0);
            else ASSERT_EQ(diag[i + 1] % diag[i], 0);
        }
        std::vector<std::vector<BigInt>> ai(m, std::vector<BigInt>(n));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) ai[i][j] = std::get<BigInt>(a.at(i, j));
        BigInt prod = 1;
        for (std::size_t k = 1; k <= diag.size(); ++k) {
            prod *= diag[k - 1];
            ASSERT_EQ(prod, determinantal_divisor(ai, k)) << print_matrix(a);
        }
    }
}

TEST(SmithForm, UnivariatePolynomialsOverF2)
{
    Ring r = make_ring("F2[t]");
    Rng g(7);
    for (int t = 0; t < 60; ++t) {
        Matrix a = random_matrix(r, 2, 3, g);
        NormalFormResult nf = matrix_normal_form(a);
        ASSERT_TRUE(verify_normal_form(a, nf));
        Matrix k = kernel_basis(a);
        ASSERT_TRUE(mat_is_zero(mat_mul(a, k)));
    }
}

TEST(Subquotient, AlgebraTierCountsDimensions)
{
    Ring r = make_ring("F2[x]/(x^2)");
    Matrix d = from_ints(r, {{0}});
    d.at(0, 0) = r->variable(0);
    ModuleSummary h = homology_module(d, Matrix(r, 0, 1));
    EXPECT_EQ(h.rank, 1u);
    EXPECT_EQ(h.cardinality, BigInt(2));
    EXPECT_EQ(kernel_basis(d).cols, 1u);
}

} // namespace
