#include <gtest/gtest.h>

#include <random>

#include "ainf/ff_linalg.hpp"

using namespace ainf;
using namespace ainf::ff;

namespace {

Matrix random_matrix(const Field& k, std::size_t r, std::size_t c, std::mt19937& rng, int zero_bias = 0)
{
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = static_cast<int>(rng() % 4) < zero_bias ? 0 : static_cast<Scalar>(rng() % k.p());
    return m;
}

} // namespace

TEST(Field, RejectsNonPrimes)
{
    for (Scalar p : {0u, 1u, 4u, 9u, 15u, 91u})
        EXPECT_THROW(Field{p}, Error) << p;
    try {
        Field k(6);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_parameter);
    }
}

TEST(Field, Arithmetic)
{
    Field k(7);
    EXPECT_EQ(k.add(5, 4), 2u);
    EXPECT_EQ(k.sub(2, 5), 4u);
    EXPECT_EQ(k.neg(0), 0u);
    EXPECT_EQ(k.neg(3), 4u);
    EXPECT_EQ(k.mul(3, 5), 1u);
    EXPECT_EQ(k.reduce(-1), 6u);
    EXPECT_EQ(k.sign(3), 6u);
    EXPECT_EQ(k.sign(4), 1u);
    EXPECT_EQ(k.symmetric(6), -1);
    EXPECT_EQ(k.symmetric(3), 3);
    for (Scalar a = 1; a < 7; ++a)
        EXPECT_EQ(k.mul(a, k.inv(a)), 1u);
    EXPECT_THROW(k.inv(0), Error);
    Field two(2);
    EXPECT_EQ(two.sign(1), 1u); // -1 = 1 in characteristic 2
}

TEST(Field, LargePrimeUsesPow)
{
    Field k(1000003);
    EXPECT_EQ(k.mul(123456, k.inv(123456)), 1u);
}

TEST(Linalg, RrefAndRank)
{
    Field k(5);
    Matrix m(3, 3, {1, 2, 3, 2, 4, 0, 3, 1, 4});
    auto e = rref(k, m);
    EXPECT_EQ(e.pivots, (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(rank(k, m), 2u);
    EXPECT_EQ(rank(k, Matrix(2, 4)), 0u);
    EXPECT_EQ(rank(k, Matrix::identity(4)), 4u);
}

TEST(Linalg, SolveIsCanonical)
{
    Field k(3);
    // x0 + x1 = 1 has the canonical solution (1, 0).
    Matrix a(1, 2, {1, 1});
    auto x = solve(k, a, Vector{1});
    ASSERT_TRUE(x);
    EXPECT_EQ(*x, (Vector{1, 0}));
    EXPECT_FALSE(solve(k, Matrix(1, 2), Vector{1}));
    EXPECT_THROW(solve(k, a, Vector{1, 2}), Error);
}

TEST(Linalg, MultiplyShapes)
{
    Field k(3);
    EXPECT_THROW(multiply(k, Matrix(2, 3), Matrix(2, 3)), Error);
    Matrix a(2, 2, {1, 2, 0, 1});
    EXPECT_EQ(multiply(k, a, Matrix::identity(2)), a);
}

// Randomized: consistent systems are solved exactly; inconsistent systems are
// recognized by comparing ranks of [A] and [A|b].
TEST(LinalgProperty, SolveAgainstRankOracle)
{
    std::mt19937 rng(7);
    int cases = 0;
    for (Scalar p : {2u, 3u, 5u, 7u, 101u})
        for (int i = 0; i < 60; ++i, ++cases) {
            Field k(p);
            const std::size_t r = 1 + rng() % 7, c = 1 + rng() % 7;
            auto a = random_matrix(k, r, c, rng, 2);
            Vector b(r);
            for (auto& v : b)
                v = static_cast<Scalar>(rng() % p);
            if (rng() % 2) { // force consistency
                Vector x(c);
                for (auto& v : x)
                    v = static_cast<Scalar>(rng() % p);
                b = apply(k, a, x);
            }
            Matrix aug(r, c + 1);
            for (std::size_t u = 0; u < r; ++u) {
                for (std::size_t v = 0; v < c; ++v)
                    aug(u, v) = a(u, v);
                aug(u, c) = b[u];
            }
            const bool consistent = rank(k, aug) == rank(k, a);
            auto x = solve(k, a, b);
            ASSERT_EQ(x.has_value(), consistent);
            if (x) {
                EXPECT_EQ(apply(k, a, *x), b);
            }
        }
    EXPECT_GE(cases, 200);
}

TEST(LinalgProperty, KernelBasis)
{
    std::mt19937 rng(11);
    for (int i = 0; i < 200; ++i) {
        Field k(i % 2 ? 3 : 2);
        const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 8;
        auto a = random_matrix(k, r, c, rng, 1);
        auto ker = kernel_basis(k, a);
        EXPECT_EQ(ker.size() + rank(k, a), c);
        for (const auto& v : ker)
            for (auto e : apply(k, a, v))
                ASSERT_EQ(e, 0u);
        if (!ker.empty()) {
            Matrix kb(c, ker.size());
            for (std::size_t j = 0; j < ker.size(); ++j)
                for (std::size_t u = 0; u < c; ++u)
                    kb(u, j) = ker[j][u];
            EXPECT_EQ(rank(k, kb), ker.size());
        }
    }
}

TEST(LinalgProperty, SolverMatchesOneShotSolve)
{
    std::mt19937 rng(5);
    Field k(5);
    for (int i = 0; i < 50; ++i) {
        auto a = random_matrix(k, 5, 4, rng, 1);
        Solver s(k, a);
        for (int j = 0; j < 4; ++j) {
            Vector b(5);
            for (auto& v : b)
                v = static_cast<Scalar>(rng() % 5);
            EXPECT_EQ(s.solve(b), solve(k, a, b));
        }
    }
}
