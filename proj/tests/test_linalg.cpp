#include <bqg/linalg.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace bqg;

namespace {

FMatrix E(int i, int j, int n) { return FMatrix::unit(i, j, n); }

FMatrix random_sparse(std::mt19937_64& rng, int n) {
    FMatrix m(n, n);
    std::uniform_int_distribution<int> pos(0, n - 1), val(-3, 3), pw(-2, 2);
    for (int k = 0; k < 2 * n; ++k) {
        const int c = val(rng);
        if (c) m.set(pos(rng), pos(rng), FieldElem(static_cast<long>(c)) * FieldElem::rs(pw(rng), pw(rng)));
    }
    return m;
}

TEST(Matrix, UnitProduct) { EXPECT_EQ(E(1, 2, 5) * E(2, 3, 5), E(1, 3, 5)); }

TEST(Matrix, IdentityIsNeutral) {
    std::mt19937_64 rng(1);
    const FMatrix m = random_sparse(rng, 5);
    EXPECT_EQ(FMatrix::identity(5) * m, m);
    EXPECT_EQ(m * FMatrix::identity(5), m);
}

TEST(Matrix, Associativity) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 5; ++t) {
        FMatrix a = random_sparse(rng, 5), b = random_sparse(rng, 5), c = random_sparse(rng, 5);
        EXPECT_EQ((a * b) * c, a * (b * c));
    }
}

TEST(Kron, UnitTimesUnit) {
    const FMatrix k = kron(E(1, 1, 5), E(2, 2, 5));
    EXPECT_EQ(k.nnz(), 1u);
    EXPECT_EQ(k.get(1, 1), FieldElem(1L));  // (1,2) -> 0-based 1
}

TEST(Kron, IdentityTimesIdentity) { EXPECT_EQ(kron(FMatrix::identity(5), FMatrix::identity(5)), FMatrix::identity(25)); }

TEST(Kron, MixedProduct) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 3; ++t) {
        FMatrix a = random_sparse(rng, 3), b = random_sparse(rng, 3), c = random_sparse(rng, 3), d = random_sparse(rng, 3);
        EXPECT_EQ(kron(a, b) * kron(c, d), kron(a * c, b * d));
    }
}

TEST(Flip, SwapsBasisVectors) {
    const FMatrix P = flip_P<FieldElem>(5);
    const IndexScheme sc(2);
    EXPECT_EQ(P.get(sc.pair(2, 1), sc.pair(1, 2)), FieldElem(1L));
    EXPECT_EQ(P * P, FMatrix::identity(25));
}

TEST(PartialTranspose, FirstLegOfKron) {
    std::mt19937_64 rng(4);
    FMatrix a = random_sparse(rng, 3), b = random_sparse(rng, 3);
    EXPECT_EQ(partial_transpose(kron(a, b), 3, 1), kron(a.transpose(), b));
    EXPECT_EQ(partial_transpose(partial_transpose(kron(a, b), 3, 1), 3, 1), kron(a, b));
}

TEST(Invert, Identity) { EXPECT_EQ(invert(FMatrix::identity(4)), FMatrix::identity(4)); }

TEST(Invert, Diagonal) {
    const FMatrix d = FMatrix::diagonal({FieldElem::u(2), FieldElem::v(2)});
    EXPECT_EQ(invert(d), FMatrix::diagonal({FieldElem::u(-2), FieldElem::v(-2)}));
}

TEST(Invert, SingularThrows) { EXPECT_THROW(invert(E(1, 1, 2)), SingularMatrix); }

TEST(ApplyPoly, LinearPolynomialIsTheMatrix) {
    std::mt19937_64 rng(5);
    const FMatrix a = random_sparse(rng, 4);
    EXPECT_EQ(apply_poly<FieldElem>({FieldElem(0L), FieldElem(1L)}, a), a);
}

TEST(Rank, Identity) { EXPECT_EQ(rank(FMatrix::identity(25)), 25); }

TEST(Rank, RankOneOuterProduct) {
    FMatrix m(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.set(i, j, FieldElem::rs(i, j));
    EXPECT_EQ(rank(m), 1);
}

TEST(Dump, OneLinePerEntryAfterHeader) {
    const FMatrix m = E(1, 2, 2) + E(2, 1, 2).scaled(FieldElem::rs(-1, 1));
    const std::string d = m.dump();
    EXPECT_EQ(d.rfind("ringmatrix 2 2 field\n1 2 1/1\n2 1 ", 0), 0u) << d;
    EXPECT_EQ(std::count(d.begin(), d.end(), '\n'), 3);
}

}  // namespace
