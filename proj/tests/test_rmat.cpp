#include <bqg/rmat.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace bqg;

namespace {

const RBundle& bundle2() {
    static const RBundle b = build_basic_R(2);
    return b;
}

// Positions (row, col) of the summands of the braid matrix, enumerated
// straight from the index ranges of its defining sum.
std::set<std::pair<int, int>> enumerated_support(int n) {
    IndexScheme sc(n);
    const int N = sc.N(), mid = n + 1;
    std::set<std::pair<int, int>> out;
    auto unit = [&](int a, int b, int c, int d) { out.insert({sc.pair(a, c), sc.pair(b, d)}); };
    for (int i = 1; i <= N; ++i) {
        if (i == mid) continue;
        unit(i, i, i, i);
        unit(sc.prime(i), i, i, sc.prime(i));
    }
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j)
            if (i != j && j != sc.prime(i) && i != mid && j != mid) unit(i, j, j, i);
    for (int i = 1; i <= N; ++i)
        if (i != mid) {
            unit(i, mid, mid, i);
            unit(mid, i, i, mid);
        }
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j < i; ++j) {
            unit(i, i, j, j);
            unit(i, sc.prime(j), sc.prime(i), j);
        }
    unit(mid, mid, mid, mid);
    return out;
}

TEST(BasicR, SupportMatchesEnumeration) {
    for (int n : {2, 3}) {
        const FMatrix R = basic_R_matrix(IndexScheme(n));
        std::set<std::pair<int, int>> got;
        R.for_each([&](int i, int j, const FieldElem&) { got.insert({i, j}); });
        EXPECT_EQ(got, enumerated_support(n)) << "n = " << n;
    }
    EXPECT_EQ(bundle2().R.nnz(), 43u);
}

TEST(BasicR, ShapeAtRankThree) {
    const FMatrix R = basic_R_matrix(IndexScheme(3));
    EXPECT_EQ(R.rows(), 49);
    EXPECT_EQ(R.cols(), 49);
}

TEST(BasicR, DiagonalCoefficient) {
    const IndexScheme sc(2);
    for (int i : {1, 2, 4, 5}) EXPECT_EQ(bundle2().R.at(sc.pair(i, i) + 1, sc.pair(i, i) + 1), q_half(2));
}

TEST(BasicR, ClosedInverseIsTheInverse) {
    EXPECT_EQ(invert(bundle2().R), basic_R_inverse_matrix(IndexScheme(2)));
}

TEST(BasicR, FlipConjugationSwapsLegs) {
    const IndexScheme sc(2);
    const int N = sc.N();
    const FMatrix& R = bundle2().R;
    const FMatrix PRP = flip_P<FieldElem>(N) * R * flip_P<FieldElem>(N);
    for (int a = 1; a <= N; ++a)
        for (int b = 1; b <= N; ++b)
            for (int c = 1; c <= N; ++c)
                for (int d = 1; d <= N; ++d)
                    ASSERT_EQ(PRP.get(sc.pair(a, b), sc.pair(c, d)), R.get(sc.pair(b, a), sc.pair(d, c)));
}

TEST(BasicR, PartialTransposesCompose) {
    const FMatrix& Rh = bundle2().R_hat;
    EXPECT_EQ(partial_transpose(partial_transpose(Rh, 5, 1), 5, 2), Rh.transpose());
}

TEST(BasicR, MinimalPolynomialAnnihilates) {
    EXPECT_TRUE(apply_poly(minimal_polynomial_R(2), bundle2().R).is_zero());
}

TEST(BasicR, FirstFactorKillsHighestWeightVector) {
    const IndexScheme sc(2);
    const FMatrix m = apply_poly<FieldElem>({-q_half(2), FieldElem(1L)}, bundle2().R);
    for (int r = 0; r < 25; ++r) EXPECT_TRUE(m.get(r, sc.pair(1, 1)).is_zero());
}

TEST(BasicR, ProjectorRanks) {
    EXPECT_EQ(rank(bundle2().P_zero), 1);
    EXPECT_EQ(rank(bundle2().P_plus), 14);
    EXPECT_EQ(rank(bundle2().P_minus), 10);
    EXPECT_EQ(rank(FMatrix::identity(25)), 25);
}

TEST(SpectralR, StandardAtOneIsIdentityAfterFlip) {
    const SpectralR sr = build_spectral_R(2, Variant::standard);
    EXPECT_EQ(flip_P<FieldElem>(5) * eval_z(sr.matrix, FieldElem(1L)), FMatrix::identity(25));
}

TEST(SpectralR, DiagonalDualCoefficient) {
    // d_ii = s^2 (z - 1)(z - (r^-1 s)^{2n-3}) over (z - xi)(r^2 z - s^2).
    const int n = 2;
    const IndexScheme sc(n);
    const SpectralR sr = build_spectral_R(n, Variant::standard);
    using Z = RatZ<FieldElem>;
    const Z z = Z::z(), one(1L);
    const FieldElem s2 = FieldElem::rs(0, 2), r2 = FieldElem::rs(2, 0);
    const Z expected = Z(s2) * (z - one) * (z - Z(q_half(2 * (2 * n - 3)))) / ((z - Z(sr.xi)) * (Z(r2) * z - Z(s2)));
    const int i = 1;
    EXPECT_EQ(sr.matrix.get(sc.pair(sc.prime(i), i), sc.pair(sc.prime(i), i)), expected);
}

TEST(SpectralR, LimitsOfTheStandardForm) {
    const SpectralR sr = build_spectral_R(2, Variant::standard);
    const RBundle& b = bundle2();
    EXPECT_EQ(limit_zero(sr.matrix), b.R_hat.scaled(q_half(-2)));
    EXPECT_EQ(limit_infinity(sr.matrix), (flip_P<FieldElem>(5) * b.R_inv).scaled(q_half(2)));
}

TEST(SpectralR, VariantsAgreeAwayFromDualBlocks) {
    const IndexScheme sc(2);
    const SpectralR a = build_spectral_R(2, Variant::standard), b = build_spectral_R(2, Variant::alternate);
    for (int i = 1; i <= 5; ++i)
        for (int j = 1; j <= 5; ++j)
            if (j != i && j != sc.prime(i)) {
                EXPECT_EQ(a.matrix.get(sc.pair(i, j), sc.pair(j, i)), b.matrix.get(sc.pair(i, j), sc.pair(j, i)));
            }
    EXPECT_NE(a.matrix, b.matrix);
}

TEST(FSeries, ConstantTermIsOne) {
    EXPECT_EQ(build_f_series(2, 4).coeffs.at(0), FieldElem(1L));
    EXPECT_EQ(build_f_series(3, 4).coeffs.at(0), FieldElem(1L));
}

TEST(FSeries, FunctionalEquationThroughOrderFour) {
    const int n = 2, T = 4;
    const TruncatedSeriesF f = build_f_series(n, T);
    EXPECT_EQ(f_functional_product(f, q_half(2 * (2 * n - 1))), inverse_linear_product_series(f_rhs_factors(n), T));
}

}  // namespace
