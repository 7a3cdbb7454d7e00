#include <bqg/rll.hpp>

#include <gtest/gtest.h>

using namespace bqg;

namespace {

using Op = OperatorMatrix<FieldElem>;

TEST(QuasiDeterminant, TwoByTwoScalarBlocks) {
    const FieldElem a = FieldElem::rs(1, 0), b = FieldElem::rs(0, 1), c = FieldElem::w(), d = FieldElem(3L);
    FMatrix X(2, 2);
    X.set(0, 0, a);
    X.set(0, 1, b);
    X.set(1, 0, c);
    X.set(1, 1, d);
    const FMatrix q = quasi_determinant(Op(X, 2), 2, 2);
    EXPECT_EQ(q.get(0, 0), d - c * a.inv() * b);
}

TEST(QuasiDeterminant, DiagonalOperatorMatrix) {
    FMatrix D(4, 4);
    D.set(0, 0, FieldElem(2L));
    D.set(0, 1, FieldElem(5L));
    D.set(1, 1, FieldElem::u());
    D.set(2, 2, FieldElem::v());
    D.set(3, 3, FieldElem(7L));
    const Op X(D, 2);
    EXPECT_EQ(quasi_determinant(X, 1, 1), X.block(1, 1));
}

TEST(QuasiDeterminant, SingularDeletionThrows) {
    FMatrix X(2, 2);
    X.set(0, 1, FieldElem(1L));
    X.set(1, 0, FieldElem(1L));
    EXPECT_THROW(quasi_determinant(Op(X, 2), 2, 2), QuasiDeterminantError);
}

TEST(Gauss, DiagonalHasTrivialTriangularFactors) {
    FMatrix D = FMatrix::diagonal({FieldElem(2L), FieldElem::u(), FieldElem::v(), FieldElem::w()});
    const auto g = gauss_decompose(Op(D, 2));
    EXPECT_EQ(g.F.flat(), FMatrix::identity(4));
    EXPECT_EQ(g.E.flat(), FMatrix::identity(4));
    EXPECT_EQ(g.K.flat(), D);
}

TEST(Gauss, UnitUpperTriangularIsItsOwnEFactor) {
    FMatrix U = FMatrix::identity(4);
    U.set(0, 2, FieldElem::u());
    U.set(1, 3, FieldElem::v());
    U.set(0, 3, FieldElem(2L));
    const auto g = gauss_decompose(Op(U, 2));
    EXPECT_EQ(g.F.flat(), FMatrix::identity(4));
    EXPECT_EQ(g.K.flat(), FMatrix::identity(4));
    EXPECT_EQ(g.E.flat(), U);
}

TEST(Gauss, RepresentationLMatchesEliminationOracle) {
    const RepL L = build_rep_L(2, LRole::plus);
    for (const FieldElem& z : z_sample_points(7)) {
        const Op Lz(eval_z(L.matrix, z), L.aux_size(), LRole::plus);
        const auto g = gauss_decompose(Lz);
        const auto o = elimination_oracle(Lz);
        EXPECT_EQ(g.K.block(2, 2), o.K.block(2, 2)) << "z = " << z.str();
        EXPECT_EQ(g.product().flat(), Lz.flat()) << "z = " << z.str();
    }
}


TEST(LMatrix, ZeroModeIsBlockUpperTriangular) { EXPECT_EQ(check_L_triangularity(2).status, Status::pass); }

TEST(LMatrix, RLLRelation) {
    EXPECT_EQ(check_rll_spectral(2, LRole::plus).status, Status::pass);
    EXPECT_EQ(check_rll_spectral(2, LRole::minus).status, Status::pass);
}

TEST(LMatrix, MetricUnnormalizedAndNormalized) {
    EXPECT_EQ(check_metric_unnormalized(2).status, Status::pass);
    EXPECT_EQ(check_metric_normalized(2, 4).status, Status::pass);
}

TEST(Relations, KCommuteAtSampledPoints) {
    const auto reports = check_k_relations<FieldElem>(build_rep_L(2, LRole::plus), z_sample_points(7), exact_converter());
    ASSERT_FALSE(reports.empty());
    for (const auto& r : reports) EXPECT_NE(r.outcome.status, Status::fail) << r.id << ": " << r.outcome.witness;
}

}  // namespace
