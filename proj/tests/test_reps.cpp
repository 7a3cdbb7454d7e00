#include <bqg/reps.hpp>

#include <gtest/gtest.h>

using namespace bqg;

namespace {

TEST(VectorRep, HighestWeightVector) {
    for (int n : {2, 3}) {
        const FieldRep T1 = build_T1(n);
        for (int i = 1; i <= n; ++i)
            for (int r = 0; r < T1.dim(); ++r) EXPECT_TRUE(T1[gen::e(i)].get(r, 0).is_zero()) << "n=" << n << " e" << i;
    }
}

TEST(VectorRep, GroupLikesConjugateEWithStructureConstants) {
    const int n = 3;
    const FieldRep T1 = build_T1(n);
    const StructureConstants sc = structure_constants(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            EXPECT_EQ(T1[gen::w(i)] * T1[gen::e(j)], T1[gen::e(j)].scaled(sc(j, i)) * T1[gen::w(i)]) << i << "," << j;
}

TEST(VectorRep, CommutatorOfEAndF) {
    const int n = 2;
    const FieldRep T1 = build_T1(n);
    const RootData rd(n);
    for (int i = 1; i <= n; ++i) {
        const FMatrix lhs = T1[gen::e(i)] * T1[gen::f(i)] - T1[gen::f(i)] * T1[gen::e(i)];
        const FMatrix rhs = (T1[gen::w(i)] - T1[gen::wp(i)]).scaled((rd.r_i(i) - rd.s_i(i)).inv());
        EXPECT_EQ(lhs, rhs) << "i = " << i;
    }
}

TEST(VectorRep, AllBRelationsHold) {
    for (int n : {2, 3})
        for (int b = 1; b <= 5; ++b)
            EXPECT_EQ(check_B_relation(build_T1(n), b, finite_indices(n)).status, Status::pass) << "n=" << n << " B" << b;
}

TEST(AffineRep, ZeroModesAreTheFiniteGenerators) {
    const int n = 2;
    const FieldRep A = build_affine_vector(n, 2), T1 = build_T1(n);
    for (int i = 1; i <= n; ++i) {
        EXPECT_EQ(A[gen::xp(i, 0)], T1[gen::e(i)]);
        EXPECT_EQ(A[gen::xm(i, 0)], T1[gen::f(i)]);
    }
}

TEST(AffineRep, DRelationsHold) {
    for (int n : {2, 3})
        for (const auto& [name, o] : check_D_relations(build_affine_vector(n, 2), 2))
            EXPECT_NE(o.status, Status::fail) << "n=" << n << " " << name << ": " << o.witness;
}

TEST(Evaluation, CommutatorOfE0AndF0) {
    const PolyRep Tz = build_evaluation(2);
    const PMatrix lhs = Tz[gen::e(0)] * Tz[gen::f(0)] - Tz[gen::f(0)] * Tz[gen::e(0)];
    const PMatrix diff = Tz[gen::w(0)] - Tz[gen::wp(0)];
    EXPECT_EQ(lhs.scaled(rs(2, 0) - rs(0, 2)), diff);
}

TEST(Evaluation, F0CarriesInverseZ) {
    const PolyRep Tz = build_evaluation(2);
    bool seen = false;
    Tz[gen::f(0)].for_each([&](int, int, const Poly& p) {
        for (const auto& [m, c] : p.terms()) {
            EXPECT_EQ(m.e[kZ], -1);
            seen = true;
        }
    });
    EXPECT_TRUE(seen);
}

TEST(Evaluation, Omega1ConjugatesE0ByTheTableConstant) {
    const int n = 2;
    const PolyRep Tz = build_evaluation(n);
    const PMatrix& w1 = Tz[gen::w(1)];
    const PMatrix& w1_inv = Tz[gen::w_inv(1)];
    const PMatrix& e0 = Tz[gen::e(0)];
    const FieldElem c = structure_constants(n)(0, 1);
    EXPECT_EQ(w1 * e0 * w1_inv, e0.scaled(detail::lift_coefficient<Poly>(c)));
    EXPECT_NE(w1 * e0, (e0 * w1).scaled(rs(2, -2)));
}

TEST(Coproduct, GroupLikesAndSkewPrimitives) {
    const FieldRep T1 = build_T1(2);
    const FMatrix I = FMatrix::identity(5);
    EXPECT_EQ(coproduct_image(T1, T1, gen::w(1)), kron(T1[gen::w(1)], T1[gen::w(1)]));
    EXPECT_EQ(coproduct_image(T1, T1, gen::e(1)), kron(T1[gen::e(1)], I) + kron(T1[gen::w(1)], T1[gen::e(1)]));
    EXPECT_EQ(coproduct_image(T1, T1, gen::f(2)), kron(I, T1[gen::f(2)]) + kron(T1[gen::f(2)], T1[gen::wp(2)]));
}

TEST(Words, EmptyWordIsIdentity) { EXPECT_EQ(rep_eval_expr(build_T1(2), NCWord::one()), FMatrix::identity(5)); }

TEST(Words, UnassignedGeneratorThrows) {
    EXPECT_THROW(rep_eval_expr(build_T1(2), NCWord::letter("e9")), UnassignedGenerator);
}

TEST(TypeD, TwoDimensionalAnticommutes) {
    const TypeDWitness t = build_typeD_witness(2);
    EXPECT_EQ(t.p, Cyclotomic(-1L));
    EXPECT_EQ(t.X * t.Y, (t.Y * t.X).scaled(Cyclotomic(-1L)));
}

TEST(TypeD, OrdersAndRelationForThree) {
    const TypeDWitness t = build_typeD_witness(3);
    const CMatrix I = CMatrix::identity(3);
    EXPECT_EQ(t.X * t.X * t.X, I);
    EXPECT_EQ(t.Y * t.Y * t.Y, I);
    EXPECT_TRUE((t.X * t.Y - (t.Y * t.X).scaled(t.p)).is_zero());
    // For odd ell the displayed matrices are used unchanged.
    EXPECT_EQ(displayed_typeD_matrices(3).Y, t.Y);
}

}  // namespace
