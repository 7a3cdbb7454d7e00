#include <bqg/lyndon.hpp>

#include <gtest/gtest.h>

using namespace bqg;

namespace {

NCWord e(int i) { return NCWord::letter(gen::e(i)); }

TEST(RootVectors, SimpleRootIsALetter) {
    const IndexScheme sc(3);
    for (int i = 1; i <= 3; ++i) EXPECT_EQ(build_root_vector(sc, {i, i + 1}, Family::E), e(i));
}

TEST(RootVectors, StepThroughTheShortRoot) {
    for (int n : {2, 3}) {
        const IndexScheme sc(n);
        const FieldRep T1 = build_T1(n);
        const NCWord mid = build_root_vector(sc, {n - 1, n + 1}, Family::E);
        const NCWord expected = mid * e(n) - FieldElem::rs(1, 1) * (e(n) * mid);
        EXPECT_EQ(rep_eval_expr(T1, build_root_vector(sc, {n - 1, sc.prime(n)}, Family::E)), rep_eval_expr(T1, expected));
    }
}

TEST(RootVectors, ZetaMapsEToEPrime) {
    const IndexScheme sc(3);
    for (const auto& l : root_labels(sc))
        EXPECT_EQ(build_root_vector(sc, l, Family::E).zeta(), build_root_vector(sc, l, Family::Eprime)) << label_name(sc, l);
}

TEST(RootVectors, InvalidLabelThrows) {
    EXPECT_THROW(build_root_vector(IndexScheme(2), {2, 4}, Family::E), InvalidLabel);
}

TEST(BTable, SimpleEntries) {
    for (int n : {2, 3}) {
        const IndexScheme sc(n);
        const BTable B = build_B_plus(n);
        EXPECT_EQ(B(1, 2), substitute_rs("r^2 - s^2"));
        EXPECT_EQ(B(1, sc.prime(n)), substitute_rs("-r^{-3/2} s^{-1/2} (r - s)"));
        EXPECT_EQ(B(n, sc.prime(1)), substitute_rs("r^{-" + std::to_string(2 * n - 1) + "/2} s^{" + std::to_string(2 * n - 1) + "/2} (r - s)"));
    }
}

TEST(LMatrix, DiagonalEntries) {
    const int n = 3;
    const IndexScheme sc(n);
    const LMatrixSymbolic L = assemble_L_plus(n);
    const FieldRep T1 = build_T1(n);
    for (int i = 1; i <= n; ++i)
        EXPECT_EQ(rep_eval_expr(T1, L.expr(i, i)), rep_eval_expr(T1, eps_twist(sc, i, -1))) << "row " << i;
    EXPECT_EQ(rep_eval_expr(T1, L.expr(n + 1, n + 1)), FMatrix::identity(sc.N()));
}

TEST(LMatrix, ShortSimpleEntry) {
    const int n = 2;
    const LMatrixSymbolic L = assemble_L_plus(n);
    const FieldRep T1 = build_T1(n);
    const NCWord expected = build_B_plus(n)(n, n + 1) * (e(n) * NCWord::letter(gen::wp_inv(n)));
    EXPECT_EQ(rep_eval_expr(T1, L.expr(n, n + 1)), rep_eval_expr(T1, expected));
}

TEST(LMatrix, UpperTriangular) {
    const LMatrixSymbolic L = assemble_L_plus(2);
    for (const auto& [pos, entry] : L.entries) EXPECT_LE(pos.first, pos.second);
}

TEST(Appendix, FirstChainExpansionIsTrivial) {
    const IndexScheme sc(3);
    for (int i = 2; i <= 4; ++i) {
        const AppendixLabel a{AppendixForm::chain, i, 1};
        EXPECT_EQ(appendix_expand(sc, a), build_root_vector(sc, {i - 1, i}, Family::E));
    }
}

TEST(Appendix, DownExpansionMatchesPrimedVector) {
    const int n = 3;
    const IndexScheme sc(n);
    const FieldRep T1 = build_T1(n);
    const AppendixLabel a{AppendixForm::down, 1, 0};  // E'_{n-2,(n-1)'}
    EXPECT_EQ(rep_eval_expr(T1, appendix_expand(sc, a)),
              rep_eval_expr(T1, build_root_vector(sc, appendix_target(sc, a), Family::Eprime)));
}

TEST(Appendix, AllExpansionsUnderT1) {
    EXPECT_EQ(check_appendix(2, build_T1(2)).status, Status::pass);
    EXPECT_EQ(check_appendix(3, build_T1(3)).status, Status::pass);
}

TEST(Metric, HoldsUnderT1) {
    for (int n : {2, 3}) {
        EXPECT_EQ(check_metric(n, build_T1(n), +1).status, Status::pass) << n;
        EXPECT_EQ(check_metric(n, build_T1(n), -1).status, Status::pass) << n;
    }
}

}  // namespace
