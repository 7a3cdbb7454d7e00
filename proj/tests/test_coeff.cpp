#include <bqg/coeff.hpp>

#include <gtest/gtest.h>

using namespace bqg;

namespace {

const FieldElem u = FieldElem::u(), v = FieldElem::v(), w = FieldElem::w();
const FieldElem one(1L);

TEST(Field, WSquaredIsRPlusS) { EXPECT_EQ(w * w, u * u + v * v); }

TEST(Field, InverseOfWIsConjugateOverNorm) { EXPECT_EQ(w.inv(), w / (u * u + v * v)); }

TEST(Field, RationalTimesInverseIsOne) {
    const FieldElem a = u * u - v * v;
    EXPECT_EQ(a * a.inv(), one);
}

TEST(Field, ZeroDivisionThrows) { EXPECT_THROW(one / FieldElem(0L), DivisionByZero); }

TEST(Field, CanonicalFormIsUnique) {
    const FieldElem a = (u * u - v * v) / (u - v);
    EXPECT_EQ(a, u + v);
    EXPECT_EQ(a.str(), (u + v).str());
}

TEST(Substitution, RSquaredMinusSSquared) { EXPECT_EQ(substitute_rs("r^2 - s^2"), FieldElem::u(4) - FieldElem::v(4)); }

TEST(Substitution, HalfRootFactor) {
    // (rs)^{-1/2} (r+s)^{1/2} (r-s)
    EXPECT_EQ(substitute_rs("(r s)^{-1/2} (r+s)^{1/2} (r - s)"), FieldElem::u(-1) * FieldElem::v(-1) * w * (u * u - v * v));
}

TEST(Substitution, HalfIntegerPowerOfQ) { EXPECT_EQ(substitute_rs("(r^-1 s)^{5/2}"), FieldElem::u(-5) * FieldElem::v(5)); }

TEST(Substitution, MalformedInputThrows) {
    EXPECT_THROW(substitute_rs("r +"), ParseError);
    EXPECT_THROW(substitute_rs("x"), ParseError);
}

TEST(Evaluate, AtTwoOne) { EXPECT_EQ(evaluate(u * u - v * v, {2, 1}).to_double(), 3.0); }

TEST(Evaluate, WIsHypotenuse) { EXPECT_NEAR(evaluate(w, {3, 4}).to_double(), 5.0, 1e-30); }

TEST(Evaluate, RIsSIsAPole) { EXPECT_THROW(evaluate((u * u - v * v).inv(), {1, 1}), PoleError); }

TEST(Evaluate, PrecisionIsPreservedThroughAssignment) {
    NumericElem acc(0L);
    acc = NumericElem(mpq_class(1, 3), 256);
    EXPECT_GE(acc.precision_bits(), 256u);
    acc += NumericElem(1L);
    EXPECT_GE(acc.precision_bits(), 256u);
}

using Z = RatZ<FieldElem>;

TEST(RatZ, InversionOfArgument) {
    const FieldElem r = FieldElem::rs(1, 0), s = FieldElem::rs(0, 1);
    const Z z = Z::z();
    const Z a = (z - Z(1L)) / (Z(r * r) * z - Z(s * s));
    const Z expected = (Z(1L) - z) / (Z(r * r) - Z(s * s) * z);
    EXPECT_EQ(a.compose_inverse(), expected);
}

TEST(RatZ, TimesInverseIsOne) {
    const Z a = Z::z() - Z(1L);
    EXPECT_EQ(a * a.inv(), Z(1L));
}

TEST(RatZ, SpectralFactorLeadingCoefficient) {
    // s^2 (z - 1)(z - (r^-1 s)^{2n-3}) at n = 2 has z^2 coefficient s^2.
    const FieldElem s2 = FieldElem::rs(0, 2);
    const Z p = Z(s2) * (Z::z() - Z(1L)) * (Z::z() - Z(FieldElem::rs(-1, 1)));
    EXPECT_EQ(p.num().degree(), 2);
    EXPECT_EQ(p.num().coeff(2) / p.den().coeff(0), s2);
}

TEST(RatZ, IdentityTestExactAndSampled) {
    const Z a = (Z::z() - Z(1L)) / (Z::z() + Z(1L));
    EXPECT_TRUE(ratz_identity_test(a, a, IdentityMode::exact));
    EXPECT_TRUE(ratz_identity_test(a, a, IdentityMode::sampled, 5));
    EXPECT_FALSE(ratz_identity_test(a, a + Z(1L), IdentityMode::sampled, 5));
    EXPECT_THROW(ratz_identity_test(a, a, IdentityMode::sampled, 1), InsufficientSamples);
}

}  // namespace
