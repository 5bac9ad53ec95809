#include <gtest/gtest.h>

#include <cmath>

#include "limsup/bounded_real.hpp"
#include "limsup/error.hpp"
#include "limsup/rational.hpp"

using namespace limsup;

TEST(Rational, CanonicalForm) {
    const Rational q(BigInt(6), BigInt(-4));
    EXPECT_EQ(q.num(), BigInt(-3));
    EXPECT_EQ(q.den(), BigInt(2));
    EXPECT_EQ(Rational(0).den(), BigInt(1));
    EXPECT_THROW(Rational(BigInt(1), BigInt(0)), DomainError);
}

TEST(Rational, Parse) {
    EXPECT_EQ(Rational::parse("3"), Rational(3));
    EXPECT_EQ(Rational::parse("-7/14"), Rational(-1) / Rational(2));
    EXPECT_EQ(Rational::parse("0.25"), Rational(1) / Rational(4));
    EXPECT_EQ(Rational::parse("-1.5"), Rational(-3) / Rational(2));
    EXPECT_EQ(Rational::parse(".5"), Rational(1) / Rational(2));
    EXPECT_THROW(Rational::parse("1/0"), DomainError);
    EXPECT_THROW(Rational::parse("abc"), DomainError);
    EXPECT_THROW(Rational::parse(""), DomainError);
}

TEST(Rational, FloorCeil) {
    EXPECT_EQ(Rational::parse("7/2").floor(), BigInt(3));
    EXPECT_EQ(Rational::parse("7/2").ceil(), BigInt(4));
    EXPECT_EQ(Rational::parse("-7/2").floor(), BigInt(-4));
    EXPECT_EQ(Rational::parse("-7/2").ceil(), BigInt(-3));
    EXPECT_EQ(Rational(5).floor(), BigInt(5));
}

TEST(Rational, ArithmeticAndOrder) {
    const Rational a = Rational::parse("1/3"), b = Rational::parse("1/6");
    EXPECT_EQ(a + b, Rational::parse("1/2"));
    EXPECT_EQ(a - b, b);
    EXPECT_EQ(a * b, Rational::parse("1/18"));
    EXPECT_EQ(a / b, Rational(2));
    EXPECT_LT(b, a);
    EXPECT_EQ(-a, Rational::parse("-1/3"));
    EXPECT_EQ(a.str(), "1/3");
    EXPECT_EQ(Rational(4).str(), "4");
    EXPECT_THROW(a / Rational(0), DomainError);
}

TEST(BoundedReal, ExactInputsHaveZeroWidthWhenRepresentable) {
    const BoundedReal x(Rational::parse("3/4"), 64);
    EXPECT_TRUE(x.is_exact());
    EXPECT_DOUBLE_EQ(x.value(), 0.75);
    const BoundedReal third(Rational::parse("1/3"), 64);
    EXPECT_FALSE(third.is_exact());
    EXPECT_LE(third.error(), std::ldexp(1.0, -63));
    EXPECT_TRUE(third.certainly_greater(Rational::parse("333333/1000000")));
    EXPECT_TRUE(third.certainly_less(Rational::parse("333334/1000000")));
}

TEST(BoundedReal, LogEnclosesTrueValue) {
    const BoundedReal l = log(BoundedReal(Rational(2), 128));
    EXPECT_NEAR(l.value(), std::log(2.0), 1e-15);
    EXPECT_LT(l.error(), 1e-35);
    EXPECT_THROW(log(BoundedReal(Rational(0), 64)), DomainError);
}

TEST(BoundedReal, FloorLogConvention) {
    EXPECT_DOUBLE_EQ(floor_log(BoundedReal(Rational(2), 64)).value(), 1.0);
    EXPECT_NEAR(floor_log(BoundedReal(Rational(100), 128)).value(), std::log(100.0), 1e-14);
}

TEST(BoundedReal, FloorCheckedGuards) {
    EXPECT_EQ(BoundedReal(Rational::parse("5/2"), 128).floor_checked(64), BigInt(2));
    EXPECT_THROW(BoundedReal(Rational(3), 128).floor_checked(64), PrecisionError);
}

TEST(BoundedReal, DivisionByEnclosureOfZeroThrows) {
    EXPECT_THROW(BoundedReal(Rational(1), 64) / BoundedReal(Rational(0), 64), PrecisionError);
}
