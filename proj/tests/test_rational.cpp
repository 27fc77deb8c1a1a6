#include <gtest/gtest.h>

#include "kontsevich/rational.hpp"

using namespace kontsevich;

TEST(Rational, CanonicalForm) {
  BigRational r = make_rational(6, -8);
  EXPECT_EQ(to_string(r), "-3/4");
  EXPECT_EQ(r.get_den(), 4);
  EXPECT_EQ(make_rational(0, 5), BigRational(0));
  EXPECT_EQ(to_string(make_rational(10, 5)), "2");
}

TEST(Rational, ParseRejectsFloats) {
  EXPECT_EQ(parse_rational("-12/18"), make_rational(-2, 3));
  EXPECT_EQ(parse_rational("+7"), BigRational(7));
  EXPECT_THROW(parse_rational("0.5"), Error);
  EXPECT_THROW(parse_rational("1e3"), Error);
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("1/-2"), Error);
  EXPECT_THROW(parse_rational(""), Error);
  EXPECT_THROW(parse_rational("x"), Error);
}

TEST(Rational, DecimalRounding) {
  EXPECT_EQ(to_decimal(make_rational(1, 24)), "0.0416666666667");
  EXPECT_EQ(to_decimal(make_rational(1, 2)), "0.5");
  EXPECT_EQ(to_decimal(BigRational(1)), "1");
  EXPECT_EQ(to_decimal(BigRational(0)), "0");
  EXPECT_EQ(to_decimal(make_rational(-1, 3)), "-0.333333333333");
  EXPECT_EQ(to_decimal(make_rational(1, 112640)), "8.87784090909e-06");
  EXPECT_EQ(to_decimal(make_rational(2, 3)), "0.666666666667");
  // half-even on an exact tie: 0.1234567890125 -> ...012, ...0135 -> ...014
  EXPECT_EQ(to_decimal(make_rational(1234567890125LL, 10000000000000LL)), "0.123456789012");
  EXPECT_EQ(to_decimal(make_rational(1234567890135LL, 10000000000000LL)), "0.123456789014");
  EXPECT_EQ(to_decimal(make_rational(999999999999950LL, 1000)), "1e+12");
}

TEST(PiMonomial, AdditionNeedsEqualPowers) {
  PiMonomial a{make_rational(1, 2), 3}, b{make_rational(1, 3), 3}, c{1, 2};
  EXPECT_EQ((a + b).coeff, make_rational(5, 6));
  EXPECT_THROW(a + c, std::invalid_argument);
  EXPECT_EQ((a * c).pi_power, 5u);
  EXPECT_EQ(to_string(a), "1/2*pi^3");
}
