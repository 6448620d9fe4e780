#include "support.hpp"

namespace qwalk {
namespace {

TEST(QSqrt2, FieldArithmetic) {
  const QSqrt2 r = QSqrt2::sqrt2();
  EXPECT_EQ(r * r, QSqrt2(2));
  EXPECT_EQ(QSqrt2(1) / r, QSqrt2(mpq_class(0), mpq_class(1, 2)));
  EXPECT_EQ((QSqrt2(1) + r) * (QSqrt2(1) - r), QSqrt2(-1));
  EXPECT_THROW(QSqrt2(1) / QSqrt2(0), std::domain_error);
}

TEST(QSqrt2, SignIsExact) {
  // 99/70 is a continued-fraction convergent of sqrt2 from above
  EXPECT_EQ((QSqrt2(mpq_class(99, 70)) - QSqrt2::sqrt2()).sign(), 1);
  EXPECT_EQ((QSqrt2(mpq_class(140, 99)) - QSqrt2::sqrt2()).sign(), -1);
  EXPECT_EQ(QSqrt2(0).sign(), 0);
  EXPECT_TRUE(QSqrt2(1) < QSqrt2::sqrt2());
  EXPECT_EQ(abs(QSqrt2(mpq_class(1), mpq_class(-1))), QSqrt2(mpq_class(-1), mpq_class(1)));
}

TEST(QSqrt2, FromDoubleIsExact) {
  const QSqrt2 x = QSqrt2::from_double(0.1);
  EXPECT_EQ(x.rational_part(), mpq_class(0.1));
  EXPECT_EQ(x.to_double(), 0.1);
  EXPECT_THROW(QSqrt2::from_double(std::nan("")), std::invalid_argument);
}

TEST(MpReal, HonoursWorkingPrecision) {
  PrecisionScope scope(200);
  const mp_real third = mp_real(1L) / mp_real(3L);
  EXPECT_EQ(mpfr_get_prec(third.get()), 200);
  // 1/3 * 3 - 1 vanishes at any precision only up to rounding; at 200 bits it is below 2^-190
  EXPECT_LT(std::abs((third * mp_real(3L) - mp_real(1L)).to_double()), std::ldexp(1.0, -190));
  EXPECT_NEAR(mp_real::pi().to_double(), std::numbers::pi, 1e-16);
}

TEST(MpReal, PrecisionScopeRestores) {
  const auto before = working_precision();
  {
    PrecisionScope scope(512);
    EXPECT_EQ(working_precision(), 512);
  }
  EXPECT_EQ(working_precision(), before);
}

TEST(CompensatedSum, RecoversLostLowOrderBits) {
  CompensatedSum<double> s;
  double naive = 0;
  for (double v : {1.0, 1e100, 1.0, -1e100}) {
    s.add(v);
    naive += v;
  }
  EXPECT_EQ(s.get(), 2.0);
  EXPECT_EQ(naive, 0.0);
}

TEST(Combinatorics, BinomialAndMultinomial) {
  EXPECT_EQ(binomial(4, 2), 6);
  EXPECT_EQ(binomial(5, 7), 0);
  EXPECT_EQ(binomial(5, -1), 0);
  EXPECT_EQ(multinomial({2, 1, 1}), 12);
  EXPECT_EQ(multinomial({3, -1}), 0);
  EXPECT_EQ(multinomial({}), 1);
  EXPECT_EQ(binomial(100, 50), mpz_class("100891344545564193334812497256"));
  EXPECT_EQ(bit_length(mpz_class(255)), 8);
  EXPECT_EQ(bit_length(mpz_class(0)), 0);
}

TEST(ArithmeticMode, ParsesNames) {
  EXPECT_EQ(parse_mode("exact"), ArithmeticMode::exact);
  EXPECT_EQ(parse_mode("double"), ArithmeticMode::double_precision);
  EXPECT_EQ(to_string(ArithmeticMode::adaptive), "adaptive");
  EXPECT_THROW(parse_mode("quad"), std::invalid_argument);
}

} // namespace
} // namespace qwalk
