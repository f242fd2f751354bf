#include "oracles.hpp"
#include "slowent/exact_real.hpp"
#include "slowent/numeric.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace slowent;

TEST(Rational, ParsesFractionsAndIntegers) {
  EXPECT_EQ(parse_rational("3/10"), Rational(3, 10));
  EXPECT_EQ(parse_rational("6/20"), Rational(3, 10));
  EXPECT_EQ(parse_rational("-1/4"), Rational(-1, 4));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(to_string(Rational(6, 4)), "3/2");
  EXPECT_EQ(to_string(Rational(4, 2)), "2");
}

TEST(Rational, RejectsDecimalsAndJunk) {
  for (const char* bad : {"0.3", "1e-3", "", "1/0", "a/b", "1//2"}) {
    EXPECT_THROW(parse_rational(bad), Error) << bad;
  }
}

TEST(Rational, ExactRationalOfLongDouble) {
  EXPECT_EQ(exact_rational(0.5L), Rational(1, 2));
  EXPECT_EQ(exact_rational(-3.25L), Rational(-13, 4));
  EXPECT_EQ(exact_rational(0.0L), Rational(0));
  long double x = 0.1L;
  EXPECT_EQ(to_long_double(exact_rational(x)), x);
}

TEST(Interval, PowerWeightEnclosesTrueValue) {
  oracle::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    std::uint64_t base = 2 + rng.below(5000);
    std::uint64_t den = 1 + rng.below(40);
    std::int64_t num = static_cast<std::int64_t>(rng.below(4 * den));
    Interval iv = power_weight_interval(base, num, den);
    long double v = std::pow(static_cast<long double>(base), -static_cast<long double>(num) / den);
    EXPECT_LE(iv.lo, v * (1 + 1e-15L));
    EXPECT_GE(iv.hi, v * (1 - 1e-15L));
    EXPECT_LE(iv.lo, iv.hi);
  }
  Interval one = power_weight_interval(7, 0, 1);
  EXPECT_EQ(one.lo, 1);
  EXPECT_EQ(one.hi, 1);
}

TEST(Interval, CertainCompare) {
  EXPECT_EQ(certain_compare({1, 2}, {3, 4}), -1);
  EXPECT_EQ(certain_compare({3, 4}, {1, 2}), 1);
  EXPECT_EQ(certain_compare({1, 3}, {2, 4}), 0);
}

TEST(Exponent, LowestTerms) {
  Exponent e = Exponent::from(Rational(6, 4));
  EXPECT_EQ(e.num, 3);
  EXPECT_EQ(e.den, 2u);
  EXPECT_EQ(e.rational(), Rational(3, 2));
}

TEST(ExactReal, PerfectPowersCollapseToRationals) {
  EXPECT_EQ(ExactReal::power_weight(4, Exponent::from(Rational(1, 2))).as_rational(), Rational(1, 2));
  EXPECT_EQ(ExactReal::power_weight(8, Exponent::from(Rational(2, 3))).as_rational(), Rational(1, 4));
  EXPECT_EQ(ExactReal::power_weight(12, Exponent::from(Rational(1))).as_rational(), Rational(1, 12));
  EXPECT_FALSE(ExactReal::power_weight(2, Exponent::from(Rational(1, 2))).as_rational().has_value());
}

TEST(ExactReal, MixedRootsShareCanonicalForm) {
  // 6^{-1/2} = 2^{-1/2} 3^{-1/2}; 36^{-1/4} is the same number
  ExactReal a = ExactReal::power_weight(6, Exponent::from(Rational(1, 2)));
  ExactReal b = ExactReal::power_weight(36, Exponent::from(Rational(1, 4)));
  EXPECT_EQ(compare(a, b), 0);
  EXPECT_TRUE((a - b).is_zero());
}

TEST(ExactReal, SignOfNearlyCancellingSum) {
  // sqrt(2) - 1414213562373095/10^15 > 0, about 4.9e-17
  ExactReal r2 = ExactReal::power_weight(2, Exponent::from(Rational(1, 2))) * Rational(2);
  ExactReal q = ExactReal::rational(Rational(BigInt("1414213562373095"), BigInt("1000000000000000")));
  EXPECT_EQ(compare(r2, q), 1);
  ExactReal q2 = ExactReal::rational(Rational(BigInt("1414213562373096"), BigInt("1000000000000000")));
  EXPECT_EQ(compare(r2, q2), -1);
}

TEST(ExactReal, CompareAgreesWithRationalArithmetic) {
  oracle::Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    Rational a(static_cast<long>(rng.below(1000)) - 500, 1 + rng.below(97));
    Rational b(static_cast<long>(rng.below(1000)) - 500, 1 + rng.below(97));
    a.canonicalize();
    b.canonicalize();
    int want = a < b ? -1 : a > b ? 1 : 0;
    EXPECT_EQ(compare(ExactReal::rational(a), ExactReal::rational(b)), want);
  }
}

TEST(ExactReal, SumsOfWeightsMatchFloatingPointWhenSeparated) {
  oracle::Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    Exponent s = Exponent::from(Rational(1 + rng.below(15), 1 + rng.below(8)));
    ExactReal x, y;
    long double fx = 0, fy = 0;
    for (int k = 0; k < 4; ++k) {
      std::uint64_t bx = 2 + rng.below(60), by = 2 + rng.below(60);
      Rational cx(1 + rng.below(9)), cy(1 + rng.below(9));
      x += ExactReal::power_weight(bx, s) * cx;
      y += ExactReal::power_weight(by, s) * cy;
      fx += std::pow(static_cast<long double>(bx), -s.value()) * to_long_double(cx);
      fy += std::pow(static_cast<long double>(by), -s.value()) * to_long_double(cy);
    }
    if (std::fabs(fx - fy) < 1e-9L * (fx + fy)) continue;
    EXPECT_EQ(compare(x, y), fx < fy ? -1 : 1);
    Interval ix = x.enclosure();
    EXPECT_LE(ix.lo, fx * (1 + 1e-12L));
    EXPECT_GE(ix.hi, fx * (1 - 1e-12L));
  }
}

TEST(Factorize, SmallNumbers) {
  using F = std::vector<std::pair<std::uint64_t, std::uint64_t>>;
  EXPECT_EQ(factorize(360), (F{{2, 3}, {3, 2}, {5, 1}}));
  EXPECT_EQ(factorize(97), (F{{97, 1}}));
  EXPECT_TRUE(factorize(1).empty());
}
