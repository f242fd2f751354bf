#include "oracles.hpp"
#include "slowent/lattice.hpp"

#include <gtest/gtest.h>

using namespace slowent;

TEST(Lattice, BoxSizes) {
  ActionSpec one;
  EXPECT_EQ(one.lambda(5), BigInt(5));
  ActionSpec two{1, Sidedness::TwoSided};
  EXPECT_EQ(two.lambda(5), BigInt(9));
  ActionSpec plane{2, Sidedness::OneSided};
  EXPECT_EQ(plane.lambda(3), BigInt(9));
  ActionSpec cube{3, Sidedness::TwoSided};
  EXPECT_EQ(cube.lambda(2), BigInt(27));
}

TEST(Lattice, WordRoundTrip) {
  Word w = {0, 1, 9, 10, 35};
  EXPECT_EQ(word_to_string(w), "019az");
  EXPECT_EQ(word_from_string("019az"), w);
}

TEST(Lattice, FirstDisagreementOnWords) {
  EXPECT_EQ(first_disagreement(word_from_string("0110"), word_from_string("0100")), 3u);
  EXPECT_EQ(first_disagreement(word_from_string("1"), word_from_string("0")), 1u);
  EXPECT_FALSE(first_disagreement(word_from_string("0110"), word_from_string("0110")).has_value());
  EXPECT_THROW(first_disagreement(word_from_string("011"), word_from_string("0110")), Error);
}

TEST(Lattice, FirstDisagreementOnPlane) {
  ActionSpec plane{2, Sidedness::OneSided};
  // 3x3 boxes, row-major; differ only at (2, 0), which first lies in H_3
  Configuration a(plane, 3, {0, 0, 0, 0, 0, 0, 0, 0, 0});
  std::vector<Symbol> d(9, 0);
  d[6] = 1;
  Configuration b(plane, 3, d);
  EXPECT_EQ(first_disagreement(a, b), 3u);
  EXPECT_EQ(metric_distance(a, b), Rational(1, 9));
}

TEST(Lattice, MetricIsAnUltrametric) {
  oracle::Rng rng(5);
  ActionSpec one;
  for (int i = 0; i < 500; ++i) {
    std::size_t len = 1 + rng.below(12);
    Word x = rng.word(len, 2), y = rng.word(len, 2), z = rng.word(len, 2);
    Rational dxy = metric_distance(one, first_disagreement(x, y));
    Rational dyz = metric_distance(one, first_disagreement(y, z));
    Rational dxz = metric_distance(one, first_disagreement(x, z));
    EXPECT_LE(dxz, std::max(dxy, dyz));
    EXPECT_EQ(dxy, metric_distance(one, first_disagreement(y, x)));
  }
}

TEST(Lattice, CylinderDepthForRadius) {
  ActionSpec one;
  EXPECT_EQ(cylinder_depth_for_radius(one, Rational(1, 2)), 1u);
  EXPECT_EQ(cylinder_depth_for_radius(one, Rational(2, 5)), 2u);
  EXPECT_EQ(cylinder_depth_for_radius(one, Rational(1, 4)), 3u);
  EXPECT_EQ(cylinder_depth_for_radius(one, Rational(1, 13)), 12u);
  EXPECT_EQ(cylinder_depth_for_radius(one, Rational(3, 4)), 1u);
  EXPECT_THROW(cylinder_depth_for_radius(one, Rational(1)), Error);
  EXPECT_THROW(cylinder_depth_for_radius(one, Rational(0)), Error);
  oracle::Rng rng(8);
  for (int i = 0; i < 300; ++i) {
    Rational eps(1 + rng.below(50), 51 + rng.below(500));
    eps.canonicalize();
    std::uint64_t n = cylinder_depth_for_radius(one, eps);
    EXPECT_LE(Rational(1, n + 1), eps);
    EXPECT_LT(eps, Rational(1, n));
  }
}

TEST(Lattice, BowenBallIsACylinder) {
  ActionSpec one;
  BowenBall b{word_from_string("0110101"), 3, Rational(1, 4)};
  CylinderSet c = bowen_ball_as_cylinder(one, b);
  EXPECT_EQ(c.depth(), 3u + 3 - 1);
  EXPECT_EQ(c.stem, word_from_string("01101"));
  // every point of the cylinder stays eps-close along the first k shifts
  oracle::Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    Word x = c.stem;
    for (int k = 0; k < 3; ++k) x.push_back(static_cast<Symbol>(rng.below(2)));
    for (std::uint64_t j = 0; j < b.order; ++j) {
      Word u(b.center.begin() + j, b.center.begin() + j + 3), v(x.begin() + j, x.begin() + j + 3);
      EXPECT_LE(metric_distance(one, first_disagreement(u, v)), b.radius);
    }
  }
  BowenBall short_center{word_from_string("01"), 3, Rational(1, 4)};
  EXPECT_THROW(bowen_ball_as_cylinder(one, short_center), Error);
}

TEST(Lattice, PowerBallDepth) {
  ActionSpec one;
  BowenBall b{Word(40, 0), 5, Rational(1, 4)};
  EXPECT_EQ(power_ball_as_cylinder(one, 1, b).depth(), bowen_ball_as_cylinder(one, b).depth());
  EXPECT_EQ(power_ball_as_cylinder(one, 2, b).depth(), 2u * 4 + 3);
  EXPECT_EQ(power_ball_as_cylinder(one, 3, b).depth(), 3u * 4 + 3);
  EXPECT_THROW(power_ball_as_cylinder(one, 4, b), Error);
}

TEST(Lattice, CylinderRelations) {
  CylinderSet a{word_from_string("01")}, b{word_from_string("0110")}, c{word_from_string("00")};
  EXPECT_TRUE(a.contains(b));
  EXPECT_FALSE(b.contains(a));
  EXPECT_TRUE(a.disjoint(c));
  EXPECT_FALSE(a.disjoint(b));
  EXPECT_TRUE(a.contains(word_from_string("0111")));
  EXPECT_EQ(a.diameter(ActionSpec{}), Rational(1, 3));
}

TEST(Lattice, HigherRankGeometryIsRejectedForCovers) {
  EXPECT_NO_THROW(require_one_sided_line(ActionSpec{}, "test"));
  EXPECT_THROW(require_one_sided_line(ActionSpec{2, Sidedness::OneSided}, "test"), Error);
  EXPECT_THROW(require_one_sided_line(ActionSpec{1, Sidedness::TwoSided}, "test"), Error);
}
