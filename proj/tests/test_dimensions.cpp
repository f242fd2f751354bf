#include "oracles.hpp"
#include "slowent/dimensions.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace slowent;

namespace {

SubsetDescriptor sparse(int b, Rational beta = 2) {
  SparseProduct sp;
  sp.branching = b;
  sp.free.kind = FreePositions::Kind::Powers;
  sp.free.parameter = beta;
  return SubsetDescriptor::sparse_product(sp, b);
}

SubsetDescriptor point(const char* x) { return SubsetDescriptor::finite({EventuallyPeriodic::parse(x)}, 2); }

}  // namespace

TEST(Hausdorff, MinimumDepthForDiameter) {
  EXPECT_EQ(hausdorff_min_depth(Rational(1, 2)), 1u);
  EXPECT_EQ(hausdorff_min_depth(Rational(1, 10)), 9u);
  EXPECT_EQ(hausdorff_min_depth(Rational(2, 7)), 3u);
  // every cylinder of that depth has diameter <= delta
  for (int q = 2; q < 40; ++q) {
    Rational delta(3, q * 2 + 1);
    delta.canonicalize();
    std::uint64_t d = hausdorff_min_depth(delta);
    EXPECT_LE(Rational(1, d + 1), delta);
  }
}

TEST(BoxCounting, UsesTheCylinderDepthOfTheRadius) {
  SubsetDescriptor z = sparse(2);
  EXPECT_EQ(box_counting(z, Rational(1, 8)), prefix_count(z, 7));
  EXPECT_EQ(box_counting(point("(0)"), Rational(1, 100)), BigInt(1));
  EXPECT_THROW(box_counting(z, Rational(1)), Error);
}

TEST(Growth, BoxAndOpenCoverExponentsAgree) {
  for (auto z : {point("(0)"), SubsetDescriptor::regular(Dfa::zeros_then_ones()), sparse(2), sparse(3), sparse(4),
                 SubsetDescriptor::regular(Dfa::full_shift(3))}) {
    GrowthExponent b = box_dimension_upper(z), h = open_cover_slow_entropy(z);
    EXPECT_TRUE(same_exponent(b, h));
  }
  GrowthExponent g3 = open_cover_slow_entropy(sparse(3));
  EXPECT_NEAR(g3.value, std::log2(3.0), 1e-9);
  GrowthExponent g4 = box_dimension_upper(sparse(4));
  ASSERT_TRUE(g4.exact.has_value());
  EXPECT_EQ(*g4.exact, Rational(2));
  EXPECT_TRUE(box_dimension_upper(SubsetDescriptor::regular(Dfa::golden_mean())).infinite);
}

TEST(Growth, ScheduleRatiosApproachTheExponent) {
  GrowthExponent g = open_cover_slow_entropy(SubsetDescriptor::regular(Dfa::zeros_then_ones()));
  ASSERT_FALSE(g.ratios.empty());
  // p(n) = n + 1 for 0*1*
  for (auto& [n, r] : g.ratios) EXPECT_NEAR(r, std::log(n + 1.0) / std::log(static_cast<double>(n)), 1e-9);
  auto sched = default_count_schedule();
  EXPECT_EQ(sched.front(), 16u);
  EXPECT_EQ(sched.back(), 16384u);
}

TEST(BowenEntropy, TransferMatrixCertificates) {
  BowenEntropy f = bowen_entropy(SubsetDescriptor::regular(Dfa::full_shift(3)));
  EXPECT_TRUE(f.positive);
  EXPECT_NEAR(f.value, std::log(3.0), 1e-6);
  BowenEntropy g = bowen_entropy(SubsetDescriptor::regular(Dfa::golden_mean()));
  EXPECT_NEAR(g.value, std::log((1 + std::sqrt(5.0)) / 2), 1e-6);
  BowenEntropy u = bowen_entropy(SubsetDescriptor::set_union({sparse(2), SubsetDescriptor::regular(Dfa::golden_mean())}));
  EXPECT_TRUE(u.positive);
  BowenEntropy z = bowen_entropy(SubsetDescriptor::regular(Dfa::zeros_then_ones()));
  EXPECT_FALSE(z.positive);
  EXPECT_EQ(z.value, 0);
  EXPECT_FALSE(bowen_entropy(sparse(4)).positive);
}

TEST(InfiniteFlags, FireOnlyWithPositiveEntropy) {
  auto full = SubsetDescriptor::regular(Dfa::full_shift(2));
  InfiniteFlags f = classify_infinite(full, bowen_entropy(full));
  EXPECT_TRUE(f.bowen_positive && f.exponential_growth && f.h_S_top_infinite && f.h_S_cover_infinite);
  auto sp = sparse(2);
  InfiniteFlags g = classify_infinite(sp, bowen_entropy(sp));
  EXPECT_FALSE(g.bowen_positive || g.h_S_top_infinite || g.h_S_cover_infinite);
}

// Sparse products realize t = log b / log beta.
class Realization : public ::testing::TestWithParam<std::tuple<int, int, double>> {};

TEST_P(Realization, SlowEntropyAndHausdorffDimensionMatchT) {
  auto [b, beta, t] = GetParam();
  SubsetDescriptor z = sparse(b, beta);
  GrowthExponent cover = open_cover_slow_entropy(z);
  EXPECT_NEAR(cover.value, t, 1e-9);
  SlowEntropyDimension top = slow_entropy_dimension(z, {Rational(1, 4)});
  ASSERT_EQ(top.value.kind, EstimateKind::Value);
  EXPECT_NEAR(top.value.value, t, 0.1);
  ExponentEstimate dh = hausdorff_dimension(z);
  ASSERT_EQ(dh.kind, EstimateKind::Value);
  EXPECT_NEAR(dh.value, t, 0.1);
}

INSTANTIATE_TEST_SUITE_P(Sparse, Realization,
                         ::testing::Values(std::make_tuple(2, 4, 0.5), std::make_tuple(2, 2, 1.0),
                                           std::make_tuple(3, 2, std::log2(3.0)), std::make_tuple(4, 2, 2.0)));

TEST(BowenCover, GeneratorCoverExponentIsBelowOpenCover) {
  for (int b : {2, 4}) {
    ExponentEstimate e = bowen_cover_exponent(sparse(b));
    ASSERT_EQ(e.kind, EstimateKind::Value);
    EXPECT_LE(e.value, open_cover_slow_entropy(sparse(b)).value + 0.1);
    EXPECT_NEAR(e.value, b == 2 ? 1.0 : 2.0, 0.1);
  }
}

TEST(DimensionReport, AllChecksHoldOnBenchmarks) {
  for (auto z : {point("(0)"), SubsetDescriptor::regular(Dfa::zeros_then_ones()), sparse(2), sparse(4)}) {
    DimensionReport r = dimension_report("z", z);
    for (auto& c : r.checks) EXPECT_TRUE(c.holds) << c.name << " " << c.detail;
    EXPECT_TRUE(r.h_S_top.monotone);
  }
}

TEST(DimensionReport, PositiveEntropyMarksTopAsInfinite) {
  DimensionReport r = dimension_report("full", SubsetDescriptor::regular(Dfa::full_shift(2)));
  EXPECT_TRUE(r.flags.h_S_top_infinite);
  EXPECT_TRUE(r.h_S_top.value.is_infinite());
  ASSERT_TRUE(r.infinite_probe.has_value());
  EXPECT_EQ(r.infinite_probe->kind, LimitKind::Infinite);
  for (auto& c : r.checks) EXPECT_TRUE(c.holds) << c.name << " " << c.detail;
}

TEST(DimensionReport, MonotoneAsEpsShrinks) {
  // h_S_top at the smaller radius is at least the value at the larger one, up to tolerance
  SlowEntropyDimension d = slow_entropy_dimension(sparse(3), default_eps_schedule());
  for (std::size_t i = 1; i < d.per_eps.size(); ++i)
    EXPECT_GE(d.per_eps[i].second.value, d.per_eps[i - 1].second.value - 0.1);
}

TEST(EstimatesAgree, InfinitiesAndTolerance) {
  ExponentEstimate a, b;
  a.kind = b.kind = EstimateKind::Infinite;
  EXPECT_TRUE(estimates_agree(a, b, 0.1));
  b.kind = EstimateKind::Value;
  b.value = 3;
  EXPECT_FALSE(estimates_agree(a, b, 0.1));
  a.kind = EstimateKind::Value;
  a.value = 3.05;
  EXPECT_TRUE(estimates_agree(a, b, 0.1));
  a.value = 3.2;
  EXPECT_FALSE(estimates_agree(a, b, 0.1));
}
