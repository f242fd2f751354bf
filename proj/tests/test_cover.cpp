#include "oracles.hpp"
#include "slowent/cover.hpp"
#include "slowent/dimensions.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace slowent;

namespace {

SubsetDescriptor sparse(int b) {
  SparseProduct sp;
  sp.branching = b;
  sp.free.kind = FreePositions::Kind::Powers;
  sp.free.parameter = 2;
  return SubsetDescriptor::sparse_product(sp, b);
}

SubsetDescriptor point(const char* x) { return SubsetDescriptor::finite({EventuallyPeriodic::parse(x)}, 2); }

}  // namespace

TEST(Geometry, BowenDepths) {
  CoverGeometry g(CoverSpec::bowen(Rational(1, 4)), 3);
  EXPECT_EQ(g.n_eps(), 3u);
  EXPECT_EQ(g.shallowest(), 5u);
  EXPECT_FALSE(g.base_at(4).has_value());
  EXPECT_EQ(g.base_at(5), 3u);
  EXPECT_EQ(g.base_at(9), 7u);
  EXPECT_EQ(g.deepest(64), 64u);
  EXPECT_THROW(g.deepest(4), Error);
}

TEST(Geometry, PowerDepths) {
  CoverGeometry g(CoverSpec::bowen(Rational(1, 4), 2), 2);
  // depth m(k-1) + n(eps)
  EXPECT_EQ(g.shallowest(), 5u);
  EXPECT_EQ(g.base_at(5), 2u);
  EXPECT_FALSE(g.base_at(6).has_value());
  EXPECT_EQ(g.base_at(7), 3u);
  EXPECT_EQ(g.deepest(10), 9u);
  EXPECT_THROW(CoverGeometry(CoverSpec::bowen(Rational(1, 2), 2), 2), Error);
}

TEST(Geometry, HausdorffAndGenerator) {
  CoverGeometry h(CoverSpec::hausdorff(), 4);
  EXPECT_EQ(h.base_at(4), 5u);
  EXPECT_FALSE(h.base_at(3).has_value());
  CoverGeometry c(CoverSpec::generator(), 4);
  EXPECT_EQ(c.base_at(6), 6u);
}

TEST(CoverDp, MatchesExhaustiveEnumerationAcrossFamilies) {
  oracle::Rng rng(1234);
  const Rational s_values[] = {Rational(0), Rational(1, 3), Rational(1, 2), Rational(1), Rational(5, 4), Rational(2)};
  int checked = 0;
  for (int i = 0; i < 120; ++i) {
    SubsetDescriptor z = oracle::random_finite_tree(rng, 1 + rng.below(5), 2 + rng.below(8));
    Rational s = s_values[rng.below(6)];
    std::uint64_t N = 1 + rng.below(3);
    CoverSpec spec;
    switch (i % 4) {
      case 0: spec = CoverSpec::bowen(Rational(2, 5)); break;
      case 1: spec = CoverSpec::bowen(Rational(1, 4), 2); break;
      case 2: spec = CoverSpec::hausdorff(); break;
      default: spec = CoverSpec::generator(); break;
    }
    CoverGeometry geo(spec, N);
    std::uint64_t D = geo.shallowest() + rng.below(5);
    oracle::Enumeration brute = oracle::enumerate_covers(z, spec, s, N, D);
    ASSERT_TRUE(brute.found);
    CoverValue dp = cover_value(z, spec, s, N, D);
    EXPECT_EQ(compare(dp.exact(), brute.best_value), 0) << "instance " << i;
    Interval e = dp.enclosure;
    EXPECT_LE(e.lo, brute.best_value.approx() * (1 + 1e-12L));
    EXPECT_GE(e.hi, brute.best_value.approx() * (1 - 1e-12L));
    ++checked;
  }
  EXPECT_EQ(checked, 120);
}

TEST(CoverDp, SingletonValueIsOneBallAtTheCap) {
  // one point: the cheapest cover is a single ball of the largest order
  CoverValue v = caratheodory_value(point("(0)"), Rational(1), 2, Rational(2, 5), 64);
  EXPECT_EQ(v.exact().as_rational(), Rational(1, 63));
  EXPECT_EQ(v.ball_count(), BigInt(1));
}

TEST(CoverDp, SparseProductClosedForm) {
  // at s = 0 every cover costs its cardinality; the cheapest uses the shallowest layer
  SubsetDescriptor z = sparse(2);
  CoverValue v = caratheodory_value(z, Rational(0), 4, Rational(1, 4), 256);
  EXPECT_EQ(v.exact().as_rational(), Rational(prefix_count(z, 4 + 3 - 1)));
}

TEST(CoverDp, MonotoneInCapAndExponent) {
  SubsetDescriptor z = sparse(3);
  ExactReal prev;
  for (std::uint64_t D = 16; D <= 512; D *= 2) {
    ExactReal v = caratheodory_value(z, Rational(1, 2), 2, Rational(1, 4), D).exact();
    if (D > 16) {
      EXPECT_LE(compare(v, prev), 0) << D;
    }
    prev = v;
  }
  ExactReal a = caratheodory_value(z, Rational(1), 2, Rational(1, 4), 128).exact();
  ExactReal b = caratheodory_value(z, Rational(3, 2), 2, Rational(1, 4), 128).exact();
  EXPECT_LT(compare(b, a), 0);
}

TEST(Weighted, EqualsIntegralValueOnTrees) {
  oracle::Rng rng(55);
  for (int i = 0; i < 40; ++i) {
    SubsetDescriptor z = oracle::random_finite_tree(rng, 1 + rng.below(6), 3 + rng.below(6));
    Rational s(1 + rng.below(4), 2);
    s.canonicalize();
    WeightedValue w = weighted_value(z, s, 2, Rational(2, 5), 12);
    CoverValue m = caratheodory_value(z, s, 2, Rational(2, 5), 12);
    EXPECT_EQ(compare(w.value, m.exact()), 0);
    EXPECT_TRUE(w.certified);
    WeightedOptions cert;
    cert.force_certificate = true;
    WeightedValue wc = weighted_value(z, s, 2, Rational(2, 5), 12, cert);
    EXPECT_EQ(compare(wc.value, w.value), 0);
    EXPECT_NE(wc.method, w.method);
  }
}

TEST(Weighted, ChainInequalitiesOnSparseProducts) {
  const Rational eps(1, 13);
  for (int b : {2, 3}) {
    SubsetDescriptor z = sparse(b);
    for (const Rational& s : {Rational(1, 2), Rational(1)}) {
      ExactReal left = cover_value(z, CoverSpec::bowen(6 * eps), s + Rational(1, 10), 2, 128).exact();
      ExactReal mid = weighted_value(z, s, 2, eps, 128).value;
      ExactReal right = caratheodory_value(z, s, 2, eps, 128).exact();
      EXPECT_LE(compare(left, mid), 0);
      EXPECT_LE(compare(mid, right), 0);
    }
  }
}

TEST(Weighted, FaultInjectionBreaksTheChain) {
  // a large weight scale on the wide cover must break the left inequality
  SubsetDescriptor z = point("(0)");
  const Rational eps(1, 13);
  CoverSpec wide = CoverSpec::bowen(6 * eps);
  wide.weight_fault = 64;
  ExactReal left = cover_value(z, wide, Rational(1, 2), 2, 256).exact();
  ExactReal mid = weighted_value(z, Rational(1, 2), 2, eps, 256).value;
  EXPECT_GT(compare(left, mid), 0);
}

TEST(Classify, CountableSetsGoToZero) {
  for (auto z : {point("(0)"), SubsetDescriptor::regular(Dfa::zeros_then_ones())}) {
    LimitClass c = classify_limit(z, CoverSpec::bowen(Rational(1, 8)), Rational(1, 10), default_limit_schedule());
    EXPECT_EQ(c.kind, LimitKind::Zero);
    EXPECT_TRUE(c.depth_strictly_decreasing);
  }
}

TEST(Classify, SparseProductBelowAndAboveItsDimension) {
  SubsetDescriptor z = sparse(2);
  CoverSpec spec = CoverSpec::bowen(Rational(1, 4));
  EXPECT_EQ(classify_limit(z, spec, Rational(1, 2), default_limit_schedule()).kind, LimitKind::Infinite);
  EXPECT_EQ(classify_limit(z, spec, Rational(3, 2), default_limit_schedule()).kind, LimitKind::Zero);
}

TEST(Classify, FullShiftIsInfiniteAtLargeExponent) {
  SubsetDescriptor z = SubsetDescriptor::regular(Dfa::full_shift(2));
  LimitClass c = classify_limit(z, CoverSpec::bowen(Rational(1, 8)), Rational(5), default_limit_schedule());
  EXPECT_EQ(c.kind, LimitKind::Infinite);
}

TEST(CriticalExponent, Benchmarks) {
  CoverSpec spec = CoverSpec::bowen(Rational(1, 4));
  ExponentEstimate p = critical_exponent(point("(0)"), spec);
  EXPECT_EQ(p.kind, EstimateKind::Value);
  EXPECT_EQ(p.value, 0);
  for (auto [b, want] : {std::pair{2, 1.0}, {3, std::log2(3.0)}, {4, 2.0}}) {
    ExponentEstimate e = critical_exponent(sparse(b), spec);
    ASSERT_EQ(e.kind, EstimateKind::Value) << b;
    EXPECT_NEAR(e.value, want, 0.1) << b;
  }
  ExponentEstimate f = critical_exponent(SubsetDescriptor::regular(Dfa::golden_mean()), spec);
  EXPECT_EQ(f.kind, EstimateKind::Infinite);
}

TEST(CriticalExponent, UnionIsTheMaximum) {
  CoverSpec spec = CoverSpec::bowen(Rational(1, 4));
  SubsetDescriptor a = sparse(2);
  SubsetDescriptor u = SubsetDescriptor::set_union({a, point("(1)"), SubsetDescriptor::regular(Dfa::zeros_then_ones())});
  EXPECT_TRUE(estimates_agree(critical_exponent(u, spec), critical_exponent(a, spec), 0.1));
}

TEST(CriticalExponent, ShiftImageKeepsTheExponent) {
  CoverSpec spec = CoverSpec::bowen(Rational(1, 4));
  SubsetDescriptor z = sparse(3);
  ExponentEstimate a = critical_exponent(z, spec), b = critical_exponent(shift_image(z, 3), spec);
  ASSERT_EQ(b.kind, EstimateKind::Value);
  EXPECT_NEAR(a.value, b.value, 0.1);
}

TEST(Vitali, SelectionIsDisjointAndFiveTimesCovers) {
  oracle::Rng rng(808);
  const Rational radii[] = {Rational(1, 6), Rational(1, 10), Rational(1, 13), Rational(1, 25)};
  for (int f = 0; f < 300; ++f) {
    std::vector<BowenBall> balls;
    std::size_t count = 1 + rng.below(20);
    for (std::size_t i = 0; i < count; ++i) {
      BowenBall b;
      b.order = 1 + rng.below(5);
      b.radius = radii[rng.below(4)];
      std::uint64_t len = b.order + cylinder_depth_for_radius(ActionSpec{}, b.radius) - 1;
      b.center = rng.word(len, 2);
      if (rng.below(2)) std::fill(b.center.begin(), b.center.end(), 0);
      balls.push_back(b);
    }
    VitaliSelection sel = vitali_5r_select(ActionSpec{}, balls);
    ASSERT_TRUE(sel.disjoint);
    ASSERT_TRUE(sel.covered);
    // independent recheck: chosen cylinders pairwise disjoint
    for (std::size_t i = 0; i < sel.selected.size(); ++i)
      for (std::size_t j = i + 1; j < sel.selected.size(); ++j) {
        CylinderSet a = bowen_ball_as_cylinder(ActionSpec{}, balls[sel.selected[i]]);
        CylinderSet b = bowen_ball_as_cylinder(ActionSpec{}, balls[sel.selected[j]]);
        EXPECT_TRUE(a.disjoint(b));
      }
  }
}

TEST(Vitali, RejectsRadiiWithoutRoomToDilate) {
  BowenBall b{Word(4, 0), 2, Rational(1, 3)};
  EXPECT_THROW(vitali_5r_select(ActionSpec{}, {b}), Error);
}

TEST(OuterMeasure, AxiomsOnBenchmarkPairs) {
  std::vector<OuterInstance> inst;
  std::vector<SubsetDescriptor> zs = {point("(0)"), sparse(2), SubsetDescriptor::regular(Dfa::zeros_then_ones()),
                                      SubsetDescriptor::regular(Dfa::golden_mean())};
  for (std::size_t i = 0; i < zs.size(); ++i)
    for (std::size_t j = 0; j < zs.size(); ++j)
      inst.push_back({"pair " + std::to_string(i) + std::to_string(j), zs[i], zs[j], Rational(1, 2)});
  for (auto& c : outer_measure_checks(inst)) EXPECT_TRUE(c.holds) << c.instance << " " << c.property << " " << c.detail;
}

TEST(OuterMeasure, PrefixSubset) {
  SubsetDescriptor a = point("(0)"), b = sparse(2);
  EXPECT_TRUE(prefix_subset(a, b, 64));
  EXPECT_FALSE(prefix_subset(b, a, 64));
}
