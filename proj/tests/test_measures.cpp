#include "oracles.hpp"
#include "slowent/measures.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace slowent;

namespace {

SparseProduct powers(int b) {
  SparseProduct sp;
  sp.branching = b;
  sp.free.kind = FreePositions::Kind::Powers;
  sp.free.parameter = 2;
  return sp;
}

// Children of a cylinder carry exactly its mass.
void expect_additive(const MeasureDescriptor& mu, std::size_t depth) {
  std::function<void(Word&)> go = [&](Word& w) {
    if (w.size() == depth) return;
    Rational parent = cylinder_mass(mu, w), sum = 0;
    for (int a = 0; a < mu.alphabet(); ++a) {
      w.push_back(static_cast<Symbol>(a));
      sum += cylinder_mass(mu, w);
      go(w);
      w.pop_back();
    }
    EXPECT_EQ(sum, parent) << word_to_string(w);
  };
  Word root;
  EXPECT_EQ(cylinder_mass(mu, root), Rational(1));
  go(root);
}

double binary_entropy_bits(double p) { return -(p * std::log2(p) + (1 - p) * std::log2(1 - p)); }

}  // namespace

TEST(CylinderMass, AdditiveForEveryKind) {
  expect_additive(MeasureDescriptor::bernoulli({Rational(1, 3), Rational(2, 3)}), 6);
  expect_additive(MeasureDescriptor::point_mass(EventuallyPeriodic::parse("1(01)"), 2), 7);
  expect_additive(MeasureDescriptor::uniform_on_sparse(powers(2), 2), 9);
  expect_additive(MeasureDescriptor::biased_on_sparse(powers(3), 3, Rational(4, 5)), 6);
  Dfa gm = Dfa::golden_mean();
  // emit 1/2, 1/2 after a 0; forced 0 after a 1
  MeasureDescriptor mk = MeasureDescriptor::markov(gm, {Rational(1), Rational(0)}, {{Rational(1, 2), Rational(1, 2)}, {Rational(1), 0}});
  expect_additive(mk, 7);
}

TEST(CylinderMass, ClosedForms) {
  auto bern = MeasureDescriptor::bernoulli({Rational(1, 4), Rational(3, 4)});
  EXPECT_EQ(cylinder_mass(bern, word_from_string("011")), Rational(9, 64));
  auto uni = MeasureDescriptor::uniform_on_sparse(powers(2), 2);
  // free positions 1, 2, 4 below depth 5
  EXPECT_EQ(cylinder_mass(uni, word_from_string("01100")), Rational(1, 8));
  EXPECT_EQ(cylinder_mass(uni, word_from_string("1")), Rational(0));
  auto biased = MeasureDescriptor::biased_on_sparse(powers(2), 2, Rational(4, 5));
  EXPECT_EQ(cylinder_mass(biased, word_from_string("0100")), Rational(1, 5) * Rational(4, 5));
  auto pt = MeasureDescriptor::point_mass(EventuallyPeriodic::parse("(10)"), 2);
  EXPECT_EQ(cylinder_mass(pt, word_from_string("1010")), Rational(1));
  EXPECT_EQ(cylinder_mass(pt, word_from_string("1011")), Rational(0));
}

TEST(TreeMass, ConsistencyCheck) {
  TreeMass t;
  t.support = SubsetDescriptor::regular(Dfa::full_shift(2));
  t.depth = 2;
  t.mass = {{word_from_string(""), 1},
            {word_from_string("0"), Rational(1, 4)},
            {word_from_string("1"), Rational(3, 4)},
            {word_from_string("00"), Rational(1, 8)},
            {word_from_string("01"), Rational(1, 8)},
            {word_from_string("10"), Rational(1, 2)},
            {word_from_string("11"), Rational(1, 4)}};
  EXPECT_TRUE(tree_mass_consistent(t));
  auto mu = MeasureDescriptor::tree_mass(t);
  EXPECT_EQ(cylinder_mass(mu, word_from_string("10")), Rational(1, 2));
  t.mass[word_from_string("11")] = Rational(1, 3);
  EXPECT_FALSE(tree_mass_consistent(t));
}

TEST(LocalEntropy, UniformOnSparseProductIsOne) {
  auto mu = MeasureDescriptor::uniform_on_sparse(powers(2), 2);
  LocalSlowEntropyEstimate e = local_slow_entropy(mu, EventuallyPeriodic::parse("(0)"), Rational(1, 8));
  EXPECT_TRUE(e.decided);
  EXPECT_FALSE(e.infinite());
  EXPECT_NEAR(e.liminf_estimate, 1.0, 0.05);
}

TEST(LocalEntropy, BernoulliDivergesAtPolynomialScale) {
  auto mu = MeasureDescriptor::bernoulli({Rational(1, 2), Rational(1, 2)});
  LocalSlowEntropyEstimate e = local_slow_entropy(mu, EventuallyPeriodic::parse("(01)"), Rational(1, 4));
  EXPECT_TRUE(e.diverging);
  EXPECT_TRUE(e.infinite());
}

TEST(LocalEntropy, PointMassIsZero) {
  auto mu = MeasureDescriptor::point_mass(EventuallyPeriodic::parse("(0)"), 2);
  LocalSlowEntropyEstimate e = local_slow_entropy(mu, EventuallyPeriodic::parse("(0)"), Rational(1, 4));
  EXPECT_EQ(e.liminf_estimate, 0);
  EXPECT_TRUE(e.decided);
}

TEST(LocalEntropy, OffSupportPointIsInfinite) {
  auto mu = MeasureDescriptor::uniform_on_sparse(powers(2), 2);
  LocalSlowEntropyEstimate e = local_slow_entropy(mu, EventuallyPeriodic::parse("(1)"), Rational(1, 4));
  EXPECT_TRUE(e.infinite());
}

TEST(LocalEntropy, DefaultScheduleIsQuarterOctaves) {
  auto s = default_local_schedule();
  EXPECT_EQ(s.front(), 16u);
  EXPECT_EQ(s.back(), 16384u);
  EXPECT_EQ(s.size(), 41u);
  LocalOptions shallow;
  shallow.deep = false;
  auto mu = MeasureDescriptor::uniform_on_sparse(powers(2), 2);
  auto e = local_slow_entropy(mu, EventuallyPeriodic::parse("(0)"), Rational(1, 4), shallow);
  EXPECT_EQ(e.values.size(), s.size());
}

TEST(MeasureEntropy, RoutesByMeasureKind) {
  MeasureEntropy u = measure_slow_entropy(MeasureDescriptor::uniform_on_sparse(powers(4), 4));
  EXPECT_EQ(u.method, Integration::Exact);
  EXPECT_NEAR(u.value, 2.0, 0.05);
  MeasureEntropy p = measure_slow_entropy(MeasureDescriptor::point_mass(EventuallyPeriodic::parse("1(0)"), 2));
  EXPECT_EQ(p.method, Integration::Atomic);
  EXPECT_EQ(p.value, 0);
  MeasureEntropy b = measure_slow_entropy(MeasureDescriptor::bernoulli({Rational(1, 2), Rational(1, 2)}));
  EXPECT_TRUE(b.infinite);
}

TEST(MeasureEntropy, BiasedProductMatchesBinaryEntropy) {
  MeasureEntropyOptions opts;
  MeasureEntropy e = measure_slow_entropy(MeasureDescriptor::biased_on_sparse(powers(2), 2, Rational(4, 5)), opts);
  EXPECT_EQ(e.method, Integration::MonteCarlo);
  EXPECT_TRUE(e.decided);
  EXPECT_NEAR(e.value, binary_entropy_bits(0.8), 0.05);
  EXPECT_EQ(e.samples, opts.samples);
}

TEST(MeasureEntropy, SeededAndReproducible) {
  auto mu = MeasureDescriptor::biased_on_sparse(powers(2), 2, Rational(7, 10));
  MeasureEntropyOptions a;
  a.samples = 256;
  a.seed = 5;
  MeasureEntropy x = measure_slow_entropy(mu, a), y = measure_slow_entropy(mu, a);
  EXPECT_EQ(x.value, y.value);
  a.seed = 6;
  MeasureEntropy z = measure_slow_entropy(mu, a);
  EXPECT_NE(x.value, z.value);
  EXPECT_NEAR(x.value, z.value, 0.1);
}

TEST(Frostman, CapsHoldExactlyAndMassIsOne) {
  SubsetDescriptor z = SubsetDescriptor::sparse_product(powers(2), 2);
  for (std::uint64_t D : {16, 32}) {
    FrostmanResult f = frostman_construct(z, Rational(9, 10), 2, Rational(2, 5), D);
    EXPECT_TRUE(f.caps_hold);
    EXPECT_TRUE(f.mass_one);
    EXPECT_TRUE(verify_frostman(f, Rational(9, 10), 2, Rational(2, 5)));
    EXPECT_GT(f.achieved_c, 0);
    EXPECT_EQ(f.cap_constant * f.achieved_c, 1);
    // the achieved constant never beats the cover value
    EXPECT_LE(f.achieved_c.get_d(), static_cast<double>(f.dp_value) * (1 + 1e-12));
  }
}

TEST(Frostman, SingletonCarriesItsOwnCap) {
  SubsetDescriptor z = SubsetDescriptor::finite({EventuallyPeriodic::parse("(0)")}, 2);
  FrostmanResult f = frostman_construct(z, Rational(1), 2, Rational(2, 5), 50);
  // the only cover is one ball of order 49
  EXPECT_EQ(f.achieved_c, Rational(1, 49));
  EXPECT_TRUE(verify_frostman(f, Rational(1), 2, Rational(2, 5)));
}

TEST(Frostman, VerificationRejectsAnInflatedConstant) {
  SubsetDescriptor z = SubsetDescriptor::sparse_product(powers(2), 2);
  FrostmanResult f = frostman_construct(z, Rational(1, 2), 2, Rational(2, 5), 32);
  ASSERT_TRUE(verify_frostman(f, Rational(1, 2), 2, Rational(2, 5)));
  f.achieved_c *= 2;
  f.cap_constant /= 2;
  EXPECT_FALSE(verify_frostman(f, Rational(1, 2), 2, Rational(2, 5)));
}

TEST(DistributionPrinciple, UniformMeasureBoundsBothWays) {
  SparseProduct sp = powers(2);
  SubsetDescriptor z = SubsetDescriptor::sparse_product(sp, 2);
  auto mu = MeasureDescriptor::uniform_on_sparse(sp, 2);
  DistributionCheck up = distribution_principle_check(mu, z, Rational(1), Direction::Upper);
  EXPECT_TRUE(up.holds);
  EXPECT_TRUE(up.exponent_consistent);
  DistributionCheck lo = distribution_principle_check(mu, z, Rational(1), Direction::Lower);
  EXPECT_TRUE(lo.holds);
  EXPECT_EQ(lo.support_mass, Rational(1));
  DistributionCheck wrong = distribution_principle_check(mu, z, Rational(1, 2), Direction::Upper);
  EXPECT_FALSE(wrong.holds);
}

TEST(Variational, UniformAttainsTheSupremum) {
  SparseProduct sp = powers(2);
  SubsetDescriptor z = SubsetDescriptor::sparse_product(sp, 2);
  MeasureEntropyOptions mo;
  mo.samples = 512;
  VariationalGap g = variational_gap(
      z, {{"uniform", MeasureDescriptor::uniform_on_sparse(sp, 2)},
          {"biased", MeasureDescriptor::biased_on_sparse(sp, 2, Rational(4, 5))}},
      mo);
  EXPECT_EQ(g.best, "uniform");
  EXPECT_NEAR(g.gap, 0, 0.1);
  for (auto& m : g.members) EXPECT_TRUE(m.easy_direction) << m.name;
}

TEST(Variational, UnsupportedMeasureIsRejected) {
  SubsetDescriptor z = SubsetDescriptor::sparse_product(powers(2), 2);
  try {
    variational_gap(z, {{"coin", MeasureDescriptor::bernoulli({Rational(1, 2), Rational(1, 2)})}});
    FAIL() << "expected SupportViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SupportViolation);
    EXPECT_NE(std::string(e.what()).find("coin"), std::string::npos);
  }
}

TEST(SupportMass, ExactPrefixSums) {
  SubsetDescriptor z = SubsetDescriptor::sparse_product(powers(2), 2);
  auto coin = MeasureDescriptor::bernoulli({Rational(1, 2), Rational(1, 2)});
  // 8 prefixes of depth 6 (free at 1, 2, 4), each of mass 2^-6
  EXPECT_EQ(support_mass(coin, z, 6), Rational(1, 8));
  EXPECT_LE(support_check_depth(z), 12u);
}
