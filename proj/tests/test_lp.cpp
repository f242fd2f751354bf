#include "oracles.hpp"
#include "slowent/lp.hpp"

#include <gtest/gtest.h>

using namespace slowent;

namespace {

// Cheapest 0/1 cover by exhaustive search over column subsets.
ExactReal integer_optimum(const CoveringLp& lp) {
  const std::size_t n = lp.costs.size();
  ExactReal best;
  bool found = false;
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    bool ok = true;
    for (auto& row : lp.rows) {
      bool hit = false;
      for (auto j : row) hit = hit || (mask >> j & 1);
      ok = ok && hit;
    }
    if (!ok) continue;
    ExactReal v;
    for (std::size_t j = 0; j < n; ++j)
      if (mask >> j & 1) v += lp.costs[j];
    if (!found || compare(v, best) < 0) best = v;
    found = true;
  }
  return best;
}

ExactReal weight(std::uint64_t base, const Rational& s) { return ExactReal::power_weight(base, Exponent::from(s)); }

}  // namespace

TEST(CoveringLp, OddCycleHasAFractionalOptimum) {
  CoveringLp lp;
  lp.rows = {{0, 1}, {1, 2}, {0, 2}};
  lp.costs = {ExactReal::rational(1), ExactReal::rational(1), ExactReal::rational(1)};
  LpSolution sol = solve_covering_lp(lp);
  EXPECT_EQ(sol.objective.as_rational(), Rational(3, 2));
  EXPECT_TRUE(sol.certified);
  EXPECT_TRUE(verify_covering_certificate(lp, sol));
  for (auto& x : sol.x) EXPECT_EQ(x, Rational(1, 2));
}

TEST(CoveringLp, UncoverableRowIsInfeasible) {
  CoveringLp lp;
  lp.rows = {{0}, {}};
  lp.costs = {ExactReal::rational(1)};
  EXPECT_THROW(solve_covering_lp(lp), Error);
}

TEST(CoveringLp, IntervalMatricesAreIntegral) {
  // consecutive-ones rows: the LP optimum equals the integer optimum
  oracle::Rng rng(61);
  for (int i = 0; i < 80; ++i) {
    CoveringLp lp;
    std::size_t n = 2 + rng.below(8);
    for (std::size_t j = 0; j < n; ++j) lp.costs.push_back(weight(2 + rng.below(30), Rational(1 + rng.below(3), 2)));
    std::size_t rows = 1 + rng.below(8);
    for (std::size_t r = 0; r < rows; ++r) {
      std::uint32_t a = static_cast<std::uint32_t>(rng.below(n)), b = static_cast<std::uint32_t>(rng.below(n));
      if (a > b) std::swap(a, b);
      std::vector<std::uint32_t> row;
      for (std::uint32_t j = a; j <= b; ++j) row.push_back(j);
      lp.rows.push_back(row);
    }
    LpSolution sol = solve_covering_lp(lp);
    EXPECT_TRUE(verify_covering_certificate(lp, sol));
    EXPECT_EQ(compare(sol.objective, integer_optimum(lp)), 0) << i;
  }
}

TEST(CoveringLp, RandomInstancesCertifyAndBoundTheIntegerOptimum) {
  oracle::Rng rng(62);
  for (int i = 0; i < 80; ++i) {
    CoveringLp lp;
    std::size_t n = 2 + rng.below(9);
    for (std::size_t j = 0; j < n; ++j) lp.costs.push_back(ExactReal::rational(Rational(1 + rng.below(9), 1 + rng.below(4))));
    std::size_t rows = 1 + rng.below(10);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::uint32_t> row;
      for (std::uint32_t j = 0; j < n; ++j)
        if (rng.below(3) == 0) row.push_back(j);
      if (row.empty()) row.push_back(static_cast<std::uint32_t>(rng.below(n)));
      lp.rows.push_back(row);
    }
    LpSolution sol = solve_covering_lp(lp);
    ASSERT_TRUE(sol.certified) << i;
    EXPECT_TRUE(verify_covering_certificate(lp, sol));
    EXPECT_LE(compare(sol.objective, integer_optimum(lp)), 0);
    // primal feasibility, independently
    for (auto& row : lp.rows) {
      Rational sum = 0;
      for (auto j : row) sum += sol.x[j];
      EXPECT_GE(sum, 1);
    }
  }
}

TEST(CoveringLp, TamperedCertificateIsRejected) {
  CoveringLp lp;
  lp.rows = {{0, 1}, {1, 2}};
  lp.costs = {ExactReal::rational(1), ExactReal::rational(Rational(3, 2)), ExactReal::rational(1)};
  LpSolution sol = solve_covering_lp(lp);
  ASSERT_TRUE(verify_covering_certificate(lp, sol));
  LpSolution bad = sol;
  bad.x[1] = 0;
  bad.x[0] = 0;
  EXPECT_FALSE(verify_covering_certificate(lp, bad));
}
