#pragma once

#include "slowent/exact_real.hpp"

#include <cstdint>
#include <vector>

namespace slowent {

// min c^T x  s.t.  sum_{j in rows[i]} x_j >= 1 for every row, x >= 0,
// with non-negative exact costs.
struct CoveringLp {
  std::vector<std::vector<std::uint32_t>> rows;
  std::vector<ExactReal> costs;
};

struct LpSolution {
  ExactReal objective;
  std::vector<Rational> x;    // primal, one per column
  std::vector<ExactReal> y;   // dual packing, one per row
  std::size_t pivots = 0;
  bool certified = false;     // primal/dual feasibility and equal objectives checked exactly
};

// Dual simplex from the all-slack basis with Bland-style tie breaking.
LpSolution solve_covering_lp(const CoveringLp& lp);

// Exact check of primal feasibility, dual feasibility and zero duality gap.
bool verify_covering_certificate(const CoveringLp& lp, const LpSolution& sol);

}  // namespace slowent
