#include "slowent/lp.hpp"

namespace slowent {

LpSolution solve_covering_lp(const CoveringLp& lp) {
  const std::size_t m = lp.rows.size(), n = lp.costs.size(), w = n + m;
  for (auto& c : lp.costs)
    if (c.sign() < 0) throw Error(ErrorKind::InvalidArgument, "covering LP needs non-negative costs");
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(w, 0));
  std::vector<Rational> rhs(m, -1);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.rows[i].empty()) throw Error(ErrorKind::Infeasible, "covering LP row has no columns");
    for (auto j : lp.rows[i]) t[i][j] = -1;
    t[i][n + i] = 1;
    basis[i] = n + i;
  }
  std::vector<ExactReal> d(w);
  for (std::size_t j = 0; j < n; ++j) d[j] = lp.costs[j];

  LpSolution sol;
  for (;;) {
    std::size_t r = m;
    for (std::size_t i = 0; i < m; ++i)
      if (sgn(rhs[i]) < 0 && (r == m || basis[i] < basis[r])) r = i;
    if (r == m) break;
    std::size_t enter = w;
    ExactReal best;
    Interval best_iv;
    for (std::size_t j = 0; j < w; ++j) {
      if (sgn(t[r][j]) >= 0) continue;
      ExactReal ratio = d[j] * Rational(-1 / t[r][j]);
      Interval iv = ratio.enclosure();
      if (enter == w || compare(ratio, iv, best, best_iv) < 0) {
        enter = j;
        best = std::move(ratio);
        best_iv = iv;
      }
    }
    if (enter == w) throw Error(ErrorKind::Infeasible, "covering LP is infeasible");
    Rational piv = t[r][enter];
    for (auto& v : t[r]) v /= piv;
    rhs[r] /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || t[i][enter] == 0) continue;
      Rational f = t[i][enter];
      for (std::size_t k = 0; k < w; ++k)
        if (t[r][k] != 0) t[i][k] -= f * t[r][k];
      rhs[i] -= f * rhs[r];
    }
    ExactReal dj = d[enter];
    for (std::size_t k = 0; k < w; ++k)
      if (t[r][k] != 0) d[k] -= dj * t[r][k];
    basis[r] = enter;
    ++sol.pivots;
  }
  sol.x.assign(n, 0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) sol.x[basis[i]] = rhs[i];
  sol.y.resize(m);
  for (std::size_t i = 0; i < m; ++i) sol.y[i] = d[n + i];
  for (std::size_t j = 0; j < n; ++j)
    if (sol.x[j] != 0) sol.objective += lp.costs[j] * sol.x[j];
  sol.certified = verify_covering_certificate(lp, sol);
  return sol;
}

bool verify_covering_certificate(const CoveringLp& lp, const LpSolution& sol) {
  const std::size_t m = lp.rows.size(), n = lp.costs.size();
  if (sol.x.size() != n || sol.y.size() != m) return false;
  for (auto& v : sol.x)
    if (sgn(v) < 0) return false;
  for (auto& row : lp.rows) {
    Rational s = 0;
    for (auto j : row) s += sol.x[j];
    if (s < 1) return false;
  }
  std::vector<ExactReal> slack = lp.costs;
  ExactReal dual_obj;
  for (std::size_t i = 0; i < m; ++i) {
    if (sol.y[i].sign() < 0) return false;
    dual_obj += sol.y[i];
    for (auto j : lp.rows[i]) slack[j] -= sol.y[i];
  }
  for (auto& s : slack)
    if (s.sign() < 0) return false;
  ExactReal primal;
  for (std::size_t j = 0; j < n; ++j)
    if (sol.x[j] != 0) primal += lp.costs[j] * sol.x[j];
  return compare(primal, dual_obj) == 0;
}

}  // namespace slowent
