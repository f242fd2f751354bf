#include "slowent/cover.hpp"

#include "slowent/lp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

namespace slowent {

const char* cover_family_name(CoverFamily f) {
  switch (f) {
    case CoverFamily::Bowen: return "bowen";
    case CoverFamily::Hausdorff: return "hausdorff";
    case CoverFamily::GeneratorCylinder: return "generator";
  }
  return "?";
}

CoverSpec CoverSpec::bowen(const Rational& eps, std::uint64_t power) {
  CoverSpec s;
  s.family = CoverFamily::Bowen;
  s.eps = eps;
  s.power = power;
  return s;
}

CoverSpec CoverSpec::hausdorff() {
  CoverSpec s;
  s.family = CoverFamily::Hausdorff;
  return s;
}

CoverSpec CoverSpec::generator() {
  CoverSpec s;
  s.family = CoverFamily::GeneratorCylinder;
  return s;
}

// ---------------------------------------------------------------- geometry

CoverGeometry::CoverGeometry(const CoverSpec& spec, std::uint64_t N) : spec_(spec), N_(N) {
  require_one_sided_line(spec.action, "cover geometry");
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "lower order N must be >= 1");
  if (sgn(spec.weight_fault) <= 0) throw Error(ErrorKind::InvalidArgument, "weight scale must be positive");
  switch (spec.family) {
    case CoverFamily::Bowen:
      if (spec.power < 1) throw Error(ErrorKind::InvalidArgument, "power must be >= 1");
      n_eps_ = cylinder_depth_for_radius(spec.action, spec.eps);
      if (n_eps_ < spec.power) throw Error(ErrorKind::InvalidArgument, "power ball needs n(eps) >= m");
      shallowest_ = spec.power * (N - 1) + n_eps_;
      break;
    case CoverFamily::Hausdorff:
    case CoverFamily::GeneratorCylinder:
      shallowest_ = N;
      break;
  }
}

std::optional<std::uint64_t> CoverGeometry::base_at(std::uint64_t depth) const {
  if (depth < shallowest_) return std::nullopt;
  switch (spec_.family) {
    case CoverFamily::Bowen: {
      std::uint64_t m = spec_.power;
      if ((depth - n_eps_) % m) return std::nullopt;
      return (depth - n_eps_) / m + 1;
    }
    case CoverFamily::Hausdorff: return depth + 1;
    case CoverFamily::GeneratorCylinder: return depth;
  }
  return std::nullopt;
}

std::uint64_t CoverGeometry::deepest(std::uint64_t cap) const {
  if (cap < shallowest_)
    throw Error(ErrorKind::CapExceeded, "depth cap " + std::to_string(cap) + " is below the shallowest ball depth " +
                                            std::to_string(shallowest_));
  if (spec_.family == CoverFamily::Bowen) return n_eps_ + spec_.power * ((cap - n_eps_) / spec_.power);
  return cap;
}

// ---------------------------------------------------------------- values

ExactReal orders_value(const std::map<std::uint64_t, BigInt>& orders, const Exponent& s, const Rational& scale) {
  ExactReal total;
  for (auto& [base, count] : orders) total += ExactReal::power_weight(base, s) * Rational(count);
  total *= scale;
  return total;
}

ExactReal CoverValue::exact() const { return orders_value(orders, s, weight_scale); }

BigInt CoverValue::ball_count() const {
  BigInt n = 0;
  for (auto& [b, c] : orders) n += c;
  return n;
}

std::map<std::uint64_t, BigInt> collect_orders(const LayeredDag& dag, const CoverSolution& sol,
                                               const CoverGeometry& geo, std::uint64_t layer,
                                               const std::vector<std::pair<std::uint32_t, BigInt>>& roots) {
  std::map<std::uint64_t, BigInt> orders;
  std::vector<BigInt> cur(dag.layers[layer].size(), 0);
  for (auto& [c, m] : roots) cur[c] += m;
  for (std::uint64_t L = layer; L <= sol.depth; ++L) {
    std::vector<BigInt> nxt;
    if (L < sol.depth) nxt.assign(dag.layers[L + 1].size(), 0);
    for (std::size_t c = 0; c < cur.size(); ++c) {
      if (cur[c] == 0) continue;
      if (sol.chosen[L][c]) {
        orders[*geo.base_at(L)] += cur[c];
      } else {
        for (auto [child, mult] : dag.layers[L][c].children) nxt[child] += cur[c] * mult;
      }
    }
    cur = std::move(nxt);
  }
  return orders;
}

CoverSolution solve_cover(const LayeredDag& dag, const CoverGeometry& geo, const Exponent& s, std::uint64_t cap) {
  CoverSolution sol;
  const std::uint64_t D = geo.deepest(cap);
  if (dag.depth() < D) throw Error(ErrorKind::CapExceeded, "prefix DAG is shallower than the depth cap");
  sol.depth = D;
  CoverValue& v = sol.summary;
  v.family = geo.spec().family;
  v.s = s;
  v.N = geo.N();
  v.eps = geo.spec().eps;
  v.power = geo.spec().power;
  v.depth_cap = cap;
  v.effective_depth = D;
  v.weight_scale = geo.spec().weight_fault;
  sol.value.resize(D + 1);
  sol.chosen.resize(D + 1);
  if (dag.layers[0].empty()) {
    v.enclosure = Interval::point(0);
    return sol;
  }
  const long double fault = to_long_double(geo.spec().weight_fault);
  const bool faulty = geo.spec().weight_fault != 1;
  auto weight_iv = [&](std::uint64_t base) {
    Interval w = power_weight_interval(base, s.num, s.den);
    if (faulty) {
      Interval f = Interval{fault * (1 - 1e-18L), fault * (1 + 1e-18L)};
      w = {w.lo * f.lo * (1 - 1e-18L), w.hi * f.hi * (1 + 1e-18L)};
    }
    return w;
  };
  for (std::uint64_t Lp1 = D + 1; Lp1-- > 0;) {
    const std::uint64_t L = Lp1;
    const auto& layer = dag.layers[L];
    sol.value[L].resize(layer.size());
    sol.chosen[L].assign(layer.size(), 0);
    std::optional<std::uint64_t> base = geo.base_at(L);
    Interval w = base ? weight_iv(*base) : Interval{};
    for (std::size_t c = 0; c < layer.size(); ++c) {
      if (L == D) {
        sol.value[L][c] = w;
        sol.chosen[L][c] = 1;
        continue;
      }
      Interval sum = Interval::point(0);
      for (auto [child, mult] : layer[c].children)
        sum = sum + scale(sol.value[L + 1][child], static_cast<long double>(mult));
      bool ball = false;
      if (base) {
        int cmp = certain_compare(w, sum);
        if (cmp < 0) {
          ball = true;
        } else if (cmp == 0) {
          if (w.exact() && sum.exact() && w.lo == sum.lo) {
            ball = true;
          } else {
            std::vector<std::pair<std::uint32_t, BigInt>> roots;
            for (auto [child, mult] : layer[c].children) roots.emplace_back(child, BigInt(mult));
            ExactReal rec = orders_value(collect_orders(dag, sol, geo, L + 1, roots), s, geo.spec().weight_fault);
            ExactReal here = ExactReal::power_weight(*base, s) * geo.spec().weight_fault;
            ball = compare(here, rec) <= 0;
          }
        }
      }
      sol.chosen[L][c] = ball ? 1 : 0;
      sol.value[L][c] = ball ? w : sum;
    }
  }
  v.enclosure = sol.value[0][0];
  v.orders = collect_orders(dag, sol, geo, 0, {{0, BigInt(1)}});
  return sol;
}

CoverValue cover_value(const SubsetDescriptor& z, const CoverSpec& spec, const Rational& s, std::uint64_t N,
                       std::uint64_t D) {
  CoverGeometry geo(spec, N);
  std::uint64_t depth = geo.deepest(D);
  LayeredDag dag = build_dag(z, depth);
  return solve_cover(dag, geo, Exponent::from(s), D).summary;
}

CoverValue caratheodory_value(const SubsetDescriptor& z, const Rational& s, std::uint64_t N, const Rational& eps,
                              std::uint64_t D) {
  return cover_value(z, CoverSpec::bowen(eps), s, N, D);
}

// ---------------------------------------------------------------- weighted

namespace {

WeightedValue weighted_by_simplex(const SubsetDescriptor& z, const CoverGeometry& geo, const Exponent& s,
                                  std::uint64_t D) {
  TreeView view(z, D);
  CoveringLp lp;
  std::vector<Word> stems;
  std::vector<std::uint32_t> ancestors;
  Word w;
  std::function<void(const TreeView::Key&)> dfs = [&](const TreeView::Key& key) {
    std::uint64_t L = w.size();
    bool pushed = false;
    if (auto base = geo.base_at(L)) {
      ancestors.push_back(static_cast<std::uint32_t>(lp.costs.size()));
      lp.costs.push_back(ExactReal::power_weight(*base, s) * geo.spec().weight_fault);
      stems.push_back(w);
      pushed = true;
    }
    if (L == D) {
      lp.rows.push_back(ancestors);
    } else {
      std::vector<TreeView::Child> kids;
      view.children(L, key, kids);
      for (auto& c : kids) {
        w.push_back(c.symbol);
        dfs(c.key);
        w.pop_back();
      }
    }
    if (pushed) ancestors.pop_back();
  };
  TreeView::Key root = view.root();
  if (root[0] != 0) dfs(root);
  WeightedValue out;
  out.method = "simplex";
  if (lp.rows.empty()) {
    out.certified = true;
    out.enclosure = Interval::point(0);
    return out;
  }
  LpSolution sol = solve_covering_lp(lp);
  out.value = sol.objective;
  out.enclosure = out.value.enclosure();
  out.certified = sol.certified;
  out.pivots = sol.pivots;
  for (std::size_t j = 0; j < sol.x.size(); ++j)
    if (sol.x[j] != 0) out.cover.push_back({stems[j], sol.x[j]});
  return out;
}

// Optimality of the DP cover among fractional covers, via an explicit dual
// packing built on the DAG and checked exactly.
WeightedValue weighted_by_certificate(const LayeredDag& dag, const CoverGeometry& geo, const Exponent& s,
                                      std::uint64_t cap) {
  CoverSolution sol = solve_cover(dag, geo, s, cap);
  const std::uint64_t D = sol.depth;
  WeightedValue out;
  out.method = "dag-certificate";
  if (dag.layers[0].empty()) {
    out.certified = true;
    out.enclosure = Interval::point(0);
    return out;
  }
  const Rational& fault = geo.spec().weight_fault;
  std::vector<std::optional<ExactReal>> weight(D + 1);
  std::vector<Interval> weight_iv(D + 1);
  for (std::uint64_t L = 0; L <= D; ++L)
    if (auto b = geo.base_at(L)) {
      weight[L] = ExactReal::power_weight(*b, s) * fault;
      weight_iv[L] = weight[L]->enclosure();
    }
  std::vector<std::vector<ExactReal>> cap_exact(D + 1);
  std::vector<std::vector<Interval>> cap_iv(D + 1);
  std::vector<std::vector<char>> covered(D + 1);
  for (std::uint64_t Lp1 = D + 1; Lp1-- > 0;) {
    const std::uint64_t L = Lp1;
    const auto& layer = dag.layers[L];
    cap_exact[L].resize(layer.size());
    cap_iv[L].resize(layer.size());
    covered[L].assign(layer.size(), 0);
    for (std::size_t c = 0; c < layer.size(); ++c) {
      if (sol.chosen[L][c]) {
        cap_exact[L][c] = *weight[L];
        covered[L][c] = 1;
      } else {
        bool all = !layer[c].children.empty();
        for (auto [child, mult] : layer[c].children) {
          cap_exact[L][c] += cap_exact[L + 1][child] * Rational(mult);
          all = all && covered[L + 1][child];
        }
        covered[L][c] = all ? 1 : 0;
      }
      cap_iv[L][c] = cap_exact[L][c].enclosure();
    }
  }
  bool ok = covered[0][0] && compare(cap_exact[0][0], sol.summary.exact()) == 0;

  std::vector<std::vector<char>> full_done(D + 1);
  for (std::uint64_t L = 0; L <= D; ++L) full_done[L].assign(dag.layers[L].size(), 0);
  std::function<void(std::uint64_t, std::size_t)> verify_full;
  std::function<void(std::uint64_t, std::size_t, const ExactReal&)> distribute;
  auto within_weight = [&](std::uint64_t L, const ExactReal& a, const Interval& ia) {
    if (!weight[L]) return true;
    return compare(a, ia, *weight[L], weight_iv[L]) <= 0;
  };
  distribute = [&](std::uint64_t L, std::size_t c, const ExactReal& amount) {
    if (L == D) return;
    ExactReal remaining = amount;
    for (auto [child, mult] : dag.layers[L][c].children) {
      for (std::uint32_t copy = 0; copy < mult; ++copy) {
        if (remaining.is_zero()) break;
        Interval ir = remaining.enclosure();
        int cmp = compare(remaining, ir, cap_exact[L + 1][child], cap_iv[L + 1][child]);
        if (cmp >= 0) {
          verify_full(L + 1, child);
          remaining -= cap_exact[L + 1][child];
        } else {
          // Partial child: 0 < remaining < cap(child)
          if (!within_weight(L + 1, remaining, ir)) ok = false;
          distribute(L + 1, child, remaining);
          remaining = ExactReal();
        }
      }
    }
    if (!remaining.is_zero()) ok = false;
  };
  verify_full = [&](std::uint64_t L, std::size_t c) {
    if (full_done[L][c]) return;
    full_done[L][c] = 1;
    if (!within_weight(L, cap_exact[L][c], cap_iv[L][c])) ok = false;
    if (L == D) return;
    if (sol.chosen[L][c]) {
      distribute(L, c, cap_exact[L][c]);
    } else {
      for (auto [child, mult] : dag.layers[L][c].children) verify_full(L + 1, child);
    }
  };
  verify_full(0, 0);
  out.value = cap_exact[0][0];
  out.enclosure = cap_iv[0][0];
  out.certified = ok;
  return out;
}

}  // namespace

WeightedValue weighted_value(const SubsetDescriptor& z, const CoverSpec& spec, const Rational& s, std::uint64_t N,
                             std::uint64_t D, const WeightedOptions& opts) {
  CoverGeometry geo(spec, N);
  std::uint64_t depth = geo.deepest(D);
  Exponent e = Exponent::from(s);
  LayeredDag dag = build_dag(z, depth);
  if (!opts.force_certificate) {
    auto counts = dag.forward_counts();
    BigInt nodes = 0, leaves = 0;
    for (auto& layer : counts)
      for (auto& c : layer) nodes += c;
    for (auto& c : counts[depth]) leaves += c;
    if (nodes <= static_cast<unsigned long>(opts.explicit_node_limit) &&
        leaves <= static_cast<unsigned long>(opts.explicit_leaf_limit))
      return weighted_by_simplex(z, geo, e, depth);
  }
  return weighted_by_certificate(dag, geo, e, D);
}

WeightedValue weighted_value(const SubsetDescriptor& z, const Rational& s, std::uint64_t N, const Rational& eps,
                             std::uint64_t D, const WeightedOptions& opts) {
  return weighted_value(z, CoverSpec::bowen(eps), s, N, D, opts);
}

// ---------------------------------------------------------------- limits

const char* limit_kind_name(LimitKind k) {
  switch (k) {
    case LimitKind::Zero: return "Zero";
    case LimitKind::Infinite: return "Infinite";
    case LimitKind::Finite: return "Finite";
    case LimitKind::Undetermined: return "Undetermined";
  }
  return "?";
}

LimitSchedule default_limit_schedule() {
  LimitSchedule s;
  for (int j = 4; j <= 8; ++j) s.emplace_back(1ULL << j, 1ULL << (j + 4));
  return s;
}

namespace {

bool nonincreasing(const std::vector<long double>& v, long double slack) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] * (1 + slack)) return false;
  return true;
}

bool nondecreasing(const std::vector<long double>& v, long double slack) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1] * (1 - slack)) return false;
  return true;
}

double loglog_slope(const std::vector<LimitSample>& tail) {
  std::size_t n = tail.size();
  if (n < 2) return 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& t : tail) {
    double x = std::log(static_cast<double>(t.N));
    double y = std::log(static_cast<double>(t.value));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double den = static_cast<double>(n) * sxx - sx * sx;
  if (den == 0) return 0;
  return (static_cast<double>(n) * sxy - sx * sy) / den;
}

}  // namespace

LimitClass classify_limit(const SubsetDescriptor& z, const LayeredDag& dag, const CoverSpec& spec,
                          const Rational& s, const LimitSchedule& schedule, const ClassifyOptions& opts) {
  if (schedule.empty()) throw Error(ErrorKind::InvalidArgument, "empty limit schedule");
  LimitClass out;
  Exponent e = Exponent::from(s);
  for (auto [N, D] : schedule) {
    CoverGeometry geo(spec, N);
    out.evidence.push_back({N, D, solve_cover(dag, geo, e, D).summary.approx()});
  }
  Cardinality card = cardinality_class(z);
  bool countable = card == Cardinality::Finite || card == Cardinality::CountablyInfinite;
  std::set<std::uint64_t> depths;
  for (auto& p : schedule) depths.insert(p.second);
  if (countable) {
    CoverGeometry geo(spec, schedule.front().first);
    for (std::uint64_t D : depths) {
      if (D < geo.shallowest()) continue;
      out.depth_evidence.push_back({geo.N(), D, solve_cover(dag, geo, e, D).summary.approx()});
    }
    out.depth_strictly_decreasing = out.depth_evidence.size() >= 2;
    for (std::size_t i = 1; i < out.depth_evidence.size(); ++i)
      if (!(out.depth_evidence[i].value < out.depth_evidence[i - 1].value)) out.depth_strictly_decreasing = false;
  }
  std::size_t k = std::min(opts.tail, out.evidence.size());
  std::vector<LimitSample> tail(out.evidence.end() - static_cast<std::ptrdiff_t>(k), out.evidence.end());
  std::vector<long double> tv;
  for (auto& t : tail) tv.push_back(t.value);
  out.lo = *std::min_element(tv.begin(), tv.end());
  out.hi = *std::max_element(tv.begin(), tv.end());
  long double last = tv.back();

  if (z.empty()) {
    out.kind = LimitKind::Zero;
    out.rule = "empty";
    return out;
  }
  if (opts.countable_rule && sgn(s) > 0 && countable && out.depth_strictly_decreasing) {
    out.kind = LimitKind::Zero;
    out.rule = "countable";
    return out;
  }
  if (last < opts.zero_tol && nonincreasing(tv, opts.monotone_slack)) {
    out.kind = LimitKind::Zero;
    out.rule = "threshold";
    return out;
  }
  if (last > opts.inf_tol && nondecreasing(tv, opts.monotone_slack)) {
    out.kind = LimitKind::Infinite;
    out.rule = "threshold";
    return out;
  }
  out.slope = loglog_slope(tail);
  if (out.slope < -opts.trend_tol && nonincreasing(tv, opts.monotone_slack)) {
    out.kind = LimitKind::Zero;
    out.rule = "trend";
    return out;
  }
  if (out.slope > opts.trend_tol && nondecreasing(tv, opts.monotone_slack)) {
    out.kind = LimitKind::Infinite;
    out.rule = "trend";
    return out;
  }
  if (out.hi > 0 && (out.hi - out.lo) / out.hi <= opts.stable_tol) {
    out.kind = LimitKind::Finite;
    out.value = last;
    out.rule = "stabilized";
    return out;
  }
  out.kind = LimitKind::Undetermined;
  out.rule = "unresolved";
  return out;
}

namespace {

std::uint64_t schedule_depth(const CoverSpec& spec, const LimitSchedule& schedule) {
  std::uint64_t best = 0;
  for (auto [N, D] : schedule) best = std::max(best, CoverGeometry(spec, N).deepest(D));
  return best;
}

}  // namespace

LimitClass classify_limit(const SubsetDescriptor& z, const CoverSpec& spec, const Rational& s,
                          const LimitSchedule& schedule, const ClassifyOptions& opts) {
  LayeredDag dag = build_dag(z, schedule_depth(spec, schedule));
  return classify_limit(z, dag, spec, s, schedule, opts);
}

ExponentEstimate critical_exponent(const SubsetDescriptor& z, const CoverSpec& spec, const ExponentOptions& opts) {
  ExponentEstimate est;
  if (z.empty()) {
    est.kind = EstimateKind::Value;
    est.rule = "empty";
    return est;
  }
  LayeredDag dag = build_dag(z, schedule_depth(spec, opts.schedule));
  auto probe = [&](const Rational& s) {
    LimitClass c = classify_limit(z, dag, spec, s, opts.schedule, opts.classify);
    est.probes.push_back({s, c.kind, c.rule});
    return c;
  };
  Cardinality card = cardinality_class(z);
  if (opts.classify.countable_rule && (card == Cardinality::Finite || card == Cardinality::CountablyInfinite)) {
    LimitClass c = probe(opts.s_tol);
    if (c.kind == LimitKind::Zero && c.rule == "countable") {
      est.kind = EstimateKind::Value;
      est.value = 0;
      est.lo = 0;
      est.hi = 0;
      est.rule = "countable";
      return est;
    }
  }
  Rational lo = 0, hi = 0;
  LimitClass c0 = probe(Rational(0));
  if (c0.kind == LimitKind::Zero || c0.kind == LimitKind::Finite) {
    est.kind = EstimateKind::Value;
    est.rule = "zero-at-origin";
    return est;
  }
  bool found = false;
  for (Rational s = 1; s <= opts.s_max; s *= 2) {
    LimitClass c = probe(s);
    if (c.kind == LimitKind::Zero) {
      hi = s;
      found = true;
      break;
    }
    if (c.kind == LimitKind::Finite) {
      est.kind = EstimateKind::Value;
      est.value = s.get_d();
      est.lo = est.hi = s;
      est.rule = "finite-at-probe";
      return est;
    }
    if (c.kind == LimitKind::Undetermined) {
      if (opts.undetermined_as_critical) {
        est.kind = EstimateKind::Value;
        est.value = s.get_d();
        est.lo = est.hi = s;
        est.rule = "flat-at-probe";
        return est;
      }
      est.kind = EstimateKind::Undetermined;
      est.lo = lo;
      est.hi = s;
      est.rule = "undetermined-probe";
      return est;
    }
    lo = s;
  }
  if (!found) {
    est.kind = EstimateKind::Infinite;
    est.lo = lo;
    est.hi = lo;
    est.rule = "no-zero-probe";
    return est;
  }
  bool flat = false;
  while (hi - lo > opts.s_tol) {
    Rational mid = (lo + hi) / 2;
    LimitClass c = probe(mid);
    if (c.kind == LimitKind::Zero) {
      hi = mid;
    } else if (c.kind == LimitKind::Infinite) {
      lo = mid;
    } else if (c.kind == LimitKind::Finite || opts.undetermined_as_critical) {
      lo = hi = mid;
      flat = c.kind != LimitKind::Finite;
      break;
    } else {
      est.kind = EstimateKind::Undetermined;
      est.lo = lo;
      est.hi = hi;
      est.rule = "undetermined-probe";
      return est;
    }
  }
  est.kind = EstimateKind::Value;
  est.lo = lo;
  est.hi = hi;
  est.value = Rational((lo + hi) / 2).get_d();
  est.rule = flat ? "bisection-flat" : "bisection";
  return est;
}

std::vector<Rational> default_eps_schedule() { return {Rational(1, 2), Rational(1, 4), Rational(1, 8)}; }

SlowEntropyDimension slow_entropy_dimension(const SubsetDescriptor& z, const std::vector<Rational>& eps_schedule,
                                            const ExponentOptions& opts, std::uint64_t power) {
  if (eps_schedule.empty()) throw Error(ErrorKind::InvalidArgument, "empty eps schedule");
  SlowEntropyDimension out;
  std::vector<Rational> eps = eps_schedule;
  std::sort(eps.begin(), eps.end(), [](const Rational& a, const Rational& b) { return a > b; });
  double tol = 2 * opts.s_tol.get_d();
  for (auto& e : eps) {
    ExponentEstimate est = critical_exponent(z, CoverSpec::bowen(e, power), opts);
    if (!out.per_eps.empty()) {
      const ExponentEstimate& prev = out.per_eps.back().second;
      if (prev.is_infinite() && !est.is_infinite()) out.monotone = false;
      if (prev.kind == EstimateKind::Value && est.kind == EstimateKind::Value && est.value < prev.value - tol)
        out.monotone = false;
    }
    out.per_eps.emplace_back(e, est);
  }
  out.value = out.per_eps.back().second;
  return out;
}

// ---------------------------------------------------------------- Vitali

VitaliSelection vitali_5r_select(const ActionSpec& action, const std::vector<BowenBall>& balls) {
  require_one_sided_line(action, "Vitali selection");
  std::vector<CylinderSet> cyl, dil;
  for (auto& b : balls) {
    if (b.radius * 5 >= 1) throw Error(ErrorKind::InvalidArgument, "5-dilation needs 5 eps < 1");
    cyl.push_back(bowen_ball_as_cylinder(action, b));
    BowenBall big = b;
    big.radius = b.radius * 5;
    dil.push_back(bowen_ball_as_cylinder(action, big));
  }
  std::vector<std::size_t> order(balls.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cyl[a].depth() != cyl[b].depth()) return cyl[a].depth() < cyl[b].depth();
    return cyl[a].stem < cyl[b].stem;
  });
  VitaliSelection sel;
  for (std::size_t i : order) {
    bool free = true;
    for (std::size_t j : sel.selected) free = free && cyl[i].disjoint(cyl[j]);
    if (free) sel.selected.push_back(i);
  }
  sel.disjoint = true;
  for (std::size_t a = 0; a < sel.selected.size(); ++a)
    for (std::size_t b = a + 1; b < sel.selected.size(); ++b)
      sel.disjoint = sel.disjoint && cyl[sel.selected[a]].disjoint(cyl[sel.selected[b]]);
  for (std::size_t i = 0; i < balls.size(); ++i) {
    bool in = false;
    for (std::size_t j : sel.selected) in = in || dil[j].contains(cyl[i]);
    if (!in) sel.uncovered.push_back(i);
  }
  sel.covered = sel.uncovered.empty();
  return sel;
}

// ---------------------------------------------------------------- outer measure

bool prefix_subset(const SubsetDescriptor& a, const SubsetDescriptor& b, std::uint64_t depth) {
  if (a.empty()) return true;
  if (b.empty()) return false;
  return prefix_count(SubsetDescriptor::set_union({a, b}), depth) == prefix_count(b, depth);
}

std::vector<OuterCheck> outer_measure_checks(const std::vector<OuterInstance>& instances) {
  std::vector<OuterCheck> out;
  for (auto& inst : instances) {
    CoverSpec spec = CoverSpec::bowen(inst.eps);
    SubsetDescriptor un = SubsetDescriptor::set_union({inst.z1, inst.z2});
    SubsetDescriptor none = SubsetDescriptor::finite({}, inst.z1.alphabet());
    auto m = [&](const SubsetDescriptor& z) { return cover_value(z, spec, inst.s, inst.N, inst.D).exact(); };
    ExactReal m1 = m(inst.z1), m2 = m(inst.z2), mu = m(un), m0 = m(none);
    out.push_back({inst.name, "M(empty) = 0", m0.is_zero(), m0.to_string()});
    out.push_back({inst.name, "M subadditive", compare(mu, m1 + m2) <= 0,
                   std::to_string(static_cast<double>(mu.approx())) + " <= " +
                       std::to_string(static_cast<double>((m1 + m2).approx()))});
    bool sub12 = prefix_subset(inst.z1, inst.z2, inst.D), sub21 = prefix_subset(inst.z2, inst.z1, inst.D);
    if (sub12) out.push_back({inst.name, "M monotone (Z1 in Z2)", compare(m1, m2) <= 0, ""});
    if (sub21) out.push_back({inst.name, "M monotone (Z2 in Z1)", compare(m2, m1) <= 0, ""});
    out.push_back({inst.name, "M(Z1) <= M(Z1 u Z2)", compare(m1, mu) <= 0, ""});
    if (inst.weighted) {
      auto w = [&](const SubsetDescriptor& z) { return weighted_value(z, spec, inst.s, inst.N, inst.D).value; };
      ExactReal w1 = w(inst.z1), w2 = w(inst.z2), wu = w(un), w0 = w(none);
      out.push_back({inst.name, "W(empty) = 0", w0.is_zero(), w0.to_string()});
      out.push_back({inst.name, "W subadditive", compare(wu, w1 + w2) <= 0, ""});
      if (sub12) out.push_back({inst.name, "W monotone (Z1 in Z2)", compare(w1, w2) <= 0, ""});
      if (sub21) out.push_back({inst.name, "W monotone (Z2 in Z1)", compare(w2, w1) <= 0, ""});
      out.push_back({inst.name, "W(Z1) <= W(Z1 u Z2)", compare(w1, wu) <= 0, ""});
    }
  }
  return out;
}

}  // namespace slowent
