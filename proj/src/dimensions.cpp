#include "slowent/dimensions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace slowent {

std::uint64_t hausdorff_min_depth(const Rational& delta) {
  if (sgn(delta) <= 0 || delta >= 1) throw Error(ErrorKind::InvalidArgument, "delta must lie in (0, 1)");
  Rational inv = 1 / delta;
  BigInt c;
  mpz_cdiv_q(c.get_mpz_t(), inv.get_num_mpz_t(), inv.get_den_mpz_t());
  return c.get_ui() - 1;
}

CoverValue hausdorff_value(const SubsetDescriptor& z, const Rational& s, const Rational& delta, std::uint64_t D) {
  return cover_value(z, CoverSpec::hausdorff(), s, hausdorff_min_depth(delta), D);
}

ExponentEstimate hausdorff_dimension(const SubsetDescriptor& z, const ExponentOptions& opts) {
  return critical_exponent(z, CoverSpec::hausdorff(), opts);
}

BigInt box_counting(const SubsetDescriptor& z, const Rational& eps) {
  if (eps >= 1) throw Error(ErrorKind::InvalidArgument, "box counting needs eps < 1");
  return prefix_count(z, cylinder_depth_for_radius(ActionSpec{}, eps));
}

std::vector<std::uint64_t> default_count_schedule() {
  std::vector<std::uint64_t> out;
  for (int q = 16; q <= 56; ++q) out.push_back(static_cast<std::uint64_t>(std::llround(std::exp2(q / 4.0))));
  return out;
}

namespace {

GrowthExponent growth_exponent(const SubsetDescriptor& z, const std::vector<std::uint64_t>& schedule, bool box) {
  GrowthExponent out;
  GrowthClass g = growth_class(z);
  for (std::uint64_t n : schedule) {
    if (n < 2) continue;
    BigInt p = prefix_count(z, n);
    double denom = box ? std::log(static_cast<double>(n + 1)) : std::log(static_cast<double>(n));
    out.ratios.emplace_back(n, sgn(p) > 0 ? log_of(p) / denom : 0.0);
  }
  std::size_t half = out.ratios.size() / 2;
  for (std::size_t i = half; i < out.ratios.size(); ++i)
    out.schedule_limsup = std::max(out.schedule_limsup, out.ratios[i].second);
  switch (g.kind) {
    case GrowthKind::PolynomialDegree:
      out.value = g.degree;
      out.exact = g.exact_degree;
      out.method = "growth-degree";
      break;
    case GrowthKind::Superpolynomial:
    case GrowthKind::Exponential:
      out.infinite = true;
      out.method = g.kind == GrowthKind::Exponential ? "exponential-growth" : "superpolynomial-growth";
      break;
  }
  return out;
}

std::string show(const ExponentEstimate& e) {
  if (e.is_infinite()) return "+INF";
  if (e.kind == EstimateKind::Undetermined) return "undetermined";
  std::ostringstream os;
  os << e.value;
  return os.str();
}

std::string show(const GrowthExponent& g) {
  if (g.infinite) return "+INF";
  if (g.exact) return to_string(*g.exact);
  std::ostringstream os;
  os << g.value;
  return os.str();
}

}  // namespace

GrowthExponent box_dimension_upper(const SubsetDescriptor& z, const std::vector<std::uint64_t>& schedule) {
  return growth_exponent(z, schedule, true);
}

GrowthExponent open_cover_slow_entropy(const SubsetDescriptor& z, const std::vector<std::uint64_t>& schedule) {
  return growth_exponent(z, schedule, false);
}

bool same_exponent(const GrowthExponent& a, const GrowthExponent& b) {
  if (a.infinite || b.infinite) return a.infinite == b.infinite;
  if (a.exact && b.exact) return *a.exact == *b.exact;
  return !a.exact && !b.exact && a.value == b.value;
}

CoverValue bowen_cover_slow_value(const SubsetDescriptor& z, const Rational& s, std::uint64_t k, std::uint64_t D) {
  return cover_value(z, CoverSpec::generator(), s, k, D);
}

ExponentEstimate bowen_cover_exponent(const SubsetDescriptor& z, const ExponentOptions& opts) {
  return critical_exponent(z, CoverSpec::generator(), opts);
}

BowenEntropy bowen_entropy(const SubsetDescriptor& z) {
  BowenEntropy out;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, RegularSet>) {
          if (v.dfa.empty()) {
            out.method = "empty";
            return;
          }
          if (growth_class(z).kind != GrowthKind::Exponential) {
            out.method = "polynomial-growth";
            return;
          }
          PerronEstimate p = perron_estimate(v.dfa);
          out.value = static_cast<double>(std::log(p.rho));
          out.certified_lower = p.certified_lower;
          out.iterations = p.iterations;
          out.converged = p.converged;
          out.positive = p.certified_lower > 1;
          out.method = "perron";
        } else if constexpr (std::is_same_v<T, UnionSet>) {
          out.method = "polynomial-growth";
          for (auto& m : v.members) {
            BowenEntropy h = bowen_entropy(m);
            if (h.value > out.value || (h.positive && !out.positive)) out = h;
          }
        } else {
          out.method = "polynomial-growth";
        }
      },
      z.value());
  return out;
}

InfiniteFlags classify_infinite(const SubsetDescriptor& z, const BowenEntropy& h) {
  InfiniteFlags f;
  f.bowen_positive = h.positive;
  f.exponential_growth = growth_class(z).kind == GrowthKind::Exponential;
  f.h_S_top_infinite = f.bowen_positive;
  f.h_S_cover_infinite = f.exponential_growth;
  return f;
}

bool estimates_agree(const ExponentEstimate& a, const ExponentEstimate& b, double tol) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
  if (a.kind != EstimateKind::Value || b.kind != EstimateKind::Value) return false;
  return std::fabs(a.value - b.value) <= tol;
}

namespace {

// a <= b + tol for exponents, +INF on the right absorbs anything.
bool at_most(const ExponentEstimate& a, const GrowthExponent& b, double tol) {
  if (b.infinite) return true;
  if (a.is_infinite() || a.kind != EstimateKind::Value) return false;
  return a.value <= b.value + tol;
}

}  // namespace

DimensionReport dimension_report(const std::string& name, const SubsetDescriptor& z, const DimensionOptions& opts) {
  DimensionReport r;
  r.name = name;
  r.kind = z.kind_name();
  r.options = opts;
  r.growth = growth_class(z);
  r.cardinality = cardinality_class(z);
  r.bowen = bowen_entropy(z);
  r.flags = classify_infinite(z, r.bowen);
  const double tol = 2 * opts.exponent.s_tol.get_d();

  if (r.flags.h_S_top_infinite) {
    std::vector<Rational> eps = opts.eps;
    std::sort(eps.begin(), eps.end(), [](const Rational& a, const Rational& b) { return a > b; });
    for (auto& e : eps) {
      ExponentEstimate inf;
      inf.kind = EstimateKind::Infinite;
      inf.rule = "bowen-entropy-positive";
      r.h_S_top.per_eps.emplace_back(e, inf);
    }
    r.h_S_top.value = r.h_S_top.per_eps.back().second;
    r.infinite_probe = classify_limit(z, CoverSpec::bowen(eps.back()), opts.infinite_probe, opts.exponent.schedule,
                                      opts.exponent.classify);
  } else {
    r.h_S_top = slow_entropy_dimension(z, opts.eps, opts.exponent);
  }
  r.dim_H = hausdorff_dimension(z, opts.exponent);
  r.dim_B_upper = box_dimension_upper(z, opts.counts);
  r.h_S_cover = open_cover_slow_entropy(z, opts.counts);
  if (opts.bowen_cover) r.h_BS = bowen_cover_exponent(z, opts.exponent);

  const ExponentEstimate& top = r.h_S_top.value;
  r.checks.push_back({"h_S_top = dim_H", estimates_agree(top, r.dim_H, tol),
                      show(top) + " vs " + show(r.dim_H) + " (tol " + std::to_string(tol) + ")"});
  r.checks.push_back({"dim_B_upper = h_S_cover", same_exponent(r.dim_B_upper, r.h_S_cover),
                      show(r.dim_B_upper) + " vs " + show(r.h_S_cover)});
  r.checks.push_back({"h_S_top <= h_S_cover", at_most(top, r.h_S_cover, tol) || (top.is_infinite() && r.h_S_cover.infinite),
                      show(top) + " <= " + show(r.h_S_cover)});
  if (r.h_BS)
    r.checks.push_back({"h_BS <= h_S_cover", at_most(*r.h_BS, r.h_S_cover, tol) ||
                                                 (r.h_BS->is_infinite() && r.h_S_cover.infinite),
                        show(*r.h_BS) + " <= " + show(r.h_S_cover)});
  if (r.flags.bowen_positive)
    r.checks.push_back({"bowen entropy > 0 => h_S_top = +INF", top.is_infinite(),
                        "probe s=" + to_string(opts.infinite_probe) + " " +
                            (r.infinite_probe ? limit_kind_name(r.infinite_probe->kind) : "none")});
  r.checks.push_back({"h_S_top monotone in eps", r.h_S_top.monotone, ""});

  bool sandwich = true;
  std::string detail;
  for (auto& e : opts.eps) {
    std::uint64_t m = cylinder_depth_for_radius(ActionSpec{}, e);
    BigInt N = box_counting(z, e);
    sandwich = sandwich && prefix_count(z, m) <= N;
    for (std::uint64_t n : {1, 2, 4, 8}) sandwich = sandwich && N <= prefix_count(z, n + m - 1);
    detail += "eps=" + to_string(e) + ":N=" + N.get_str() + " ";
  }
  if (!detail.empty()) detail.pop_back();
  r.checks.push_back({"count sandwich", sandwich, detail});
  return r;
}

}  // namespace slowent
