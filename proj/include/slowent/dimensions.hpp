#pragma once

#include "slowent/cover.hpp"
#include "slowent/subsets.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace slowent {

// Minimum cylinder depth m with diam(C_m) = 1/(m+1) <= delta.
std::uint64_t hausdorff_min_depth(const Rational& delta);

CoverValue hausdorff_value(const SubsetDescriptor& z, const Rational& s, const Rational& delta, std::uint64_t D);
ExponentEstimate hausdorff_dimension(const SubsetDescriptor& z, const ExponentOptions& opts = {});

BigInt box_counting(const SubsetDescriptor& z, const Rational& eps);

// Polynomial growth exponent of the prefix counts, exact when the growth
// class gives it.
struct GrowthExponent {
  bool infinite = false;
  double value = 0;
  std::optional<Rational> exact;
  std::string method;
  // log p(n) / log n (or log N(Z,eps) / -log eps) at the schedule points.
  std::vector<std::pair<std::uint64_t, double>> ratios;
  double schedule_limsup = 0;
};

std::vector<std::uint64_t> default_count_schedule();  // 2^4 .. 2^14 in quarter octaves
GrowthExponent box_dimension_upper(const SubsetDescriptor& z,
                                   const std::vector<std::uint64_t>& schedule = default_count_schedule());
GrowthExponent open_cover_slow_entropy(const SubsetDescriptor& z,
                                       const std::vector<std::uint64_t>& schedule = default_count_schedule());
bool same_exponent(const GrowthExponent& a, const GrowthExponent& b);

CoverValue bowen_cover_slow_value(const SubsetDescriptor& z, const Rational& s, std::uint64_t k, std::uint64_t D);
ExponentEstimate bowen_cover_exponent(const SubsetDescriptor& z, const ExponentOptions& opts = {});

struct BowenEntropy {
  double value = 0;
  bool positive = false;
  std::string method;
  Rational certified_lower = 0;  // lower bound on the spectral radius
  std::uint64_t iterations = 0;
  bool converged = true;
};

BowenEntropy bowen_entropy(const SubsetDescriptor& z);

struct InfiniteFlags {
  bool bowen_positive = false;
  bool exponential_growth = false;
  bool h_S_top_infinite = false;
  bool h_S_cover_infinite = false;
};

InfiniteFlags classify_infinite(const SubsetDescriptor& z, const BowenEntropy& h);

struct IdentityCheck {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct DimensionOptions {
  ExponentOptions exponent;
  std::vector<Rational> eps = default_eps_schedule();
  std::vector<std::uint64_t> counts = default_count_schedule();
  bool bowen_cover = true;
  Rational infinite_probe = 5;
};

struct DimensionReport {
  std::string name;
  std::string kind;
  GrowthClass growth;
  Cardinality cardinality = Cardinality::Empty;
  SlowEntropyDimension h_S_top;
  GrowthExponent h_S_cover;
  ExponentEstimate dim_H;
  GrowthExponent dim_B_upper;
  BowenEntropy bowen;
  std::optional<ExponentEstimate> h_BS;
  InfiniteFlags flags;
  std::optional<LimitClass> infinite_probe;
  std::vector<IdentityCheck> checks;
  DimensionOptions options;
};

DimensionReport dimension_report(const std::string& name, const SubsetDescriptor& z,
                                 const DimensionOptions& opts = {});

// |a - b| <= tol, with two infinities counted as equal.
bool estimates_agree(const ExponentEstimate& a, const ExponentEstimate& b, double tol);

}  // namespace slowent
