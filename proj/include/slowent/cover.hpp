#pragma once

#include "slowent/exact_real.hpp"
#include "slowent/lattice.hpp"
#include "slowent/subsets.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace slowent {

enum class CoverFamily {
  Bowen,              // B_k(x, eps), weight k^{-s}
  Hausdorff,          // cylinders of depth >= N, weight diam^s
  GeneratorCylinder,  // depth >= k cylinders of the generator, weight depth^{-s}
};

const char* cover_family_name(CoverFamily f);

struct CoverSpec {
  CoverFamily family = CoverFamily::Bowen;
  ActionSpec action;
  Rational eps = Rational(1, 2);
  std::uint64_t power = 1;         // Bowen balls of sigma^m
  Rational weight_fault = 1;       // scales every weight; 1 outside fault-injection runs

  static CoverSpec bowen(const Rational& eps, std::uint64_t power = 1);
  static CoverSpec hausdorff();
  static CoverSpec generator();
};

// Which cylinder depths carry a ball for a fixed lower order N.
class CoverGeometry {
 public:
  CoverGeometry(const CoverSpec& spec, std::uint64_t N);
  // Integer whose -s power is the weight of a ball at this depth.
  std::optional<std::uint64_t> base_at(std::uint64_t depth) const;
  std::uint64_t shallowest() const { return shallowest_; }
  // Deepest eligible depth <= cap; throws CapExceeded if there is none.
  std::uint64_t deepest(std::uint64_t cap) const;
  const CoverSpec& spec() const { return spec_; }
  std::uint64_t N() const { return N_; }
  std::uint64_t n_eps() const { return n_eps_; }

 private:
  CoverSpec spec_;
  std::uint64_t N_;
  std::uint64_t n_eps_ = 0;
  std::uint64_t shallowest_ = 0;
};

struct CoverValue {
  CoverFamily family = CoverFamily::Bowen;
  Exponent s;
  std::uint64_t N = 1;
  Rational eps;
  std::uint64_t power = 1;
  std::uint64_t depth_cap = 0;
  std::uint64_t effective_depth = 0;
  Rational weight_scale = 1;
  Interval enclosure;
  std::map<std::uint64_t, BigInt> orders;  // base -> number of balls

  ExactReal exact() const;
  long double approx() const { return enclosure.mid(); }
  BigInt ball_count() const;
};

// Per-class DP decisions, kept for certificates and Frostman masses.
struct CoverSolution {
  std::uint64_t depth = 0;  // effective depth
  std::vector<std::vector<Interval>> value;
  std::vector<std::vector<char>> chosen;
  CoverValue summary;
};

CoverSolution solve_cover(const LayeredDag& dag, const CoverGeometry& geo, const Exponent& s, std::uint64_t cap);

CoverValue cover_value(const SubsetDescriptor& z, const CoverSpec& spec, const Rational& s, std::uint64_t N,
                       std::uint64_t D);
CoverValue caratheodory_value(const SubsetDescriptor& z, const Rational& s, std::uint64_t N, const Rational& eps,
                              std::uint64_t D);

// Multiset of ball weights under a set of DAG roots (explicit multiplicities),
// following DP decisions.
std::map<std::uint64_t, BigInt> collect_orders(const LayeredDag& dag, const CoverSolution& sol,
                                               const CoverGeometry& geo, std::uint64_t layer,
                                               const std::vector<std::pair<std::uint32_t, BigInt>>& roots);
ExactReal orders_value(const std::map<std::uint64_t, BigInt>& orders, const Exponent& s, const Rational& scale);

// ---------------------------------------------------------------- weighted

struct WeightedEntry {
  Word stem;
  Rational coefficient;
};

struct WeightedValue {
  ExactReal value;
  Interval enclosure;
  std::string method;  // "simplex" or "dag-certificate"
  bool certified = false;
  std::size_t pivots = 0;
  std::vector<WeightedEntry> cover;  // explicit trees only
};

struct WeightedOptions {
  std::size_t explicit_node_limit = 3000;
  std::size_t explicit_leaf_limit = 256;
  bool force_certificate = false;
};

WeightedValue weighted_value(const SubsetDescriptor& z, const CoverSpec& spec, const Rational& s, std::uint64_t N,
                             std::uint64_t D, const WeightedOptions& opts = {});
WeightedValue weighted_value(const SubsetDescriptor& z, const Rational& s, std::uint64_t N, const Rational& eps,
                             std::uint64_t D, const WeightedOptions& opts = {});

// ---------------------------------------------------------------- limits

enum class LimitKind { Zero, Infinite, Finite, Undetermined };
const char* limit_kind_name(LimitKind k);

struct LimitSample {
  std::uint64_t N = 0, D = 0;
  long double value = 0;
};

struct LimitClass {
  LimitKind kind = LimitKind::Undetermined;
  long double value = 0;         // Finite
  long double lo = 0, hi = 0;    // bracket of the tail
  double slope = 0;              // d log V / d log N over the tail
  std::string rule;
  std::vector<LimitSample> evidence;
  std::vector<LimitSample> depth_evidence;  // fixed N, growing D
  bool depth_strictly_decreasing = false;
};

struct ClassifyOptions {
  long double zero_tol = 1e-6L;
  long double inf_tol = 1e6L;
  double trend_tol = 0.005;
  double stable_tol = 0.01;
  // relative drop tolerated between steps of a monotone tail
  long double monotone_slack = 1e-4L;
  std::size_t tail = 4;
  bool countable_rule = true;
};

using LimitSchedule = std::vector<std::pair<std::uint64_t, std::uint64_t>>;  // (N, D)
LimitSchedule default_limit_schedule();

LimitClass classify_limit(const SubsetDescriptor& z, const CoverSpec& spec, const Rational& s,
                          const LimitSchedule& schedule, const ClassifyOptions& opts = {});
// Same, reusing a DAG built to at least the largest cap.
LimitClass classify_limit(const SubsetDescriptor& z, const LayeredDag& dag, const CoverSpec& spec,
                          const Rational& s, const LimitSchedule& schedule, const ClassifyOptions& opts);

enum class EstimateKind { Value, Infinite, Undetermined };

struct ExponentProbe {
  Rational s;
  LimitKind kind;
  std::string rule;
};

struct ExponentEstimate {
  EstimateKind kind = EstimateKind::Undetermined;
  double value = 0;
  Rational lo = 0, hi = 0;
  std::string rule;
  std::vector<ExponentProbe> probes;
  bool is_infinite() const { return kind == EstimateKind::Infinite; }
};

struct ExponentOptions {
  LimitSchedule schedule = default_limit_schedule();
  Rational s_tol = Rational(1, 20);
  Rational s_max = 8;
  ClassifyOptions classify;
  // A flat, undecided probe sits at the plateau around the critical value.
  bool undetermined_as_critical = true;
};

ExponentEstimate critical_exponent(const SubsetDescriptor& z, const CoverSpec& spec,
                                   const ExponentOptions& opts = {});

struct SlowEntropyDimension {
  std::vector<std::pair<Rational, ExponentEstimate>> per_eps;
  ExponentEstimate value;  // at the smallest eps
  bool monotone = true;
};

std::vector<Rational> default_eps_schedule();
SlowEntropyDimension slow_entropy_dimension(const SubsetDescriptor& z, const std::vector<Rational>& eps_schedule,
                                            const ExponentOptions& opts = {}, std::uint64_t power = 1);

// ---------------------------------------------------------------- Vitali 5r

struct VitaliSelection {
  std::vector<std::size_t> selected;
  bool disjoint = false;
  bool covered = false;
  std::vector<std::size_t> uncovered;
};

VitaliSelection vitali_5r_select(const ActionSpec& action, const std::vector<BowenBall>& balls);

// ---------------------------------------------------------------- outer-measure checks

struct OuterInstance {
  std::string name;
  SubsetDescriptor z1, z2;
  Rational s;
  std::uint64_t N = 2;
  Rational eps = Rational(2, 5);
  std::uint64_t D = 64;
  bool weighted = true;
};

struct OuterCheck {
  std::string instance;
  std::string property;
  bool holds = false;
  std::string detail;
};

// Subset relation of the prefix trees up to the given depth.
bool prefix_subset(const SubsetDescriptor& a, const SubsetDescriptor& b, std::uint64_t depth);

std::vector<OuterCheck> outer_measure_checks(const std::vector<OuterInstance>& instances);

}  // namespace slowent
