#pragma once

#include "slowent/cover.hpp"
#include "slowent/subsets.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace slowent {

struct BernoulliMeasure {
  std::vector<Rational> p;
};

// Symbol-emitting chain on a DFA: emit[q][a] > 0 only where next[q][a] exists.
struct MarkovMeasure {
  Dfa dfa;
  std::vector<Rational> initial;
  std::vector<std::vector<Rational>> emit;
};

// Masses of all support cylinders up to a working depth.
struct TreeMass {
  SubsetDescriptor support;
  std::uint64_t depth = 0;
  std::map<Word, Rational> mass;
};

// Independent choices at the free positions; probs[j] is used at the j-th
// free position, the last vector repeating.
struct ProductOnSparse {
  SparseProduct support;
  std::vector<std::vector<Rational>> probs;
  const std::vector<Rational>& at(std::size_t j) const { return probs[std::min(j, probs.size() - 1)]; }
};

class MeasureDescriptor {
 public:
  using Variant = std::variant<BernoulliMeasure, MarkovMeasure, TreeMass, ProductOnSparse>;

  MeasureDescriptor() = default;
  static MeasureDescriptor bernoulli(std::vector<Rational> p);
  static MeasureDescriptor markov(const Dfa& dfa, std::vector<Rational> initial,
                                  std::vector<std::vector<Rational>> emit);
  static MeasureDescriptor point_mass(const EventuallyPeriodic& x, int alphabet);
  static MeasureDescriptor tree_mass(TreeMass t);
  static MeasureDescriptor product_on_sparse(const SparseProduct& sp, int alphabet,
                                             std::vector<std::vector<Rational>> probs);
  static MeasureDescriptor uniform_on_sparse(const SparseProduct& sp, int alphabet);
  // p0 on symbol 0, the rest split evenly.
  static MeasureDescriptor biased_on_sparse(const SparseProduct& sp, int alphabet, const Rational& p0);

  int alphabet() const { return alphabet_; }
  const Variant& value() const { return value_; }
  std::string kind_name() const;
  SubsetDescriptor support() const;
  // Cylinders of equal depth in the support carry equal mass.
  bool homogeneous() const;

 private:
  Variant value_;
  int alphabet_ = 2;
};

Rational cylinder_mass(const MeasureDescriptor& mu, const Word& w);
bool tree_mass_consistent(const TreeMass& t);

// ---------------------------------------------------------------- local entropy

struct LocalSample {
  std::string n;  // decimal, possibly huge
  double log_n = 0;
  double value = 0;  // +inf on a zero-mass cylinder
};

struct LocalSlowEntropyEstimate {
  std::string point;
  Rational eps;
  std::vector<LocalSample> values;
  double liminf_estimate = 0;
  bool decided = false;
  bool diverging = false;
  bool infinite() const { return diverging || liminf_estimate == std::numeric_limits<double>::infinity(); }
};

struct LocalOptions {
  std::vector<std::uint64_t> n_schedule;  // empty: quarter octaves 2^4 .. 2^14
  // ProductOnSparse on powers: one point per free position up to 2^deep_bits.
  bool deep = true;
  unsigned deep_bits = 1024;
  std::size_t window = 4;
  double cauchy_tol = 0.01;
};

std::vector<std::uint64_t> default_local_schedule();

LocalSlowEntropyEstimate local_slow_entropy(const MeasureDescriptor& mu, const EventuallyPeriodic& x,
                                            const Rational& eps, const LocalOptions& opts = {});

// ---------------------------------------------------------------- integrated

enum class Integration { Auto, Exact, Atomic, MonteCarlo };
const char* integration_name(Integration i);

struct MeasureEntropyOptions {
  std::vector<Rational> eps = default_eps_schedule();
  LocalOptions local;
  Integration integration = Integration::Auto;
  std::size_t samples = 4096;
  std::uint64_t seed = 1;
  double tail_mass = 1e-6;
  double undecided_fraction = 0.05;
};

struct MeasureEntropyAtEps {
  Rational eps;
  double value = 0;
  bool infinite = false;
  double std_error = 0;
  std::size_t points = 0;
  std::size_t undecided = 0;
  bool decided = true;
};

struct MeasureEntropy {
  double value = 0;
  bool infinite = false;
  bool decided = true;
  Integration method = Integration::Exact;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double std_error = 0;
  bool monotone_in_eps = true;
  std::vector<MeasureEntropyAtEps> per_eps;
};

MeasureEntropy measure_slow_entropy(const MeasureDescriptor& mu, const MeasureEntropyOptions& opts = {});

// ---------------------------------------------------------------- Frostman

struct FrostmanResult {
  MeasureDescriptor measure;
  Rational achieved_c;    // mu(B) <= (1/achieved_c) k^{-s} on every ball of order k
  Rational cap_constant;  // 1 / achieved_c
  long double dp_value = 0;  // M(K, s, N, eps) at the same cap
  std::uint64_t first_order = 0, last_order = 0;
  std::uint64_t nodes = 0;
  bool caps_hold = false;
  bool mass_one = false;
};

FrostmanResult frostman_construct(const SubsetDescriptor& k, const Rational& s, std::uint64_t N, const Rational& eps,
                                  std::uint64_t D, std::size_t node_budget = 2000000);

// Exact re-check of the cap inequality at every node of the stored tree.
bool verify_frostman(const FrostmanResult& f, const Rational& s, std::uint64_t N, const Rational& eps);

// ---------------------------------------------------------------- principles

enum class Direction { Upper, Lower };

struct DistributionCheck {
  bool holds = false;
  bool decided = true;
  Direction direction = Direction::Upper;
  Rational s;
  std::size_t points = 0;
  std::size_t violations = 0;
  Rational support_mass;  // mu of the depth-d prefix cover of E
  ExponentEstimate exponent;
  bool exponent_consistent = false;
};

DistributionCheck distribution_principle_check(const MeasureDescriptor& mu, const SubsetDescriptor& e,
                                               const Rational& s, Direction dir,
                                               const MeasureEntropyOptions& mopts = {},
                                               const ExponentOptions& eopts = {}, double tol = 0.1);

struct VariationalMember {
  std::string name;
  MeasureEntropy entropy;
  bool easy_direction = false;  // value <= h_S_top + 2 tol
};

struct VariationalGap {
  std::vector<VariationalMember> members;
  double sup_measure_value = 0;
  bool sup_infinite = false;
  SlowEntropyDimension h_S_top;
  double gap = 0;
  bool gap_infinite = false;
  std::string best;
};

// mu(K) at prefix depth d, exactly: sum of masses of the depth-d prefixes of K.
Rational support_mass(const MeasureDescriptor& mu, const SubsetDescriptor& k, std::uint64_t depth);
std::uint64_t support_check_depth(const SubsetDescriptor& k);

VariationalGap variational_gap(const SubsetDescriptor& k,
                               const std::vector<std::pair<std::string, MeasureDescriptor>>& family,
                               const MeasureEntropyOptions& mopts = {}, const ExponentOptions& eopts = {},
                               const std::vector<Rational>& eps = default_eps_schedule());

}  // namespace slowent
