#pragma once

#include "slowent/lattice.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace slowent {

// pre . period^infinity
struct EventuallyPeriodic {
  Word preperiod;
  Word period;  // non-empty

  Symbol at(std::uint64_t i) const;
  Word prefix(std::uint64_t n) const;
  EventuallyPeriodic shifted(std::uint64_t i) const;
  // Minimal period and shortest preperiod.
  EventuallyPeriodic canonical() const;
  std::string to_string() const;  // "pre(period)"
  static EventuallyPeriodic parse(const std::string& text);
  bool operator==(const EventuallyPeriodic&) const = default;
  auto operator<=>(const EventuallyPeriodic&) const = default;
};

struct Dfa {
  int alphabet = 2;
  int start = 0;
  std::vector<bool> accepting;
  std::vector<std::vector<int>> next;  // next[state][symbol], -1 when absent

  int states() const { return static_cast<int>(next.size()); }
  void validate() const;
  // Keeps accepting states that are reachable and have an infinite
  // continuation; an empty result has zero states.
  Dfa trimmed() const;
  bool empty() const { return next.empty(); }

  static Dfa full_shift(int alphabet);
  static Dfa golden_mean();  // 11 forbidden
  static Dfa zeros_then_ones();  // 0*1*
  static Dfa single_point(const EventuallyPeriodic& x, int alphabet);
};

// Positions that carry free symbols in a sparse product.
struct FreePositions {
  enum class Kind { Powers, PowerLaw, Arithmetic, Explicit };
  Kind kind = Kind::Powers;
  Rational parameter = 2;  // beta for Powers, exponent a for PowerLaw
  std::uint64_t start = 0, step = 1;  // Arithmetic
  std::vector<std::uint64_t> explicit_positions;
  std::uint64_t offset = 0;  // positions are f - offset for f >= offset

  // Sorted, distinct positions < bound.
  std::vector<std::uint64_t> below(std::uint64_t bound) const;
  std::vector<BigInt> below_big(const BigInt& bound) const;
  std::string describe() const;
};

struct SparseProduct {
  int branching = 2;  // symbols 0..b-1 at free positions
  Symbol fill = 0;    // symbol at all other positions
  FreePositions free;
};

struct FiniteSet {
  std::vector<EventuallyPeriodic> points;
};

struct RegularSet {
  Dfa dfa;  // trimmed
};

class SubsetDescriptor;

struct UnionSet {
  std::vector<SubsetDescriptor> members;
};

class SubsetDescriptor {
 public:
  using Variant = std::variant<FiniteSet, RegularSet, SparseProduct, UnionSet>;

  SubsetDescriptor() = default;
  static SubsetDescriptor finite(std::vector<EventuallyPeriodic> points, int alphabet);
  static SubsetDescriptor regular(const Dfa& dfa);
  static SubsetDescriptor sparse_product(SparseProduct sp, int alphabet);
  static SubsetDescriptor set_union(std::vector<SubsetDescriptor> members);

  int alphabet() const { return alphabet_; }
  const Variant& value() const { return value_; }
  std::string kind_name() const;
  bool empty() const;

 private:
  Variant value_;
  int alphabet_ = 2;
};

enum class GrowthKind { PolynomialDegree, Superpolynomial, Exponential };

struct GrowthClass {
  GrowthKind kind = GrowthKind::PolynomialDegree;
  double degree = 0;            // PolynomialDegree
  std::optional<Rational> exact_degree;
  double rate = 0;              // Exponential: lim (1/n) log p(n)
  std::string to_string() const;
};

enum class Cardinality { Empty, Finite, CountablyInfinite, Uncountable };
const char* cardinality_name(Cardinality c);

// Accessor over the prefix tree; nodes are identified per depth by keys.
class TreeView {
 public:
  using Key = std::vector<std::int32_t>;
  struct Child {
    Symbol symbol;
    Key key;
  };

  TreeView(const SubsetDescriptor& z, std::uint64_t max_depth);
  Key root() const;
  // Children of a node at the given depth that lie on the tree, by symbol.
  void children(std::uint64_t depth, const Key& key, std::vector<Child>& out) const;
  std::uint64_t max_depth() const { return max_depth_; }

 private:
  void children_of(const SubsetDescriptor& z, std::uint64_t depth, const std::int32_t* payload,
                   std::size_t len, std::vector<Child>& out) const;
  Key root_of(const SubsetDescriptor& z) const;
  void collect_free(const SubsetDescriptor& z);

  const SubsetDescriptor* z_;
  std::uint64_t max_depth_;
  std::unordered_map<const SparseProduct*, std::vector<bool>> free_;
};

// Memoised prefix tree: layers[L] are the distinct node classes at depth L.
struct LayeredDag {
  struct Node {
    TreeView::Key key;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> children;  // (index in next layer, multiplicity)
  };
  std::vector<std::vector<Node>> layers;
  std::uint64_t depth() const { return layers.empty() ? 0 : layers.size() - 1; }
  // Number of tree nodes (words) per class, forward multiplicities.
  std::vector<std::vector<BigInt>> forward_counts() const;
};

LayeredDag build_dag(const SubsetDescriptor& z, std::uint64_t depth, std::size_t class_budget = 200000);

BigInt prefix_count(const SubsetDescriptor& z, std::uint64_t n);
std::vector<Word> enumerate_prefixes(const SubsetDescriptor& z, std::uint64_t n, std::size_t limit);
GrowthClass growth_class(const SubsetDescriptor& z);
Cardinality cardinality_class(const SubsetDescriptor& z);
SubsetDescriptor shift_image(const SubsetDescriptor& z, std::uint64_t i);

// Tarjan SCCs of a trimmed DFA in reverse topological order.
std::vector<std::vector<int>> strongly_connected_components(const Dfa& dfa);

struct PerronEstimate {
  long double rho = 0;
  std::uint64_t iterations = 0;
  bool converged = false;
  // Collatz-Wielandt bound: x > 0 on a principal block with A x >= lower * x.
  Rational certified_lower;
  std::vector<int> support;
};

// Power iteration on A + I for the transition count matrix of a trimmed DFA.
PerronEstimate perron_estimate(const Dfa& dfa, double tol = 1e-9, std::uint64_t max_iter = 200000);

// All points of a trimmed DFA whose language has bounded growth (degree 0).
std::vector<EventuallyPeriodic> dfa_points(const Dfa& dfa);

}  // namespace slowent
