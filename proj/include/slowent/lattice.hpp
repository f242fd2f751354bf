#pragma once

#include "slowent/numeric.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace slowent {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

constexpr int kMaxAlphabet = 36;

// Digits 0-9 then a-z.
std::string word_to_string(const Word& w);
Word word_from_string(const std::string& s);

enum class Sidedness { OneSided, TwoSided };

struct ActionSpec {
  int d = 1;
  Sidedness sided = Sidedness::OneSided;

  // |H_n|: n^d one-sided, (2n-1)^d two-sided; n >= 1.
  BigInt lambda(std::uint64_t n) const;
  bool operator==(const ActionSpec&) const = default;
};

// A finite configuration on the box H_R.
class Configuration {
 public:
  Configuration(ActionSpec action, std::uint64_t radius, std::vector<Symbol> data);
  static Configuration from_word(const Word& w);

  const ActionSpec& action() const { return action_; }
  std::uint64_t radius() const { return radius_; }
  std::uint64_t side() const;
  // Coordinates in [0, R)^d or (-R, R)^d.
  Symbol at(const std::vector<std::int64_t>& h) const;
  const std::vector<Symbol>& data() const { return data_; }

 private:
  ActionSpec action_;
  std::uint64_t radius_;
  std::vector<Symbol> data_;
};

// Least n with a disagreement in H_n \ H_{n-1}; nullopt means AGREE.
// Throws InsufficientLength when the configurations agree on their common box
// but are defined on boxes of different size.
std::optional<std::uint64_t> first_disagreement(const Configuration& a, const Configuration& b);
std::optional<std::uint64_t> first_disagreement(const Word& a, const Word& b);

// 1/lambda_n, or 0 when the configurations agree.
Rational metric_distance(const ActionSpec& action, std::optional<std::uint64_t> n);
Rational metric_distance(const Configuration& a, const Configuration& b);

// The unique n with 1/lambda_{n+1} <= eps < 1/lambda_n.
std::uint64_t cylinder_depth_for_radius(const ActionSpec& action, const Rational& eps);

// Cylinder [stem] of the given depth (stem length == depth), d = 1 one-sided.
struct CylinderSet {
  Word stem;
  std::uint64_t depth() const { return stem.size(); }
  Rational diameter(const ActionSpec& action) const;
  bool contains(const Word& w) const;
  bool contains(const CylinderSet& other) const;
  bool disjoint(const CylinderSet& other) const;
  bool operator==(const CylinderSet&) const = default;
};

struct BowenBall {
  Word center;  // at least k + n(eps) - 1 symbols
  std::uint64_t order = 1;
  Rational radius;
};

// B_k(x, eps) as the cylinder of depth k + n(eps) - 1.
CylinderSet bowen_ball_as_cylinder(const ActionSpec& action, const BowenBall& ball);
// B_k^{sigma^m}(x, eps) as the cylinder of depth m(k-1) + n(eps); needs n(eps) >= m.
CylinderSet power_ball_as_cylinder(const ActionSpec& action, std::uint64_t m, const BowenBall& ball);

void require_one_sided_line(const ActionSpec& action, const char* what);

}  // namespace slowent
