#pragma once

#include "slowent/numeric.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace slowent {

// Non-negative rational exponent s = num/den in lowest terms.
struct Exponent {
  std::int64_t num = 0;
  std::uint64_t den = 1;

  static Exponent from(const Rational& s);
  Rational rational() const;
  long double value() const { return static_cast<long double>(num) / static_cast<long double>(den); }
  bool operator==(const Exponent&) const = default;
};

// Exact real of the form sum_i a_i * prod_j p_j^{-r_ij / Q} with rational a_i.
// Radicals are kept canonical (0 < r < Q, distinct primes), so two values are
// equal iff their term maps agree; signs are decided by interval evaluation.
class ExactReal {
 public:
  using Radical = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

  ExactReal() = default;
  static ExactReal rational(const Rational& r);
  // base^{-s}
  static ExactReal power_weight(std::uint64_t base, const Exponent& s);

  ExactReal& operator+=(const ExactReal& other);
  ExactReal& operator-=(const ExactReal& other);
  ExactReal& operator*=(const Rational& factor);
  friend ExactReal operator+(ExactReal a, const ExactReal& b) { return a += b; }
  friend ExactReal operator-(ExactReal a, const ExactReal& b) { return a -= b; }
  friend ExactReal operator*(ExactReal a, const Rational& f) { return a *= f; }
  friend ExactReal operator*(const Rational& f, ExactReal a) { return a *= f; }

  bool is_zero() const { return terms_.empty(); }
  int sign() const;
  std::optional<Rational> as_rational() const;

  // Cheap enclosure in long double; may be wide for cancelling sums.
  Interval enclosure() const;
  long double approx() const { return enclosure().mid(); }

  std::uint64_t root() const { return root_; }
  const std::map<Radical, Rational>& terms() const { return terms_; }
  std::string to_string() const;

 private:
  void rescale(std::uint64_t new_root);
  void add_term(const Radical& key, const Rational& coeff);
  int sign_at_precision(long prec) const;

  std::uint64_t root_ = 1;
  std::map<Radical, Rational> terms_;
};

int compare(const ExactReal& a, const ExactReal& b);

// Interval comparison first, exact comparison only when enclosures overlap.
// ia and ib must enclose a and b.
int compare(const ExactReal& a, const Interval& ia, const ExactReal& b, const Interval& ib);

std::vector<std::pair<std::uint64_t, std::uint64_t>> factorize(std::uint64_t n);

}  // namespace slowent
