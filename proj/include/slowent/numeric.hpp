#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace slowent {

using BigInt = mpz_class;
using Rational = mpq_class;

enum class ErrorKind {
  InvalidArgument,
  InsufficientLength,
  Unsupported,
  BudgetExceeded,
  CapExceeded,
  SupportViolation,
  Schema,
  Infeasible,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

const char* error_kind_name(ErrorKind kind);

// Accepts "p", "p/q" and "-p/q". Decimal literals are rejected.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

double log_of(const BigInt& x);
double log_of(const Rational& x);
long double to_long_double(const BigInt& x);
long double to_long_double(const Rational& x);

// Exact rational value of a finite long double.
Rational exact_rational(long double x);

// Closed interval with outward rounding on every operation.
struct Interval {
  long double lo = 0;
  long double hi = 0;

  static Interval point(long double x) { return {x, x}; }
  bool exact() const { return lo == hi; }
  long double mid() const { return lo / 2 + hi / 2; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval scale(const Interval& a, const BigInt& factor);
Interval scale(const Interval& a, long double factor);

// Returns -1 when a < b is certain, +1 when a > b is certain, 0 when the
// enclosures overlap.
int certain_compare(const Interval& a, const Interval& b);

// Enclosure of base^{-s} for s = num/den.
Interval power_weight_interval(std::uint64_t base, std::int64_t num, std::uint64_t den);

}  // namespace slowent
