#include "slowent/numeric.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace slowent {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InsufficientLength: return "InsufficientLength";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw Error(ErrorKind::InvalidArgument, "not an exact rational: '" + std::string(text) + "'");
  BigInt n{std::string(num)}, d{std::string(den)};
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& value) {
  Rational r = value;
  r.canonicalize();
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double log_of(const BigInt& x) {
  if (sgn(x) <= 0) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  double m = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(m) + static_cast<double>(exp) * std::log(2.0);
}

double log_of(const Rational& x) {
  if (sgn(x) <= 0) return -std::numeric_limits<double>::infinity();
  return log_of(BigInt(x.get_num())) - log_of(BigInt(x.get_den()));
}

namespace {

// x = u * 2^shift with u holding the top 64 bits (truncated); exact when shift == 0.
void top_bits(const BigInt& x, std::uint64_t& u, long& shift) {
  std::size_t bits = mpz_sizeinbase(x.get_mpz_t(), 2);
  if (bits <= 64) {
    BigInt t = x;
    u = 0;
    mpz_export(&u, nullptr, -1, sizeof(u), 0, 0, t.get_mpz_t());
    shift = 0;
    return;
  }
  shift = static_cast<long>(bits - 64);
  BigInt t;
  mpz_tdiv_q_2exp(t.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  u = 0;
  mpz_export(&u, nullptr, -1, sizeof(u), 0, 0, t.get_mpz_t());
}

}  // namespace

long double to_long_double(const BigInt& x) {
  if (x == 0) return 0;
  BigInt a = abs(x);
  std::uint64_t u;
  long shift;
  top_bits(a, u, shift);
  long double v = std::ldexp(static_cast<long double>(u), static_cast<int>(shift));
  return sgn(x) < 0 ? -v : v;
}

long double to_long_double(const Rational& x) {
  if (x == 0) return 0;
  BigInt n = abs(x.get_num());
  std::uint64_t un, ud;
  long sn, sd;
  top_bits(n, un, sn);
  top_bits(BigInt(x.get_den()), ud, sd);
  long double v = std::ldexp(static_cast<long double>(un) / static_cast<long double>(ud),
                             static_cast<int>(sn - sd));
  return sgn(x) < 0 ? -v : v;
}

Rational exact_rational(long double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "non-finite value has no rational form");
  if (x == 0) return Rational(0);
  int exp = 0;
  long double m = std::frexp(std::fabs(x), &exp);
  auto mant = static_cast<std::uint64_t>(std::ldexp(m, 64));
  BigInt n;
  mpz_import(n.get_mpz_t(), 1, -1, sizeof(mant), 0, 0, &mant);
  Rational r(n);
  int e = exp - 64;
  if (e >= 0) {
    mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  }
  r.canonicalize();
  return x < 0 ? Rational(-r) : r;
}

namespace {

constexpr long double kInf = std::numeric_limits<long double>::infinity();

long double add_down(long double a, long double b) {
  long double s = a + b;
  if (!std::isfinite(s)) return s;
  long double bb = s - a;
  long double err = (a - (s - bb)) + (b - bb);
  return err == 0 ? s : std::nextafter(s, -kInf);
}

long double add_up(long double a, long double b) {
  long double s = a + b;
  if (!std::isfinite(s)) return s;
  long double bb = s - a;
  long double err = (a - (s - bb)) + (b - bb);
  return err == 0 ? s : std::nextafter(s, kInf);
}

long double mul_down(long double a, long double b) {
  long double p = a * b;
  if (!std::isfinite(p) || p == 0) return p;
  return std::fma(a, b, -p) == 0 ? p : std::nextafter(p, -kInf);
}

long double mul_up(long double a, long double b) {
  long double p = a * b;
  if (!std::isfinite(p)) return p;
  if (p == 0) return (a == 0 || b == 0) ? p : std::numeric_limits<long double>::denorm_min();
  return std::fma(a, b, -p) == 0 ? p : std::nextafter(p, kInf);
}

}  // namespace

Interval operator+(const Interval& a, const Interval& b) {
  return {add_down(a.lo, b.lo), add_up(a.hi, b.hi)};
}

Interval operator-(const Interval& a, const Interval& b) {
  return {add_down(a.lo, -b.hi), add_up(a.hi, -b.lo)};
}

Interval scale(const Interval& a, long double f) {
  if (f >= 0) return {mul_down(a.lo, f), mul_up(a.hi, f)};
  return {mul_down(a.hi, f), mul_up(a.lo, f)};
}

Interval scale(const Interval& a, const BigInt& factor) {
  if (factor == 0) return {0, 0};
  std::uint64_t u;
  long shift;
  BigInt m = abs(factor);
  top_bits(m, u, shift);
  long double flo = std::ldexp(static_cast<long double>(u), static_cast<int>(shift));
  long double fhi = shift == 0 ? flo : std::ldexp(static_cast<long double>(u) + 1, static_cast<int>(shift));
  Interval r;
  // a is assumed non-negative here; covers of positive weights only.
  if (a.lo >= 0) {
    r = {mul_down(a.lo, flo), mul_up(a.hi, fhi)};
  } else {
    Interval p1 = scale(a, flo), p2 = scale(a, fhi);
    r = {std::min(p1.lo, p2.lo), std::max(p1.hi, p2.hi)};
  }
  if (sgn(factor) < 0) r = {-r.hi, -r.lo};
  return r;
}

int certain_compare(const Interval& a, const Interval& b) {
  if (a.hi < b.lo) return -1;
  if (a.lo > b.hi) return 1;
  return 0;
}

Interval power_weight_interval(std::uint64_t base, std::int64_t num, std::uint64_t den) {
  if (num == 0 || base == 1) return Interval::point(1);
  long double s = static_cast<long double>(num) / static_cast<long double>(den);
  long double v = std::pow(static_cast<long double>(base), -s);
  constexpr long double rel = 1e-16L;
  return {v * (1 - rel), v * (1 + rel)};
}

}  // namespace slowent
