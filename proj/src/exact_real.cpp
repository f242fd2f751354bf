#include "slowent/exact_real.hpp"

#include <mpfr.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace slowent {

Exponent Exponent::from(const Rational& value) {
  Rational s = value;
  s.canonicalize();
  if (sgn(s) < 0) throw Error(ErrorKind::InvalidArgument, "exponent must be non-negative");
  if (!s.get_num().fits_slong_p() || mpz_sizeinbase(s.get_den_mpz_t(), 2) > 63)
    throw Error(ErrorKind::InvalidArgument, "exponent " + to_string(s) + " is out of range");
  return {s.get_num().get_si(), static_cast<std::uint64_t>(s.get_den().get_ui())};
}

Rational Exponent::rational() const {
  Rational r(BigInt(static_cast<long>(num)), BigInt(static_cast<unsigned long>(den)));
  r.canonicalize();
  return r;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    std::uint64_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

ExactReal ExactReal::rational(const Rational& r) {
  ExactReal x;
  x.add_term({}, r);
  return x;
}

ExactReal ExactReal::power_weight(std::uint64_t base, const Exponent& s) {
  if (base == 0) throw Error(ErrorKind::InvalidArgument, "power weight of zero base");
  if (s.num == 0 || base == 1) return rational(Rational(1));
  ExactReal x;
  x.root_ = s.den;
  BigInt denom = 1;
  Radical key;
  for (auto [p, e] : factorize(base)) {
    BigInt total = BigInt(static_cast<unsigned long>(e)) * BigInt(static_cast<long>(s.num));
    BigInt q = total / BigInt(static_cast<unsigned long>(s.den));
    BigInt rem = total % BigInt(static_cast<unsigned long>(s.den));
    BigInt pp;
    mpz_pow_ui(pp.get_mpz_t(), BigInt(static_cast<unsigned long>(p)).get_mpz_t(), q.get_ui());
    denom *= pp;
    if (rem != 0) key.emplace_back(p, rem.get_ui());
  }
  x.add_term(key, Rational(BigInt(1), denom));
  return x;
}

void ExactReal::add_term(const Radical& key, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(key, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

void ExactReal::rescale(std::uint64_t new_root) {
  if (new_root == root_) return;
  std::uint64_t f = new_root / root_;
  std::map<Radical, Rational> next;
  for (auto& [key, c] : terms_) {
    Radical k = key;
    for (auto& pr : k) pr.second *= f;
    next.emplace(std::move(k), c);
  }
  terms_ = std::move(next);
  root_ = new_root;
}

ExactReal& ExactReal::operator+=(const ExactReal& other) {
  if (other.terms_.empty()) return *this;
  if (terms_.empty()) {
    *this = other;
    return *this;
  }
  std::uint64_t l = std::lcm(root_, other.root_);
  rescale(l);
  if (other.root_ == l) {
    for (auto& [k, c] : other.terms_) add_term(k, c);
  } else {
    ExactReal o = other;
    o.rescale(l);
    for (auto& [k, c] : o.terms_) add_term(k, c);
  }
  return *this;
}

ExactReal& ExactReal::operator-=(const ExactReal& other) {
  ExactReal neg = other;
  neg *= Rational(-1);
  return *this += neg;
}

ExactReal& ExactReal::operator*=(const Rational& factor) {
  if (factor == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= factor;
  return *this;
}

std::optional<Rational> ExactReal::as_rational() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.begin()->first.empty()) return terms_.begin()->second;
  return std::nullopt;
}

Interval ExactReal::enclosure() const {
  constexpr long double kInf = std::numeric_limits<long double>::infinity();
  Interval total = Interval::point(0);
  for (auto& [key, c] : terms_) {
    long double cv = to_long_double(c);
    if (!std::isfinite(cv) || cv == 0) return {-kInf, kInf};
    long double lg = 0;
    for (auto [p, r] : key) lg += static_cast<long double>(r) * std::log(static_cast<long double>(p));
    long double rad = std::exp(-lg / static_cast<long double>(root_));
    long double v = cv * rad;
    if (!std::isfinite(v) || v == 0) return {-kInf, kInf};
    long double rel = key.empty() ? 1e-18L : 1e-16L;
    Interval t = v > 0 ? Interval{v * (1 - rel), v * (1 + rel)} : Interval{v * (1 + rel), v * (1 - rel)};
    total = total + t;
  }
  return total;
}

namespace {

struct Mpfr {
  mpfr_t v;
  explicit Mpfr(long prec) { mpfr_init2(v, prec); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

}  // namespace

int ExactReal::sign_at_precision(long prec) const {
  Mpfr lo(prec), hi(prec), tlo(prec), thi(prec), a(prec), b(prec), lp(prec), clo(prec), chi(prec);
  mpfr_set_zero(lo.v, 1);
  mpfr_set_zero(hi.v, 1);
  for (auto& [key, c] : terms_) {
    // a <= sum r ln p <= b
    mpfr_set_zero(a.v, 1);
    mpfr_set_zero(b.v, 1);
    for (auto [p, r] : key) {
      mpfr_set_ui(lp.v, p, MPFR_RNDD);
      mpfr_log(lp.v, lp.v, MPFR_RNDD);
      mpfr_mul_ui(lp.v, lp.v, r, MPFR_RNDD);
      mpfr_add(a.v, a.v, lp.v, MPFR_RNDD);
      mpfr_set_ui(lp.v, p, MPFR_RNDU);
      mpfr_log(lp.v, lp.v, MPFR_RNDU);
      mpfr_mul_ui(lp.v, lp.v, r, MPFR_RNDU);
      mpfr_add(b.v, b.v, lp.v, MPFR_RNDU);
    }
    // radical in [exp(-b/Q), exp(-a/Q)]
    mpfr_div_ui(b.v, b.v, root_, MPFR_RNDU);
    mpfr_neg(b.v, b.v, MPFR_RNDD);
    mpfr_exp(tlo.v, b.v, MPFR_RNDD);
    mpfr_div_ui(a.v, a.v, root_, MPFR_RNDD);
    mpfr_neg(a.v, a.v, MPFR_RNDU);
    mpfr_exp(thi.v, a.v, MPFR_RNDU);
    mpfr_set_q(clo.v, c.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(chi.v, c.get_mpq_t(), MPFR_RNDU);
    if (sgn(c) > 0) {
      mpfr_mul(clo.v, clo.v, tlo.v, MPFR_RNDD);
      mpfr_mul(chi.v, chi.v, thi.v, MPFR_RNDU);
    } else {
      mpfr_mul(clo.v, clo.v, thi.v, MPFR_RNDD);
      mpfr_mul(chi.v, chi.v, tlo.v, MPFR_RNDU);
    }
    mpfr_add(lo.v, lo.v, clo.v, MPFR_RNDD);
    mpfr_add(hi.v, hi.v, chi.v, MPFR_RNDU);
  }
  if (mpfr_sgn(lo.v) > 0) return 1;
  if (mpfr_sgn(hi.v) < 0) return -1;
  return 0;
}

int ExactReal::sign() const {
  if (terms_.empty()) return 0;
  if (auto r = as_rational()) return sgn(*r);
  Interval e = enclosure();
  if (e.lo > 0) return 1;
  if (e.hi < 0) return -1;
  // Nonzero by linear independence of canonical radicals; refine until the
  // enclosure excludes zero.
  for (long prec = 128; prec <= (1L << 20); prec *= 2) {
    int s = sign_at_precision(prec);
    if (s != 0) return s;
  }
  throw Error(ErrorKind::BudgetExceeded, "sign of exact real not resolved at 2^20 bits");
}

std::string ExactReal::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [key, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << slowent::to_string(c);
    for (auto [p, r] : key) {
      std::uint64_t g = std::gcd(r, root_);
      os << "*" << p << "^(-" << r / g;
      if (root_ / g != 1) os << "/" << root_ / g;
      os << ")";
    }
  }
  return os.str();
}

int compare(const ExactReal& a, const ExactReal& b) { return (a - b).sign(); }

int compare(const ExactReal& a, const Interval& ia, const ExactReal& b, const Interval& ib) {
  int c = certain_compare(ia, ib);
  if (c != 0) return c;
  return compare(a, b);
}

}  // namespace slowent
