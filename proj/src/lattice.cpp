#include "slowent/lattice.hpp"

#include <algorithm>
#include <cstdlib>

namespace slowent {

std::string word_to_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (Symbol c : w) s.push_back(c < 10 ? static_cast<char>('0' + c) : static_cast<char>('a' + c - 10));
  return s;
}

Word word_from_string(const std::string& s) {
  Word w;
  w.reserve(s.size());
  for (char c : s) {
    if (c >= '0' && c <= '9') w.push_back(static_cast<Symbol>(c - '0'));
    else if (c >= 'a' && c <= 'z') w.push_back(static_cast<Symbol>(c - 'a' + 10));
    else throw Error(ErrorKind::InvalidArgument, std::string("bad symbol '") + c + "' in word");
  }
  return w;
}

BigInt ActionSpec::lambda(std::uint64_t n) const {
  if (n == 0) return 0;
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "lattice dimension must be >= 1");
  BigInt side = sided == Sidedness::OneSided ? BigInt(static_cast<unsigned long>(n))
                                             : BigInt(static_cast<unsigned long>(2 * n - 1));
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), side.get_mpz_t(), static_cast<unsigned long>(d));
  return r;
}

void require_one_sided_line(const ActionSpec& action, const char* what) {
  if (action.d != 1 || action.sided != Sidedness::OneSided)
    throw Error(ErrorKind::Unsupported, std::string(what) + " is implemented for one-sided d = 1 only");
}

Configuration::Configuration(ActionSpec action, std::uint64_t radius, std::vector<Symbol> data)
    : action_(action), radius_(radius), data_(std::move(data)) {
  BigInt expected = action_.lambda(radius_);
  if (expected != static_cast<unsigned long>(data_.size()))
    throw Error(ErrorKind::InvalidArgument, "configuration size does not match |H_R|");
}

Configuration Configuration::from_word(const Word& w) {
  return Configuration(ActionSpec{}, w.size(), w);
}

std::uint64_t Configuration::side() const {
  if (radius_ == 0) return 0;
  return action_.sided == Sidedness::OneSided ? radius_ : 2 * radius_ - 1;
}

Symbol Configuration::at(const std::vector<std::int64_t>& h) const {
  if (static_cast<int>(h.size()) != action_.d) throw Error(ErrorKind::InvalidArgument, "coordinate rank mismatch");
  std::uint64_t idx = 0;
  std::int64_t off = action_.sided == Sidedness::OneSided ? 0 : static_cast<std::int64_t>(radius_) - 1;
  for (std::int64_t c : h) {
    std::int64_t v = c + off;
    if (v < 0 || static_cast<std::uint64_t>(v) >= side()) throw Error(ErrorKind::InvalidArgument, "coordinate outside H_R");
    idx = idx * side() + static_cast<std::uint64_t>(v);
  }
  return data_[idx];
}

namespace {

// Shell index (n with h in H_n \ H_{n-1}) of the flat index inside a box of
// given side.
std::uint64_t shell_of(std::uint64_t idx, std::uint64_t side, const ActionSpec& a, std::uint64_t radius) {
  std::uint64_t norm = 0;
  for (int i = 0; i < a.d; ++i) {
    std::uint64_t c = idx % side;
    idx /= side;
    std::uint64_t m = a.sided == Sidedness::OneSided
                          ? c
                          : static_cast<std::uint64_t>(std::llabs(static_cast<long long>(c) - static_cast<long long>(radius - 1)));
    norm = std::max(norm, m);
  }
  return norm + 1;
}

}  // namespace

std::optional<std::uint64_t> first_disagreement(const Configuration& a, const Configuration& b) {
  if (!(a.action() == b.action())) throw Error(ErrorKind::InvalidArgument, "configurations over different actions");
  const ActionSpec& act = a.action();
  std::uint64_t r = std::min(a.radius(), b.radius());
  std::optional<std::uint64_t> best;
  if (r > 0) {
    std::uint64_t side = act.sided == Sidedness::OneSided ? r : 2 * r - 1;
    std::uint64_t total = act.lambda(r).get_ui();
    std::vector<std::int64_t> h(act.d);
    std::int64_t off = act.sided == Sidedness::OneSided ? 0 : static_cast<std::int64_t>(r) - 1;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::uint64_t t = idx;
      for (int i = act.d - 1; i >= 0; --i) {
        h[i] = static_cast<std::int64_t>(t % side) - off;
        t /= side;
      }
      if (a.at(h) != b.at(h)) {
        std::uint64_t sh = shell_of(idx, side, act, r);
        if (!best || sh < *best) best = sh;
      }
    }
  }
  if (best) return best;
  if (a.radius() != b.radius())
    throw Error(ErrorKind::InsufficientLength, "configurations agree on the common box but differ in size");
  return std::nullopt;
}

std::optional<std::uint64_t> first_disagreement(const Word& a, const Word& b) {
  std::size_t m = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < m; ++i)
    if (a[i] != b[i]) return i + 1;
  if (a.size() != b.size()) throw Error(ErrorKind::InsufficientLength, "words agree on the common prefix but differ in length");
  return std::nullopt;
}

Rational metric_distance(const ActionSpec& action, std::optional<std::uint64_t> n) {
  if (!n) return Rational(0);
  return Rational(BigInt(1), action.lambda(*n));
}

Rational metric_distance(const Configuration& a, const Configuration& b) {
  return metric_distance(a.action(), first_disagreement(a, b));
}

std::uint64_t cylinder_depth_for_radius(const ActionSpec& action, const Rational& eps) {
  if (sgn(eps) <= 0 || eps >= 1) throw Error(ErrorKind::InvalidArgument, "radius must lie in (0, 1)");
  // eps < 1/lambda_n  <=>  eps * lambda_n < 1
  std::uint64_t n = 1;
  while (eps * Rational(action.lambda(n + 1)) < 1) ++n;
  return n;
}

Rational CylinderSet::diameter(const ActionSpec& action) const {
  return Rational(BigInt(1), action.lambda(depth() + 1));
}

bool CylinderSet::contains(const Word& w) const {
  return w.size() >= stem.size() && std::equal(stem.begin(), stem.end(), w.begin());
}

bool CylinderSet::contains(const CylinderSet& other) const { return contains(other.stem); }

bool CylinderSet::disjoint(const CylinderSet& other) const { return !contains(other) && !other.contains(*this); }

CylinderSet bowen_ball_as_cylinder(const ActionSpec& action, const BowenBall& ball) {
  require_one_sided_line(action, "Bowen ball geometry");
  if (ball.order < 1) throw Error(ErrorKind::InvalidArgument, "Bowen ball order must be >= 1");
  std::uint64_t depth = ball.order + cylinder_depth_for_radius(action, ball.radius) - 1;
  if (ball.center.size() < depth) throw Error(ErrorKind::InsufficientLength, "ball center shorter than cylinder depth");
  return CylinderSet{Word(ball.center.begin(), ball.center.begin() + static_cast<std::ptrdiff_t>(depth))};
}

CylinderSet power_ball_as_cylinder(const ActionSpec& action, std::uint64_t m, const BowenBall& ball) {
  require_one_sided_line(action, "power Bowen ball geometry");
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "power must be >= 1");
  std::uint64_t n = cylinder_depth_for_radius(action, ball.radius);
  if (n < m) throw Error(ErrorKind::InvalidArgument, "power ball needs n(eps) >= m");
  std::uint64_t depth = m * (ball.order - 1) + n;
  if (ball.center.size() < depth) throw Error(ErrorKind::InsufficientLength, "ball center shorter than cylinder depth");
  return CylinderSet{Word(ball.center.begin(), ball.center.begin() + static_cast<std::ptrdiff_t>(depth))};
}

}  // namespace slowent
