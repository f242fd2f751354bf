#pragma once

#include "slowent/cover.hpp"
#include "slowent/subsets.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace oracle {

using namespace slowent;

// splitmix64
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
  Word word(std::size_t len, int alphabet) {
    Word w;
    for (std::size_t i = 0; i < len; ++i) w.push_back(static_cast<Symbol>(below(alphabet)));
    return w;
  }
};

// Finite set of eventually constant points, branching only above max_depth.
inline SubsetDescriptor random_finite_tree(Rng& rng, std::size_t points, std::size_t max_depth) {
  std::set<EventuallyPeriodic> pts;
  while (pts.size() < points) {
    EventuallyPeriodic x;
    x.preperiod = rng.word(rng.below(max_depth + 1), 2);
    x.period = {static_cast<Symbol>(rng.below(2))};
    pts.insert(x.canonical());
  }
  return SubsetDescriptor::finite({pts.begin(), pts.end()}, 2);
}

// Distinct prefixes of the points at every depth up to `depth`.
inline std::vector<std::set<Word>> prefix_levels(const SubsetDescriptor& z, std::uint64_t depth) {
  const auto& pts = std::get<FiniteSet>(z.value()).points;
  std::vector<std::set<Word>> levels(depth + 1);
  for (auto& p : pts)
    for (std::uint64_t d = 0; d <= depth; ++d) levels[d].insert(p.prefix(d));
  return levels;
}

// Every antichain cover of the prefix tree by eligible cylinders, listed
// explicitly; the cheapest multiset of ball weights wins.
struct Enumeration {
  std::map<std::uint64_t, BigInt> best;
  ExactReal best_value;
  std::size_t covers = 0;
  bool found = false;
};

inline Enumeration enumerate_covers(const SubsetDescriptor& z, const CoverSpec& spec, const Rational& s,
                                    std::uint64_t N, std::uint64_t D) {
  CoverGeometry geo(spec, N);
  const std::uint64_t depth = geo.deepest(D);
  auto levels = prefix_levels(z, depth);
  auto children = [&](const Word& w) {
    std::vector<Word> out;
    for (Symbol a = 0; a < 2; ++a) {
      Word c = w;
      c.push_back(a);
      if (levels[c.size()].count(c)) out.push_back(c);
    }
    return out;
  };
  Exponent e = Exponent::from(s);
  Enumeration res;
  std::map<std::uint64_t, BigInt> chosen;
  std::function<void(std::vector<Word>)> go = [&](std::vector<Word> pending) {
    if (pending.empty()) {
      ++res.covers;
      ExactReal v = orders_value(chosen, e, 1);
      if (!res.found || compare(v, res.best_value) < 0) {
        res.best = chosen;
        res.best_value = v;
        res.found = true;
      }
      return;
    }
    Word w = pending.back();
    pending.pop_back();
    if (auto base = geo.base_at(w.size())) {
      chosen[*base] += 1;
      go(pending);
      if (--chosen[*base] == 0) chosen.erase(*base);
    }
    if (w.size() < depth) {
      std::vector<Word> next = pending;
      for (auto& c : children(w)) next.push_back(c);
      go(next);
    }
  };
  go({Word{}});
  return res;
}

}  // namespace oracle
