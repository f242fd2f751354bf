#include "slowent/measures.hpp"

#include "slowent/dimensions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace slowent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_distribution(const std::vector<Rational>& p, const std::string& what) {
  Rational total = 0;
  for (auto& x : p) {
    if (sgn(x) < 0) throw Error(ErrorKind::InvalidArgument, what + ": negative probability");
    total += x;
  }
  if (total != 1) throw Error(ErrorKind::InvalidArgument, what + ": probabilities sum to " + to_string(total));
}

bool uniform(const std::vector<Rational>& p) {
  for (auto& x : p)
    if (x != p.front()) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------- descriptors

MeasureDescriptor MeasureDescriptor::bernoulli(std::vector<Rational> p) {
  if (p.empty() || static_cast<int>(p.size()) > kMaxAlphabet)
    throw Error(ErrorKind::InvalidArgument, "bernoulli vector size out of range");
  check_distribution(p, "bernoulli");
  MeasureDescriptor m;
  m.alphabet_ = static_cast<int>(p.size());
  m.value_ = BernoulliMeasure{std::move(p)};
  return m;
}

MeasureDescriptor MeasureDescriptor::markov(const Dfa& dfa, std::vector<Rational> initial,
                                            std::vector<std::vector<Rational>> emit) {
  dfa.validate();
  if (static_cast<int>(initial.size()) != dfa.states() || static_cast<int>(emit.size()) != dfa.states())
    throw Error(ErrorKind::InvalidArgument, "markov vectors must have one entry per state");
  check_distribution(initial, "markov initial");
  for (int q = 0; q < dfa.states(); ++q) {
    if (static_cast<int>(emit[q].size()) != dfa.alphabet)
      throw Error(ErrorKind::InvalidArgument, "markov row " + std::to_string(q) + " has wrong length");
    Rational row = 0;
    for (int a = 0; a < dfa.alphabet; ++a) {
      if (sgn(emit[q][a]) < 0) throw Error(ErrorKind::InvalidArgument, "markov: negative probability");
      if (sgn(emit[q][a]) > 0 && dfa.next[q][a] < 0)
        throw Error(ErrorKind::InvalidArgument, "markov row " + std::to_string(q) + " emits a missing edge");
      row += emit[q][a];
    }
    if (row != 1 && row != 0)
      throw Error(ErrorKind::InvalidArgument, "markov row " + std::to_string(q) + " sums to " + to_string(row));
  }
  MeasureDescriptor m;
  m.alphabet_ = dfa.alphabet;
  m.value_ = MarkovMeasure{dfa, std::move(initial), std::move(emit)};
  return m;
}

MeasureDescriptor MeasureDescriptor::point_mass(const EventuallyPeriodic& x, int alphabet) {
  Dfa d = Dfa::single_point(x, alphabet);
  std::vector<Rational> init(d.states(), 0);
  init[d.start] = 1;
  std::vector<std::vector<Rational>> emit(d.states(), std::vector<Rational>(alphabet, 0));
  for (int q = 0; q < d.states(); ++q)
    for (int a = 0; a < alphabet; ++a)
      if (d.next[q][a] >= 0) emit[q][a] = 1;
  return markov(d, std::move(init), std::move(emit));
}

MeasureDescriptor MeasureDescriptor::tree_mass(TreeMass t) {
  if (!tree_mass_consistent(t)) throw Error(ErrorKind::InvalidArgument, "tree masses are not consistent");
  MeasureDescriptor m;
  m.alphabet_ = t.support.alphabet();
  m.value_ = std::move(t);
  return m;
}

MeasureDescriptor MeasureDescriptor::product_on_sparse(const SparseProduct& sp, int alphabet,
                                                       std::vector<std::vector<Rational>> probs) {
  SubsetDescriptor::sparse_product(sp, alphabet);  // validates
  if (probs.empty()) throw Error(ErrorKind::InvalidArgument, "product measure needs a probability vector");
  for (auto& p : probs) {
    if (static_cast<int>(p.size()) != sp.branching)
      throw Error(ErrorKind::InvalidArgument, "product measure vectors must have one entry per branch");
    check_distribution(p, "product measure");
  }
  MeasureDescriptor m;
  m.alphabet_ = alphabet;
  m.value_ = ProductOnSparse{sp, std::move(probs)};
  return m;
}

MeasureDescriptor MeasureDescriptor::uniform_on_sparse(const SparseProduct& sp, int alphabet) {
  return product_on_sparse(sp, alphabet, {std::vector<Rational>(sp.branching, Rational(1, sp.branching))});
}

MeasureDescriptor MeasureDescriptor::biased_on_sparse(const SparseProduct& sp, int alphabet, const Rational& p0) {
  if (sp.branching < 2) throw Error(ErrorKind::InvalidArgument, "biased measure needs branching >= 2");
  std::vector<Rational> p(sp.branching, (1 - p0) / (sp.branching - 1));
  p[0] = p0;
  return product_on_sparse(sp, alphabet, {p});
}

std::string MeasureDescriptor::kind_name() const {
  switch (value_.index()) {
    case 0: return "bernoulli";
    case 1: return "markov";
    case 2: return "tree-mass";
    default: return "product-on-sparse";
  }
}

SubsetDescriptor MeasureDescriptor::support() const {
  return std::visit(
      [&](const auto& v) -> SubsetDescriptor {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BernoulliMeasure>) {
          Dfa d = Dfa::full_shift(alphabet_);
          for (int a = 0; a < alphabet_; ++a)
            if (sgn(v.p[a]) == 0) d.next[0][a] = -1;
          return SubsetDescriptor::regular(d);
        } else if constexpr (std::is_same_v<T, MarkovMeasure>) {
          Dfa d = v.dfa;
          for (int q = 0; q < d.states(); ++q)
            for (int a = 0; a < d.alphabet; ++a)
              if (sgn(v.emit[q][a]) == 0) d.next[q][a] = -1;
          return SubsetDescriptor::regular(d);
        } else if constexpr (std::is_same_v<T, TreeMass>) {
          return v.support;
        } else {
          return SubsetDescriptor::sparse_product(v.support, alphabet_);
        }
      },
      value_);
}

bool MeasureDescriptor::homogeneous() const {
  if (auto* b = std::get_if<BernoulliMeasure>(&value_)) return uniform(b->p);
  if (auto* p = std::get_if<ProductOnSparse>(&value_)) {
    for (auto& v : p->probs)
      if (!uniform(v)) return false;
    return true;
  }
  return false;
}

Rational cylinder_mass(const MeasureDescriptor& mu, const Word& w) {
  return std::visit(
      [&](const auto& v) -> Rational {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BernoulliMeasure>) {
          Rational m = 1;
          for (Symbol a : w) {
            if (a >= v.p.size()) return 0;
            m *= v.p[a];
          }
          return m;
        } else if constexpr (std::is_same_v<T, MarkovMeasure>) {
          std::map<int, Rational> cur;
          for (int q = 0; q < v.dfa.states(); ++q)
            if (sgn(v.initial[q]) > 0) cur[q] = v.initial[q];
          for (Symbol a : w) {
            std::map<int, Rational> nxt;
            for (auto& [q, m] : cur) {
              if (a >= v.dfa.alphabet) continue;
              int t = v.dfa.next[q][a];
              if (t < 0 || sgn(v.emit[q][a]) == 0) continue;
              nxt[t] += m * v.emit[q][a];
            }
            cur = std::move(nxt);
            if (cur.empty()) return 0;
          }
          Rational total = 0;
          for (auto& [q, m] : cur) total += m;
          return total;
        } else if constexpr (std::is_same_v<T, TreeMass>) {
          if (w.size() > v.depth)
            throw Error(ErrorKind::InsufficientLength, "word is deeper than the stored tree masses");
          auto it = v.mass.find(w);
          return it == v.mass.end() ? Rational(0) : it->second;
        } else {
          std::vector<std::uint64_t> free = v.support.free.below(w.size());
          Rational m = 1;
          std::size_t j = 0;
          for (std::uint64_t i = 0; i < w.size(); ++i) {
            if (j < free.size() && free[j] == i) {
              if (w[i] >= v.support.branching) return 0;
              m *= v.at(j)[w[i]];
              ++j;
            } else if (w[i] != v.support.fill) {
              return 0;
            }
          }
          return m;
        }
      },
      mu.value());
}

bool tree_mass_consistent(const TreeMass& t) {
  auto root = t.mass.find(Word{});
  if (root == t.mass.end() || root->second != 1) return false;
  std::map<Word, Rational> sums;
  for (auto& [w, m] : t.mass) {
    if (sgn(m) < 0 || w.size() > t.depth) return false;
    if (!w.empty()) sums[Word(w.begin(), w.end() - 1)] += m;
  }
  for (auto& [w, m] : t.mass) {
    if (w.size() == t.depth) continue;
    auto it = sums.find(w);
    Rational s = it == sums.end() ? Rational(0) : it->second;
    if (s != m) return false;
  }
  return true;
}

// ---------------------------------------------------------------- local entropy

std::vector<std::uint64_t> default_local_schedule() { return default_count_schedule(); }

namespace {

std::uint64_t radius_depth(const Rational& eps) { return cylinder_depth_for_radius(ActionSpec{}, eps); }

bool deep_mode(const MeasureDescriptor& mu, const LocalOptions& opts) {
  auto* p = std::get_if<ProductOnSparse>(&mu.value());
  return opts.deep && p && p->support.free.kind == FreePositions::Kind::Powers;
}

struct Level {
  std::uint64_t depth = 0;     // standard: cylinder depth n + m - 1
  std::size_t free_count = 0;  // deep: free positions inside the cylinder
  BigInt n;
  double log_n = 0;
};

struct Schedule {
  bool deep = false;
  unsigned bits = 0;
  std::vector<Level> levels;
  std::uint64_t max_depth = 0;
  std::size_t max_free = 0;
};

// Free positions below 2^bits, cached per support.
const std::vector<BigInt>& deep_positions(const ProductOnSparse& p, unsigned bits) {
  static thread_local std::map<std::string, std::vector<BigInt>> cache;
  std::string key = p.support.free.describe() + "/" + std::to_string(bits);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  BigInt bound;
  mpz_ui_pow_ui(bound.get_mpz_t(), 2, bits);
  return cache.emplace(key, p.support.free.below_big(bound)).first->second;
}

Schedule make_schedule(const MeasureDescriptor& mu, const Rational& eps, const LocalOptions& opts) {
  Schedule sch;
  const std::uint64_t m = radius_depth(eps);
  if (deep_mode(mu, opts)) {
    sch.deep = true;
    sch.bits = opts.deep_bits;
    const auto& pos = deep_positions(std::get<ProductOnSparse>(mu.value()), opts.deep_bits);
    // The cylinder ending just before the j-th free position has the largest
    // n for its mass, so these points carry the liminf.
    for (std::size_t j = 1; j < pos.size(); ++j) {
      BigInt n = pos[j] - BigInt(static_cast<unsigned long>(m)) + 1;
      if (n < 16) continue;
      sch.levels.push_back({0, j, n, log_of(n)});
      sch.max_free = j;
    }
    return sch;
  }
  std::vector<std::uint64_t> ns = opts.n_schedule.empty() ? default_local_schedule() : opts.n_schedule;
  std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  if (auto* t = std::get_if<TreeMass>(&mu.value())) cap = t->depth;
  for (std::uint64_t n : ns) {
    if (n < 2) continue;
    std::uint64_t depth = n + m - 1;
    if (depth > cap) continue;
    sch.levels.push_back({depth, 0, BigInt(static_cast<unsigned long>(n)), std::log(static_cast<double>(n))});
    sch.max_depth = std::max(sch.max_depth, depth);
  }
  return sch;
}

// A path through the shift: explicit symbols for standard schedules, free
// choices (plus the first off-support fixed position) for deep ones.
struct Path {
  Word symbols;
  std::vector<Symbol> choices;
  std::optional<BigInt> mismatch;
};

// -log mu(C_L(path)) at every depth 0..depth.
std::vector<double> neglog_prefix(const MeasureDescriptor& mu, const Word& w, std::uint64_t depth) {
  std::vector<double> out(depth + 1, 0);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BernoulliMeasure>) {
          std::vector<double> nl;
          for (auto& p : v.p) nl.push_back(sgn(p) > 0 ? -log_of(p) : kInf);
          for (std::uint64_t i = 0; i < depth; ++i) out[i + 1] = out[i] + (w[i] < nl.size() ? nl[w[i]] : kInf);
        } else if constexpr (std::is_same_v<T, MarkovMeasure>) {
          int n = v.dfa.states();
          std::vector<double> cur(n, 0), nxt(n);
          for (int q = 0; q < n; ++q) cur[q] = to_long_double(v.initial[q]);
          std::vector<std::vector<double>> em(n, std::vector<double>(v.dfa.alphabet));
          for (int q = 0; q < n; ++q)
            for (int a = 0; a < v.dfa.alphabet; ++a) em[q][a] = static_cast<double>(to_long_double(v.emit[q][a]));
          double shift = 0;
          for (std::uint64_t i = 0; i < depth; ++i) {
            std::fill(nxt.begin(), nxt.end(), 0.0);
            Symbol a = w[i];
            double total = 0;
            for (int q = 0; q < n; ++q) {
              if (cur[q] == 0 || a >= v.dfa.alphabet) continue;
              int t = v.dfa.next[q][a];
              if (t < 0) continue;
              nxt[t] += cur[q] * em[q][a];
            }
            for (double x : nxt) total += x;
            if (total == 0) {
              for (std::uint64_t j = i + 1; j <= depth; ++j) out[j] = kInf;
              return;
            }
            for (auto& x : nxt) x /= total;
            shift += -std::log(total);
            out[i + 1] = shift;
            std::swap(cur, nxt);
          }
        } else if constexpr (std::is_same_v<T, TreeMass>) {
          Word prefix;
          for (std::uint64_t i = 0; i < depth; ++i) {
            prefix.push_back(w[i]);
            auto it = v.mass.find(prefix);
            out[i + 1] = (it == v.mass.end() || sgn(it->second) == 0) ? kInf : -log_of(it->second);
          }
        } else {
          std::vector<std::uint64_t> free = v.support.free.below(depth);
          std::size_t j = 0;
          for (std::uint64_t i = 0; i < depth; ++i) {
            double step = 0;
            if (j < free.size() && free[j] == i) {
              const auto& p = v.at(j);
              step = (w[i] < p.size() && sgn(p[w[i]]) > 0) ? -log_of(p[w[i]]) : kInf;
              ++j;
            } else if (w[i] != v.support.fill) {
              step = kInf;
            }
            out[i + 1] = out[i] + step;
          }
        }
      },
      mu.value());
  return out;
}

std::vector<double> evaluate(const MeasureDescriptor& mu, const Schedule& sch, const Path& path) {
  std::vector<double> vals;
  vals.reserve(sch.levels.size());
  if (sch.deep) {
    const auto& p = std::get<ProductOnSparse>(mu.value());
    const auto& pos = deep_positions(p, sch.bits);
    std::vector<double> cum(sch.max_free + 1, 0);
    for (std::size_t j = 0; j < sch.max_free; ++j) {
      const auto& pr = p.at(j);
      Symbol c = path.choices[j];
      cum[j + 1] = cum[j] + ((c < pr.size() && sgn(pr[c]) > 0) ? -log_of(pr[c]) : kInf);
    }
    for (auto& lv : sch.levels) {
      double v = cum[lv.free_count];
      if (path.mismatch && *path.mismatch < pos[lv.free_count]) v = kInf;
      vals.push_back(v == kInf ? kInf : v / lv.log_n);
    }
    return vals;
  }
  std::vector<double> cum = neglog_prefix(mu, path.symbols, sch.max_depth);
  for (auto& lv : sch.levels) {
    double v = cum[lv.depth];
    vals.push_back(v == kInf ? kInf : v / lv.log_n);
  }
  return vals;
}

struct Summary {
  double liminf = 0;
  bool decided = false;
  bool diverging = false;
};

Summary summarize(const std::vector<double>& v, const LocalOptions& opts) {
  Summary s;
  if (v.empty()) return s;
  std::size_t tail = std::min(v.size(), std::max<std::size_t>(4, v.size() / 8));
  s.liminf = *std::min_element(v.end() - static_cast<std::ptrdiff_t>(tail), v.end());
  // Window minima, aligned to the end of the schedule.
  std::size_t w = std::max<std::size_t>(1, opts.window);
  std::vector<double> mins;
  for (std::size_t end = v.size(); end > 0 && mins.size() * w < std::max(tail, 2 * w);) {
    std::size_t begin = end >= w ? end - w : 0;
    mins.push_back(*std::min_element(v.begin() + static_cast<std::ptrdiff_t>(begin),
                                     v.begin() + static_cast<std::ptrdiff_t>(end)));
    end = begin;
  }
  std::reverse(mins.begin(), mins.end());
  if (mins.size() < 2) {
    s.decided = false;
    return s;
  }
  double a = mins[mins.size() - 2], b = mins.back();
  bool cauchy = (a == b) || (std::isfinite(a) && std::isfinite(b) &&
                             std::fabs(b - a) <= opts.cauchy_tol * std::max(std::fabs(b), 1e-12));
  bool up = true, down = true, strict_up = true;
  for (std::size_t i = 1; i < mins.size(); ++i) {
    up = up && mins[i] >= mins[i - 1];
    down = down && mins[i] <= mins[i - 1];
    strict_up = strict_up && mins[i] > mins[i - 1];
  }
  s.decided = cauchy || up || down;
  s.diverging = strict_up && std::isfinite(b) && b > 1 && b >= 1.5 * mins.front();
  if (std::isinf(b)) s.diverging = false;
  return s;
}

Symbol symbol_at(const EventuallyPeriodic& x, const BigInt& pos) {
  BigInt pre = static_cast<unsigned long>(x.preperiod.size());
  if (pos < pre) return x.preperiod[pos.get_ui()];
  BigInt r = BigInt(pos - pre) % static_cast<unsigned long>(x.period.size());
  return x.period[r.get_ui()];
}

Path path_of(const MeasureDescriptor& mu, const EventuallyPeriodic& x, const std::vector<Schedule>& schs) {
  Path path;
  std::uint64_t depth = 0;
  std::size_t free = 0;
  bool deep = false;
  unsigned bits = 0;
  for (auto& s : schs) {
    depth = std::max(depth, s.max_depth);
    free = std::max(free, s.max_free);
    deep = deep || s.deep;
    bits = std::max(bits, s.bits);
  }
  if (!deep) {
    path.symbols = x.prefix(depth);
    return path;
  }
  const auto& p = std::get<ProductOnSparse>(mu.value());
  const auto& pos = deep_positions(p, bits);
  for (std::size_t j = 0; j < free; ++j) path.choices.push_back(symbol_at(x, pos[j]));
  // Off-support points disagree with the fill early; checking a long
  // stretch of fixed positions finds it.
  std::uint64_t scan = std::max<std::uint64_t>(1 << 16, 4 * (x.preperiod.size() + x.period.size()));
  std::vector<std::uint64_t> fp = p.support.free.below(scan);
  std::size_t j = 0;
  for (std::uint64_t i = 0; i < scan; ++i) {
    if (j < fp.size() && fp[j] == i) {
      ++j;
      continue;
    }
    if (x.at(i) != p.support.fill) {
      path.mismatch = BigInt(static_cast<unsigned long>(i));
      break;
    }
  }
  return path;
}

}  // namespace

LocalSlowEntropyEstimate local_slow_entropy(const MeasureDescriptor& mu, const EventuallyPeriodic& x,
                                            const Rational& eps, const LocalOptions& opts) {
  if (sgn(eps) <= 0 || eps >= 1) throw Error(ErrorKind::InvalidArgument, "eps must lie in (0, 1)");
  Schedule sch = make_schedule(mu, eps, opts);
  Path path = path_of(mu, x, {sch});
  std::vector<double> vals = evaluate(mu, sch, path);
  LocalSlowEntropyEstimate est;
  est.point = x.to_string();
  est.eps = eps;
  for (std::size_t i = 0; i < vals.size(); ++i)
    est.values.push_back({sch.levels[i].n.get_str(), sch.levels[i].log_n, vals[i]});
  Summary s = summarize(vals, opts);
  est.liminf_estimate = s.liminf;
  est.decided = s.decided;
  est.diverging = s.diverging;
  return est;
}

// ---------------------------------------------------------------- integrated

const char* integration_name(Integration i) {
  switch (i) {
    case Integration::Auto: return "auto";
    case Integration::Exact: return "exact";
    case Integration::Atomic: return "atomic";
    case Integration::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based uniform in [0, 1) for (seed, sample, draw).
double uniform01(std::uint64_t seed, std::uint64_t sample, std::uint64_t draw) {
  std::uint64_t h = splitmix64(seed ^ splitmix64(sample ^ splitmix64(draw + 0x632be59bd9b4e019ULL)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

struct Cdf {
  std::vector<double> c;
  explicit Cdf(const std::vector<Rational>& p) {
    long double acc = 0;
    for (auto& x : p) {
      acc += to_long_double(x);
      c.push_back(static_cast<double>(acc));
    }
  }
  Symbol pick(double u) const {
    for (std::size_t i = 0; i < c.size(); ++i)
      if (u < c[i]) return static_cast<Symbol>(i);
    // Rounding at the top end: the last symbol with positive mass.
    for (std::size_t i = c.size(); i-- > 0;)
      if (i == 0 || c[i] > c[i - 1]) return static_cast<Symbol>(i);
    return 0;
  }
};

Path sample_path(const MeasureDescriptor& mu, std::uint64_t seed, std::uint64_t sample, std::uint64_t depth,
                 std::size_t free) {
  Path path;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BernoulliMeasure>) {
          Cdf cdf(v.p);
          for (std::uint64_t i = 0; i < depth; ++i) path.symbols.push_back(cdf.pick(uniform01(seed, sample, i)));
        } else if constexpr (std::is_same_v<T, MarkovMeasure>) {
          int q = Cdf(v.initial).pick(uniform01(seed, sample, 0));
          std::vector<Cdf> rows;
          for (auto& r : v.emit) rows.emplace_back(r);
          for (std::uint64_t i = 0; i < depth; ++i) {
            Symbol a = rows[q].pick(uniform01(seed, sample, i + 1));
            path.symbols.push_back(a);
            q = v.dfa.next[q][a];
            if (q < 0) break;
          }
          path.symbols.resize(depth, 0);
        } else if constexpr (std::is_same_v<T, TreeMass>) {
          Word w;
          for (std::uint64_t i = 0; i < depth && i < v.depth; ++i) {
            std::vector<Rational> p(mu.alphabet(), 0);
            for (int a = 0; a < mu.alphabet(); ++a) {
              w.push_back(static_cast<Symbol>(a));
              auto it = v.mass.find(w);
              if (it != v.mass.end()) p[a] = it->second;
              w.pop_back();
            }
            Rational total = std::accumulate(p.begin(), p.end(), Rational(0));
            if (sgn(total) == 0) break;
            for (auto& x : p) x /= total;
            w.push_back(Cdf(p).pick(uniform01(seed, sample, i)));
          }
          path.symbols = w;
          path.symbols.resize(depth, 0);
        } else {
          if (free > 0) {
            for (std::size_t j = 0; j < free; ++j) path.choices.push_back(Cdf(v.at(j)).pick(uniform01(seed, sample, j)));
          } else {
            std::vector<std::uint64_t> fp = v.support.free.below(depth);
            std::size_t j = 0;
            for (std::uint64_t i = 0; i < depth; ++i) {
              if (j < fp.size() && fp[j] == i) {
                path.symbols.push_back(Cdf(v.at(j)).pick(uniform01(seed, sample, j)));
                ++j;
              } else {
                path.symbols.push_back(v.support.fill);
              }
            }
          }
        }
      },
      mu.value());
  return path;
}

struct Atom {
  EventuallyPeriodic x;
  Rational mass;
};

// Atoms of a measure with finite support, or nullopt.
std::optional<std::vector<Atom>> atoms_of(const MeasureDescriptor& mu) {
  SubsetDescriptor supp = mu.support();
  if (cardinality_class(supp) != Cardinality::Finite) return std::nullopt;
  std::vector<EventuallyPeriodic> pts;
  std::uint64_t cap = 0;
  if (auto* t = std::get_if<TreeMass>(&mu.value())) {
    auto* f = std::get_if<FiniteSet>(&t->support.value());
    if (!f) return std::nullopt;
    pts = f->points;
    cap = t->depth;
  } else if (auto* r = std::get_if<RegularSet>(&supp.value())) {
    pts = dfa_points(r->dfa);
  } else if (auto* f = std::get_if<FiniteSet>(&supp.value())) {
    pts = f->points;
  } else {
    return std::nullopt;
  }
  int states = 1;
  if (auto* m = std::get_if<MarkovMeasure>(&mu.value())) states = m->dfa.states();
  std::vector<Atom> out;
  for (auto& x0 : pts) {
    EventuallyPeriodic x = x0.canonical();
    std::uint64_t depth = x.preperiod.size() + x.period.size() * (states + 2);
    for (auto& y : pts) depth = std::max<std::uint64_t>(depth, y.preperiod.size() + 2 * y.period.size() + 2);
    if (cap) depth = cap;
    out.push_back({x, cylinder_mass(mu, x.prefix(depth))});
  }
  return out;
}

struct PointValue {
  double weight = 1;
  std::vector<Summary> per_eps;
};

struct Integrand {
  Integration method = Integration::Exact;
  std::vector<PointValue> points;
  std::vector<Rational> eps;  // decreasing
};

Integrand integrand(const MeasureDescriptor& mu, const MeasureEntropyOptions& opts) {
  Integrand out;
  out.eps = opts.eps;
  if (out.eps.empty()) throw Error(ErrorKind::InvalidArgument, "empty eps schedule");
  std::sort(out.eps.begin(), out.eps.end(), [](const Rational& a, const Rational& b) { return a > b; });
  for (auto& e : out.eps)
    if (sgn(e) <= 0 || e >= 1) throw Error(ErrorKind::InvalidArgument, "eps must lie in (0, 1)");
  std::vector<Schedule> schs;
  for (auto& e : out.eps) schs.push_back(make_schedule(mu, e, opts.local));
  std::uint64_t depth = 0;
  std::size_t free = 0;
  for (auto& s : schs) {
    depth = std::max(depth, s.max_depth);
    free = std::max(free, s.max_free);
  }
  Integration method = opts.integration;
  std::optional<std::vector<Atom>> atoms;
  if (method == Integration::Auto) {
    if (mu.homogeneous()) {
      method = Integration::Exact;
    } else if ((atoms = atoms_of(mu))) {
      method = Integration::Atomic;
    } else {
      method = Integration::MonteCarlo;
    }
  }
  out.method = method;
  auto add = [&](const Path& path, double weight) {
    PointValue pv;
    pv.weight = weight;
    for (auto& s : schs) pv.per_eps.push_back(summarize(evaluate(mu, s, path), opts.local));
    out.points.push_back(std::move(pv));
  };
  switch (method) {
    case Integration::Exact: {
      if (!mu.homogeneous()) throw Error(ErrorKind::Unsupported, "exact integration needs a homogeneous measure");
      // Any support point will do; take the all-zero choices.
      Path path;
      if (free > 0) {
        path.choices.assign(free, 0);
      } else if (auto* p = std::get_if<ProductOnSparse>(&mu.value())) {
        std::vector<std::uint64_t> fp = p->support.free.below(depth);
        std::size_t j = 0;
        for (std::uint64_t i = 0; i < depth; ++i) {
          bool f = j < fp.size() && fp[j] == i;
          if (f) ++j;
          path.symbols.push_back(f ? 0 : p->support.fill);
        }
      } else {
        auto& b = std::get<BernoulliMeasure>(mu.value());
        Symbol a = 0;
        while (sgn(b.p[a]) == 0) ++a;
        path.symbols.assign(depth, a);
      }
      add(path, 1);
      break;
    }
    case Integration::Atomic: {
      if (!atoms) atoms = atoms_of(mu);
      if (!atoms) throw Error(ErrorKind::Unsupported, "atomic integration needs a finite support");
      Rational total = 0;
      for (auto& a : *atoms) total += a.mass;
      if (to_long_double(1 - total) > opts.tail_mass)
        throw Error(ErrorKind::Unsupported, "atoms carry only " + to_string(total) + " of the mass");
      for (auto& a : *atoms) {
        if (sgn(a.mass) == 0) continue;
        add(path_of(mu, a.x, schs), static_cast<double>(to_long_double(a.mass)));
      }
      break;
    }
    case Integration::MonteCarlo:
    case Integration::Auto:
      if (opts.samples == 0) throw Error(ErrorKind::InvalidArgument, "monte carlo needs samples");
      for (std::size_t i = 0; i < opts.samples; ++i)
        add(sample_path(mu, opts.seed, i, depth, free), 1.0 / static_cast<double>(opts.samples));
      break;
  }
  return out;
}

}  // namespace

MeasureEntropy measure_slow_entropy(const MeasureDescriptor& mu, const MeasureEntropyOptions& opts) {
  Integrand f = integrand(mu, opts);
  MeasureEntropy out;
  out.method = f.method;
  if (f.method == Integration::MonteCarlo) {
    out.samples = opts.samples;
    out.seed = opts.seed;
  }
  for (std::size_t e = 0; e < f.eps.size(); ++e) {
    MeasureEntropyAtEps r;
    r.eps = f.eps[e];
    r.points = f.points.size();
    double sum = 0, sq = 0, wsum = 0, inf_weight = 0;
    for (auto& p : f.points) {
      const Summary& s = p.per_eps[e];
      if (!s.decided) ++r.undecided;
      wsum += p.weight;
      if (s.diverging || std::isinf(s.liminf)) {
        inf_weight += p.weight;
        continue;
      }
      sum += p.weight * s.liminf;
      sq += p.weight * s.liminf * s.liminf;
    }
    double frac = static_cast<double>(r.undecided) / static_cast<double>(std::max<std::size_t>(1, r.points));
    r.decided = f.method == Integration::MonteCarlo ? frac <= opts.undecided_fraction : r.undecided == 0;
    r.infinite = inf_weight > (f.method == Integration::MonteCarlo ? opts.undecided_fraction * wsum : 0.0);
    r.value = r.infinite ? kInf : sum / std::max(wsum - inf_weight, 1e-300);
    if (f.method == Integration::MonteCarlo && !r.infinite) {
      double n = static_cast<double>(r.points);
      double var = std::max(0.0, sq / wsum - r.value * r.value);
      r.std_error = n > 1 ? std::sqrt(var * n / (n - 1) / n) : 0;
    }
    out.per_eps.push_back(r);
  }
  for (std::size_t e = 1; e < out.per_eps.size(); ++e) {
    const auto& a = out.per_eps[e - 1];
    const auto& b = out.per_eps[e];
    if (a.infinite && !b.infinite) out.monotone_in_eps = false;
    if (!a.infinite && !b.infinite && b.value < a.value - 1e-12 * std::max(1.0, std::fabs(a.value)))
      out.monotone_in_eps = false;
  }
  const MeasureEntropyAtEps& last = out.per_eps.back();
  out.value = last.value;
  out.infinite = last.infinite;
  out.decided = last.decided;
  out.std_error = last.std_error;
  return out;
}

// ---------------------------------------------------------------- Frostman

namespace {

struct TreeNode {
  std::uint32_t parent;
  Word word;
  TreeView::Key key;
  std::vector<std::uint32_t> kids;
};

Rational lower_weight(std::uint64_t base, const Exponent& e) {
  if (auto q = ExactReal::power_weight(base, e).as_rational()) return *q;
  return exact_rational(power_weight_interval(base, e.num, e.den).lo);
}

}  // namespace

FrostmanResult frostman_construct(const SubsetDescriptor& k, const Rational& s, std::uint64_t N, const Rational& eps,
                                  std::uint64_t D, std::size_t node_budget) {
  if (k.empty()) throw Error(ErrorKind::Infeasible, "Frostman construction needs a nonempty set");
  CoverGeometry geo(CoverSpec::bowen(eps), N);
  const std::uint64_t deep = geo.deepest(D);
  const Exponent e = Exponent::from(s);
  TreeView view(k, deep);
  std::vector<std::vector<TreeNode>> layers(deep + 1);
  layers[0].push_back({0, {}, view.root(), {}});
  std::size_t total = 1;
  std::vector<TreeView::Child> kids;
  for (std::uint64_t L = 0; L < deep; ++L) {
    for (std::uint32_t i = 0; i < layers[L].size(); ++i) {
      view.children(L, layers[L][i].key, kids);
      for (auto& c : kids) {
        TreeNode n{i, layers[L][i].word, c.key, {}};
        n.word.push_back(c.symbol);
        layers[L][i].kids.push_back(static_cast<std::uint32_t>(layers[L + 1].size()));
        layers[L + 1].push_back(std::move(n));
        if (++total > node_budget) throw Error(ErrorKind::BudgetExceeded, "Frostman tree exceeds the node budget");
      }
    }
  }
  // Bottom-up caps: the largest mass a subtree can carry under the ball caps.
  std::vector<std::vector<Rational>> cap(deep + 1);
  for (std::uint64_t Lp1 = deep + 1; Lp1-- > 0;) {
    const std::uint64_t L = Lp1;
    std::optional<std::uint64_t> base = geo.base_at(L);
    Rational w = base ? lower_weight(*base, e) : Rational(0);
    cap[L].resize(layers[L].size());
    for (std::size_t i = 0; i < layers[L].size(); ++i) {
      if (L == deep) {
        cap[L][i] = w;
        continue;
      }
      Rational sum = 0;
      for (auto c : layers[L][i].kids) sum += cap[L + 1][c];
      cap[L][i] = (base && w < sum) ? w : sum;
    }
  }
  Rational root = cap[0][0];
  if (sgn(root) <= 0) throw Error(ErrorKind::Infeasible, "no positive mass fits under the caps");
  TreeMass t;
  t.support = k;
  t.depth = deep;
  std::vector<Rational> mass{Rational(1)}, next;
  t.mass[Word{}] = 1;
  for (std::uint64_t L = 0; L < deep; ++L) {
    next.assign(layers[L + 1].size(), 0);
    for (std::size_t i = 0; i < layers[L].size(); ++i) {
      Rational sum = 0;
      for (auto c : layers[L][i].kids) sum += cap[L + 1][c];
      for (auto c : layers[L][i].kids) {
        next[c] = mass[i] * cap[L + 1][c] / sum;
        t.mass[layers[L + 1][c].word] = next[c];
      }
    }
    mass.swap(next);
  }
  FrostmanResult r;
  r.achieved_c = root;
  r.cap_constant = 1 / root;
  r.first_order = N;
  r.last_order = *geo.base_at(deep);
  r.nodes = total;
  r.dp_value = cover_value(k, CoverSpec::bowen(eps), s, N, D).approx();
  r.mass_one = tree_mass_consistent(t);
  r.measure = MeasureDescriptor::tree_mass(std::move(t));
  r.caps_hold = verify_frostman(r, s, N, eps);
  return r;
}

bool verify_frostman(const FrostmanResult& f, const Rational& s, std::uint64_t N, const Rational& eps) {
  const auto* t = std::get_if<TreeMass>(&f.measure.value());
  if (!t || !tree_mass_consistent(*t)) return false;
  CoverGeometry geo(CoverSpec::bowen(eps), N);
  const Exponent e = Exponent::from(s);
  std::map<std::uint64_t, ExactReal> weights;
  for (auto& [w, m] : t->mass) {
    std::optional<std::uint64_t> base = geo.base_at(w.size());
    if (!base) continue;
    auto it = weights.find(*base);
    if (it == weights.end()) it = weights.emplace(*base, ExactReal::power_weight(*base, e)).first;
    if (compare(ExactReal::rational(m * f.achieved_c), it->second) > 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------- principles

std::uint64_t support_check_depth(const SubsetDescriptor& k) {
  std::uint64_t d = 12;
  while (d > 1 && prefix_count(k, d) > 65536) --d;
  return d;
}

Rational support_mass(const MeasureDescriptor& mu, const SubsetDescriptor& k, std::uint64_t depth) {
  if (auto* t = std::get_if<TreeMass>(&mu.value())) depth = std::min(depth, t->depth);
  Rational total = 0;
  for (auto& w : enumerate_prefixes(k, depth, 1 << 20)) total += cylinder_mass(mu, w);
  return total;
}

namespace {

ExponentEstimate top_exponent(const SubsetDescriptor& z, const std::vector<Rational>& eps,
                              const ExponentOptions& eopts) {
  if (bowen_entropy(z).positive) {
    ExponentEstimate inf;
    inf.kind = EstimateKind::Infinite;
    inf.rule = "bowen-entropy-positive";
    return inf;
  }
  return slow_entropy_dimension(z, eps, eopts).value;
}

}  // namespace

DistributionCheck distribution_principle_check(const MeasureDescriptor& mu, const SubsetDescriptor& e,
                                               const Rational& s, Direction dir,
                                               const MeasureEntropyOptions& mopts, const ExponentOptions& eopts,
                                               double tol) {
  DistributionCheck out;
  out.direction = dir;
  out.s = s;
  Integrand f = integrand(mu, mopts);
  const double sv = s.get_d();
  std::size_t undecided = 0;
  for (auto& p : f.points) {
    const Summary& sm = p.per_eps.back();
    ++out.points;
    if (!sm.decided) ++undecided;
    bool inf = sm.diverging || std::isinf(sm.liminf);
    bool bad = dir == Direction::Upper ? (inf || sm.liminf > sv + tol) : (!inf && sm.liminf < sv - tol);
    if (bad) ++out.violations;
  }
  out.decided = f.method == Integration::MonteCarlo
                    ? static_cast<double>(undecided) <= mopts.undecided_fraction * static_cast<double>(out.points)
                    : undecided == 0;
  out.support_mass = support_mass(mu, e, support_check_depth(e));
  out.holds = out.violations == 0 && (dir == Direction::Upper || sgn(out.support_mass) > 0);
  out.exponent = top_exponent(e, mopts.eps, eopts);
  if (dir == Direction::Upper) {
    out.exponent_consistent = out.exponent.kind == EstimateKind::Value && out.exponent.value <= sv + tol;
  } else {
    out.exponent_consistent =
        out.exponent.is_infinite() || (out.exponent.kind == EstimateKind::Value && out.exponent.value >= sv - tol);
  }
  return out;
}

VariationalGap variational_gap(const SubsetDescriptor& k,
                               const std::vector<std::pair<std::string, MeasureDescriptor>>& family,
                               const MeasureEntropyOptions& mopts, const ExponentOptions& eopts,
                               const std::vector<Rational>& eps) {
  VariationalGap out;
  std::uint64_t depth = support_check_depth(k);
  for (auto& [name, mu] : family) {
    Rational m = support_mass(mu, k, depth);
    if (m != 1)
      throw Error(ErrorKind::SupportViolation,
                  "measure '" + name + "' gives the set mass " + to_string(m) + " at depth " + std::to_string(depth));
  }
  if (bowen_entropy(k).positive) {
    ExponentEstimate inf;
    inf.kind = EstimateKind::Infinite;
    inf.rule = "bowen-entropy-positive";
    out.h_S_top.per_eps.emplace_back(eps.back(), inf);
    out.h_S_top.value = inf;
  } else {
    out.h_S_top = slow_entropy_dimension(k, eps, eopts);
  }
  const ExponentEstimate& h = out.h_S_top.value;
  const double tol = 2 * eopts.s_tol.get_d();
  bool first = true;
  for (auto& [name, mu] : family) {
    VariationalMember v;
    v.name = name;
    v.entropy = measure_slow_entropy(mu, mopts);
    if (h.is_infinite()) {
      v.easy_direction = true;
    } else {
      v.easy_direction = h.kind == EstimateKind::Value && !v.entropy.infinite && v.entropy.value <= h.value + tol;
    }
    bool better = first || (v.entropy.infinite && !out.sup_infinite) ||
                  (!out.sup_infinite && !v.entropy.infinite && v.entropy.value > out.sup_measure_value);
    if (better) {
      out.sup_infinite = v.entropy.infinite;
      out.sup_measure_value = v.entropy.infinite ? kInf : v.entropy.value;
      out.best = name;
    }
    first = false;
    out.members.push_back(std::move(v));
  }
  if (h.is_infinite()) {
    out.gap_infinite = !out.sup_infinite;
    out.gap = out.sup_infinite ? 0 : kInf;
  } else if (out.sup_infinite) {
    out.gap_infinite = true;
    out.gap = -kInf;
  } else {
    out.gap = h.value - out.sup_measure_value;
  }
  return out;
}

}  // namespace slowent
