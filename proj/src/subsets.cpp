#include "slowent/subsets.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace slowent {

// ---------------------------------------------------------------- points

Symbol EventuallyPeriodic::at(std::uint64_t i) const {
  if (i < preperiod.size()) return preperiod[i];
  return period[(i - preperiod.size()) % period.size()];
}

Word EventuallyPeriodic::prefix(std::uint64_t n) const {
  Word w(n);
  for (std::uint64_t i = 0; i < n; ++i) w[i] = at(i);
  return w;
}

EventuallyPeriodic EventuallyPeriodic::shifted(std::uint64_t i) const {
  EventuallyPeriodic r;
  if (i <= preperiod.size()) {
    r.preperiod.assign(preperiod.begin() + static_cast<std::ptrdiff_t>(i), preperiod.end());
    r.period = period;
  } else {
    std::uint64_t rot = (i - preperiod.size()) % period.size();
    r.period.assign(period.begin() + static_cast<std::ptrdiff_t>(rot), period.end());
    r.period.insert(r.period.end(), period.begin(), period.begin() + static_cast<std::ptrdiff_t>(rot));
  }
  return r.canonical();
}

EventuallyPeriodic EventuallyPeriodic::canonical() const {
  if (period.empty()) throw Error(ErrorKind::InvalidArgument, "eventually periodic point needs a non-empty period");
  EventuallyPeriodic r = *this;
  std::size_t p = r.period.size();
  for (std::size_t q = 1; q < p; ++q) {
    if (p % q) continue;
    bool ok = true;
    for (std::size_t i = q; i < p && ok; ++i) ok = r.period[i] == r.period[i - q];
    if (ok) {
      r.period.resize(q);
      break;
    }
  }
  while (!r.preperiod.empty() && r.preperiod.back() == r.period.back()) {
    Symbol last = r.period.back();
    r.period.pop_back();
    r.period.insert(r.period.begin(), last);
    r.preperiod.pop_back();
  }
  return r;
}

std::string EventuallyPeriodic::to_string() const {
  return word_to_string(preperiod) + "(" + word_to_string(period) + ")";
}

EventuallyPeriodic EventuallyPeriodic::parse(const std::string& text) {
  auto open = text.find('(');
  if (open == std::string::npos || text.size() < open + 3 || text.back() != ')')
    throw Error(ErrorKind::InvalidArgument, "point must look like 'pre(period)': '" + text + "'");
  EventuallyPeriodic x;
  x.preperiod = word_from_string(text.substr(0, open));
  x.period = word_from_string(text.substr(open + 1, text.size() - open - 2));
  return x.canonical();
}

// ---------------------------------------------------------------- DFA

void Dfa::validate() const {
  if (alphabet < 1 || alphabet > kMaxAlphabet) throw Error(ErrorKind::InvalidArgument, "alphabet size out of range");
  if (next.empty()) return;
  if (start < 0 || start >= states()) throw Error(ErrorKind::InvalidArgument, "DFA start state out of range");
  if (static_cast<int>(accepting.size()) != states())
    throw Error(ErrorKind::InvalidArgument, "DFA accepting vector has wrong size");
  for (auto& row : next) {
    if (static_cast<int>(row.size()) != alphabet) throw Error(ErrorKind::InvalidArgument, "DFA row has wrong width");
    for (int t : row)
      if (t < -1 || t >= states()) throw Error(ErrorKind::InvalidArgument, "DFA transition target out of range");
  }
}

Dfa Dfa::trimmed() const {
  validate();
  int n = states();
  std::vector<bool> alive(n);
  for (int q = 0; q < n; ++q) alive[q] = accepting[q];
  bool changed = true;
  while (changed) {
    changed = false;
    for (int q = 0; q < n; ++q) {
      if (!alive[q]) continue;
      bool has = false;
      for (int t : next[q]) has = has || (t >= 0 && alive[t]);
      if (!has) {
        alive[q] = false;
        changed = true;
      }
    }
  }
  Dfa out;
  out.alphabet = alphabet;
  if (n == 0 || !alive[start]) return out;
  std::vector<bool> reach(n);
  std::vector<int> stack{start};
  reach[start] = true;
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int t : next[q])
      if (t >= 0 && alive[t] && !reach[t]) {
        reach[t] = true;
        stack.push_back(t);
      }
  }
  std::vector<int> id(n, -1);
  int m = 0;
  for (int q = 0; q < n; ++q)
    if (reach[q]) id[q] = m++;
  out.start = id[start];
  out.accepting.assign(m, true);
  out.next.assign(m, std::vector<int>(alphabet, -1));
  for (int q = 0; q < n; ++q) {
    if (id[q] < 0) continue;
    for (int a = 0; a < alphabet; ++a) {
      int t = next[q][a];
      if (t >= 0 && id[t] >= 0) out.next[id[q]][a] = id[t];
    }
  }
  return out;
}

Dfa Dfa::full_shift(int alphabet) {
  Dfa d;
  d.alphabet = alphabet;
  d.accepting = {true};
  d.next = {std::vector<int>(alphabet, 0)};
  return d;
}

Dfa Dfa::golden_mean() {
  Dfa d;
  d.accepting = {true, true};
  d.next = {{0, 1}, {0, -1}};
  return d;
}

Dfa Dfa::zeros_then_ones() {
  Dfa d;
  d.accepting = {true, true};
  d.next = {{0, 1}, {-1, 1}};
  return d;
}

Dfa Dfa::single_point(const EventuallyPeriodic& x0, int alphabet) {
  EventuallyPeriodic x = x0.canonical();
  Dfa d;
  d.alphabet = alphabet;
  int pre = static_cast<int>(x.preperiod.size()), per = static_cast<int>(x.period.size());
  int n = pre + per;
  d.accepting.assign(n, true);
  d.next.assign(n, std::vector<int>(alphabet, -1));
  for (int i = 0; i < n; ++i) {
    Symbol a = x.at(i);
    if (a >= alphabet) throw Error(ErrorKind::InvalidArgument, "point uses a symbol outside the alphabet");
    d.next[i][a] = i + 1 < n ? i + 1 : pre;
  }
  return d;
}

std::vector<std::vector<int>> strongly_connected_components(const Dfa& dfa) {
  int n = dfa.states();
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on(n, false);
  std::vector<std::vector<int>> out;
  int counter = 0;
  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = true;
    for (int w : dfa.next[v]) {
      if (w < 0) continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  };
  for (int v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);
  return out;
}

namespace {

struct SccInfo {
  std::vector<std::vector<int>> comps;
  std::vector<int> comp_of;
  std::vector<std::uint64_t> internal_edges;
};

SccInfo scc_info(const Dfa& dfa) {
  SccInfo info;
  info.comps = strongly_connected_components(dfa);
  info.comp_of.assign(dfa.states(), -1);
  for (std::size_t c = 0; c < info.comps.size(); ++c)
    for (int q : info.comps[c]) info.comp_of[q] = static_cast<int>(c);
  info.internal_edges.assign(info.comps.size(), 0);
  for (int q = 0; q < dfa.states(); ++q)
    for (int t : dfa.next[q])
      if (t >= 0 && info.comp_of[t] == info.comp_of[q]) ++info.internal_edges[info.comp_of[q]];
  return info;
}

}  // namespace

PerronEstimate perron_estimate(const Dfa& dfa, double tol, std::uint64_t max_iter) {
  PerronEstimate est;
  int n = dfa.states();
  if (n == 0) return est;
  std::vector<std::vector<std::pair<int, int>>> edges(n);  // (target, count)
  for (int q = 0; q < n; ++q) {
    std::map<int, int> cnt;
    for (int t : dfa.next[q])
      if (t >= 0) ++cnt[t];
    for (auto [t, c] : cnt) edges[q].emplace_back(t, c);
  }
  // Column-vector iteration x <- (A + I) x with A[q][t] = edge count; this
  // tracks path counts starting from each state.
  std::vector<long double> x(n, 1.0L / n), y(n);
  long double ratio = 0, prev = -1;
  for (est.iterations = 1; est.iterations <= max_iter; ++est.iterations) {
    long double sum = 0;
    for (int q = 0; q < n; ++q) {
      long double v = x[q];
      for (auto [t, c] : edges[q]) v += c * x[t];
      y[q] = v;
      sum += v;
    }
    ratio = sum;  // x sums to one
    for (int q = 0; q < n; ++q) x[q] = y[q] / sum;
    if (prev > 0 && std::fabs(ratio - prev) <= tol * ratio) {
      est.converged = true;
      break;
    }
    prev = ratio;
  }
  est.rho = ratio - 1;
  long double mx = *std::max_element(x.begin(), x.end());
  std::vector<Rational> xr(n);
  std::vector<bool> in(n, false);
  for (int q = 0; q < n; ++q) {
    if (x[q] > mx * 1e-12L) {
      in[q] = true;
      est.support.push_back(q);
      xr[q] = exact_rational(x[q]);
    }
  }
  bool first = true;
  for (int q : est.support) {
    Rational ax = 0;
    for (auto [t, c] : edges[q])
      if (in[t]) ax += Rational(c) * xr[t];
    Rational ratio_q = ax / xr[q];
    if (first || ratio_q < est.certified_lower) est.certified_lower = ratio_q;
    first = false;
  }
  return est;
}

std::vector<EventuallyPeriodic> dfa_points(const Dfa& dfa) {
  std::vector<EventuallyPeriodic> out;
  if (dfa.empty()) return out;
  SccInfo info = scc_info(dfa);
  auto cyclic = [&](int q) { return info.internal_edges[info.comp_of[q]] > 0; };
  Word path;
  std::function<void(int)> walk = [&](int q) {
    if (cyclic(q)) {
      std::size_t c = info.comp_of[q];
      if (info.internal_edges[c] != info.comps[c].size())
        throw Error(ErrorKind::Unsupported, "DFA language has exponential growth; points are not enumerable");
      EventuallyPeriodic x;
      x.preperiod = path;
      int v = q;
      do {
        int nxt = -1;
        for (int a = 0; a < dfa.alphabet; ++a) {
          int t = dfa.next[v][a];
          if (t < 0) continue;
          if (info.comp_of[t] != static_cast<int>(c))
            throw Error(ErrorKind::Unsupported, "DFA language is countably infinite; points are not finitely many");
          x.period.push_back(static_cast<Symbol>(a));
          nxt = t;
        }
        v = nxt;
      } while (v != q);
      out.push_back(x.canonical());
      return;
    }
    for (int a = 0; a < dfa.alphabet; ++a) {
      int t = dfa.next[q][a];
      if (t < 0) continue;
      path.push_back(static_cast<Symbol>(a));
      walk(t);
      path.pop_back();
    }
  };
  walk(dfa.start);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------- free positions

std::vector<BigInt> FreePositions::below_big(const BigInt& bound) const {
  std::vector<BigInt> raw;
  BigInt limit = bound + BigInt(static_cast<unsigned long>(offset));
  auto push = [&](const BigInt& f) {
    if (f < BigInt(static_cast<unsigned long>(offset))) return;
    raw.push_back(f - BigInt(static_cast<unsigned long>(offset)));
  };
  switch (kind) {
    case Kind::Powers: {
      if (parameter <= 1) throw Error(ErrorKind::InvalidArgument, "power base must exceed 1");
      Rational cur = 1;
      for (;;) {
        BigInt f = cur.get_num() / cur.get_den();
        if (f >= limit) break;
        push(f);
        cur *= parameter;
      }
      break;
    }
    case Kind::PowerLaw: {
      if (parameter <= 1) throw Error(ErrorKind::InvalidArgument, "power-law exponent must exceed 1");
      unsigned long p = parameter.get_num().get_ui(), q = parameter.get_den().get_ui();
      for (unsigned long k = 1;; ++k) {
        BigInt kp, f;
        mpz_ui_pow_ui(kp.get_mpz_t(), k, p);
        mpz_root(f.get_mpz_t(), kp.get_mpz_t(), q);
        if (f >= limit) break;
        push(f);
      }
      break;
    }
    case Kind::Arithmetic: {
      if (step == 0) throw Error(ErrorKind::InvalidArgument, "arithmetic step must be positive");
      for (BigInt f = static_cast<unsigned long>(start); f < limit; f += static_cast<unsigned long>(step)) push(f);
      break;
    }
    case Kind::Explicit:
      for (std::uint64_t f : explicit_positions)
        if (BigInt(static_cast<unsigned long>(f)) < limit) push(BigInt(static_cast<unsigned long>(f)));
      break;
  }
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  return raw;
}

std::vector<std::uint64_t> FreePositions::below(std::uint64_t bound) const {
  std::vector<std::uint64_t> out;
  for (auto& f : below_big(BigInt(static_cast<unsigned long>(bound)))) out.push_back(f.get_ui());
  return out;
}

std::string FreePositions::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Powers: os << "floor(" << to_string(parameter) << "^k)"; break;
    case Kind::PowerLaw: os << "floor(k^" << to_string(parameter) << ")"; break;
    case Kind::Arithmetic: os << start << "+" << step << "j"; break;
    case Kind::Explicit: os << "explicit[" << explicit_positions.size() << "]"; break;
  }
  if (offset) os << "-" << offset;
  return os.str();
}

// ---------------------------------------------------------------- descriptors

SubsetDescriptor SubsetDescriptor::finite(std::vector<EventuallyPeriodic> points, int alphabet) {
  if (alphabet < 1 || alphabet > kMaxAlphabet) throw Error(ErrorKind::InvalidArgument, "alphabet size out of range");
  for (auto& p : points) {
    p = p.canonical();
    for (Symbol c : p.preperiod)
      if (c >= alphabet) throw Error(ErrorKind::InvalidArgument, "point symbol outside the alphabet");
    for (Symbol c : p.period)
      if (c >= alphabet) throw Error(ErrorKind::InvalidArgument, "point symbol outside the alphabet");
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  SubsetDescriptor z;
  z.value_ = FiniteSet{std::move(points)};
  z.alphabet_ = alphabet;
  return z;
}

SubsetDescriptor SubsetDescriptor::regular(const Dfa& dfa) {
  SubsetDescriptor z;
  z.value_ = RegularSet{dfa.trimmed()};
  z.alphabet_ = dfa.alphabet;
  return z;
}

SubsetDescriptor SubsetDescriptor::sparse_product(SparseProduct sp, int alphabet) {
  if (alphabet < 1 || alphabet > kMaxAlphabet) throw Error(ErrorKind::InvalidArgument, "alphabet size out of range");
  if (sp.branching < 1 || sp.branching > alphabet)
    throw Error(ErrorKind::InvalidArgument, "sparse product branching must lie in [1, alphabet]");
  if (sp.fill >= alphabet) throw Error(ErrorKind::InvalidArgument, "fill symbol outside the alphabet");
  if ((sp.free.kind == FreePositions::Kind::Powers || sp.free.kind == FreePositions::Kind::PowerLaw) &&
      sp.free.parameter <= 1)
    throw Error(ErrorKind::InvalidArgument, "free-position parameter must exceed 1");
  if (sp.free.kind == FreePositions::Kind::Arithmetic && sp.free.step == 0)
    throw Error(ErrorKind::InvalidArgument, "arithmetic step must be positive");
  std::sort(sp.free.explicit_positions.begin(), sp.free.explicit_positions.end());
  SubsetDescriptor z;
  z.value_ = std::move(sp);
  z.alphabet_ = alphabet;
  return z;
}

SubsetDescriptor SubsetDescriptor::set_union(std::vector<SubsetDescriptor> members) {
  if (members.empty()) throw Error(ErrorKind::InvalidArgument, "union needs at least one member");
  int k = members.front().alphabet();
  for (auto& m : members)
    if (m.alphabet() != k) throw Error(ErrorKind::InvalidArgument, "union members use different alphabets");
  SubsetDescriptor z;
  z.value_ = UnionSet{std::move(members)};
  z.alphabet_ = k;
  return z;
}

std::string SubsetDescriptor::kind_name() const {
  switch (value_.index()) {
    case 0: return "Finite";
    case 1: return "Regular";
    case 2: return "SparseProduct";
    default: return "Union";
  }
}

bool SubsetDescriptor::empty() const {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FiniteSet>) return v.points.empty();
        else if constexpr (std::is_same_v<T, RegularSet>) return v.dfa.empty();
        else if constexpr (std::is_same_v<T, SparseProduct>) return false;
        else return std::all_of(v.members.begin(), v.members.end(), [](auto& m) { return m.empty(); });
      },
      value_);
}

// ---------------------------------------------------------------- growth

std::string GrowthClass::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case GrowthKind::PolynomialDegree:
      os << "PolynomialDegree(";
      if (exact_degree) os << slowent::to_string(*exact_degree);
      else os << degree;
      os << ")";
      break;
    case GrowthKind::Superpolynomial: os << "Superpolynomial"; break;
    case GrowthKind::Exponential: os << "Exponential(" << rate << ")"; break;
  }
  return os.str();
}

const char* cardinality_name(Cardinality c) {
  switch (c) {
    case Cardinality::Empty: return "Empty";
    case Cardinality::Finite: return "Finite";
    case Cardinality::CountablyInfinite: return "CountablyInfinite";
    case Cardinality::Uncountable: return "Uncountable";
  }
  return "?";
}

namespace {

GrowthClass polynomial(double t, std::optional<Rational> exact) {
  GrowthClass g;
  g.kind = GrowthKind::PolynomialDegree;
  g.degree = t;
  g.exact_degree = std::move(exact);
  return g;
}

GrowthClass regular_growth(const Dfa& dfa) {
  if (dfa.empty()) return polynomial(0, Rational(0));
  SccInfo info = scc_info(dfa);
  bool exponential = false;
  for (std::size_t c = 0; c < info.comps.size(); ++c)
    exponential = exponential || info.internal_edges[c] > info.comps[c].size();
  if (exponential) {
    GrowthClass g;
    g.kind = GrowthKind::Exponential;
    PerronEstimate est = perron_estimate(dfa);
    g.rate = std::log(static_cast<double>(est.rho));
    return g;
  }
  // Components come out sinks first, so successors are already scored.
  std::vector<int> best(info.comps.size(), 0);
  for (std::size_t c = 0; c < info.comps.size(); ++c) {
    int succ = 0;
    for (int q : info.comps[c])
      for (int t : dfa.next[q])
        if (t >= 0 && info.comp_of[t] != static_cast<int>(c)) succ = std::max(succ, best[info.comp_of[t]]);
    best[c] = succ + (info.internal_edges[c] > 0 ? 1 : 0);
  }
  int chain = best[info.comp_of[dfa.start]];
  return polynomial(chain - 1, Rational(chain - 1));
}

GrowthClass sparse_growth(const SparseProduct& sp) {
  if (sp.branching == 1) return polynomial(0, Rational(0));
  switch (sp.free.kind) {
    case FreePositions::Kind::Explicit: return polynomial(0, Rational(0));
    case FreePositions::Kind::PowerLaw: {
      GrowthClass g;
      g.kind = GrowthKind::Superpolynomial;
      return g;
    }
    case FreePositions::Kind::Arithmetic: {
      GrowthClass g;
      g.kind = GrowthKind::Exponential;
      g.rate = std::log(static_cast<double>(sp.branching)) / static_cast<double>(sp.free.step);
      return g;
    }
    case FreePositions::Kind::Powers: break;
  }
  double t = std::log(static_cast<double>(sp.branching)) / log_of(sp.free.parameter);
  std::optional<Rational> exact;
  for (unsigned long q = 1; q <= 16 && !exact; ++q) {
    long r = std::lround(t * static_cast<double>(q));
    if (r <= 0) continue;
    Rational lhs, rhs;
    mpz_ui_pow_ui(lhs.get_num_mpz_t(), static_cast<unsigned long>(sp.branching), q);
    lhs.canonicalize();
    BigInt pn, pd;
    mpz_pow_ui(pn.get_mpz_t(), sp.free.parameter.get_num_mpz_t(), static_cast<unsigned long>(r));
    mpz_pow_ui(pd.get_mpz_t(), sp.free.parameter.get_den_mpz_t(), static_cast<unsigned long>(r));
    rhs = Rational(pn, pd);
    rhs.canonicalize();
    if (lhs == rhs) exact = Rational(r, static_cast<long>(q));
  }
  if (exact) exact->canonicalize();
  return polynomial(t, exact);
}

int growth_rank(const GrowthClass& g) {
  return g.kind == GrowthKind::PolynomialDegree ? 0 : g.kind == GrowthKind::Superpolynomial ? 1 : 2;
}

}  // namespace

GrowthClass growth_class(const SubsetDescriptor& z) {
  return std::visit(
      [&](const auto& v) -> GrowthClass {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FiniteSet>) return polynomial(0, Rational(0));
        else if constexpr (std::is_same_v<T, RegularSet>) return regular_growth(v.dfa);
        else if constexpr (std::is_same_v<T, SparseProduct>) return sparse_growth(v);
        else {
          GrowthClass best = polynomial(0, Rational(0));
          for (auto& m : v.members) {
            if (m.empty()) continue;
            GrowthClass g = growth_class(m);
            int rg = growth_rank(g), rb = growth_rank(best);
            if (rg > rb || (rg == rb && rg == 0 && g.degree > best.degree) ||
                (rg == rb && rg == 2 && g.rate > best.rate))
              best = g;
          }
          return best;
        }
      },
      z.value());
}

Cardinality cardinality_class(const SubsetDescriptor& z) {
  if (z.empty()) return Cardinality::Empty;
  return std::visit(
      [&](const auto& v) -> Cardinality {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FiniteSet>) return Cardinality::Finite;
        else if constexpr (std::is_same_v<T, RegularSet>) {
          GrowthClass g = regular_growth(v.dfa);
          if (g.kind == GrowthKind::Exponential) return Cardinality::Uncountable;
          return g.degree == 0 ? Cardinality::Finite : Cardinality::CountablyInfinite;
        } else if constexpr (std::is_same_v<T, SparseProduct>) {
          if (v.branching == 1 || v.free.kind == FreePositions::Kind::Explicit) return Cardinality::Finite;
          return Cardinality::Uncountable;
        } else {
          Cardinality best = Cardinality::Empty;
          for (auto& m : v.members) best = std::max(best, cardinality_class(m));
          return best;
        }
      },
      z.value());
}

// ---------------------------------------------------------------- shift images

namespace {

Dfa shift_dfa(const Dfa& dfa, std::uint64_t i) {
  if (dfa.empty()) return dfa;
  std::set<int> cur{dfa.start};
  // The reachable sets are eventually periodic, so long shifts are reduced.
  std::map<std::set<int>, std::uint64_t> seen;
  std::vector<std::set<int>> history;
  for (std::uint64_t step = 0; step < i; ++step) {
    auto [it, inserted] = seen.emplace(cur, step);
    if (!inserted) {
      std::uint64_t cycle = step - it->second;
      cur = history[it->second + (i - it->second) % cycle];
      break;
    }
    history.push_back(cur);
    std::set<int> nxt;
    for (int q : cur)
      for (int t : dfa.next[q])
        if (t >= 0) nxt.insert(t);
    cur = std::move(nxt);
  }
  std::map<std::set<int>, int> id;
  std::vector<std::set<int>> order{cur};
  id[cur] = 0;
  Dfa out;
  out.alphabet = dfa.alphabet;
  for (std::size_t k = 0; k < order.size(); ++k) {
    std::vector<int> row(dfa.alphabet, -1);
    for (int a = 0; a < dfa.alphabet; ++a) {
      std::set<int> nxt;
      for (int q : order[k])
        if (dfa.next[q][a] >= 0) nxt.insert(dfa.next[q][a]);
      if (nxt.empty()) continue;
      auto [it, inserted] = id.emplace(nxt, static_cast<int>(order.size()));
      if (inserted) order.push_back(nxt);
      row[a] = it->second;
    }
    out.next.push_back(row);
  }
  out.accepting.assign(out.next.size(), true);
  return out.trimmed();
}

}  // namespace

SubsetDescriptor shift_image(const SubsetDescriptor& z, std::uint64_t i) {
  return std::visit(
      [&](const auto& v) -> SubsetDescriptor {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FiniteSet>) {
          std::vector<EventuallyPeriodic> pts;
          for (auto& p : v.points) pts.push_back(p.shifted(i));
          return SubsetDescriptor::finite(std::move(pts), z.alphabet());
        } else if constexpr (std::is_same_v<T, RegularSet>) {
          return SubsetDescriptor::regular(shift_dfa(v.dfa, i));
        } else if constexpr (std::is_same_v<T, SparseProduct>) {
          SparseProduct sp = v;
          sp.free.offset += i;
          return SubsetDescriptor::sparse_product(sp, z.alphabet());
        } else {
          std::vector<SubsetDescriptor> ms;
          for (auto& m : v.members) ms.push_back(shift_image(m, i));
          return SubsetDescriptor::set_union(std::move(ms));
        }
      },
      z.value());
}

// ---------------------------------------------------------------- prefix tree

TreeView::TreeView(const SubsetDescriptor& z, std::uint64_t max_depth) : z_(&z), max_depth_(max_depth) {
  collect_free(z);
}

void TreeView::collect_free(const SubsetDescriptor& z) {
  if (auto* sp = std::get_if<SparseProduct>(&z.value())) {
    std::vector<bool> f(max_depth_ + 1, false);
    for (std::uint64_t p : sp->free.below(max_depth_ + 1)) f[p] = true;
    free_[sp] = std::move(f);
  } else if (auto* u = std::get_if<UnionSet>(&z.value())) {
    for (auto& m : u->members) collect_free(m);
  }
}

TreeView::Key TreeView::root_of(const SubsetDescriptor& z) const {
  if (z.empty()) return {0};
  return std::visit(
      [&](const auto& v) -> Key {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FiniteSet>) {
          Key k{static_cast<std::int32_t>(v.points.size())};
          for (std::size_t i = 0; i < v.points.size(); ++i) k.push_back(static_cast<std::int32_t>(i));
          return k;
        } else if constexpr (std::is_same_v<T, RegularSet>) {
          return {1, v.dfa.start};
        } else if constexpr (std::is_same_v<T, SparseProduct>) {
          return {1, 0};
        } else {
          Key k{0};
          for (auto& m : v.members) {
            Key b = root_of(m);
            k.insert(k.end(), b.begin(), b.end());
          }
          k[0] = static_cast<std::int32_t>(k.size() - 1);
          return k;
        }
      },
      z.value());
}

TreeView::Key TreeView::root() const { return root_of(*z_); }

void TreeView::children(std::uint64_t depth, const Key& key, std::vector<Child>& out) const {
  out.clear();
  if (key.empty() || key[0] == 0) return;
  if (depth >= max_depth_) throw Error(ErrorKind::CapExceeded, "prefix tree queried beyond its depth bound");
  children_of(*z_, depth, key.data() + 1, static_cast<std::size_t>(key[0]), out);
}

void TreeView::children_of(const SubsetDescriptor& z, std::uint64_t depth, const std::int32_t* payload,
                           std::size_t len, std::vector<Child>& out) const {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FiniteSet>) {
          std::map<Symbol, Key> groups;
          for (std::size_t i = 0; i < len; ++i) {
            auto& g = groups[v.points[payload[i]].at(depth)];
            if (g.empty()) g.push_back(0);
            g.push_back(payload[i]);
            ++g[0];
          }
          for (auto& [a, k] : groups) out.push_back({a, std::move(k)});
        } else if constexpr (std::is_same_v<T, RegularSet>) {
          const auto& row = v.dfa.next[payload[0]];
          for (int a = 0; a < v.dfa.alphabet; ++a)
            if (row[a] >= 0) out.push_back({static_cast<Symbol>(a), Key{1, row[a]}});
        } else if constexpr (std::is_same_v<T, SparseProduct>) {
          if (free_.at(&v)[depth]) {
            for (int a = 0; a < v.branching; ++a) out.push_back({static_cast<Symbol>(a), Key{1, 0}});
          } else {
            out.push_back({v.fill, Key{1, 0}});
          }
        } else {
          std::size_t m = v.members.size();
          std::vector<std::vector<Child>> per(m);
          std::size_t pos = 0;
          for (std::size_t i = 0; i < m; ++i) {
            std::size_t l = static_cast<std::size_t>(payload[pos]);
            if (l > 0) children_of(v.members[i], depth, payload + pos + 1, l, per[i]);
            pos += 1 + l;
          }
          std::vector<std::size_t> cursor(m, 0);
          for (int a = 0; a < z.alphabet(); ++a) {
            bool any = false;
            Key k{0};
            for (std::size_t i = 0; i < m; ++i) {
              if (cursor[i] < per[i].size() && per[i][cursor[i]].symbol == a) {
                const Key& b = per[i][cursor[i]++].key;
                k.insert(k.end(), b.begin(), b.end());
                any = true;
              } else {
                k.push_back(0);
              }
            }
            if (!any) continue;
            k[0] = static_cast<std::int32_t>(k.size() - 1);
            out.push_back({static_cast<Symbol>(a), std::move(k)});
          }
        }
      },
      z.value());
}

namespace {

struct KeyHash {
  std::size_t operator()(const TreeView::Key& k) const {
    std::size_t h = 1469598103934665603ULL;
    for (std::int32_t v : k) {
      h ^= static_cast<std::uint32_t>(v);
      h *= 1099511628211ULL;
    }
    return h;
  }
};

}  // namespace

LayeredDag build_dag(const SubsetDescriptor& z, std::uint64_t depth, std::size_t class_budget) {
  LayeredDag dag;
  dag.layers.resize(depth + 1);
  TreeView view(z, depth);
  TreeView::Key root = view.root();
  if (root[0] == 0) return dag;
  dag.layers[0].push_back({root, {}});
  std::vector<TreeView::Child> kids;
  for (std::uint64_t L = 0; L < depth; ++L) {
    std::unordered_map<TreeView::Key, std::uint32_t, KeyHash> index;
    auto& next = dag.layers[L + 1];
    for (auto& node : dag.layers[L]) {
      view.children(L, node.key, kids);
      for (auto& c : kids) {
        auto [it, inserted] = index.emplace(c.key, static_cast<std::uint32_t>(next.size()));
        if (inserted) {
          next.push_back({c.key, {}});
          if (next.size() > class_budget)
            throw Error(ErrorKind::BudgetExceeded, "prefix tree has too many node classes at depth " + std::to_string(L + 1));
        }
        auto& ch = node.children;
        auto found = std::find_if(ch.begin(), ch.end(), [&](auto& p) { return p.first == it->second; });
        if (found == ch.end()) ch.emplace_back(it->second, 1);
        else ++found->second;
      }
    }
  }
  return dag;
}

std::vector<std::vector<BigInt>> LayeredDag::forward_counts() const {
  std::vector<std::vector<BigInt>> counts(layers.size());
  for (std::size_t L = 0; L < layers.size(); ++L) counts[L].assign(layers[L].size(), 0);
  if (layers.empty() || layers[0].empty()) return counts;
  counts[0][0] = 1;
  for (std::size_t L = 0; L + 1 < layers.size(); ++L)
    for (std::size_t c = 0; c < layers[L].size(); ++c)
      for (auto [child, mult] : layers[L][c].children) counts[L + 1][child] += counts[L][c] * mult;
  return counts;
}

BigInt prefix_count(const SubsetDescriptor& z, std::uint64_t n) {
  LayeredDag dag = build_dag(z, n);
  auto counts = dag.forward_counts();
  BigInt total = 0;
  for (auto& c : counts[n]) total += c;
  return total;
}

std::vector<Word> enumerate_prefixes(const SubsetDescriptor& z, std::uint64_t n, std::size_t limit) {
  std::vector<Word> out;
  TreeView view(z, n);
  TreeView::Key root = view.root();
  if (root[0] == 0) return out;
  Word w;
  std::function<void(const TreeView::Key&)> dfs = [&](const TreeView::Key& key) {
    if (w.size() == n) {
      if (out.size() >= limit) throw Error(ErrorKind::BudgetExceeded, "prefix enumeration exceeds limit");
      out.push_back(w);
      return;
    }
    std::vector<TreeView::Child> kids;
    view.children(w.size(), key, kids);
    for (auto& c : kids) {
      w.push_back(c.symbol);
      dfs(c.key);
      w.pop_back();
    }
  };
  dfs(root);
  return out;
}

}  // namespace slowent
