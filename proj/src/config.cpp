#include "slowent/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace slowent {

using nlohmann::json;

namespace {

std::string summarize_issues(const std::vector<SchemaIssue>& issues) {
  std::string out;
  for (auto& i : issues) {
    if (!out.empty()) out += "; ";
    out += i.path + ": expected " + i.expected + ", found " + i.found;
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<SchemaIssue> issues)
    : Error(ErrorKind::Schema, summarize_issues(issues)), issues_(std::move(issues)) {}

const SubsetDescriptor& ExperimentConfig::subset(const std::string& name) const {
  for (auto& [n, z] : subsets)
    if (n == name) return z;
  throw Error(ErrorKind::InvalidArgument, "unknown subset '" + name + "'");
}

const MeasureDescriptor& ExperimentConfig::measure(const std::string& name) const {
  for (auto& [n, m] : measures)
    if (n == name) return m;
  throw Error(ErrorKind::InvalidArgument, "unknown measure '" + name + "'");
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string type_of(const json& j) {
  if (j.is_null()) return "null";
  if (j.is_boolean()) return "boolean";
  if (j.is_number_integer()) return "integer " + j.dump();
  if (j.is_number()) return "number " + j.dump();
  if (j.is_string()) return "string " + j.dump();
  if (j.is_array()) return "array";
  return "object";
}

// Exact fraction for a decimal literal, used only to phrase the error.
std::string decimal_hint(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) return "";
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::size_t places = text.size() - dot - 1;
  try {
    Rational r = parse_rational(digits.empty() ? "0" : digits);
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, places);
    r /= den;
    return to_string(r);
  } catch (const Error&) {
    return "";
  }
}

class Reader {
 public:
  std::vector<SchemaIssue> issues;
  std::set<std::string> not_objects;

  void fail(const std::string& path, const std::string& expected, const std::string& found) {
    issues.push_back({path, expected, found});
  }

  const json* field(const json& obj, const std::string& key, const std::string& path, bool required) {
    if (!obj.is_object()) {
      if (not_objects.insert(path).second) fail(path, "object", type_of(obj));
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(path + "." + key, "a value", "nothing");
      return nullptr;
    }
    return &*it;
  }

  std::optional<Rational> rational(const json& j, const std::string& path) {
    if (j.is_number_integer()) return Rational(BigInt(j.dump()));
    if (j.is_string()) {
      std::string s = j.get<std::string>();
      std::string hint = decimal_hint(s);
      if (!hint.empty()) {
        fail(path, "exact rational string \"" + hint + "\"", "\"" + s + "\"");
        return std::nullopt;
      }
      try {
        return parse_rational(s);
      } catch (const Error&) {
        fail(path, "rational string \"p/q\"", "\"" + s + "\"");
        return std::nullopt;
      }
    }
    if (j.is_number()) {
      std::string hint = decimal_hint(j.dump());
      fail(path, "exact rational string \"" + (hint.empty() ? std::string("p/q") : hint) + "\"", type_of(j));
      return std::nullopt;
    }
    fail(path, "rational string \"p/q\"", type_of(j));
    return std::nullopt;
  }

  std::optional<std::uint64_t> integer(const json& j, const std::string& path, std::uint64_t min = 0) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
      fail(path, "non-negative integer", type_of(j));
      return std::nullopt;
    }
    std::uint64_t v = j.get<std::uint64_t>();
    if (v < min) {
      fail(path, "integer >= " + std::to_string(min), std::to_string(v));
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::string> string(const json& j, const std::string& path) {
    if (!j.is_string()) {
      fail(path, "string", type_of(j));
      return std::nullopt;
    }
    return j.get<std::string>();
  }

  const json* array(const json& j, const std::string& path) {
    if (!j.is_array()) {
      fail(path, "array", type_of(j));
      return nullptr;
    }
    return &j;
  }

  std::vector<Rational> rationals(const json& j, const std::string& path) {
    std::vector<Rational> out;
    if (!array(j, path)) return out;
    for (std::size_t i = 0; i < j.size(); ++i)
      if (auto r = rational(j[i], path + "[" + std::to_string(i) + "]")) out.push_back(*r);
    return out;
  }

  std::vector<std::uint64_t> integers(const json& j, const std::string& path, std::uint64_t min = 0) {
    std::vector<std::uint64_t> out;
    if (!array(j, path)) return out;
    for (std::size_t i = 0; i < j.size(); ++i)
      if (auto r = integer(j[i], path + "[" + std::to_string(i) + "]", min)) out.push_back(*r);
    return out;
  }

  std::vector<std::string> strings(const json& j, const std::string& path) {
    std::vector<std::string> out;
    if (!array(j, path)) return out;
    for (std::size_t i = 0; i < j.size(); ++i)
      if (auto r = string(j[i], path + "[" + std::to_string(i) + "]")) out.push_back(*r);
    return out;
  }
};

template <class T, class Less>
bool strictly_monotone(const std::vector<T>& v, Less less) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!less(v[i - 1], v[i])) return false;
  return true;
}

std::optional<Dfa> parse_dfa(Reader& r, const json& j, const std::string& path, int alphabet) {
  if (!j.is_object()) {
    r.fail(path, "object", type_of(j));
    return std::nullopt;
  }
  Dfa d;
  d.alphabet = alphabet;
  if (auto* a = r.field(j, "alphabet", path, false))
    if (auto v = r.integer(*a, path + ".alphabet", 1)) d.alphabet = static_cast<int>(*v);
  if (auto* s = r.field(j, "start", path, false))
    if (auto v = r.integer(*s, path + ".start")) d.start = static_cast<int>(*v);
  const json* next = r.field(j, "next", path, true);
  if (!next || !r.array(*next, path + ".next")) return std::nullopt;
  for (std::size_t q = 0; q < next->size(); ++q) {
    std::string p = path + ".next[" + std::to_string(q) + "]";
    const json& row = (*next)[q];
    if (!r.array(row, p)) return std::nullopt;
    std::vector<int> out;
    for (std::size_t a = 0; a < row.size(); ++a) {
      if (!row[a].is_number_integer()) {
        r.fail(p + "[" + std::to_string(a) + "]", "state index or -1", type_of(row[a]));
        return std::nullopt;
      }
      out.push_back(row[a].get<int>());
    }
    d.next.push_back(out);
  }
  d.accepting.assign(d.next.size(), true);
  if (auto* acc = r.field(j, "accepting", path, false)) {
    // Either one flag per state or the list of accepting states.
    const std::string expected =
        "array of " + std::to_string(d.next.size()) + " booleans or list of state indices";
    bool flags = acc->is_array() && acc->size() == d.next.size() && !acc->empty();
    for (std::size_t q = 0; flags && q < acc->size(); ++q) flags = (*acc)[q].is_boolean();
    if (flags) {
      for (std::size_t q = 0; q < acc->size(); ++q) d.accepting[q] = (*acc)[q].get<bool>();
    } else if (acc->is_array()) {
      d.accepting.assign(d.next.size(), false);
      for (auto& v : *acc) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
            v.get<std::int64_t>() >= static_cast<std::int64_t>(d.next.size())) {
          r.fail(path + ".accepting", expected, v.dump());
          return std::nullopt;
        }
        d.accepting[v.get<std::size_t>()] = true;
      }
    } else {
      r.fail(path + ".accepting", expected, type_of(*acc));
      return std::nullopt;
    }
  }
  try {
    d.validate();
  } catch (const Error& e) {
    r.fail(path, "valid automaton", e.what());
    return std::nullopt;
  }
  return d;
}

std::optional<FreePositions> parse_free(Reader& r, const json& j, const std::string& path) {
  if (!j.is_object()) {
    r.fail(path, "object", type_of(j));
    return std::nullopt;
  }
  FreePositions f;
  const json* kind = r.field(j, "kind", path, true);
  if (!kind) return std::nullopt;
  auto k = r.string(*kind, path + ".kind");
  if (!k) return std::nullopt;
  if (*k == "powers") {
    f.kind = FreePositions::Kind::Powers;
    if (auto* b = r.field(j, "base", path, true))
      if (auto v = r.rational(*b, path + ".base")) f.parameter = *v;
  } else if (*k == "power_law") {
    f.kind = FreePositions::Kind::PowerLaw;
    if (auto* b = r.field(j, "exponent", path, true))
      if (auto v = r.rational(*b, path + ".exponent")) f.parameter = *v;
  } else if (*k == "arithmetic") {
    f.kind = FreePositions::Kind::Arithmetic;
    if (auto* b = r.field(j, "start", path, false))
      if (auto v = r.integer(*b, path + ".start")) f.start = *v;
    if (auto* b = r.field(j, "step", path, true))
      if (auto v = r.integer(*b, path + ".step", 1)) f.step = *v;
  } else if (*k == "explicit") {
    f.kind = FreePositions::Kind::Explicit;
    if (auto* b = r.field(j, "positions", path, true)) f.explicit_positions = r.integers(*b, path + ".positions");
  } else {
    r.fail(path + ".kind", "one of powers, power_law, arithmetic, explicit", "\"" + *k + "\"");
    return std::nullopt;
  }
  if (auto* o = r.field(j, "offset", path, false))
    if (auto v = r.integer(*o, path + ".offset")) f.offset = *v;
  return f;
}

std::optional<SubsetDescriptor> parse_subset(Reader& r, const json& j, const std::string& path,
                                             const ExperimentConfig& cfg) {
  const json* kind = r.field(j, "kind", path, true);
  if (!kind) return std::nullopt;
  auto k = r.string(*kind, path + ".kind");
  if (!k) return std::nullopt;
  int alphabet = cfg.alphabet;
  if (auto* a = r.field(j, "alphabet", path, false))
    if (auto v = r.integer(*a, path + ".alphabet", 1)) alphabet = static_cast<int>(*v);
  auto lookup = [&](const std::string& name, const std::string& p) -> const SubsetDescriptor* {
    for (auto& [n, z] : cfg.subsets)
      if (n == name) return &z;
    r.fail(p, "name of an earlier subset", "\"" + name + "\"");
    return nullptr;
  };
  try {
    if (*k == "finite") {
      std::vector<EventuallyPeriodic> pts;
      if (auto* p = r.field(j, "points", path, true))
        for (auto& s : r.strings(*p, path + ".points")) {
          try {
            pts.push_back(EventuallyPeriodic::parse(s));
          } catch (const Error& e) {
            r.fail(path + ".points", "point written pre(period)", "\"" + s + "\"");
          }
        }
      return SubsetDescriptor::finite(pts, alphabet);
    }
    if (*k == "regular") {
      if (auto* p = r.field(j, "preset", path, false)) {
        auto name = r.string(*p, path + ".preset");
        if (!name) return std::nullopt;
        if (*name == "full_shift") return SubsetDescriptor::regular(Dfa::full_shift(alphabet));
        if (*name == "golden_mean") return SubsetDescriptor::regular(Dfa::golden_mean());
        if (*name == "zeros_then_ones") return SubsetDescriptor::regular(Dfa::zeros_then_ones());
        r.fail(path + ".preset", "one of full_shift, golden_mean, zeros_then_ones", "\"" + *name + "\"");
        return std::nullopt;
      }
      const json* d = r.field(j, "dfa", path, true);
      if (!d) return std::nullopt;
      auto dfa = parse_dfa(r, *d, path + ".dfa", alphabet);
      if (!dfa) return std::nullopt;
      return SubsetDescriptor::regular(*dfa);
    }
    if (*k == "sparse_product") {
      SparseProduct sp;
      if (auto* b = r.field(j, "branching", path, true))
        if (auto v = r.integer(*b, path + ".branching", 1)) sp.branching = static_cast<int>(*v);
      if (auto* f = r.field(j, "fill", path, false))
        if (auto v = r.integer(*f, path + ".fill")) sp.fill = static_cast<Symbol>(*v);
      const json* f = r.field(j, "free", path, true);
      if (!f) return std::nullopt;
      auto free = parse_free(r, *f, path + ".free");
      if (!free) return std::nullopt;
      sp.free = *free;
      return SubsetDescriptor::sparse_product(sp, alphabet);
    }
    if (*k == "union") {
      std::vector<SubsetDescriptor> members;
      if (auto* m = r.field(j, "members", path, true))
        for (auto& name : r.strings(*m, path + ".members"))
          if (auto* z = lookup(name, path + ".members")) members.push_back(*z);
      return SubsetDescriptor::set_union(members);
    }
    if (*k == "shift") {
      const json* of = r.field(j, "of", path, true);
      const json* by = r.field(j, "by", path, true);
      if (!of || !by) return std::nullopt;
      auto name = r.string(*of, path + ".of");
      auto i = r.integer(*by, path + ".by");
      if (!name || !i) return std::nullopt;
      const SubsetDescriptor* z = lookup(*name, path + ".of");
      if (!z) return std::nullopt;
      return shift_image(*z, *i);
    }
  } catch (const Error& e) {
    r.fail(path, "valid " + *k + " subset", e.what());
    return std::nullopt;
  }
  r.fail(path + ".kind", "one of finite, regular, sparse_product, union, shift", "\"" + *k + "\"");
  return std::nullopt;
}

std::optional<MeasureDescriptor> parse_measure(Reader& r, const json& j, const std::string& path,
                                               const SubsetDescriptor& support) {
  const json* kind = r.field(j, "kind", path, true);
  if (!kind) return std::nullopt;
  auto k = r.string(*kind, path + ".kind");
  if (!k) return std::nullopt;
  const SparseProduct* sp = std::get_if<SparseProduct>(&support.value());
  const RegularSet* reg = std::get_if<RegularSet>(&support.value());
  auto need_sparse = [&]() {
    if (!sp) r.fail(path + ".support", "a sparse_product subset for kind " + *k, support.kind_name());
    return sp != nullptr;
  };
  try {
    if (*k == "bernoulli") {
      const json* p = r.field(j, "p", path, true);
      if (!p) return std::nullopt;
      return MeasureDescriptor::bernoulli(r.rationals(*p, path + ".p"));
    }
    if (*k == "uniform") {
      if (sp) return MeasureDescriptor::uniform_on_sparse(*sp, support.alphabet());
      int b = support.alphabet();
      return MeasureDescriptor::bernoulli(std::vector<Rational>(b, Rational(1, b)));
    }
    if (*k == "biased") {
      if (!need_sparse()) return std::nullopt;
      const json* p = r.field(j, "p0", path, true);
      if (!p) return std::nullopt;
      auto p0 = r.rational(*p, path + ".p0");
      if (!p0) return std::nullopt;
      return MeasureDescriptor::biased_on_sparse(*sp, support.alphabet(), *p0);
    }
    if (*k == "product") {
      if (!need_sparse()) return std::nullopt;
      const json* p = r.field(j, "probs", path, true);
      if (!p || !r.array(*p, path + ".probs")) return std::nullopt;
      std::vector<std::vector<Rational>> probs;
      for (std::size_t i = 0; i < p->size(); ++i)
        probs.push_back(r.rationals((*p)[i], path + ".probs[" + std::to_string(i) + "]"));
      return MeasureDescriptor::product_on_sparse(*sp, support.alphabet(), probs);
    }
    if (*k == "point_mass") {
      const json* p = r.field(j, "point", path, true);
      if (!p) return std::nullopt;
      auto s = r.string(*p, path + ".point");
      if (!s) return std::nullopt;
      return MeasureDescriptor::point_mass(EventuallyPeriodic::parse(*s), support.alphabet());
    }
    if (*k == "markov") {
      if (!reg) {
        r.fail(path + ".support", "a regular subset for kind markov", support.kind_name());
        return std::nullopt;
      }
      const json* init = r.field(j, "initial", path, true);
      const json* emit = r.field(j, "emit", path, true);
      if (!init || !emit || !r.array(*emit, path + ".emit")) return std::nullopt;
      std::vector<std::vector<Rational>> rows;
      for (std::size_t i = 0; i < emit->size(); ++i)
        rows.push_back(r.rationals((*emit)[i], path + ".emit[" + std::to_string(i) + "]"));
      return MeasureDescriptor::markov(reg->dfa, r.rationals(*init, path + ".initial"), rows);
    }
  } catch (const Error& e) {
    r.fail(path, "valid " + *k + " measure", e.what());
    return std::nullopt;
  }
  r.fail(path + ".kind", "one of bernoulli, uniform, biased, product, point_mass, markov", "\"" + *k + "\"");
  return std::nullopt;
}

}  // namespace

namespace {

ExperimentConfig parse_document(const std::string& document) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ConfigError({{"$", "well-formed JSON", e.what()}});
  }
  Reader r;
  ExperimentConfig cfg;
  if (!root.is_object()) throw ConfigError({{"$", "object", type_of(root)}});

  if (auto* a = r.field(root, "action", "$", false)) {
    if (auto* d = r.field(*a, "d", "$.action", false))
      if (auto v = r.integer(*d, "$.action.d", 1)) cfg.action.d = static_cast<int>(*v);
    if (auto* s = r.field(*a, "sided", "$.action", false)) {
      auto v = r.string(*s, "$.action.sided");
      if (v && *v != "one" && *v != "two") r.fail("$.action.sided", "\"one\" or \"two\"", "\"" + *v + "\"");
      if (v) cfg.action.sided = *v == "one" ? Sidedness::OneSided : Sidedness::TwoSided;
    }
  }
  if (auto* a = r.field(root, "alphabet", "$", false))
    if (auto v = r.integer(*a, "$.alphabet", 1)) cfg.alphabet = static_cast<int>(*v);
  if (auto* s = r.field(root, "seed", "$", false))
    if (auto v = r.integer(*s, "$.seed")) cfg.seed = *v;

  std::set<std::string> names;
  if (auto* subs = r.field(root, "subsets", "$", false); subs && r.array(*subs, "$.subsets")) {
    for (std::size_t i = 0; i < subs->size(); ++i) {
      std::string path = "$.subsets[" + std::to_string(i) + "]";
      const json& j = (*subs)[i];
      const json* n = r.field(j, "name", path, true);
      auto name = n ? r.string(*n, path + ".name") : std::nullopt;
      if (!name) continue;
      if (!names.insert(*name).second) r.fail(path + ".name", "unique name", "duplicate \"" + *name + "\"");
      if (auto z = parse_subset(r, j, path, cfg)) cfg.subsets.emplace_back(*name, *z);
    }
  }
  if (auto* ms = r.field(root, "measures", "$", false); ms && r.array(*ms, "$.measures")) {
    for (std::size_t i = 0; i < ms->size(); ++i) {
      std::string path = "$.measures[" + std::to_string(i) + "]";
      const json& j = (*ms)[i];
      const json* n = r.field(j, "name", path, true);
      auto name = n ? r.string(*n, path + ".name") : std::nullopt;
      const json* s = r.field(j, "support", path, true);
      auto supp = s ? r.string(*s, path + ".support") : std::nullopt;
      if (!name || !supp) continue;
      if (!names.insert(*name).second) r.fail(path + ".name", "unique name", "duplicate \"" + *name + "\"");
      const SubsetDescriptor* z = nullptr;
      for (auto& [sn, sz] : cfg.subsets)
        if (sn == *supp) z = &sz;
      if (!z) {
        r.fail(path + ".support", "name of a declared subset", "\"" + *supp + "\"");
        continue;
      }
      if (auto m = parse_measure(r, j, path, *z)) {
        cfg.measures.emplace_back(*name, *m);
        cfg.measure_support[*name] = *supp;
      }
    }
  }
  if (auto* sc = r.field(root, "schedules", "$", false)) {
    Schedules& s = cfg.schedules;
    if (auto* e = r.field(*sc, "eps", "$.schedules", false)) {
      s.eps = r.rationals(*e, "$.schedules.eps");
      for (auto& x : s.eps)
        if (sgn(x) <= 0 || x >= 1) r.fail("$.schedules.eps", "values in (0, 1)", to_string(x));
      if (s.eps.empty() ||
          !strictly_monotone(s.eps, [](const Rational& a, const Rational& b) { return a > b; }))
        r.fail("$.schedules.eps", "non-empty strictly decreasing list", "unordered values");
    }
    if (auto* l = r.field(*sc, "limit", "$.schedules", false); l && r.array(*l, "$.schedules.limit")) {
      s.limit.clear();
      for (std::size_t i = 0; i < l->size(); ++i) {
        std::string p = "$.schedules.limit[" + std::to_string(i) + "]";
        auto v = r.integers((*l)[i], p, 1);
        if (v.size() != 2) {
          r.fail(p, "[N, D] pair", type_of((*l)[i]));
          continue;
        }
        s.limit.emplace_back(v[0], v[1]);
      }
      if (s.limit.empty() || !strictly_monotone(s.limit, [](const auto& a, const auto& b) {
            return a.first < b.first && a.second < b.second;
          }))
        r.fail("$.schedules.limit", "non-empty list increasing in N and D", "unordered pairs");
    }
    if (auto* n = r.field(*sc, "n", "$.schedules", false)) {
      s.n = r.integers(*n, "$.schedules.n", 2);
      if (s.n.empty() || !strictly_monotone(s.n, std::less<>()))
        r.fail("$.schedules.n", "non-empty strictly increasing list", "unordered values");
    }
    if (auto* t = r.field(*sc, "s_tol", "$.schedules", false))
      if (auto v = r.rational(*t, "$.schedules.s_tol")) s.s_tol = *v;
    if (auto* t = r.field(*sc, "s_max", "$.schedules", false))
      if (auto v = r.rational(*t, "$.schedules.s_max")) s.s_max = *v;
    if (auto* t = r.field(*sc, "samples", "$.schedules", false))
      if (auto v = r.integer(*t, "$.schedules.samples", 1)) s.samples = *v;
  }
  auto subset_names = [&](const json& j, const std::string& path) {
    std::vector<std::string> out = r.strings(j, path);
    for (auto& n : out) {
      bool ok = false;
      for (auto& [sn, z] : cfg.subsets) ok = ok || sn == n;
      if (!ok) r.fail(path, "name of a declared subset", "\"" + n + "\"");
    }
    return out;
  };
  if (auto* a = r.field(root, "analyze", "$", false)) {
    if (auto* s = r.field(*a, "subsets", "$.analyze", false)) cfg.analyze = subset_names(*s, "$.analyze.subsets");
  }
  if (auto* v = r.field(root, "verify", "$", false)) {
    VerifyBlock b;
    if (auto* x = r.field(*v, "suites", "$.verify", false)) {
      static const std::set<std::string> known = {"outer-measure", "chain",   "power-invariance", "union",
                                                  "vitali",        "sandwich", "countable"};
      b.suites = r.strings(*x, "$.verify.suites");
      for (auto& s : b.suites)
        if (!known.count(s))
          r.fail("$.verify.suites", "one of outer-measure, chain, power-invariance, union, vitali, sandwich, countable",
                 "\"" + s + "\"");
    }
    if (auto* x = r.field(*v, "pairs", "$.verify", false); x && r.array(*x, "$.verify.pairs")) {
      for (std::size_t i = 0; i < x->size(); ++i) {
        auto p = subset_names((*x)[i], "$.verify.pairs[" + std::to_string(i) + "]");
        if (p.size() != 2) {
          r.fail("$.verify.pairs[" + std::to_string(i) + "]", "pair of subset names", type_of((*x)[i]));
          continue;
        }
        b.pairs.emplace_back(p[0], p[1]);
      }
    }
    if (auto* x = r.field(*v, "power_subsets", "$.verify", false))
      b.power_subsets = subset_names(*x, "$.verify.power_subsets");
    if (auto* x = r.field(*v, "s", "$.verify", false))
      if (auto q = r.rational(*x, "$.verify.s")) b.s = *q;
    if (auto* x = r.field(*v, "N", "$.verify", false))
      if (auto q = r.integer(*x, "$.verify.N", 1)) b.N = *q;
    if (auto* x = r.field(*v, "eps", "$.verify", false))
      if (auto q = r.rational(*x, "$.verify.eps")) b.eps = *q;
    if (auto* x = r.field(*v, "D", "$.verify", false))
      if (auto q = r.integer(*x, "$.verify.D", 1)) b.D = *q;
    if (auto* x = r.field(*v, "weight_fault", "$.verify", false))
      if (auto q = r.rational(*x, "$.verify.weight_fault")) b.weight_fault = *q;
    if (auto* x = r.field(*v, "vitali_families", "$.verify", false))
      if (auto q = r.integer(*x, "$.verify.vitali_families")) b.vitali_families = *q;
    cfg.verify = b;
  }
  if (auto* v = r.field(root, "variational", "$", false); v && r.array(*v, "$.variational")) {
    for (std::size_t i = 0; i < v->size(); ++i) {
      std::string path = "$.variational[" + std::to_string(i) + "]";
      const json& j = (*v)[i];
      VariationalExperiment ex;
      if (auto* s = r.field(j, "set", path, true)) {
        auto n = subset_names(json::array({*s}), path + ".set");
        if (!n.empty()) ex.set = n[0];
      }
      if (auto* f = r.field(j, "family", path, true)) {
        ex.family = r.strings(*f, path + ".family");
        for (auto& m : ex.family)
          if (!cfg.measure_support.count(m)) r.fail(path + ".family", "name of a declared measure", "\"" + m + "\"");
      }
      if (auto* f = r.field(j, "frostman", path, false)) {
        FrostmanBlock fb;
        if (auto* x = r.field(*f, "s", path + ".frostman", true))
          if (auto q = r.rational(*x, path + ".frostman.s")) fb.s = *q;
        if (auto* x = r.field(*f, "N", path + ".frostman", false))
          if (auto q = r.integer(*x, path + ".frostman.N", 1)) fb.N = *q;
        if (auto* x = r.field(*f, "eps", path + ".frostman", false))
          if (auto q = r.rational(*x, path + ".frostman.eps")) fb.eps = *q;
        if (auto* x = r.field(*f, "D", path + ".frostman", true)) fb.D = r.integers(*x, path + ".frostman.D", 1);
        ex.frostman = fb;
      }
      cfg.variational.push_back(ex);
    }
  }
  if (auto* s = r.field(root, "sweep", "$", false)) {
    SweepBlock b;
    if (auto* x = r.field(*s, "subsets", "$.sweep", true)) b.subsets = subset_names(*x, "$.sweep.subsets");
    if (auto* x = r.field(*s, "s", "$.sweep", true)) b.s = r.rationals(*x, "$.sweep.s");
    if (auto* x = r.field(*s, "N", "$.sweep", true)) b.N = r.integers(*x, "$.sweep.N", 1);
    if (auto* x = r.field(*s, "eps", "$.sweep", true)) b.eps = r.rationals(*x, "$.sweep.eps");
    if (auto* x = r.field(*s, "D", "$.sweep", true)) b.D = r.integers(*x, "$.sweep.D", 1);
    if (auto* x = r.field(*s, "budget", "$.sweep", false))
      if (auto q = r.integer(*x, "$.sweep.budget", 1)) b.budget = *q;
    for (auto& e : b.eps)
      if (sgn(e) <= 0 || e >= 1) r.fail("$.sweep.eps", "values in (0, 1)", to_string(e));
    cfg.sweep = b;
  }
  if (!r.issues.empty()) throw ConfigError(r.issues);
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::string& document) {
  try {
    return parse_document(document);
  } catch (const json::exception& e) {
    throw ConfigError({{"$", "values of the documented types", e.what()}});
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({{path, "readable file", "cannot open"}});
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

}  // namespace slowent
