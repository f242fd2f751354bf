#include "slowent/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace slowent {

std::string format_double(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "+INF" : "-INF";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

Json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

const char* estimate_kind(EstimateKind k) {
  switch (k) {
    case EstimateKind::Value: return "value";
    case EstimateKind::Infinite: return "infinite";
    case EstimateKind::Undetermined: return "undetermined";
  }
  return "?";
}

std::string csv_value(const ExponentEstimate& e) {
  if (e.is_infinite()) return "+INF";
  if (e.kind == EstimateKind::Undetermined) return "undetermined";
  return format_double(e.value);
}

std::string csv_value(const GrowthExponent& g) {
  if (g.infinite) return "+INF";
  if (g.exact) return to_string(*g.exact);
  return format_double(g.value);
}

Json provenance(const std::string& command, const ExperimentConfig& cfg, const RunOptions& opts) {
  Json p;
  p["command"] = command;
  p["config_hash"] = fnv1a_hex(opts.config_text);
  p["seed"] = opts.seed.value_or(cfg.seed);
  p["version"] = kVersion;
  return p;
}

std::uint64_t run_seed(const ExperimentConfig& cfg, const RunOptions& opts) { return opts.seed.value_or(cfg.seed); }

Json error_json(const Error& e) {
  Json j;
  j["error"] = error_kind_name(e.kind());
  j["message"] = e.what();
  return j;
}

}  // namespace

Json to_json(const Rational& r) {
  Json j;
  j["num"] = r.get_num().get_str();
  j["den"] = r.get_den().get_str();
  return j;
}

Json to_json(const ExponentEstimate& e) {
  Json j;
  if (e.is_infinite()) {
    j["value"] = "+INF";
  } else if (e.kind == EstimateKind::Undetermined) {
    j["value"] = "undetermined";
  } else {
    j["value"] = e.value;
  }
  j["kind"] = estimate_kind(e.kind);
  j["bracket"] = {{"lo", to_json(e.lo)}, {"hi", to_json(e.hi)}};
  j["rule"] = e.rule;
  Json probes = Json::array();
  for (auto& p : e.probes) probes.push_back({{"s", to_string(p.s)}, {"class", limit_kind_name(p.kind)}, {"rule", p.rule}});
  j["probes"] = probes;
  return j;
}

Json to_json(const GrowthExponent& g) {
  Json j;
  if (g.infinite) {
    j["value"] = "+INF";
  } else if (g.exact) {
    j["value"] = to_json(*g.exact);
  } else {
    j["value"] = g.value;
  }
  j["method"] = g.method;
  j["schedule_limsup"] = g.schedule_limsup;
  Json r = Json::array();
  for (auto& [n, v] : g.ratios) r.push_back({n, number(v)});
  j["ratios"] = r;
  return j;
}

Json to_json(const Schedules& s) {
  Json j;
  Json eps = Json::array();
  for (auto& e : s.eps) eps.push_back(to_string(e));
  j["eps"] = eps;
  Json lim = Json::array();
  for (auto& [N, D] : s.limit) lim.push_back({N, D});
  j["limit"] = lim;
  j["n"] = s.n;
  j["s_tol"] = to_string(s.s_tol);
  j["s_max"] = to_string(s.s_max);
  j["samples"] = s.samples;
  ClassifyOptions c;
  j["classify"] = {{"zero_tol", static_cast<double>(c.zero_tol)},
                   {"inf_tol", static_cast<double>(c.inf_tol)},
                   {"trend_tol", c.trend_tol},
                   {"stable_tol", c.stable_tol},
                   {"tail", c.tail}};
  return j;
}

Json to_json(const DimensionReport& r) {
  Json j;
  j["name"] = r.name;
  j["kind"] = r.kind;
  j["growth"] = r.growth.to_string();
  j["cardinality"] = cardinality_name(r.cardinality);
  Json top;
  top["value"] = to_json(r.h_S_top.value);
  Json per = Json::array();
  for (auto& [e, est] : r.h_S_top.per_eps) per.push_back({{"eps", to_string(e)}, {"estimate", to_json(est)}});
  top["per_eps"] = per;
  top["monotone_in_eps"] = r.h_S_top.monotone;
  j["h_S_top"] = top;
  j["h_S_cover"] = to_json(r.h_S_cover);
  j["h_S_cover"]["cover"] = "generator";
  j["dim_H"] = to_json(r.dim_H);
  j["dim_B_upper"] = to_json(r.dim_B_upper);
  if (r.h_BS) {
    j["h_BS"] = to_json(*r.h_BS);
    j["h_BS"]["family"] = "cylinder sets under the generator";
  }
  Json b;
  b["value"] = r.bowen.value;
  b["positive"] = r.bowen.positive;
  b["method"] = r.bowen.method;
  b["certified_lower_radius"] = to_json(r.bowen.certified_lower);
  b["iterations"] = r.bowen.iterations;
  b["converged"] = r.bowen.converged;
  j["bowen_entropy"] = b;
  j["classifiers"] = {{"bowen_positive", r.flags.bowen_positive},
                      {"exponential_growth", r.flags.exponential_growth},
                      {"h_S_top_infinite", r.flags.h_S_top_infinite},
                      {"h_S_cover_infinite", r.flags.h_S_cover_infinite}};
  if (r.infinite_probe) {
    j["infinite_probe"] = {{"s", to_string(r.options.infinite_probe)},
                           {"class", limit_kind_name(r.infinite_probe->kind)},
                           {"rule", r.infinite_probe->rule}};
  }
  Json checks = Json::array();
  for (auto& c : r.checks) checks.push_back({{"name", c.name}, {"holds", c.holds}, {"detail", c.detail}});
  j["checks"] = checks;
  return j;
}

ExponentOptions exponent_options(const Schedules& s) {
  ExponentOptions o;
  o.schedule = s.limit;
  o.s_tol = s.s_tol;
  o.s_max = s.s_max;
  return o;
}

MeasureEntropyOptions measure_options(const Schedules& s, std::uint64_t seed) {
  MeasureEntropyOptions o;
  o.eps = s.eps;
  o.samples = s.samples;
  o.seed = seed;
  o.local.n_schedule = s.n;
  return o;
}

int exit_code(const RunReport& r) {
  if (r.config_error) return 2;
  if (r.budget_exhausted) return 3;
  if (r.suite_failure) return 1;
  return 0;
}

// ---------------------------------------------------------------- analyze

RunReport run_analyze(const ExperimentConfig& cfg, const RunOptions& opts) {
  RunReport rep;
  rep.command = "analyze";
  Json& doc = rep.doc;
  doc["provenance"] = provenance("analyze", cfg, opts);
  doc["schedules"] = to_json(cfg.schedules);
  DimensionOptions dopts;
  dopts.exponent = exponent_options(cfg.schedules);
  dopts.eps = cfg.schedules.eps;
  dopts.counts = cfg.schedules.n;
  std::vector<std::string> names = cfg.analyze;
  if (names.empty())
    for (auto& [n, z] : cfg.subsets) names.push_back(n);
  Json subsets = Json::array();
  std::ostringstream csv, plot;
  csv << "subset,kind,h_S_top,dim_H,h_S_cover,dim_B_upper,h_BS,bowen_entropy,checks\n";
  plot << "subset,series,x,y\n";
  for (auto& name : names) {
    try {
      DimensionReport r = dimension_report(name, cfg.subset(name), dopts);
      Json j = to_json(r);
      bool ok = true;
      for (auto& c : r.checks) ok = ok && c.holds;
      bool undetermined = r.h_S_top.value.kind == EstimateKind::Undetermined ||
                          r.dim_H.kind == EstimateKind::Undetermined;
      j["passed"] = ok && !undetermined;
      if (!ok || undetermined) rep.suite_failure = true;
      subsets.push_back(j);
      csv << name << "," << r.kind << "," << csv_value(r.h_S_top.value) << "," << csv_value(r.dim_H) << ","
          << csv_value(r.h_S_cover) << "," << csv_value(r.dim_B_upper) << ","
          << (r.h_BS ? csv_value(*r.h_BS) : std::string("")) << "," << format_double(r.bowen.value) << ","
          << (ok && !undetermined ? "pass" : "fail") << "\n";
      for (auto& [n, v] : r.h_S_cover.ratios)
        plot << name << ",log p(n)/log n," << format_double(std::log(static_cast<double>(n))) << ","
             << format_double(v) << "\n";
    } catch (const Error& e) {
      Json j = error_json(e);
      j["name"] = name;
      subsets.push_back(j);
      if (e.kind() == ErrorKind::BudgetExceeded || e.kind() == ErrorKind::CapExceeded) {
        rep.budget_exhausted = true;
      } else {
        rep.suite_failure = true;
      }
      csv << name << ",error,,,,,,," << error_kind_name(e.kind()) << "\n";
    }
  }
  doc["subsets"] = subsets;
  rep.csv = csv.str();
  rep.files["plot_growth.csv"] = plot.str();
  return rep;
}

// ---------------------------------------------------------------- verify

namespace {

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
};

struct Suite {
  std::string name;
  Json results = Json::array();
  std::size_t failures = 0;

  void add(const std::string& instance, const std::string& property, bool holds, const std::string& detail) {
    results.push_back({{"instance", instance}, {"property", property}, {"holds", holds}, {"detail", detail}});
    if (!holds) ++failures;
  }
  Json json() const {
    return {{"suite", name}, {"passed", failures == 0}, {"failures", failures}, {"results", results}};
  }
};

std::string approx(const ExactReal& x) { return format_double(static_cast<double>(x.approx())); }

bool countable(const SubsetDescriptor& z) {
  Cardinality c = cardinality_class(z);
  return c == Cardinality::Finite || c == Cardinality::CountablyInfinite;
}

bool wanted(const VerifyBlock& b, const std::string& suite) {
  return b.suites.empty() || std::find(b.suites.begin(), b.suites.end(), suite) != b.suites.end();
}

}  // namespace

RunReport run_verify(const ExperimentConfig& cfg, const RunOptions& opts) {
  RunReport rep;
  rep.command = "verify";
  VerifyBlock vb = cfg.verify.value_or(VerifyBlock{});
  Json& doc = rep.doc;
  doc["provenance"] = provenance("verify", cfg, opts);
  doc["schedules"] = to_json(cfg.schedules);
  doc["parameters"] = {{"s", to_string(vb.s)},
                       {"N", vb.N},
                       {"eps", to_string(vb.eps)},
                       {"D", vb.D},
                       {"weight_fault", to_string(vb.weight_fault)}};
  ExponentOptions eopts = exponent_options(cfg.schedules);
  const double tol = 2 * cfg.schedules.s_tol.get_d();
  std::vector<Suite> suites;
  auto guarded = [&](Suite& s, const std::string& instance, auto&& body) {
    try {
      body();
    } catch (const Error& e) {
      s.add(instance, "evaluation", false, std::string(error_kind_name(e.kind())) + ": " + e.what());
      if (e.kind() == ErrorKind::BudgetExceeded) rep.budget_exhausted = true;
    }
  };

  if (wanted(vb, "outer-measure")) {
    Suite s{"outer-measure"};
    std::vector<std::pair<std::string, std::string>> pairs = vb.pairs;
    if (pairs.empty())
      for (std::size_t i = 0; i < cfg.subsets.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.subsets.size(); ++j)
          if (cfg.subsets[i].second.alphabet() == cfg.subsets[j].second.alphabet())
            pairs.emplace_back(cfg.subsets[i].first, cfg.subsets[j].first);
    for (auto& [a, b] : pairs) {
      std::string inst = a + " | " + b;
      guarded(s, inst, [&] {
        OuterInstance oi{inst, cfg.subset(a), cfg.subset(b), vb.s, vb.N, vb.eps, vb.D, true};
        for (auto& c : outer_measure_checks({oi})) s.add(c.instance, c.property, c.holds, c.detail);
      });
    }
    suites.push_back(s);
  }

  if (wanted(vb, "chain")) {
    Suite s{"chain"};
    const Rational eps(1, 13);
    const std::uint64_t N = 2, D = 256;
    for (auto& [name, z] : cfg.subsets) {
      for (const Rational& sv : {Rational(1, 2), Rational(1)}) {
        for (const Rational& delta : {Rational(1, 10), Rational(1, 2)}) {
          std::string inst = name + " s=" + to_string(sv) + " delta=" + to_string(delta) + " eps=1/13 N=2 D=256";
          guarded(s, inst, [&] {
            CoverSpec wide = CoverSpec::bowen(eps * 6), narrow = CoverSpec::bowen(eps);
            wide.weight_fault = narrow.weight_fault = vb.weight_fault;
            ExactReal left = cover_value(z, wide, sv + delta, N, D).exact();
            ExactReal mid = weighted_value(z, sv, N, eps, D).value;
            ExactReal right = cover_value(z, narrow, sv, N, D).exact();
            s.add(inst, "M(s+delta, 6eps) <= W(s, eps)", compare(left, mid) <= 0, approx(left) + " <= " + approx(mid));
            s.add(inst, "W(s, eps) <= M(s, eps)", compare(mid, right) <= 0, approx(mid) + " <= " + approx(right));
          });
        }
      }
    }
    suites.push_back(s);
  }

  if (wanted(vb, "power-invariance")) {
    Suite s{"power-invariance"};
    std::vector<std::string> names = vb.power_subsets;
    if (names.empty())
      for (auto& [n, z] : cfg.subsets)
        if (std::holds_alternative<SparseProduct>(z.value())) names.push_back(n);
    const Rational eps(1, 4);
    for (auto& name : names) {
      guarded(s, name, [&] {
        const SubsetDescriptor& z = cfg.subset(name);
        ExponentEstimate base = critical_exponent(z, CoverSpec::bowen(eps, 1), eopts);
        for (std::uint64_t m : {2, 3}) {
          ExponentEstimate e = critical_exponent(z, CoverSpec::bowen(eps, m), eopts);
          s.add(name + " eps=1/4", "h(sigma^" + std::to_string(m) + ") = h(sigma)", estimates_agree(base, e, tol),
                csv_value(e) + " vs " + csv_value(base));
        }
      });
    }
    suites.push_back(s);
  }

  if (wanted(vb, "union")) {
    Suite s{"union"};
    const Rational eps = *std::min_element(cfg.schedules.eps.begin(), cfg.schedules.eps.end());
    for (auto& [a, b] : vb.pairs) {
      std::string inst = a + " u " + b;
      guarded(s, inst, [&] {
        const SubsetDescriptor &za = cfg.subset(a), &zb = cfg.subset(b);
        CoverSpec spec = CoverSpec::bowen(eps);
        ExponentEstimate ea = critical_exponent(za, spec, eopts), eb = critical_exponent(zb, spec, eopts);
        ExponentEstimate eu = critical_exponent(SubsetDescriptor::set_union({za, zb}), spec, eopts);
        const ExponentEstimate& mx = (ea.is_infinite() || (!eb.is_infinite() && ea.value >= eb.value)) ? ea : eb;
        s.add(inst, "h(Z1 u Z2) = max(h(Z1), h(Z2))", estimates_agree(eu, mx, tol),
              csv_value(eu) + " vs max(" + csv_value(ea) + ", " + csv_value(eb) + ")");
      });
    }
    suites.push_back(s);
  }

  if (wanted(vb, "vitali")) {
    Suite s{"vitali"};
    Rng rng(run_seed(cfg, opts));
    const Rational radii[] = {Rational(1, 6), Rational(1, 10), Rational(1, 13), Rational(1, 25)};
    for (std::size_t f = 0; f < vb.vitali_families; ++f) {
      std::vector<BowenBall> balls;
      std::size_t count = 1 + rng.below(12);
      for (std::size_t i = 0; i < count; ++i) {
        BowenBall b;
        b.order = 1 + rng.below(6);
        b.radius = radii[rng.below(4)];
        std::uint64_t len = b.order + cylinder_depth_for_radius(ActionSpec{}, b.radius) - 1;
        for (std::uint64_t k = 0; k < len; ++k) b.center.push_back(static_cast<Symbol>(rng.below(2)));
        balls.push_back(b);
      }
      std::string inst = "family " + std::to_string(f) + " (" + std::to_string(count) + " balls)";
      guarded(s, inst, [&] {
        VitaliSelection sel = vitali_5r_select(ActionSpec{}, balls);
        s.add(inst, "selected balls pairwise disjoint", sel.disjoint, std::to_string(sel.selected.size()) + " selected");
        s.add(inst, "5-dilations cover every ball", sel.covered, std::to_string(sel.uncovered.size()) + " uncovered");
      });
    }
    suites.push_back(s);
  }

  if (wanted(vb, "sandwich")) {
    Suite s{"sandwich"};
    for (auto& [name, z] : cfg.subsets) {
      for (auto& e : cfg.schedules.eps) {
        std::string inst = name + " eps=" + to_string(e);
        guarded(s, inst, [&] {
          std::uint64_t m = cylinder_depth_for_radius(ActionSpec{}, e);
          BigInt N = box_counting(z, e);
          bool ok = prefix_count(z, m) <= N;
          for (std::uint64_t n : {1, 2, 4, 8}) ok = ok && N <= prefix_count(z, n + m - 1);
          s.add(inst, "p(m) <= N(Z,eps) <= p(n+m-1)", ok, "N=" + N.get_str());
        });
      }
    }
    suites.push_back(s);
  }

  if (wanted(vb, "countable")) {
    Suite s{"countable"};
    const Rational eps = *std::min_element(cfg.schedules.eps.begin(), cfg.schedules.eps.end());
    for (auto& [name, z] : cfg.subsets) {
      if (!countable(z)) continue;
      guarded(s, name, [&] {
        CoverSpec spec = CoverSpec::bowen(eps);
        for (const Rational& sv : {Rational(1, 10), Rational(1, 2), Rational(1), Rational(2)}) {
          LimitClass c = classify_limit(z, spec, sv, eopts.schedule, eopts.classify);
          s.add(name + " s=" + to_string(sv), "limit classifies Zero", c.kind == LimitKind::Zero, c.rule);
        }
        std::vector<long double> seq;
        bool dec = true;
        for (std::uint64_t D = 64; D <= 4096; D *= 2) {
          seq.push_back(caratheodory_value(z, Rational(2), 2, Rational(2, 5), D).approx());
          if (seq.size() >= 2 && !(seq.back() < seq[seq.size() - 2])) dec = false;
        }
        s.add(name + " s=2 N=2 eps=2/5", "values strictly decrease across D doublings", dec,
              format_double(static_cast<double>(seq.front())) + " .. " + format_double(static_cast<double>(seq.back())));
        ExponentEstimate e = critical_exponent(z, spec, eopts);
        s.add(name, "h_S_top = 0", e.kind == EstimateKind::Value && e.value == 0, e.rule);
      });
    }
    suites.push_back(s);
  }

  Json arr = Json::array();
  std::ostringstream csv;
  csv << "suite,instance,property,holds\n";
  for (auto& s : suites) {
    if (s.failures) rep.suite_failure = true;
    arr.push_back(s.json());
    for (auto& r : s.results)
      csv << s.name << ",\"" << r["instance"].get<std::string>() << "\",\"" << r["property"].get<std::string>()
          << "\"," << (r["holds"].get<bool>() ? "pass" : "fail") << "\n";
  }
  doc["suites"] = arr;
  Json failures = Json::array();
  for (auto& s : suites)
    for (auto& r : s.results)
      if (!r["holds"].get<bool>()) failures.push_back({{"suite", s.name}, {"instance", r["instance"]}, {"property", r["property"]}});
  doc["failures"] = failures;
  rep.csv = csv.str();
  return rep;
}

// ---------------------------------------------------------------- variational

namespace {

Json entropy_json(const MeasureEntropy& m) {
  Json j;
  j["value"] = m.infinite ? Json("+INF") : Json(m.value);
  j["decided"] = m.decided;
  j["integration"] = integration_name(m.method);
  if (m.method == Integration::MonteCarlo) {
    j["seed"] = m.seed;
    j["samples"] = m.samples;
    j["std_error"] = m.std_error;
  }
  j["monotone_in_eps"] = m.monotone_in_eps;
  Json per = Json::array();
  for (auto& p : m.per_eps) {
    Json e;
    e["eps"] = to_string(p.eps);
    e["value"] = p.infinite ? Json("+INF") : Json(p.value);
    e["points"] = p.points;
    e["undecided"] = p.undecided;
    if (m.method == Integration::MonteCarlo) e["std_error"] = p.std_error;
    per.push_back(e);
  }
  j["per_eps"] = per;
  return j;
}

// A support point whose free choices all equal the fill symbol, if any.
std::optional<EventuallyPeriodic> representative(const MeasureDescriptor& mu) {
  if (auto* p = std::get_if<ProductOnSparse>(&mu.value())) {
    if (p->support.fill < p->support.branching) return EventuallyPeriodic{{}, {p->support.fill}};
    return std::nullopt;
  }
  if (std::holds_alternative<BernoulliMeasure>(mu.value())) return EventuallyPeriodic{{}, {0}};
  return std::nullopt;
}

}  // namespace

RunReport run_variational(const ExperimentConfig& cfg, const RunOptions& opts) {
  RunReport rep;
  rep.command = "variational";
  Json& doc = rep.doc;
  doc["provenance"] = provenance("variational", cfg, opts);
  doc["schedules"] = to_json(cfg.schedules);
  ExponentOptions eopts = exponent_options(cfg.schedules);
  MeasureEntropyOptions mopts = measure_options(cfg.schedules, run_seed(cfg, opts));
  const double tol = 2 * cfg.schedules.s_tol.get_d();
  Json exps = Json::array();
  std::ostringstream csv, plot;
  csv << "set,measure,value,h_S_top,easy_direction\n";
  plot << "measure,series,x,y\n";
  for (auto& ex : cfg.variational) {
    Json j;
    j["set"] = ex.set;
    j["family"] = ex.family;
    try {
      const SubsetDescriptor& k = cfg.subset(ex.set);
      std::vector<std::pair<std::string, MeasureDescriptor>> fam;
      for (auto& m : ex.family) fam.emplace_back(m, cfg.measure(m));
      VariationalGap g = variational_gap(k, fam, mopts, eopts, cfg.schedules.eps);
      Json members = Json::array();
      bool easy = true;
      for (auto& m : g.members) {
        members.push_back({{"name", m.name}, {"entropy", entropy_json(m.entropy)}, {"easy_direction", m.easy_direction}});
        easy = easy && m.easy_direction;
        csv << ex.set << "," << m.name << ","
            << (m.entropy.infinite ? std::string("+INF") : format_double(m.entropy.value)) << ","
            << csv_value(g.h_S_top.value) << "," << (m.easy_direction ? "pass" : "fail") << "\n";
      }
      j["members"] = members;
      j["sup_measure_value"] = g.sup_infinite ? Json("+INF") : Json(g.sup_measure_value);
      j["best"] = g.best;
      j["h_S_top"] = to_json(g.h_S_top.value);
      j["gap"] = g.gap_infinite ? Json(format_double(g.gap)) : Json(g.gap);
      j["gap_within_2tol"] = !g.gap_infinite ? std::fabs(g.gap) <= tol : false;
      j["easy_direction"] = easy;
      if (!easy) rep.suite_failure = true;
      for (auto& [name, mu] : fam) {
        auto x = representative(mu);
        if (!x) continue;
        Rational e = *std::min_element(cfg.schedules.eps.begin(), cfg.schedules.eps.end());
        LocalOptions lo = mopts.local;
        LocalSlowEntropyEstimate est = local_slow_entropy(mu, *x, e, lo);
        for (auto& v : est.values)
          plot << name << ",local " << x->to_string() << " eps=" << to_string(e) << "," << format_double(v.log_n)
               << "," << format_double(v.value) << "\n";
      }
      if (ex.frostman) {
        Json fr = Json::array();
        std::optional<Rational> prev;
        for (std::uint64_t D : ex.frostman->D) {
          FrostmanResult f = frostman_construct(k, ex.frostman->s, ex.frostman->N, ex.frostman->eps, D);
          Json fj;
          fj["D"] = D;
          fj["achieved_c"] = to_json(f.achieved_c);
          fj["achieved_c_approx"] = f.achieved_c.get_d();
          fj["cap_constant"] = to_json(f.cap_constant);
          fj["dp_value"] = static_cast<double>(f.dp_value);
          fj["orders"] = {f.first_order, f.last_order};
          fj["nodes"] = f.nodes;
          fj["caps_hold"] = f.caps_hold;
          fj["mass_one"] = f.mass_one;
          if (prev) fj["c_ratio"] = Rational(f.achieved_c / *prev).get_d();
          prev = f.achieved_c;
          if (!f.caps_hold || !f.mass_one) rep.suite_failure = true;
          fr.push_back(fj);
        }
        j["frostman"] = {{"s", to_string(ex.frostman->s)},
                         {"N", ex.frostman->N},
                         {"eps", to_string(ex.frostman->eps)},
                         {"runs", fr}};
      }
    } catch (const Error& e) {
      j.update(error_json(e));
      if (e.kind() == ErrorKind::SupportViolation) {
        rep.config_error = true;
      } else if (e.kind() == ErrorKind::BudgetExceeded) {
        rep.budget_exhausted = true;
      } else {
        rep.suite_failure = true;
      }
    }
    exps.push_back(j);
  }
  doc["experiments"] = exps;
  rep.csv = csv.str();
  rep.files["plot_local.csv"] = plot.str();
  return rep;
}

// ---------------------------------------------------------------- sweep

RunReport run_sweep(const ExperimentConfig& cfg, const RunOptions& opts) {
  RunReport rep;
  rep.command = "sweep";
  Json& doc = rep.doc;
  doc["provenance"] = provenance("sweep", cfg, opts);
  doc["schedules"] = to_json(cfg.schedules);
  if (!cfg.sweep) {
    rep.config_error = true;
    doc["error"] = "Schema";
    doc["message"] = "sweep needs a grid block";
    return rep;
  }
  const SweepBlock& g = *cfg.sweep;
  ExponentOptions eopts = exponent_options(cfg.schedules);
  std::ostringstream csv, plot;
  csv << "subset,s,N,eps_num,eps_den,D,value_num,value_den,class,value_approx,exactness\n";
  plot << "subset,series,x,y\n";
  std::size_t cells = 0;
  bool truncated = false;
  std::string reason;
  std::map<std::string, LimitClass> classes;
  for (auto& name : g.subsets) {
    const SubsetDescriptor& z = cfg.subset(name);
    for (auto& s : g.s) {
      for (auto N : g.N) {
        for (auto& e : g.eps) {
          for (auto D : g.D) {
            if (truncated) break;
            if (cells >= g.budget) {
              truncated = true;
              reason = "cell budget " + std::to_string(g.budget);
              break;
            }
            ++cells;
            try {
              std::string key = name + "|" + to_string(s) + "|" + to_string(e);
              auto it = classes.find(key);
              if (it == classes.end())
                it = classes.emplace(key, classify_limit(z, CoverSpec::bowen(e), s, eopts.schedule, eopts.classify))
                         .first;
              csv << name << "," << to_string(s) << "," << N << "," << e.get_num().get_str() << ","
                  << e.get_den().get_str() << "," << D << ",";
              CoverValue v;
              try {
                v = caratheodory_value(z, s, N, e, D);
              } catch (const Error& err) {
                if (err.kind() != ErrorKind::CapExceeded) throw;
                csv << ",," << limit_kind_name(it->second.kind) << ",,cap-below-shallowest\n";
                continue;
              }
              ExactReal x = v.exact();
              auto r = x.as_rational();
              if (r) {
                csv << r->get_num().get_str() << "," << r->get_den().get_str();
              } else {
                csv << ",";
              }
              csv << "," << limit_kind_name(it->second.kind) << "," << format_double(static_cast<double>(v.approx()))
                  << "," << (r ? "exact-rational" : "exact-radical") << "\n";
              plot << name << ",N=" << N << " D=" << D << " eps=" << to_string(e) << "," << format_double(s.get_d())
                   << "," << format_double(static_cast<double>(v.approx())) << "\n";
            } catch (const Error& err) {
              if (err.kind() != ErrorKind::BudgetExceeded) throw;
              truncated = true;
              reason = err.what();
            }
          }
        }
      }
    }
  }
  if (truncated) {
    csv << "#truncated," << reason << ",cells=" << cells << "\n";
    rep.budget_exhausted = true;
  }
  doc["grid"] = {{"subsets", g.subsets}, {"cells", cells}, {"truncated", truncated}};
  rep.files["sweep.csv"] = csv.str();
  rep.files["plot_sweep.csv"] = plot.str();
  rep.csv = csv.str();
  return rep;
}

}  // namespace slowent
