#include "slowent/report.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

using namespace slowent;

namespace {

std::string small_text() {
  std::ifstream in(SLOWENT_SOURCE_DIR "/tests/data/small.json");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<SchemaIssue> issues_of(const std::string& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<SchemaIssue>& v, const std::string& needle) {
  for (auto& i : v)
    if ((i.path + " " + i.expected + " " + i.found).find(needle) != std::string::npos) return true;
  return false;
}

const char* kPoint = R"j({"name": "p", "kind": "finite", "points": ["(0)"]})j";

// One-point subset list plus extra top-level fields.
std::string doc(const std::string& extra) { return std::string("{\"subsets\": [") + kPoint + "]" + extra + "}"; }

}  // namespace

TEST(Config, SmallConfigParses) {
  ExperimentConfig cfg = parse_config(small_text());
  EXPECT_EQ(cfg.seed, 3u);
  EXPECT_EQ(cfg.subsets.size(), 3u);
  EXPECT_EQ(cfg.schedules.eps, (std::vector<Rational>{Rational(1, 2), Rational(1, 4)}));
  ASSERT_TRUE(cfg.sweep.has_value());
  EXPECT_EQ(cfg.measure_support.at("sp2_uniform"), "sp2");
  EXPECT_THROW(cfg.subset("nope"), Error);
}

TEST(Config, DecimalsAreRejectedWithARationalHint) {
  auto v = issues_of(doc(R"j(, "schedules": {"eps": ["0.3"]})j"));
  ASSERT_FALSE(v.empty());
  EXPECT_TRUE(mentions(v, "exact rational string \"3/10\"")) << v[0].expected;
  auto w = issues_of(doc(R"j(, "schedules": {"s_tol": 0.05})j"));
  EXPECT_TRUE(mentions(w, "\"1/20\""));
}

TEST(Config, DuplicateNamesAndUnorderedSchedules) {
  auto v = issues_of(std::string("{\"subsets\": [") + kPoint + "," + kPoint + "]}");
  EXPECT_TRUE(mentions(v, "duplicate \"p\""));
  auto w = issues_of(doc(R"j(, "schedules": {"eps": ["1/4", "1/2"]})j"));
  EXPECT_TRUE(mentions(w, "$.schedules.eps"));
  auto l = issues_of(doc(R"j(, "schedules": {"limit": [[4, 64], [2, 128]]})j"));
  EXPECT_TRUE(mentions(l, "$.schedules.limit"));
  auto u = issues_of(doc(R"j(, "analyze": {"subsets": ["q"]})j"));
  EXPECT_TRUE(mentions(u, "\"q\""));
}

TEST(Config, AllIssuesAreCollected) {
  auto v = issues_of(doc(R"j(, "seed": "x", "schedules": {"eps": ["0.5"], "n": [8, 4]})j"));
  EXPECT_GE(v.size(), 3u);
}

TEST(Config, DfaAcceptingAsIndicesOrFlags) {
  const char* a = R"j({"subsets": [{"name": "z", "kind": "regular",
      "dfa": {"start": 0, "accepting": [0, 1], "next": [[0, 1], [-1, 1]]}}]})j";
  const char* b = R"j({"subsets": [{"name": "z", "kind": "regular",
      "dfa": {"start": 0, "accepting": [true, true], "next": [[0, 1], [-1, 1]]}}]})j";
  ExperimentConfig x = parse_config(a), y = parse_config(b);
  for (std::size_t n : {1, 5, 9}) EXPECT_EQ(prefix_count(x.subset("z"), n), prefix_count(y.subset("z"), n));
  EXPECT_EQ(prefix_count(x.subset("z"), 9), BigInt(10));
}

TEST(Report, ExitCodes) {
  RunReport r;
  EXPECT_EQ(exit_code(r), 0);
  r.suite_failure = true;
  EXPECT_EQ(exit_code(r), 1);
  r.budget_exhausted = true;
  EXPECT_EQ(exit_code(r), 3);
  r.config_error = true;
  EXPECT_EQ(exit_code(r), 2);
}

TEST(Report, FormatDouble) {
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "+INF");
  for (double x : {0.1, 1.0 / 3, 2.0, 1e-300, 123456.789}) EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Report, Fnv1aIsStable) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_NE(fnv1a_hex("ab"), fnv1a_hex("ba"));
}

TEST(Report, RunsAreDeterministicAndCarryProvenance) {
  RunOptions o;
  o.config_text = small_text();
  ExperimentConfig cfg = parse_config(o.config_text);
  for (auto run : {run_analyze, run_verify, run_variational, run_sweep}) {
    RunReport a = run(cfg, o), b = run(cfg, o);
    EXPECT_EQ(exit_code(a), 0) << a.command;
    EXPECT_EQ(a.doc.dump(), b.doc.dump()) << a.command;
    EXPECT_EQ(a.csv, b.csv);
    EXPECT_EQ(a.files, b.files);
    const Json& p = a.doc.at("provenance");
    EXPECT_EQ(p.at("command"), a.command);
    EXPECT_EQ(p.at("config_hash"), fnv1a_hex(o.config_text));
    EXPECT_EQ(p.at("seed"), 3);
    EXPECT_EQ(p.at("version"), kVersion);
    EXPECT_EQ(p.size(), 4u);
    std::string all = a.doc.dump();
    for (const char* t : {"timestamp", "\"time\"", "date"}) EXPECT_EQ(all.find(t), std::string::npos) << t;
  }
  RunOptions seeded = o;
  seeded.seed = 99;
  EXPECT_EQ(run_variational(cfg, seeded).doc.at("provenance").at("seed"), 99);
}

TEST(Report, SweepTruncatesAtTheCellBudget) {
  RunOptions o;
  o.config_text = small_text();
  ExperimentConfig cfg = parse_config(o.config_text);
  cfg.sweep->budget = 1;
  RunReport r = run_sweep(cfg, o);
  EXPECT_EQ(exit_code(r), 3);
  EXPECT_NE(r.files.at("sweep.csv").find("#truncated"), std::string::npos);
  EXPECT_TRUE(r.doc.at("grid").at("truncated").get<bool>());
}

TEST(Report, MeasureOffItsSetIsAConfigError) {
  RunOptions o;
  o.config_text = small_text();
  ExperimentConfig cfg = parse_config(o.config_text);
  cfg.variational = {{"singleton", {"sp2_uniform"}, std::nullopt}};
  RunReport r = run_variational(cfg, o);
  EXPECT_EQ(exit_code(r), 2);
  EXPECT_EQ(r.doc.at("experiments")[0].at("error"), "SupportViolation");
}

TEST(Report, SweepWithoutGridIsAConfigError) {
  ExperimentConfig cfg = parse_config(small_text());
  cfg.sweep.reset();
  EXPECT_EQ(exit_code(run_sweep(cfg)), 2);
}

TEST(Config, BlocksMustBeObjects) {
  EXPECT_TRUE(mentions(issues_of(doc(R"j(, "analyze": ["p"])j")), "$.analyze"));
  EXPECT_TRUE(mentions(issues_of(doc(R"j(, "schedules": [1])j")), "$.schedules"));
}
