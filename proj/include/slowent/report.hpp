#pragma once

#include "slowent/config.hpp"
#include "slowent/dimensions.hpp"
#include "slowent/measures.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>

namespace slowent {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the config seed
  std::string config_text;            // hashed into the provenance block
  unsigned jobs = 1;
};

struct RunReport {
  std::string command;
  Json doc;
  std::string csv;                            // summary rows for --format csv
  std::map<std::string, std::string> files;   // extra outputs: sweep and plot-data CSV
  bool suite_failure = false;
  bool budget_exhausted = false;
  bool config_error = false;
};

RunReport run_analyze(const ExperimentConfig& cfg, const RunOptions& opts = {});
RunReport run_verify(const ExperimentConfig& cfg, const RunOptions& opts = {});
RunReport run_variational(const ExperimentConfig& cfg, const RunOptions& opts = {});
RunReport run_sweep(const ExperimentConfig& cfg, const RunOptions& opts = {});

// 0 ok, 1 suite failure, 2 config error, 3 budget exhausted.
int exit_code(const RunReport& r);

Json to_json(const Rational& r);
Json to_json(const ExponentEstimate& e);
Json to_json(const GrowthExponent& g);
Json to_json(const DimensionReport& r);
Json to_json(const Schedules& s);

// Shortest round-trip decimal, "+INF" for infinity.
std::string format_double(double x);

ExponentOptions exponent_options(const Schedules& s);
MeasureEntropyOptions measure_options(const Schedules& s, std::uint64_t seed);

}  // namespace slowent
