#pragma once

#include "slowent/cover.hpp"
#include "slowent/dimensions.hpp"
#include "slowent/measures.hpp"
#include "slowent/subsets.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace slowent {

struct SchemaIssue {
  std::string path;
  std::string expected;
  std::string found;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<SchemaIssue> issues);
  const std::vector<SchemaIssue>& issues() const { return issues_; }

 private:
  std::vector<SchemaIssue> issues_;
};

struct Schedules {
  std::vector<Rational> eps = default_eps_schedule();
  LimitSchedule limit = default_limit_schedule();
  std::vector<std::uint64_t> n = default_count_schedule();
  Rational s_tol = Rational(1, 20);
  Rational s_max = 8;
  std::size_t samples = 4096;
};

struct VerifyBlock {
  std::vector<std::string> suites;  // empty: all
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> power_subsets;
  Rational s = Rational(1, 2);
  std::uint64_t N = 2;
  Rational eps = Rational(2, 5);
  std::uint64_t D = 64;
  Rational weight_fault = 1;
  std::size_t vitali_families = 100;
};

struct FrostmanBlock {
  Rational s;
  std::uint64_t N = 2;
  Rational eps = Rational(2, 5);
  std::vector<std::uint64_t> D;
};

struct VariationalExperiment {
  std::string set;
  std::vector<std::string> family;
  std::optional<FrostmanBlock> frostman;
};

struct SweepBlock {
  std::vector<std::string> subsets;
  std::vector<Rational> s;
  std::vector<std::uint64_t> N;
  std::vector<Rational> eps;
  std::vector<std::uint64_t> D;
  std::size_t budget = 100000;  // cells
};

struct ExperimentConfig {
  ActionSpec action;
  int alphabet = 2;
  std::uint64_t seed = 1;
  std::vector<std::pair<std::string, SubsetDescriptor>> subsets;
  std::vector<std::pair<std::string, MeasureDescriptor>> measures;
  std::map<std::string, std::string> measure_support;
  Schedules schedules;
  std::vector<std::string> analyze;  // subset names, empty: all
  std::optional<VerifyBlock> verify;
  std::vector<VariationalExperiment> variational;
  std::optional<SweepBlock> sweep;

  const SubsetDescriptor& subset(const std::string& name) const;
  const MeasureDescriptor& measure(const std::string& name) const;
};

ExperimentConfig parse_config(const std::string& document);
ExperimentConfig load_config(const std::string& path);

// 64-bit FNV-1a of the bytes, hex.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace slowent
