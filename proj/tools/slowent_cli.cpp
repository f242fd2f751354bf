#include "slowent/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace slowent;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({{path, "readable file", "cannot open"}});
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slow entropy of shift-space subsets"};
  app.require_subcommand(1);
  std::string config, out, format = "json";
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  const std::pair<const char*, const char*> commands[] = {
      {"analyze", "dimension report for each subset"},
      {"verify", "property suites: covers, chain, invariance, unions, Vitali"},
      {"variational", "measure-theoretic entropies, variational gap, Frostman"},
      {"sweep", "grid of cover values over s, N, eps, D"}};
  for (auto [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "experiment config (JSON)")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "seed overriding the config");
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--jobs", jobs, "worker count")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  std::string command = app.get_subcommands().front()->get_name();
  RunOptions opts;
  opts.seed = seed;
  opts.jobs = jobs;
  ExperimentConfig cfg;
  try {
    opts.config_text = read_file(config);
    cfg = parse_config(opts.config_text);
  } catch (const ConfigError& e) {
    for (auto& i : e.issues()) std::cerr << "config error at " << i.path << ": expected " << i.expected << ", found " << i.found << "\n";
    return 2;
  }
  RunReport rep;
  try {
    if (command == "analyze") rep = run_analyze(cfg, opts);
    else if (command == "verify") rep = run_verify(cfg, opts);
    else if (command == "variational") rep = run_variational(cfg, opts);
    else rep = run_sweep(cfg, opts);
  } catch (const Error& e) {
    std::cerr << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    if (e.kind() == ErrorKind::BudgetExceeded) return 3;
    if (e.kind() == ErrorKind::Schema || e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::SupportViolation)
      return 2;
    return 1;
  }
  std::string body = format == "csv" ? rep.csv : rep.doc.dump(2) + "\n";
  try {
    if (out.empty()) {
      std::cout << body;
      if (command == "sweep" && format == "json") std::cout << rep.files["sweep.csv"];
    } else {
      fs::create_directories(out);
      write_file(fs::path(out) / (format == "csv" ? "report.csv" : "report.json"), body);
      for (auto& [name, text] : rep.files) write_file(fs::path(out) / name, text);
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  if (rep.doc.contains("failures"))
    for (auto& f : rep.doc["failures"])
      std::cerr << "FAIL " << f["suite"].get<std::string>() << ": " << f["instance"].get<std::string>() << ": "
                << f["property"].get<std::string>() << "\n";
  return exit_code(rep);
}
