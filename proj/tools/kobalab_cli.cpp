#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kobalab/experiments.hpp"
#include "kobalab/parallel.hpp"

namespace {

constexpr int kUsage = 3;

struct Options {
  std::string config;
  std::string out;
  std::optional<long long> seed;
  std::optional<long long> budget;
  std::size_t workers = 0;
  bool quiet = false;
};

int execute(const std::string& experiment, const Options& opt) {
  using namespace kobalab;
  Json doc = Json::object();
  if (!opt.config.empty()) {
    std::ifstream f(opt.config);
    if (!f) {
      std::cerr << "error: cannot read config " << opt.config << "\n";
      return kUsage;
    }
    std::stringstream text;
    text << f.rdbuf();
    try {
      doc = Json::parse(text.str());
    } catch (const Json::parse_error& e) {
      std::cerr << "error: " << opt.config << ": malformed JSON: " << e.what() << "\n";
      return kUsage;
    }
    if (!doc.is_object()) {
      std::cerr << "error: " << opt.config << ": config must be a JSON object\n";
      return kUsage;
    }
  }
  if (doc.contains("experiment") && doc["experiment"] != experiment) {
    std::cerr << "error: experiment: config names " << doc["experiment"].dump() << " but the subcommand is " << experiment << "\n";
    return kUsage;
  }
  doc["experiment"] = experiment;
  if (opt.seed) doc["seed"] = *opt.seed;
  if (opt.budget) doc["budget"] = *opt.budget;

  ExperimentConfig config;
  try {
    config = make_config(doc);
  } catch (const SpecError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kUsage;
  }
  std::string out = opt.out;
  if (out.empty()) out = config["out"].is_string() ? config["out"].get<std::string>() : ".";

  set_worker_count(opt.workers);
  RunReport report;
  try {
    report = run(config);
  } catch (const SpecError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kUsage;
  }
  std::vector<std::string> files;
  try {
    files = write_outputs(report, out);
    if (!report.tables.empty()) {
      const auto plots = emit_plot_data(report, out);
      files.insert(files.end(), plots.begin(), plots.end());
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (!opt.quiet) {
    for (const auto& c : report.checks) std::cout << to_string(c.status) << "  " << c.name << "  " << c.detail << "\n";
    std::cout << "wrote";
    for (const auto& f : files) std::cout << " " << f;
    std::cout << " to " << out << "\n";
    std::cout << "exit " << report.exit_code() << " (" << report.wall_seconds << " s)\n";
  }
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kobayashi geometry laboratory"};
  app.require_subcommand(1);
  Options opt;
  std::string chosen;
  const std::pair<const char*, const char*> commands[] = {
      {"verify-ladder", "exact checks of the ladder and its chain-term table"},
      {"cauchy-demo", "upper bounds along the ladder inside an ambient domain"},
      {"slice-check", "compare distance brackets in G and in the slice G x {0} of Omega"},
      {"psh-verify", "grid verification of a candidate exhaustion function"},
      {"visibility-demo", "almost-geodesic sampling between two boundary points"},
      {"ball-calibration", "estimator brackets against closed forms on the disc, ball and bidisc"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory (default: config \"out\" or .)");
    sub->add_option("--seed", opt.seed, "override the config seed")->check(CLI::NonNegativeNumber);
    sub->add_option("--budget", opt.budget, "override the oracle-call budget")->check(CLI::NonNegativeNumber);
    sub->add_option("--workers", opt.workers, "worker threads (0 = hardware concurrency)");
    sub->add_flag("--quiet", opt.quiet, "no summary on standard output");
    sub->callback([&chosen, n = std::string(name)] { chosen = n; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  return execute(chosen, opt);
}
