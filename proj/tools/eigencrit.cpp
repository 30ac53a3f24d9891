// eigencrit: run JSON-configured experiments, verify acceptance suites, and
// re-emit reports from stored bundles.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "eigencrit/harness.hpp"

namespace {

eigencrit::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw eigencrit::Error("cannot read " + path);
  return eigencrit::json::parse(in);
}

int print_suite(const eigencrit::SuiteResult& res) {
  for (const auto& c : res.checks)
    std::printf("  %-52s %s  %s\n", c.name.c_str(),
                c.pass ? "pass" : "FAIL", c.detail.c_str());
  std::printf("%s: %s\n", res.name.c_str(), res.pass() ? "PASS" : "FAIL");
  return res.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral toolkit for long convex domains"};
  app.require_subcommand(1);

  std::string config_path, suite, bundle_path;
  std::string out_dir, format = "json";
  int threads = 0;

  auto* run = app.add_subcommand("run", "execute a JSON experiment config");
  run->add_option("config", config_path, "config.json")->required();
  run->add_option("--out", out_dir, "output directory (default: from config)");
  run->add_option("--threads", threads, "worker threads (default: EIGENCRIT_THREADS or all cores)");

  auto* ver = app.add_subcommand("verify", "run a named acceptance suite");
  std::string names;
  for (const auto& n : eigencrit::suite_names()) names += n + std::string(" ");
  ver->add_option("suite", suite, "one of: " + names)->required();

  auto* rep = app.add_subcommand("report", "re-emit tables from a stored bundle");
  rep->add_option("bundle", bundle_path, "results.json from a previous run")->required();
  rep->add_option("--format", format, "json or csv")->capture_default_str();
  rep->add_option("--out", out_dir, "output directory (default: alongside bundle)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      eigencrit::ExperimentConfig cfg =
          eigencrit::parse_config(load_json(config_path));
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      cfg.threads = threads;
      const eigencrit::ResultBundle bundle = eigencrit::run_experiment(cfg);
      eigencrit::emit_report(bundle, cfg.out_dir, "csv");
      int failed = 0;
      for (const auto& r : bundle.records)
        if (!r.ok) ++failed;
      std::printf("%zu records (%d failed), hash %016llx -> %s\n",
                  bundle.records.size(), failed,
                  static_cast<unsigned long long>(bundle.hash),
                  cfg.out_dir.c_str());
      return 0;
    }
    if (ver->parsed()) {
      eigencrit::PipelineCache cache;
      return print_suite(eigencrit::run_suite(suite, cache));
    }
    if (rep->parsed()) {
      const eigencrit::ResultBundle bundle =
          eigencrit::bundle_from_json(load_json(bundle_path));
      if (out_dir.empty())
        out_dir = std::filesystem::path(bundle_path).parent_path().string();
      if (out_dir.empty()) out_dir = ".";
      eigencrit::emit_report(bundle, out_dir, format);
      std::printf("report written to %s\n", out_dir.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
