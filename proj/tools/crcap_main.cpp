// crcap: cognitive-radio capacity statistics under path loss, shadowing and
// Rayleigh fading. One subcommand per experiment family; results are CSV
// files plus a JSON run manifest.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "crcap/run.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
};

crcap::ExperimentConfig resolve(const std::string& experiment,
                                const CliOptions& opt) {
  crcap::ExperimentConfig cfg;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw std::runtime_error("cannot read config " + opt.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    cfg = crcap::parse_config(buf.str());
    if (cfg.experiment != experiment)
      throw std::runtime_error("config experiment '" + cfg.experiment +
                               "' does not match subcommand '" + experiment +
                               "'");
  } else {
    cfg = crcap::default_config(experiment);
  }
  if (opt.seed) cfg.master_seed = *opt.seed;
  if (opt.samples) cfg.n_drops = *opt.samples;
  if (opt.out_dir) cfg.output_dir = *opt.out_dir;
  if (opt.threads) {
    cfg.threads = *opt.threads;
  } else if (const char* env = std::getenv("CRCAP_THREADS")) {
    cfg.threads = std::atoi(env);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cognitive-radio capacity statistics"};
  app.require_subcommand(1);

  // subcommand name -> experiment id
  const std::pair<const char*, const char*> experiments[] = {
      {"low-interference", "low_interference"},
      {"alpha-pdf", "alpha_pdf"},
      {"mean-alpha", "mean_alpha"},
      {"alpha-cdf-drops", "alpha_cdf_drops"},
      {"rate-cdf", "rate_cdf"},
      {"rate-loss", "rate_loss"},
      {"power-sweep", "power_sweep"},
      {"calibrate", "calibrate"},
  };

  CliOptions opt;
  std::string selected;
  for (const auto& [name, id] : experiments) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name +
                                             " experiment");
    sub->add_option("--config", opt.config_path, "JSON experiment config");
    sub->add_option("--seed", [&](const CLI::results_t& r) {
      opt.seed = std::stoull(r[0]);
      return true;
    }, "master seed override");
    sub->add_option("--samples", [&](const CLI::results_t& r) {
      opt.samples = std::stoull(r[0]);
      return true;
    }, "sample count override (n_drops)");
    sub->add_option("--out", [&](const CLI::results_t& r) {
      opt.out_dir = r[0];
      return true;
    }, "output directory");
    sub->add_option("--threads", [&](const CLI::results_t& r) {
      opt.threads = std::stoi(r[0]);
      return true;
    }, "worker threads (0 = hardware; env CRCAP_THREADS as fallback)");
    sub->callback([&selected, id = std::string(id)] { selected = id; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    crcap::ExperimentConfig cfg = resolve(selected, opt);
    crcap::RunOutput out = crcap::run(cfg);
    std::cout << out.csv_path.string() << "\n"
              << out.manifest_path.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "crcap: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
