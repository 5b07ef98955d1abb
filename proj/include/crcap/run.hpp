#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "crcap/config.hpp"
#include "crcap/experiments.hpp"
#include "crcap/table.hpp"

namespace crcap {

struct RunOutput {
  std::filesystem::path csv_path;
  std::filesystem::path manifest_path;
};

namespace detail {

inline std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// Write via a temp file + rename so a failure never leaves a partial file.
inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

/// Executes the configured experiment and writes <experiment>.csv plus
/// <experiment>_manifest.json under the configured output directory.
inline RunOutput run(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ResultTable table = run_experiment(cfg);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  RunOutput out;
  out.csv_path = dir / (cfg.experiment + ".csv");
  out.manifest_path = dir / (cfg.experiment + "_manifest.json");

  detail::write_file(out.csv_path, table.to_csv());

  nlohmann::json manifest;
  manifest["config"] = nlohmann::json::parse(serialize_config(cfg));
  manifest["version"] = kVersion;
  manifest["timestamp"] = detail::utc_timestamp();
  manifest["seed"] = cfg.master_seed;
  manifest["elapsed_seconds"] = elapsed;
  manifest["csv"] = out.csv_path.filename().string();
  manifest["metadata"] = table.metadata;
  detail::write_file(out.manifest_path, manifest.dump(2) + "\n");
  return out;
}

}  // namespace crcap
