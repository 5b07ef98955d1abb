#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "crcap/params.hpp"

namespace crcap {

inline constexpr std::uint64_t kDefaultSeed = 12345;
inline constexpr std::size_t kDefaultDrops = 1000000;
inline constexpr std::size_t kDefaultFading = 100000;

struct SweepAxis {
  std::string param;
  std::vector<double> values;
  bool operator==(const SweepAxis&) const = default;
};

struct ExperimentConfig {
  std::string experiment;
  SystemParams params;
  std::optional<SweepAxis> sweep;
  std::optional<SweepAxis> sweep2;
  std::size_t n_drops = kDefaultDrops;
  std::size_t n_fading = kDefaultFading;
  std::uint64_t master_seed = kDefaultSeed;
  std::string output_dir = ".";
  int threads = 0;  // 0 = one worker per hardware thread

  bool operator==(const ExperimentConfig&) const = default;
};

inline bool operator==(const SystemParams& a, const SystemParams& b) {
  return a.r_0 == b.r_0 && a.r_c == b.r_c && a.r_p == b.r_p &&
         a.gamma == b.gamma && a.sigma_db == b.sigma_db && a.n_p == b.n_p &&
         a.n_c == b.n_c && a.p_p == b.p_p && a.p_c == b.p_c &&
         a.a_p == b.a_p && a.a_c == b.a_c;
}

namespace detail {

inline const std::set<std::string>& known_experiments() {
  static const std::set<std::string> ids = {
      "low_interference", "alpha_pdf",  "mean_alpha", "alpha_cdf_drops",
      "rate_cdf",         "rate_loss",  "power_sweep", "calibrate"};
  return ids;
}

inline const std::set<std::string>& known_sweep_params() {
  static const std::set<std::string> ids = {"sigma_db", "gamma", "rc_over_rp",
                                            "beta_pw"};
  return ids;
}

inline SweepAxis parse_sweep(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("param") || !j.contains("values"))
    throw std::invalid_argument("config: " + where +
                                " must be {param, values}");
  SweepAxis axis;
  axis.param = j.at("param").get<std::string>();
  if (!known_sweep_params().count(axis.param))
    throw std::invalid_argument("config: unknown sweep parameter '" +
                                axis.param + "'");
  axis.values = j.at("values").get<std::vector<double>>();
  if (axis.values.empty())
    throw std::invalid_argument("config: " + where + ".values is empty");
  return axis;
}

}  // namespace detail

/// Parses and validates a JSON experiment configuration. Omitted fields
/// take the documented defaults.
inline ExperimentConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") +
                                e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: not a JSON object");

  ExperimentConfig cfg;
  if (!j.contains("experiment"))
    throw std::invalid_argument("config: missing field 'experiment'");
  cfg.experiment = j.at("experiment").get<std::string>();
  if (!detail::known_experiments().count(cfg.experiment))
    throw std::invalid_argument("config: unknown experiment '" +
                                cfg.experiment + "'");

  if (j.contains("params")) {
    const auto& p = j.at("params");
    if (!p.is_object())
      throw std::invalid_argument("config: 'params' must be an object");
    for (const auto& [key, value] : p.items()) {
      double v = value.get<double>();
      if (key == "R_0") cfg.params.r_0 = v;
      else if (key == "R_c") cfg.params.r_c = v;
      else if (key == "R_p") cfg.params.r_p = v;
      else if (key == "gamma") cfg.params.gamma = v;
      else if (key == "sigma_db") cfg.params.sigma_db = v;
      else if (key == "N_p") cfg.params.n_p = v;
      else if (key == "N_c") cfg.params.n_c = v;
      else if (key == "P_p") cfg.params.p_p = v;
      else if (key == "P_c") cfg.params.p_c = v;
      else if (key == "A_p") cfg.params.a_p = v;
      else if (key == "A_c") cfg.params.a_c = v;
      else
        throw std::invalid_argument("config: unknown parameter '" + key + "'");
    }
    cfg.params.validate();
  }

  if (j.contains("sweep")) cfg.sweep = detail::parse_sweep(j.at("sweep"), "sweep");
  if (j.contains("sweep2"))
    cfg.sweep2 = detail::parse_sweep(j.at("sweep2"), "sweep2");

  if (j.contains("samples")) {
    const auto& s = j.at("samples");
    if (s.contains("n_drops")) cfg.n_drops = s.at("n_drops").get<std::size_t>();
    if (s.contains("n_fading"))
      cfg.n_fading = s.at("n_fading").get<std::size_t>();
    if (cfg.n_drops < 1)
      throw std::invalid_argument("config: samples.n_drops must be >= 1");
    if (cfg.n_fading < 1)
      throw std::invalid_argument("config: samples.n_fading must be >= 1");
  }

  if (j.contains("seed")) cfg.master_seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("output")) cfg.output_dir = j.at("output").get<std::string>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (cfg.threads < 0)
    throw std::invalid_argument("config: threads must be >= 0");
  return cfg;
}

inline std::string serialize_config(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["experiment"] = cfg.experiment;
  j["params"] = {{"R_0", cfg.params.r_0},   {"R_c", cfg.params.r_c},
                 {"R_p", cfg.params.r_p},   {"gamma", cfg.params.gamma},
                 {"sigma_db", cfg.params.sigma_db},
                 {"N_p", cfg.params.n_p},   {"N_c", cfg.params.n_c},
                 {"P_p", cfg.params.p_p},   {"P_c", cfg.params.p_c},
                 {"A_p", cfg.params.a_p},   {"A_c", cfg.params.a_c}};
  if (cfg.sweep)
    j["sweep"] = {{"param", cfg.sweep->param}, {"values", cfg.sweep->values}};
  if (cfg.sweep2)
    j["sweep2"] = {{"param", cfg.sweep2->param},
                   {"values", cfg.sweep2->values}};
  j["samples"] = {{"n_drops", cfg.n_drops}, {"n_fading", cfg.n_fading}};
  j["seed"] = cfg.master_seed;
  j["output"] = cfg.output_dir;
  j["threads"] = cfg.threads;
  return j.dump(2);
}

/// Per-experiment default sweeps, mirroring the default parameter study.
inline ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  if (!detail::known_experiments().count(experiment))
    throw std::invalid_argument("config: unknown experiment '" + experiment +
                                "'");
  if (experiment == "low_interference") {
    cfg.sweep = SweepAxis{"sigma_db", {6, 8, 10, 12}};
    cfg.sweep2 = SweepAxis{"gamma", {3, 3.5, 4}};
  } else if (experiment == "mean_alpha") {
    cfg.sweep = SweepAxis{"rc_over_rp", {0.05, 0.1, 0.2, 0.3}};
  } else if (experiment == "rate_loss") {
    cfg.sweep = SweepAxis{"gamma", {3, 3.5, 4}};
    cfg.sweep2 = SweepAxis{"sigma_db", {6, 8, 10}};
  } else if (experiment == "power_sweep") {
    cfg.sweep = SweepAxis{"beta_pw", {0.5, 1, 2, 4, 8}};
  } else if (experiment == "alpha_cdf_drops") {
    cfg.n_drops = 5;
  }
  return cfg;
}

}  // namespace crcap
