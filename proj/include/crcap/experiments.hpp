#pragma once

#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "crcap/analytic.hpp"
#include "crcap/channel.hpp"
#include "crcap/config.hpp"
#include "crcap/empirical.hpp"
#include "crcap/geometry.hpp"
#include "crcap/table.hpp"

namespace crcap {

class InsufficientSamplesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Sampling is partitioned into fixed-size chunks, one stream per chunk, and
// chunk results are merged in index order. The thread count therefore never
// affects the output.
inline constexpr std::size_t kChunkSize = 1 << 16;
inline constexpr std::size_t kCalibrationSamples = 1000000;

enum StreamPhase : std::uint64_t {
  kCalibrationPhase = 1,
  kDropPhase = 2,
  kFadingPhase = 3,
  kRatioPhase = 4,
  kVerifyPhase = 5,
};

inline std::uint64_t stream_id(std::uint64_t phase, std::uint64_t point,
                               std::uint64_t chunk) {
  return (phase << 56) | (point << 32) | chunk;
}

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

template <class Result, class Fn>
std::vector<Result> map_chunks(std::size_t n_chunks, int threads, Fn&& fn) {
  std::vector<Result> out(n_chunks);
  threads = resolve_threads(threads);
  if (threads <= 1 || n_chunks <= 1) {
    for (std::size_t i = 0; i < n_chunks; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n_chunks) return;
      out[i] = fn(i);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

inline std::size_t chunk_count(std::size_t n) {
  return (n + kChunkSize - 1) / kChunkSize;
}

inline std::size_t chunk_size(std::size_t n, std::size_t chunk) {
  std::size_t lo = chunk * kChunkSize;
  return std::min(kChunkSize, n - lo);
}

// Runs `body(drop, fading, channel)` over n reproducible samples at `point`.
// Acc must be default-constructible and define merge(const Acc&).
template <class Acc, class Body>
Acc sample_channels(const SystemParams& params, std::size_t n,
                    std::uint64_t seed, std::uint64_t point, int threads,
                    Body body) {
  auto chunks = map_chunks<Acc>(
      chunk_count(n), threads, [&](std::size_t c) {
        RandomStream drop_stream(seed, stream_id(kDropPhase, point, c));
        RandomStream fading_stream(seed, stream_id(kFadingPhase, point, c));
        Acc acc;
        std::size_t m = chunk_size(n, c);
        for (std::size_t i = 0; i < m; ++i) {
          Drop d = make_drop(params, drop_stream);
          FadingSample f = sample_fading(fading_stream);
          ChannelSample s = sample_channel(d, f, params);
          body(acc, d, f, s);
        }
        return acc;
      });
  Acc total;
  for (const auto& c : chunks) total.merge(c);
  return total;
}

struct MomentAcc {
  std::size_t n = 0;
  double sum = 0.0;
  double sumsq = 0.0;
  void add(double v) {
    ++n;
    sum += v;
    sumsq += v * v;
  }
  void merge(const MomentAcc& o) {
    n += o.n;
    sum += o.sum;
    sumsq += o.sumsq;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double stderr_mean() const {
    double m = mean();
    double var = sumsq / static_cast<double>(n) - m * m;
    return std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  }
};

inline double bernoulli_stderr(double p_hat, std::size_t n) {
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

inline std::vector<double> axis_or(const std::optional<SweepAxis>& axis,
                                   const std::string& name, double fallback) {
  if (!axis) return {fallback};
  if (axis->param != name)
    throw std::invalid_argument("experiment: unsupported sweep parameter '" +
                                axis->param + "', expected '" + name + "'");
  return axis->values;
}

inline void calibrate_for(SystemParams& params, std::uint64_t seed,
                          std::uint64_t point) {
  RandomStream s(seed, stream_id(kCalibrationPhase, point, 0));
  calibrate(params, kCalibrationSamples, s);
}

}  // namespace detail

/// Analytic P(a<1) against Monte Carlo, both under the independent
/// distance-ratio model (p_mc) and under the exact simulated geometry
/// (p_mc_exact).
inline ResultTable estimate_low_interference(const ExperimentConfig& cfg) {
  cfg.params.validate();
  auto sigmas = detail::axis_or(cfg.sweep, "sigma_db", cfg.params.sigma_db);
  auto gammas = detail::axis_or(cfg.sweep2, "gamma", cfg.params.gamma);

  ResultTable table;
  table.columns = {"sigma_db",  "gamma",      "p_analytic", "p_mc",
                   "stderr",    "p_mc_exact", "stderr_exact"};
  std::uint64_t point = 0;
  for (double g : gammas) {
    for (double sd : sigmas) {
      SystemParams p = cfg.params;
      p.sigma_db = sd;
      p.gamma = g;
      p.validate();
      const double analytic = prob_low_interference(p);

      // independent-ratio model: Z = r_cc/r_cp with independent
      // area-uniform distances, X ~ N(0, 2 sigma_sf^2), Y = ratio of exps
      const double k = p.n_p / p.n_c;
      const double x_std = std::sqrt(2.0) * p.sigma_sf();
      auto ind_counts = detail::map_chunks<std::size_t>(
          detail::chunk_count(cfg.n_drops), cfg.threads, [&](std::size_t c) {
            RandomStream s(cfg.master_seed,
                           detail::stream_id(detail::kRatioPhase, point, c));
            std::size_t hits = 0;
            std::size_t m = detail::chunk_size(cfg.n_drops, c);
            for (std::size_t i = 0; i < m; ++i) {
              double r_cc = std::sqrt(p.r_0 * p.r_0 +
                                      s.uniform01() *
                                          (p.r_c * p.r_c - p.r_0 * p.r_0));
              double r_cp = std::sqrt(p.r_0 * p.r_0 +
                                      s.uniform01() *
                                          (p.r_p * p.r_p - p.r_0 * p.r_0));
              double x = x_std * s.normal();
              double y = s.exponential() / s.exponential();
              if (y < k * std::exp(x) * std::pow(r_cc / r_cp, -p.gamma))
                ++hits;
            }
            return hits;
          });
      std::size_t ind_hits = 0;
      for (auto h : ind_counts) ind_hits += h;

      struct Acc {
        std::size_t low = 0;
        void merge(const Acc& o) { low += o.low; }
      };
      Acc exact = detail::sample_channels<Acc>(
          p, cfg.n_drops, cfg.master_seed, point, cfg.threads,
          [](Acc& a, const Drop&, const FadingSample&, const ChannelSample& s) {
            if (s.low_interference) ++a.low;
          });

      const double n = static_cast<double>(cfg.n_drops);
      const double p_ind = static_cast<double>(ind_hits) / n;
      const double p_exact = static_cast<double>(exact.low) / n;
      table.add_row({sd, g, analytic, p_ind,
                     detail::bernoulli_stderr(p_ind, cfg.n_drops), p_exact,
                     detail::bernoulli_stderr(p_exact, cfg.n_drops)});
      ++point;
    }
  }
  table.set_metadata("n_samples", static_cast<double>(cfg.n_drops));
  return table;
}

/// Density-normalized histograms of log10(alpha) and
/// log10(alpha_hat), both conditioned on a < 1.
inline ResultTable alpha_pdf(const ExperimentConfig& cfg) {
  SystemParams p = cfg.params;
  p.validate();
  detail::calibrate_for(p, cfg.master_seed, 0);

  struct Acc {
    std::vector<double> log_alpha;
    std::vector<double> log_alpha_hat;
    void merge(const Acc& o) {
      log_alpha.insert(log_alpha.end(), o.log_alpha.begin(),
                       o.log_alpha.end());
      log_alpha_hat.insert(log_alpha_hat.end(), o.log_alpha_hat.begin(),
                           o.log_alpha_hat.end());
    }
  };
  Acc acc = detail::sample_channels<Acc>(
      p, cfg.n_drops, cfg.master_seed, 0, cfg.threads,
      [](Acc& a, const Drop&, const FadingSample&, const ChannelSample& s) {
        if (!s.low_interference) return;
        assert(s.a < 1.0);
        a.log_alpha.push_back(std::log10(s.alpha));
        if (s.alpha_approx < 1.0)
          a.log_alpha_hat.push_back(std::log10(s.alpha_approx));
      });
  if (acc.log_alpha.size() < 100 || acc.log_alpha_hat.size() < 100)
    throw InsufficientSamplesError("alpha_pdf: fewer than 100 accepted samples");

  EmpiricalCdf cdf_alpha(acc.log_alpha);
  EmpiricalCdf cdf_hat(acc.log_alpha_hat);
  const double lo = std::min(cdf_alpha.values().front(), cdf_hat.values().front());
  const double hi = std::max(cdf_alpha.values().back(), cdf_hat.values().back());
  constexpr int kBins = 60;
  const double width = (hi - lo) / kBins;

  std::vector<double> h_alpha(kBins, 0.0), h_hat(kBins, 0.0);
  auto fill = [&](const std::vector<double>& v, std::vector<double>& h) {
    for (double x : v) {
      int b = std::min(kBins - 1,
                       static_cast<int>(std::floor((x - lo) / width)));
      h[std::max(b, 0)] += 1.0;
    }
    for (double& c : h) c /= static_cast<double>(v.size()) * width;
  };
  fill(cdf_alpha.values(), h_alpha);
  fill(cdf_hat.values(), h_hat);

  ResultTable table;
  table.columns = {"bin_lo", "bin_hi", "pdf_log10_alpha", "pdf_log10_alpha_hat"};
  for (int b = 0; b < kBins; ++b)
    table.add_row({lo + b * width, lo + (b + 1) * width, h_alpha[b], h_hat[b]});
  table.set_metadata("n_alpha", static_cast<double>(cdf_alpha.size()));
  table.set_metadata("n_alpha_hat", static_cast<double>(cdf_hat.size()));
  table.set_metadata("cdf_sup_distance", ks_distance(cdf_alpha, cdf_hat));
  table.set_metadata("a_p", p.a_p);
  return table;
}

/// E[alpha | a<1] as a function of R_c/R_p, with A_c recomputed
/// from the calibration rule at every sweep point.
inline ResultTable mean_alpha(const ExperimentConfig& cfg) {
  SystemParams base = cfg.params;
  base.validate();
  detail::calibrate_for(base, cfg.master_seed, 0);
  auto ratios = detail::axis_or(cfg.sweep, "rc_over_rp", base.r_c / base.r_p);

  ResultTable table;
  table.columns = {"rc_over_rp", "mean_alpha", "stderr", "n_accepted"};
  std::uint64_t point = 0;
  for (double ratio : ratios) {
    SystemParams p = base;
    p.r_c = ratio * p.r_p;
    p.a_c = p.a_p * std::pow(p.r_p / p.r_c, -p.gamma);
    p.validate();
    struct Acc {
      detail::MomentAcc alpha;
      void merge(const Acc& o) { alpha.merge(o.alpha); }
    };
    Acc acc = detail::sample_channels<Acc>(
        p, cfg.n_drops, cfg.master_seed, point, cfg.threads,
        [](Acc& a, const Drop&, const FadingSample&, const ChannelSample& s) {
          if (!s.low_interference) return;
          assert(s.a < 1.0);
          a.alpha.add(s.alpha);
        });
    if (acc.alpha.n < 100)
      throw InsufficientSamplesError(
          "mean_alpha: fewer than 100 accepted samples");
    table.add_row({ratio, acc.alpha.mean(), acc.alpha.stderr_mean(),
                   static_cast<double>(acc.alpha.n)});
    ++point;
  }
  return table;
}

/// Per fixed drop, empirical CDFs of the exact alpha (given a<1)
/// and of alpha_approx rejected to <1, against the analytic alpha-hat CDF,
/// on a log10 grid.
inline ResultTable alpha_cdf_per_drop(const ExperimentConfig& cfg) {
  SystemParams p = cfg.params;
  p.validate();
  detail::calibrate_for(p, cfg.master_seed, 0);

  ResultTable table;
  table.columns = {"drop", "log10_alpha", "cdf_analytic", "cdf_emp_alpha",
                   "cdf_emp_alpha_hat"};
  for (std::size_t d = 0; d < cfg.n_drops; ++d) {
    RandomStream drop_stream(cfg.master_seed,
                             detail::stream_id(detail::kDropPhase, d, 0));
    Drop drop = make_drop(p, drop_stream);
    AlphaApproxLaw law = AlphaApproxLaw::from_drop(drop, p);

    struct Acc {
      std::vector<double> alpha;      // exact, conditioned a < 1
      std::vector<double> alpha_hat;  // alpha_approx rejected to < 1
      void merge(const Acc& o) {
        alpha.insert(alpha.end(), o.alpha.begin(), o.alpha.end());
        alpha_hat.insert(alpha_hat.end(), o.alpha_hat.begin(),
                         o.alpha_hat.end());
      }
    };
    auto chunks = detail::map_chunks<Acc>(
        detail::chunk_count(cfg.n_fading), cfg.threads, [&](std::size_t c) {
          RandomStream fading_stream(
              cfg.master_seed, detail::stream_id(detail::kFadingPhase, d, c));
          Acc acc;
          std::size_t m = detail::chunk_size(cfg.n_fading, c);
          for (std::size_t i = 0; i < m; ++i) {
            FadingSample f = sample_fading(fading_stream);
            ChannelSample s = sample_channel(drop, f, p);
            if (s.low_interference) acc.alpha.push_back(s.alpha);
            double approx = power_loss_approx(s.s_sq, s.t_sq);
            if (approx < 1.0) acc.alpha_hat.push_back(approx);
          }
          return acc;
        });
    Acc acc;
    for (const auto& c : chunks) acc.merge(c);
    if (acc.alpha.size() < 100 || acc.alpha_hat.size() < 100)
      throw InsufficientSamplesError(
          "alpha_cdf_per_drop: fewer than 100 accepted samples for drop " +
          std::to_string(d));

    EmpiricalCdf emp_alpha(acc.alpha);
    EmpiricalCdf emp_hat(acc.alpha_hat);
    auto analytic = [&](double a) { return alpha_hat_cdf(a, law); };
    table.set_metadata("ks_alpha_hat_drop" + std::to_string(d),
                       ks_distance(emp_hat, analytic));
    table.set_metadata("ks_alpha_drop" + std::to_string(d),
                       ks_distance(emp_alpha, analytic));

    const double lo = std::log10(
        std::min(emp_alpha.values().front(), emp_hat.values().front()));
    const double hi = std::log10(
        std::max(emp_alpha.values().back(), emp_hat.values().back()));
    constexpr int kGrid = 200;
    for (int i = 0; i < kGrid; ++i) {
      double lx = lo + (hi - lo) * i / (kGrid - 1);
      double x = std::min(std::pow(10.0, lx), 1.0);
      table.add_row({static_cast<double>(d), lx, alpha_hat_cdf(x, law),
                     emp_alpha(x), emp_hat(x)});
    }
  }
  return table;
}

/// Empirical CDFs of the CR rate computed with the exact alpha and
/// with the alpha-hat substitute on common random numbers, conditioned on
/// a < 1 and alpha_approx < 1.
inline ResultTable rate_distribution(const ExperimentConfig& cfg) {
  SystemParams p = cfg.params;
  p.validate();
  detail::calibrate_for(p, cfg.master_seed, 0);

  struct Acc {
    std::vector<double> rate_exact;
    std::vector<double> rate_hat;
    detail::MomentAcc rate_all;  // exact-alpha rate over all a<1 samples
    void merge(const Acc& o) {
      rate_exact.insert(rate_exact.end(), o.rate_exact.begin(),
                        o.rate_exact.end());
      rate_hat.insert(rate_hat.end(), o.rate_hat.begin(), o.rate_hat.end());
      rate_all.merge(o.rate_all);
    }
  };
  Acc acc = detail::sample_channels<Acc>(
      p, cfg.n_drops, cfg.master_seed, 0, cfg.threads,
      [&p](Acc& a, const Drop& d, const FadingSample& f,
           const ChannelSample& s) {
        if (!s.low_interference) return;
        assert(s.a < 1.0);
        a.rate_all.add(s.rate_cr);
        if (s.alpha_approx < 1.0) {
          a.rate_exact.push_back(s.rate_cr);
          a.rate_hat.push_back(cr_rate(d.gain_cc, f.c_sq, s.alpha_approx, p));
        }
      });
  if (acc.rate_exact.size() < 100)
    throw InsufficientSamplesError(
        "rate_distribution: fewer than 100 accepted samples");

  EmpiricalCdf cdf_exact(acc.rate_exact);
  EmpiricalCdf cdf_hat(acc.rate_hat);
  ResultTable table;
  table.columns = {"rate", "cdf_exact", "cdf_approx"};
  const double lo = std::min(cdf_exact.values().front(), cdf_hat.values().front());
  const double hi = std::max(cdf_exact.values().back(), cdf_hat.values().back());
  constexpr int kGrid = 512;
  for (int i = 0; i < kGrid; ++i) {
    double r = lo + (hi - lo) * i / (kGrid - 1);
    table.add_row({r, cdf_exact(r), cdf_hat(r)});
  }
  table.set_metadata("sup_distance", ks_distance(cdf_exact, cdf_hat));
  table.set_metadata("mean_rate_exact", acc.rate_all.mean());
  table.set_metadata("n_accepted", static_cast<double>(acc.rate_all.n));
  table.set_metadata("n_pairs", static_cast<double>(cdf_exact.size()));
  return table;
}

/// Mean percentage CR rate loss versus gamma and sigma, with the
/// same fading draw in the lossless and lossy terms.
inline ResultTable mean_rate_loss(const ExperimentConfig& cfg) {
  cfg.params.validate();
  auto gammas = detail::axis_or(cfg.sweep, "gamma", cfg.params.gamma);
  auto sigmas = detail::axis_or(cfg.sweep2, "sigma_db", cfg.params.sigma_db);

  ResultTable table;
  table.columns = {"gamma", "sigma_db", "mean_loss_pct", "stderr",
                   "n_accepted"};
  std::uint64_t point = 0;
  for (double g : gammas) {
    for (double sd : sigmas) {
      SystemParams p = cfg.params;
      p.gamma = g;
      p.sigma_db = sd;
      p.validate();
      detail::calibrate_for(p, cfg.master_seed, point);
      struct Acc {
        detail::MomentAcc loss;
        void merge(const Acc& o) { loss.merge(o.loss); }
      };
      Acc acc = detail::sample_channels<Acc>(
          p, cfg.n_drops, cfg.master_seed, point, cfg.threads,
          [&p](Acc& a, const Drop& d, const FadingSample& f,
               const ChannelSample& s) {
            if (!s.low_interference) return;
            assert(s.a < 1.0);
            double r0 = cr_rate(d.gain_cc, f.c_sq, 0.0, p);
            a.loss.add((r0 - s.rate_cr) / r0 * 100.0);
          });
      if (acc.loss.n < 100)
        throw InsufficientSamplesError(
            "mean_rate_loss: fewer than 100 accepted samples");
      table.add_row({g, sd, acc.loss.mean(), acc.loss.stderr_mean(),
                     static_cast<double>(acc.loss.n)});
      ++point;
    }
  }
  return table;
}

/// Mean CR rate versus the power inflation factor beta_pw, on
/// common random numbers; the conditioning set a<1 is identical across the
/// sweep since a contains no P_c term.
inline ResultTable power_sweep(const ExperimentConfig& cfg) {
  SystemParams p = cfg.params;
  p.validate();
  detail::calibrate_for(p, cfg.master_seed, 0);
  auto betas = detail::axis_or(cfg.sweep, "beta_pw", 1.0);
  for (double b : betas)
    if (!(b > 0.0))
      throw std::invalid_argument("power_sweep: beta_pw values must be > 0");

  struct Acc {
    std::vector<detail::MomentAcc> rate;
    std::size_t n_total = 0;
    void merge(const Acc& o) {
      if (rate.empty()) rate.resize(o.rate.size());
      for (std::size_t i = 0; i < o.rate.size(); ++i) rate[i].merge(o.rate[i]);
      n_total += o.n_total;
    }
  };
  const std::size_t nb = betas.size();
  Acc acc = detail::sample_channels<Acc>(
      p, cfg.n_drops, cfg.master_seed, 0, cfg.threads,
      [&](Acc& a, const Drop& d, const FadingSample& f,
          const ChannelSample& s) {
        if (a.rate.empty()) a.rate.resize(nb);
        ++a.n_total;
        if (!s.low_interference) return;
        assert(s.a < 1.0);
        for (std::size_t i = 0; i < nb; ++i) {
          double beta = betas[i];
          double alpha = power_loss_exact(s.s_sq, beta * s.t_sq);
          double rate = std::log2(1.0 + d.gain_cc * f.c_sq * (1.0 - alpha) *
                                            beta * p.p_c / p.n_c);
          a.rate[i].add(rate);
        }
      });
  if (acc.rate.empty() || acc.rate[0].n < 100)
    throw InsufficientSamplesError(
        "power_sweep: fewer than 100 accepted samples");

  ResultTable table;
  table.columns = {"beta_pw", "mean_rate", "stderr", "accept_fraction"};
  for (std::size_t i = 0; i < nb; ++i) {
    assert(acc.rate[i].n == acc.rate[0].n);
    table.add_row({betas[i], acc.rate[i].mean(), acc.rate[i].stderr_mean(),
                   static_cast<double>(acc.rate[i].n) /
                       static_cast<double>(acc.n_total)});
  }
  return table;
}

/// Calibration as a standalone experiment, with a verification pass on a
/// fresh stream.
inline ResultTable calibrate_params(const ExperimentConfig& cfg) {
  SystemParams p = cfg.params;
  p.validate();
  detail::calibrate_for(p, cfg.master_seed, 0);

  RandomStream verify(cfg.master_seed,
                      detail::stream_id(detail::kVerifyPhase, 0, 0));
  const double threshold = std::pow(10.0, 0.5);
  std::size_t hits = 0;
  const std::size_t n = cfg.n_drops;
  for (std::size_t i = 0; i < n; ++i) {
    double r = std::sqrt(p.r_0 * p.r_0 +
                         verify.uniform01() * (p.r_p * p.r_p - p.r_0 * p.r_0));
    if (pp_link_budget_snr(r, p) >= threshold) ++hits;
  }
  ResultTable table;
  table.columns = {"A_p", "A_c", "snr_ge_5db_fraction", "n_verify"};
  table.add_row({p.a_p, p.a_c, static_cast<double>(hits) / n,
                 static_cast<double>(n)});
  return table;
}

inline ResultTable run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "low_interference")
    return estimate_low_interference(cfg);
  if (cfg.experiment == "alpha_pdf") return alpha_pdf(cfg);
  if (cfg.experiment == "mean_alpha") return mean_alpha(cfg);
  if (cfg.experiment == "alpha_cdf_drops") return alpha_cdf_per_drop(cfg);
  if (cfg.experiment == "rate_cdf") return rate_distribution(cfg);
  if (cfg.experiment == "rate_loss") return mean_rate_loss(cfg);
  if (cfg.experiment == "power_sweep") return power_sweep(cfg);
  if (cfg.experiment == "calibrate") return calibrate_params(cfg);
  throw std::invalid_argument("unknown experiment '" + cfg.experiment + "'");
}

}  // namespace crcap
