#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "crcap/geometry.hpp"
#include "crcap/params.hpp"
#include "crcap/random.hpp"

namespace crcap {

/// Unit-mean Rayleigh power draws |p~|^2, |g~|^2, |f~|^2, |c~|^2.
/// g_sq is carried for completeness of the four-gain model; none of the
/// implemented formulas consume it.
struct FadingSample {
  double p_sq, g_sq, f_sq, c_sq;
};

inline FadingSample sample_fading(RandomStream& stream) {
  FadingSample f;
  f.p_sq = stream.exponential();
  f.g_sq = stream.exponential();
  f.f_sq = stream.exponential();
  f.c_sq = stream.exponential();
  return f;
}

/// Interference coefficient a; the low-interference regime is a < 1.
/// The A_c factor cancels between the CP and CC links, so a is independent
/// of A_c and of P_c.
inline double interference_coefficient(const Drop& d, const FadingSample& f,
                                       const SystemParams& p) {
  return std::sqrt(p.n_c * d.gain_cp * f.f_sq /
                   (p.n_p * d.gain_cc * f.c_sq));
}

/// Exact power-loss fraction alpha in (0,1).
/// Written with sqrt(1+u)-1 = u/(sqrt(1+u)+1) so small t_sq never cancels.
inline double power_loss_exact(double s_sq, double t_sq) {
  if (!(s_sq > 0.0) || !(t_sq > 0.0))
    throw std::domain_error("power_loss_exact: inputs must be > 0");
  const double u = t_sq * (1.0 + s_sq);
  const double q = u / ((1.0 + s_sq) * (std::sqrt(1.0 + u) + 1.0));
  return (s_sq / t_sq) * q * q;
}

/// Small-signal approximation alpha_approx = |s|^2 |t|^2 / 4 (unbounded).
inline double power_loss_approx(double s_sq, double t_sq) {
  if (!(s_sq > 0.0) || !(t_sq > 0.0))
    throw std::domain_error("power_loss_approx: inputs must be > 0");
  return 0.25 * s_sq * t_sq;
}

/// CR rate in bits per channel use for a given power-loss fraction.
inline double cr_rate(double gamma_cc, double c_sq, double alpha,
                      const SystemParams& p) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::domain_error("cr_rate: alpha must lie in [0,1)");
  return std::log2(1.0 + gamma_cc * c_sq * (1.0 - alpha) * p.p_c / p.n_c);
}

/// Per-realization derived quantities. alpha/alpha_approx/rate_cr are only
/// meaningful when low_interference is set.
struct ChannelSample {
  double a = 0.0;
  double s_sq = 0.0;
  double t_sq = 0.0;
  double alpha = 0.0;
  double alpha_approx = 0.0;
  double rate_cr = 0.0;
  bool low_interference = false;
};

inline ChannelSample sample_channel(const Drop& d, const FadingSample& f,
                                    const SystemParams& p) {
  ChannelSample c;
  c.a = interference_coefficient(d, f, p);
  c.s_sq = p.p_p * d.gain_pp * f.p_sq / p.n_p;
  c.t_sq = p.p_c * d.gain_cp * f.f_sq / p.n_p;
  c.low_interference = c.a < 1.0;
  if (c.low_interference) {
    c.alpha = power_loss_exact(c.s_sq, c.t_sq);
    c.alpha_approx = power_loss_approx(c.s_sq, c.t_sq);
    c.rate_cr = cr_rate(d.gain_cc, f.c_sq, c.alpha, p);
  }
  return c;
}

/// Link-budget SNR of the PP link for a transmitter at distance r: transmit
/// power and path loss only, no shadowing or fast fading.
inline double pp_link_budget_snr(double r, const SystemParams& p) {
  return p.p_p * p.a_p * std::pow(r, -p.gamma) / p.n_p;
}

/// Calibrates A_p so the PP link-budget SNR exceeds 5 dB for 95% of
/// transmitter positions, then A_c = A_p (R_p/R_c)^-gamma. q_hat is the
/// empirical 5% quantile of r_pp^-gamma over n independent position draws.
inline std::pair<double, double> calibrate(SystemParams& p, std::size_t n,
                                           RandomStream& stream) {
  if (n < 100000)
    throw std::domain_error("calibrate: need at least 1e5 samples");
  std::vector<double> composite(n);
  for (std::size_t i = 0; i < n; ++i) {
    double r2 = p.r_0 * p.r_0 +
                stream.uniform01() * (p.r_p * p.r_p - p.r_0 * p.r_0);
    composite[i] = std::pow(std::sqrt(r2), -p.gamma);
  }
  std::size_t k = static_cast<std::size_t>(0.05 * static_cast<double>(n));
  std::nth_element(composite.begin(), composite.begin() + k, composite.end());
  const double q_hat = composite[k];
  p.a_p = std::pow(10.0, 0.5) * p.n_p / (p.p_p * q_hat);
  p.a_c = p.a_p * std::pow(p.r_p / p.r_c, -p.gamma);
  return {p.a_p, p.a_c};
}

}  // namespace crcap
