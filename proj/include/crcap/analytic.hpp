#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "crcap/geometry.hpp"
#include "crcap/params.hpp"
#include "crcap/quadrature.hpp"
#include "crcap/special.hpp"

namespace crcap {

/// Inputs of the low-interference probability: K = N_p/N_c and the
/// distance-ratio CDF. X = X_cc - X_cp has variance 2 sigma_sf^2.
struct LowInterferenceInputs {
  double k;         // N_p / N_c
  double gamma;
  double sigma_sf;
  RatioCdfCoeffs coeffs;

  static LowInterferenceInputs from_params(const SystemParams& p) {
    p.validate();
    return {p.n_p / p.n_c, p.gamma, p.sigma_sf(), ratio_cdf_coeffs(p)};
  }
};

/// I(m, theta, kappa) = int_theta^kappa w^{2m} f_W(w) dw computed as a
/// finite-range integral over v in (0,1) via y = v/(1-v). kappa may be
/// +infinity; theta may be 0.
inline double weight_integral(int m, double theta, double kappa,
                              const LowInterferenceInputs& in) {
  if (m < -1 || m > 1)
    throw std::invalid_argument("weight_integral: m must be in {-1,0,1}");
  if (theta == kappa) return 0.0;
  if (!(theta < kappa))
    throw std::domain_error("weight_integral: requires theta < kappa");

  const double g = in.gamma;
  const double sf = in.sigma_sf;
  const double ln_k = std::log(in.k);
  const double shift = 4.0 * m * sf * sf / g;
  const double denom = 1.4142135623730951 * sf;
  const double log_pref_const = 4.0 * m * m * sf * sf / (g * g);
  const bool theta_zero = theta <= 0.0;
  const bool kappa_inf = std::isinf(kappa);
  const double ln_theta = theta_zero ? 0.0 : std::log(theta);
  const double ln_kappa = kappa_inf ? 0.0 : std::log(kappa);

  auto integrand = [&](double v) {
    const double lr = std::log(v) - std::log1p(-v);  // ln(v/(1-v))
    const double lo = theta_zero
                          ? -std::numeric_limits<double>::infinity()
                          : (g * ln_theta - ln_k + lr - shift) / denom;
    const double hi = kappa_inf
                          ? std::numeric_limits<double>::infinity()
                          : (g * ln_kappa - ln_k + lr - shift) / denom;
    const double bracket = std_normal_cdf_interval(lo, hi);
    if (bracket <= 0.0) return 0.0;
    const double log_pref =
        (2.0 * m / g) * (ln_k - lr) + log_pref_const;
    return std::exp(log_pref) * bracket;
  };
  return integrate(integrand, 0.0, 1.0, 1e-9, 1e-9);
}

/// P(a < 1): the closed-form mixture of weight integrals over the
/// distance-ratio CDF branches.
inline double prob_low_interference(const SystemParams& p) {
  const auto in = LowInterferenceInputs::from_params(p);
  const double theta[5] = {in.coeffs.theta[0], in.coeffs.theta[1],
                           in.coeffs.theta[2], in.coeffs.theta[3],
                           std::numeric_limits<double>::infinity()};
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double c = in.coeffs.c[i][j];
      if (c == 0.0) continue;
      sum += c * weight_integral(j - 1, theta[i], theta[i + 1], in);
    }
  }
  if (sum < 0.0 && sum > -1e-9) sum = 0.0;
  if (sum > 1.0 && sum < 1.0 + 1e-9) sum = 1.0;
  return sum;
}

/// Mean SNRs of one fixed drop: mu_s = E|s|^2, mu_t = E|t|^2.
struct AlphaApproxLaw {
  double mu_s;
  double mu_t;

  static AlphaApproxLaw from_drop(const Drop& d, const SystemParams& p) {
    return {p.p_p * d.gain_pp / p.n_p, p.p_c * d.gain_cp / p.n_p};
  }
};

/// P(alpha_approx < x) = 1 - z K1(z), z = sqrt(16 x / (mu_s mu_t)).
inline double alpha_approx_cdf(double x, const AlphaApproxLaw& law) {
  if (!(x >= 0.0)) throw std::domain_error("alpha_approx_cdf: x must be >= 0");
  if (x == 0.0) return 0.0;
  const double z = std::sqrt(16.0 * x / (law.mu_s * law.mu_t));
  return 1.0 - z * bessel_k1(z);
}

/// CDF of alpha-hat = alpha_approx | alpha_approx < 1.
inline double alpha_hat_cdf(double x, const AlphaApproxLaw& law) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("alpha_hat_cdf: x must lie in [0,1]");
  return alpha_approx_cdf(x, law) / alpha_approx_cdf(1.0, law);
}

/// Density of alpha-hat on (0,1); diverges logarithmically at 0.
inline double alpha_hat_pdf(double x, const AlphaApproxLaw& law) {
  if (!(x > 0.0 && x < 1.0))
    throw std::domain_error("alpha_hat_pdf: x must lie in (0,1)");
  const double m = law.mu_s * law.mu_t;
  return 8.0 / m * bessel_k0(std::sqrt(16.0 * x / m)) /
         alpha_approx_cdf(1.0, law);
}

/// CDF of the CR rate for one fixed drop, with |c~|^2 treated as a unit
/// exponential independent of alpha-hat.
inline double rate_cdf_fixed_gains(double r, const AlphaApproxLaw& law,
                                   double gamma_cc, const SystemParams& p) {
  if (!(r >= 0.0))
    throw std::domain_error("rate_cdf_fixed_gains: r must be >= 0");
  if (r == 0.0) return 0.0;
  const double tau = (std::exp2(r) - 1.0) * p.n_c / (p.p_c * gamma_cc);
  // Substitute z = sqrt(16 u / (mu_s mu_t)) so the density factor becomes
  // z K0(z), an O(1)-scale integrand for any mu values; the u-space density
  // is a spike near 0 when mu_s mu_t is small and quadrature would miss it.
  const double m = law.mu_s * law.mu_t;
  const double z1 = std::sqrt(16.0 / m);
  const double norm = alpha_approx_cdf(1.0, law);
  auto integrand = [&](double z) {
    const double u = m * z * z / 16.0;
    if (u >= 1.0) return 0.0;
    return -std::expm1(-tau / (1.0 - u)) * z * bessel_k0(z) / norm;
  };
  // beyond z ~ 700, z K0(z) underflows; the truncated tail mass is ~1e-300
  return integrate(integrand, 0.0, std::min(z1, 700.0), 1e-12, 1e-9);
}

}  // namespace crcap
