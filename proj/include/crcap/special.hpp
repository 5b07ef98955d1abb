#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crcap {

/// Standard Gaussian CDF. Accepts +/-infinity; NaN is rejected.
inline double std_normal_cdf(double x) {
  if (std::isnan(x)) throw std::domain_error("std_normal_cdf: NaN input");
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  // erfc keeps full accuracy in the lower tail where 1-erf would cancel.
  return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

/// Phi(hi) - Phi(lo), evaluated through whichever tail keeps precision.
inline double std_normal_cdf_interval(double lo, double hi) {
  if (hi <= lo) return 0.0;
  if (lo > 0.0) {
    // both in the upper tail: work with complements
    return std_normal_cdf(-lo) - std_normal_cdf(-hi);
  }
  return std_normal_cdf(hi) - std_normal_cdf(lo);
}

/// Inverse of std_normal_cdf on (0,1). Acklam's rational approximation
/// polished with one Halley step, good to ~1e-15.
inline double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("inverse_normal_cdf: p must lie in (0,1)");

  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};

  constexpr double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement against the forward CDF.
  double e = std_normal_cdf(x) - p;
  double u = e * 2.5066282746310002 * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

namespace detail {

// Power series for K0/K1, accumulated in long double so the
// log*I_nu cancellation still leaves ~1e-11 relative at x = 10.
inline double bessel_k_series(int order, double x) {
  const long double t = static_cast<long double>(x) / 2.0L;
  const long double t2 = t * t;
  const long double lnt = std::log(t);
  constexpr long double euler = 0.57721566490153286060651209008240L;

  if (order == 0) {
    long double term = 1.0L;  // t^{2k} / (k!)^2
    long double i0 = 1.0L;
    long double sum = 0.0L;
    long double hk = 0.0L;
    for (int k = 1; k < 200; ++k) {
      term *= t2 / (static_cast<long double>(k) * k);
      i0 += term;
      hk += 1.0L / k;
      sum += term * hk;
      if (term < 1e-24L * i0) break;
    }
    return static_cast<double>(-(lnt + euler) * i0 + sum);
  }

  long double term = t;  // t^{2k+1} / (k! (k+1)!)
  long double i1 = t;
  long double psi_sum = -2.0L * euler + 1.0L;  // psi(1) + psi(2)
  long double sum = term * psi_sum;
  for (int k = 1; k < 200; ++k) {
    term *= t2 / (static_cast<long double>(k) * (k + 1));
    i1 += term;
    psi_sum += 1.0L / k + 1.0L / (k + 1);
    sum += term * psi_sum;
    if (term < 1e-24L * i1) break;
  }
  return static_cast<double>(lnt * i1 + 1.0L / static_cast<long double>(x) -
                             0.5L * sum);
}

// Truncated asymptotic expansion; the smallest term is below 1e-9
// relative once x >= 10, which is where it takes over from the series.
inline double bessel_k_asymptotic(int order, double x) {
  const double mu = 4.0 * order * order;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 64; ++k) {
    double next = term * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * x * k);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return std::sqrt(1.5707963267948966 / x) * std::exp(-x) * sum;
}

}  // namespace detail

/// Modified Bessel function of the second kind, K0 or K1.
inline double bessel_k(int order, double x) {
  if (order != 0 && order != 1)
    throw std::invalid_argument("bessel_k: order must be 0 or 1");
  if (std::isnan(x) || x <= 0.0)
    throw std::domain_error("bessel_k: x must be > 0");
  return x <= 10.0 ? detail::bessel_k_series(order, x)
                   : detail::bessel_k_asymptotic(order, x);
}

inline double bessel_k0(double x) { return bessel_k(0, x); }
inline double bessel_k1(double x) { return bessel_k(1, x); }

}  // namespace crcap
