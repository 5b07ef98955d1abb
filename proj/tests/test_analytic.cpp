#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "crcap/analytic.hpp"
#include "crcap/channel.hpp"
#include "crcap/empirical.hpp"
#include "crcap/quadrature.hpp"
#include "crcap/random.hpp"

using namespace crcap;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LowInterferenceInputs default_inputs() {
  SystemParams p;
  return LowInterferenceInputs::from_params(p);
}

// draws of W = K^{1/gamma} e^{X/gamma} Y^{-1/gamma}
double simulate_w_band(double theta, double kappa,
                       const LowInterferenceInputs& in, int n,
                       std::uint64_t sid) {
  RandomStream s(31, sid);
  const double x_std = std::sqrt(2.0) * in.sigma_sf;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    double x = x_std * s.normal();
    double y = s.exponential() / s.exponential();
    double w = std::pow(in.k, 1.0 / in.gamma) * std::exp(x / in.gamma) *
               std::pow(y, -1.0 / in.gamma);
    if (w > theta && w < kappa) ++hits;
  }
  return static_cast<double>(hits) / n;
}

}  // namespace

TEST_CASE("weight integral normalization and empty interval") {
  auto in = default_inputs();
  CHECK(weight_integral(0, 0.0, kInf, in) == Catch::Approx(1.0).margin(1e-8));
  CHECK(weight_integral(0, 0.3, 0.3, in) == 0.0);
  CHECK(weight_integral(1, 2.0, 2.0, in) == 0.0);
  CHECK_THROWS_AS(weight_integral(0, 2.0, 1.0, in), std::domain_error);
  CHECK_THROWS_AS(weight_integral(2, 0.0, 1.0, in), std::invalid_argument);
}

TEST_CASE("weight integral telescopes over a full partition") {
  auto in = default_inputs();
  const double t[6] = {0.0, in.coeffs.theta[0], in.coeffs.theta[1],
                       in.coeffs.theta[2], in.coeffs.theta[3], kInf};
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) sum += weight_integral(0, t[i], t[i + 1], in);
  CHECK(sum == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("weight integral matches simulated W probabilities") {
  auto in = default_inputs();
  const int n = 1000000;
  double analytic = weight_integral(0, 0.001, 0.1, in);
  double mc = simulate_w_band(0.001, 0.1, in, n, 0);
  double se = std::sqrt(mc * (1.0 - mc) / n);
  CHECK(std::abs(analytic - mc) < 3.0 * se);
}

TEST_CASE("low interference probability at the symmetry point") {
  SystemParams p;
  p.r_c = p.r_p;
  CHECK(prob_low_interference(p) == Catch::Approx(0.5).margin(1e-6));
}

TEST_CASE("low interference probability at defaults") {
  SystemParams p;
  double prob = prob_low_interference(p);
  CHECK(prob > 0.9);
  CHECK(prob < 1.0);

  // Monte Carlo over the independent-ratio model
  const int n = 1000000;
  RandomStream s(31, 10);
  auto k = ratio_cdf_coeffs(p);
  const double x_std = std::sqrt(2.0) * p.sigma_sf();
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    double r_cc = std::sqrt(p.r_0 * p.r_0 +
                            s.uniform01() * (p.r_c * p.r_c - p.r_0 * p.r_0));
    double r_cp = std::sqrt(p.r_0 * p.r_0 +
                            s.uniform01() * (p.r_p * p.r_p - p.r_0 * p.r_0));
    double x = x_std * s.normal();
    double y = s.exponential() / s.exponential();
    if (y < (p.n_p / p.n_c) * std::exp(x) *
                std::pow(r_cc / r_cp, -p.gamma))
      ++hits;
  }
  double mc = static_cast<double>(hits) / n;
  double se = std::sqrt(mc * (1.0 - mc) / n);
  CHECK(std::abs(prob - mc) < 3.0 * se);
  (void)k;
}

TEST_CASE("low interference probability trends") {
  double prev = 2.0;
  for (double sigma : {4.0, 6.0, 8.0, 10.0, 12.0}) {
    SystemParams p;
    p.sigma_db = sigma;
    double prob = prob_low_interference(p);
    CHECK(prob < prev);
    prev = prob;
  }
  prev = 0.0;
  for (double gamma : {3.0, 3.5, 4.0}) {
    SystemParams p;
    p.gamma = gamma;
    double prob = prob_low_interference(p);
    CHECK(prob > prev);
    prev = prob;
  }
}

TEST_CASE("low interference probability ignores transmit powers") {
  SystemParams p;
  double base = prob_low_interference(p);
  p.p_p = 17.0;
  p.p_c = 0.003;
  CHECK(prob_low_interference(p) == base);
}

TEST_CASE("alpha_approx cdf") {
  AlphaApproxLaw law{4.0, 4.0};  // mu_s mu_t = 16
  CHECK(alpha_approx_cdf(0.0, law) == 0.0);
  CHECK(alpha_approx_cdf(1e9, law) == Catch::Approx(1.0).margin(1e-6));
  // frozen: 1 - K1(1)
  CHECK(alpha_approx_cdf(1.0, law) ==
        Catch::Approx(0.39809276980276543).epsilon(1e-9));
  CHECK_THROWS_AS(alpha_approx_cdf(-0.1, law), std::domain_error);

  // cross-check against the integral form 1 - int_0^inf e^{-4x/(v mu) - v} dv
  for (double x : {0.05, 0.3, 1.0}) {
    double direct = alpha_approx_cdf(x, law);
    double via_integral =
        1.0 - integrate(
                  [&](double v) {
                    return std::exp(-4.0 * x / (v * law.mu_s * law.mu_t) - v);
                  },
                  0.0, kInf, 1e-12, 1e-11);
    CHECK(direct == Catch::Approx(via_integral).epsilon(1e-8));
  }

  double prev = -1.0;
  for (int i = 0; i <= 2000; ++i) {
    double v = alpha_approx_cdf(5.0 * i / 2000.0, law);
    REQUIRE(v >= prev);
    REQUIRE(v < 1.0);
    prev = v;
  }
}

TEST_CASE("alpha_hat cdf and pdf consistency") {
  AlphaApproxLaw law{2.5, 0.8};
  CHECK(alpha_hat_cdf(0.0, law) == 0.0);
  CHECK(alpha_hat_cdf(1.0, law) == Catch::Approx(1.0));
  CHECK_THROWS_AS(alpha_hat_cdf(1.5, law), std::domain_error);
  CHECK_THROWS_AS(alpha_hat_pdf(0.0, law), std::domain_error);
  CHECK_THROWS_AS(alpha_hat_pdf(1.0, law), std::domain_error);

  for (double x : {0.1, 0.4, 0.8}) {
    CHECK(alpha_hat_cdf(x, law) >= alpha_approx_cdf(x, law));
    CHECK(alpha_hat_pdf(x, law) > 0.0);
  }

  // pdf integrates to one
  double total = integrate([&](double u) { return alpha_hat_pdf(u, law); },
                           0.0, 1.0, 1e-10, 1e-10);
  CHECK(total == Catch::Approx(1.0).margin(1e-8));

  // central difference of the cdf reproduces the pdf
  const double h = 1e-4;
  for (double x : {0.1, 0.5, 0.9}) {
    double numeric = (alpha_hat_cdf(x + h, law) - alpha_hat_cdf(x - h, law)) /
                     (2.0 * h);
    CHECK(numeric == Catch::Approx(alpha_hat_pdf(x, law)).epsilon(1e-6));
  }

  // integrating the pdf reconstructs the cdf
  for (double x : {0.2, 0.6}) {
    double rebuilt = integrate([&](double u) { return alpha_hat_pdf(u, law); },
                               0.0, x, 1e-10, 1e-10);
    CHECK(rebuilt == Catch::Approx(alpha_hat_cdf(x, law)).margin(1e-7));
  }
}

TEST_CASE("rate cdf for fixed gains against simulation") {
  SystemParams p;
  RandomStream cal(31, 20);
  calibrate(p, 1000000, cal);
  RandomStream ds(31, 21);
  Drop drop = make_drop(p, ds);
  AlphaApproxLaw law = AlphaApproxLaw::from_drop(drop, p);

  CHECK(rate_cdf_fixed_gains(0.0, law, drop.gain_cc, p) == 0.0);
  CHECK(rate_cdf_fixed_gains(60.0, law, drop.gain_cc, p) ==
        Catch::Approx(1.0).margin(1e-6));

  // simulation: alpha-hat by rejection, |c~|^2 an independent exponential
  RandomStream s(31, 22);
  const int n = 100000;
  std::vector<double> rates;
  rates.reserve(n);
  while (rates.size() < n) {
    double approx = 0.25 * (law.mu_s * s.exponential()) *
                    (law.mu_t * s.exponential());
    if (approx >= 1.0) continue;
    rates.push_back(cr_rate(drop.gain_cc, s.exponential(), approx, p));
  }
  std::sort(rates.begin(), rates.end());
  // KS on a quantile grid (the analytic CDF costs a quadrature per point)
  double d = 0.0;
  const int grid = 400;
  for (int j = 0; j < grid; ++j) {
    std::size_t i = j * rates.size() / grid;
    double fx = rate_cdf_fixed_gains(rates[i], law, drop.gain_cc, p);
    double lo = static_cast<double>(i) / rates.size();
    double hi = static_cast<double>(i + 1) / rates.size();
    d = std::max(d, std::max(fx - lo, hi - fx));
  }
  CHECK(d < 0.01);
}
