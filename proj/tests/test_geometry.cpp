#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "crcap/empirical.hpp"
#include "crcap/geometry.hpp"
#include "crcap/params.hpp"

using namespace crcap;

TEST_CASE("sample_annulus radii and angles") {
  RandomStream s(11, 0);
  const Point c{3.0, -2.0};
  const double r_in = 2.0, r_out = 5.0;
  const int n = 1000000;
  double sum_r2 = 0.0;
  std::vector<int> bins(36, 0);
  for (int i = 0; i < n; ++i) {
    Point p = sample_annulus(c, r_in, r_out, s);
    double r = distance(p, c);
    REQUIRE(r >= r_in);
    REQUIRE(r <= r_out);
    sum_r2 += r * r;
    double phi = std::atan2(p.y - c.y, p.x - c.x) + 3.14159265358979323846;
    int b = std::min(35, static_cast<int>(phi / (2 * 3.14159265358979323846) * 36));
    ++bins[b];
  }
  CHECK(sum_r2 / n ==
        Catch::Approx(0.5 * (r_in * r_in + r_out * r_out)).epsilon(0.005));
  // chi^2 uniformity, 35 dof, 1% critical value
  double expected = n / 36.0;
  double chi2 = 0.0;
  for (int b : bins) chi2 += (b - expected) * (b - expected) / expected;
  CHECK(chi2 < 57.342);

  CHECK_THROWS_AS(sample_annulus(c, 5.0, 5.0, s), std::domain_error);
  CHECK_THROWS_AS(sample_annulus(c, 6.0, 5.0, s), std::domain_error);
}

TEST_CASE("make_drop distances, gains and shadowing laws") {
  SystemParams p;
  p.a_p = 2.5;
  p.a_c = 0.03;
  RandomStream s(11, 1);
  const int n = 1000000;
  std::vector<double> r_pp(n), shadow(n);
  for (int i = 0; i < n; ++i) {
    Drop d = make_drop(p, s);
    REQUIRE(d.r_pp >= p.r_0);
    REQUIRE(d.r_pp <= p.r_p);
    REQUIRE(d.r_cc >= p.r_0);
    REQUIRE(d.r_cc <= p.r_c);
    REQUIRE(d.gain_cp > 0.0);
    REQUIRE(std::isfinite(d.gain_cp));
    if (i == 0) {
      CHECK(d.r_pp == Catch::Approx(distance(d.pu_tx, Point{0, 0})));
      CHECK(d.r_cc == Catch::Approx(distance(d.cr_tx, d.cr_rx)));
      CHECK(d.gain_pp ==
            Catch::Approx(p.a_p * std::exp(d.x_pp) * std::pow(d.r_pp, -p.gamma))
                .epsilon(1e-14));
      CHECK(d.gain_cc ==
            Catch::Approx(p.a_c * std::exp(d.x_cc) * std::pow(d.r_cc, -p.gamma))
                .epsilon(1e-14));
    }
    r_pp[i] = d.r_pp;
    // inverting the gain model recovers the shadowing draw
    shadow[i] = std::log(d.gain_pp * std::pow(d.r_pp, p.gamma) / p.a_p);
  }
  const double r0_2 = p.r_0 * p.r_0;
  EmpiricalCdf cdf_r(std::move(r_pp));
  CHECK(ks_distance(cdf_r, [&](double r) {
          return (r * r - r0_2) / (p.r_p * p.r_p - r0_2);
        }) < 0.002);
  const double sf = p.sigma_sf();
  EmpiricalCdf cdf_x(std::move(shadow));
  CHECK(ks_distance(cdf_x, [&](double x) { return std_normal_cdf(x / sf); }) <
        0.002);
}

TEST_CASE("ratio cdf coefficients and branch values") {
  SystemParams p;  // R_0=1, R_c=100, R_p=1000
  RatioCdfCoeffs k = ratio_cdf_coeffs(p);

  CHECK(k.eval(k.theta[0]) == 0.0);
  CHECK(k.eval(0.0005) == 0.0);
  CHECK(k.eval(k.theta[3]) == Catch::Approx(1.0).margin(1e-12));
  CHECK(k.eval(200.0) == 1.0);
  // frozen: coefficient-form evaluation at x=1 for (1, 100, 1000)
  CHECK(k.eval(1.0) == Catch::Approx(0.995000495).epsilon(1e-8));
  CHECK_THROWS_AS(k.eval(0.0), std::domain_error);
  CHECK_THROWS_AS(k.eval(-1.0), std::domain_error);
  CHECK_THROWS_AS(ratio_cdf_coeffs(10.0, 5.0, 1000.0), std::domain_error);
}

TEST_CASE("ratio cdf continuity at breakpoints") {
  RatioCdfCoeffs k = ratio_cdf_coeffs(1.0, 100.0, 1000.0);
  auto branch = [&](int i, double x) {
    return k.c[i][0] / (x * x) + k.c[i][1] + k.c[i][2] * x * x;
  };
  // adjacent branch formulas agree at the shared breakpoint
  CHECK(std::abs(branch(0, k.theta[0]) - 0.0) < 1e-12);
  CHECK(std::abs(branch(0, k.theta[1]) - branch(1, k.theta[1])) < 1e-12);
  CHECK(std::abs(branch(1, k.theta[2]) - branch(2, k.theta[2])) < 1e-12);
  CHECK(std::abs(branch(2, k.theta[3]) - 1.0) < 1e-12);
}

TEST_CASE("ratio cdf is nondecreasing") {
  RatioCdfCoeffs k = ratio_cdf_coeffs(1.0, 100.0, 1000.0);
  double lo = k.theta[0] / 2.0, hi = 2.0 * k.theta[3];
  double prev = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double x = lo * std::pow(hi / lo, i / 9999.0);
    double v = k.eval(x);
    REQUIRE(v >= prev);
    prev = v;
  }
}

TEST_CASE("ratio cdf symmetry when R_c equals R_p") {
  RatioCdfCoeffs k = ratio_cdf_coeffs(1.0, 1000.0, 1000.0);
  CHECK(k.eval(1.0) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("ratio cdf matches simulation for random geometries") {
  RandomStream gen(11, 2);
  for (int trial = 0; trial < 5; ++trial) {
    double r0 = 0.5 + gen.uniform01();
    double rc = r0 + 1.0 + 100.0 * gen.uniform01();
    double rp = rc * (1.0 + 2.0 * gen.uniform01());
    RatioCdfCoeffs k = ratio_cdf_coeffs(r0, rc, rp);

    RandomStream s(11, 100 + trial);
    const int n = 1000000;
    std::vector<double> ratio(n);
    for (int i = 0; i < n; ++i) {
      double r_cc = std::sqrt(r0 * r0 + s.uniform01() * (rc * rc - r0 * r0));
      double r_cp = std::sqrt(r0 * r0 + s.uniform01() * (rp * rp - r0 * r0));
      ratio[i] = r_cc / r_cp;
    }
    EmpiricalCdf ecdf(std::move(ratio));
    CAPTURE(r0, rc, rp);
    CHECK(ks_distance(ecdf, [&](double x) { return k.eval(x); }) < 0.003);
  }
}
