#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "crcap/params.hpp"
#include "crcap/random.hpp"

namespace crcap {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Point uniform over the area of an annulus around `center`.
inline Point sample_annulus(const Point& center, double r_in, double r_out,
                            RandomStream& stream) {
  if (!(r_in >= 0.0 && r_in < r_out))
    throw std::domain_error("sample_annulus: requires 0 <= r_in < r_out");
  double r = std::sqrt(r_in * r_in +
                       stream.uniform01() * (r_out * r_out - r_in * r_in));
  double phi = 6.283185307179586 * stream.uniform01();
  return {center.x + r * std::cos(phi), center.y + r * std::sin(phi)};
}

/// One geometric + shadowing realization. The PU receiver sits at the
/// origin; fast fading is drawn separately.
struct Drop {
  Point pu_tx;  // PU transmitter
  Point cr_rx;  // CR receiver
  Point cr_tx;  // CR transmitter
  double r_pp, r_pc, r_cc, r_cp;
  double x_pp, x_pc, x_cc, x_cp;          // shadowing, natural-log units
  double gain_pp, gain_pc, gain_cc, gain_cp;  // link gains Gamma_xy
};

inline Drop make_drop(const SystemParams& p, RandomStream& stream) {
  Drop d;
  const Point origin{0.0, 0.0};
  d.pu_tx = sample_annulus(origin, p.r_0, p.r_p, stream);
  d.cr_rx = sample_annulus(origin, p.r_0, p.r_p, stream);
  d.cr_tx = sample_annulus(d.cr_rx, p.r_0, p.r_c, stream);
  // positions are taken as sampled; only the measure-zero event of the CR
  // transmitter landing on the PU receiver is resampled
  while (distance(d.cr_tx, origin) < 1e-9)
    d.cr_tx = sample_annulus(d.cr_rx, p.r_0, p.r_c, stream);

  d.r_pp = distance(d.pu_tx, origin);
  d.r_pc = distance(d.pu_tx, d.cr_rx);
  d.r_cc = distance(d.cr_tx, d.cr_rx);
  d.r_cp = distance(d.cr_tx, origin);

  const double s = p.sigma_sf();
  d.x_pp = s * stream.normal();
  d.x_pc = s * stream.normal();
  d.x_cc = s * stream.normal();
  d.x_cp = s * stream.normal();

  d.gain_pp = p.a_p * std::exp(d.x_pp) * std::pow(d.r_pp, -p.gamma);
  d.gain_pc = p.a_p * std::exp(d.x_pc) * std::pow(d.r_pc, -p.gamma);
  d.gain_cc = p.a_c * std::exp(d.x_cc) * std::pow(d.r_cc, -p.gamma);
  d.gain_cp = p.a_c * std::exp(d.x_cp) * std::pow(d.r_cp, -p.gamma);
  return d;
}

/// Piecewise CDF of the distance ratio Z = r_cc/r_cp under independent
/// area-uniform annulus laws: F(x) = c_i0 x^-2 + c_i1 + c_i2 x^2 on
/// (theta_i, theta_{i+1}].
struct RatioCdfCoeffs {
  // theta[0]=theta_2 .. theta[3]=theta_5; theta_6 is +infinity
  std::array<double, 4> theta;
  // c[i-2][j] for branch i in 2..5
  std::array<std::array<double, 3>, 4> c;

  double eval(double x) const {
    if (!(x > 0.0)) throw std::domain_error("ratio_cdf_eval: x must be > 0");
    if (x <= theta[0]) return 0.0;
    if (x > theta[3]) return 1.0;
    int i;
    if (x <= theta[1]) i = 0;
    else if (x <= theta[2]) i = 1;
    else i = 2;
    double v = c[i][0] / (x * x) + c[i][1] + c[i][2] * x * x;
    // absorb rounding at the outer breakpoints only
    if (v < 0.0 && v > -1e-12) v = 0.0;
    if (v > 1.0 && v < 1.0 + 1e-12) v = 1.0;
    return v;
  }
};

inline RatioCdfCoeffs ratio_cdf_coeffs(double r_0, double r_c, double r_p) {
  if (!(0.0 < r_0 && r_0 < r_c && r_c <= r_p))
    throw std::domain_error("ratio_cdf_coeffs: requires 0 < R_0 < R_c <= R_p");
  const double r0_2 = r_0 * r_0, rc_2 = r_c * r_c, rp_2 = r_p * r_p;
  const double delta = (rc_2 - r0_2) * (rp_2 - r0_2);
  RatioCdfCoeffs k;
  k.theta = {r_0 / r_p, r_c / r_p, 1.0, r_c / r_0};
  k.c[0] = {0.5 * r0_2 * r0_2 / delta, -r0_2 * rp_2 / delta,
            0.5 * rp_2 * rp_2 / delta};
  k.c[1] = {0.5 * (r0_2 * r0_2 - rc_2 * rc_2) / delta,
            rp_2 * (rc_2 - r0_2) / delta, 0.0};
  k.c[2] = {-0.5 * rc_2 * rc_2 / delta, 1.0 + r0_2 * rc_2 / delta,
            -0.5 * r0_2 * r0_2 / delta};
  k.c[3] = {0.0, 1.0, 0.0};
  return k;
}

inline RatioCdfCoeffs ratio_cdf_coeffs(const SystemParams& p) {
  return ratio_cdf_coeffs(p.r_0, p.r_c, p.r_p);
}

}  // namespace crcap
