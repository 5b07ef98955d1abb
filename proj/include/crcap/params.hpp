#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace crcap {

inline constexpr const char* kVersion = "0.1.0";

/// All scalar model parameters. Radii in meters, powers/noise linear,
/// sigma_db in dB. a_p/a_c are the link-gain constants (A_p, A_c), normally
/// set by calibrate().
struct SystemParams {
  double r_0 = 1.0;
  double r_c = 100.0;
  double r_p = 1000.0;
  double gamma = 3.5;
  double sigma_db = 8.0;
  double n_p = 1.0;
  double n_c = 1.0;
  double p_p = 1.0;
  double p_c = 1.0;
  double a_p = 1.0;
  double a_c = 1.0;

  static constexpr double beta_ln = 0.23025850929940457;  // ln(10)/10

  /// Shadowing std in natural-log units.
  double sigma_sf() const { return beta_ln * sigma_db; }

  void validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
      throw std::invalid_argument("SystemParams: " + field + " " + why);
    };
    if (!(r_0 > 0.0)) fail("R_0", "must be > 0");
    if (!(r_c > r_0)) fail("R_c", "must be > R_0");
    if (!(r_p >= r_c)) fail("R_c", "must be <= R_p");
    if (!(gamma > 2.0)) fail("gamma", "must be > 2");
    if (!(sigma_db > 0.0)) fail("sigma_db", "must be > 0");
    if (!(n_p > 0.0)) fail("N_p", "must be > 0");
    if (!(n_c > 0.0)) fail("N_c", "must be > 0");
    if (!(p_p > 0.0)) fail("P_p", "must be > 0");
    if (!(p_c > 0.0)) fail("P_c", "must be > 0");
    if (!(a_p > 0.0)) fail("A_p", "must be > 0");
    if (!(a_c > 0.0)) fail("A_c", "must be > 0");
  }
};

}  // namespace crcap
