#pragma once

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace crcap {

/// Thrown when the subdivision budget is exhausted before the requested
/// tolerance is met; carries the best estimate reached.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const char* what, double estimate, double error)
      : std::runtime_error(what), best_estimate(estimate), error_bound(error) {}
  double best_estimate;
  double error_bound;
};

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
inline constexpr double kKronrodNodes[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993944,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126};
inline constexpr double kKronrodWeights[8] = {
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.0630920926299786,
    0.0229353220105292};
inline constexpr double kGaussWeights[4] = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697};

struct Panel {
  double a, b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod_15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fc = f(c);
  double kronrod = kKronrodWeights[0] * fc;
  double gauss = kGaussWeights[0] * fc;
  for (int i = 1; i < 8; ++i) {
    double fl = f(c - h * kKronrodNodes[i]);
    double fr = f(c + h * kKronrodNodes[i]);
    kronrod += kKronrodWeights[i] * (fl + fr);
    if (i % 2 == 0) gauss += kGaussWeights[i / 2] * (fl + fr);
  }
  kronrod *= h;
  gauss *= h;
  // |K15 - G7| is a conservative bound on the Kronrod error.
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

template <class F>
double integrate_finite(F f, double a, double b, double abs_tol, double rel_tol,
                        int max_panels) {
  std::priority_queue<Panel> panels;
  Panel p0 = gauss_kronrod_15(f, a, b);
  double total = p0.value;
  double total_err = p0.error;
  panels.push(p0);
  int n = 1;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (n >= max_panels || !std::isfinite(total))
      throw ConvergenceError("integrate: panel budget exhausted", total,
                             total_err);
    Panel worst = panels.top();
    panels.pop();
    total -= worst.value;
    total_err -= worst.error;
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b)
      throw ConvergenceError("integrate: interval too small to split", total,
                             total_err);
    Panel left = gauss_kronrod_15(f, worst.a, mid);
    Panel right = gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value;
    total_err += left.error + right.error;
    panels.push(left);
    panels.push(right);
    ++n;
  }
  return total;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over (a,b). Either endpoint may
/// be infinite; semi-/doubly-infinite ranges are mapped onto a finite
/// interval first.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-9,
                 double rel_tol = 1e-9, int max_panels = 4000) {
  if (!(a < b)) throw std::domain_error("integrate: requires a < b");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw std::domain_error("integrate: tolerances must be > 0");

  const bool a_inf = std::isinf(a);
  const bool b_inf = std::isinf(b);
  if (!a_inf && !b_inf)
    return detail::integrate_finite(f, a, b, abs_tol, rel_tol, max_panels);
  if (!a_inf) {
    auto g = [&f, a](double t) {
      double u = 1.0 - t;
      return f(a + t / u) / (u * u);
    };
    return detail::integrate_finite(g, 0.0, 1.0, abs_tol, rel_tol, max_panels);
  }
  if (!b_inf) {
    auto g = [&f, b](double t) {
      double u = 1.0 - t;
      return f(b - t / u) / (u * u);
    };
    return detail::integrate_finite(g, 0.0, 1.0, abs_tol, rel_tol, max_panels);
  }
  auto g = [&f](double t) {
    double u = 1.0 - t * t;
    return f(t / u) * (1.0 + t * t) / (u * u);
  };
  return detail::integrate_finite(g, -1.0, 1.0, abs_tol, rel_tol, max_panels);
}

}  // namespace crcap
