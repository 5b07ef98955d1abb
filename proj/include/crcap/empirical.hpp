#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace crcap {

/// Right-continuous empirical CDF of a sample.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples) : values_(std::move(samples)) {
    if (values_.empty()) throw std::domain_error("EmpiricalCdf: empty sample");
    std::sort(values_.begin(), values_.end());
  }

  /// Fraction of samples <= x.
  double operator()(double x) const {
    auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return static_cast<double>(it - values_.begin()) /
           static_cast<double>(values_.size());
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// Kolmogorov-Smirnov sup distance between an empirical CDF and a
/// reference CDF, evaluated at the sample points (where the sup over the
/// whole line is attained).
template <class F>
  requires(!std::is_same_v<std::remove_cvref_t<F>, EmpiricalCdf>)
double ks_distance(const EmpiricalCdf& ecdf, F&& cdf) {
  const auto& v = ecdf.values();
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double fx = cdf(v[i]);
    d = std::max(d, std::max((static_cast<double>(i) + 1.0) / n - fx,
                             fx - static_cast<double>(i) / n));
  }
  return d;
}

/// Two-sample KS sup distance.
inline double ks_distance(const EmpiricalCdf& a, const EmpiricalCdf& b) {
  const auto& x = a.values();
  const auto& y = b.values();
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    double z = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= z) ++i;
    while (j < y.size() && y[j] <= z) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / x.size() -
                             static_cast<double>(j) / y.size()));
  }
  return d;
}

}  // namespace crcap
