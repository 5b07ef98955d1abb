#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "crcap/empirical.hpp"
#include "crcap/random.hpp"

using namespace crcap;

TEST_CASE("streams replay bit-for-bit") {
  RandomStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct stream ids diverge") {
  RandomStream a(42, 7), b(42, 8);
  int equal = 0;
  for (int i = 0; i < 1000; ++i)
    if (a.next_u64() == b.next_u64()) ++equal;
  CHECK(equal == 0);
}

TEST_CASE("uniform01 stays inside the open interval") {
  RandomStream s(1, 1);
  for (int i = 0; i < 100000; ++i) {
    double u = s.uniform01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("exponential mean, law of large numbers") {
  RandomStream s(2024, 0);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += s.exponential();
  CHECK(sum / n == Catch::Approx(1.0).margin(0.005));
}

TEST_CASE("normal moments") {
  RandomStream s(2024, 1);
  double sum = 0.0, sumsq = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    double x = s.normal();
    sum += x;
    sumsq += x * x;
  }
  double mean = sum / n;
  CHECK(mean == Catch::Approx(0.0).margin(0.005));
  CHECK(sumsq / n - mean * mean == Catch::Approx(1.0).margin(0.007));
}

TEST_CASE("ratio of two unit exponentials follows y/(1+y)") {
  RandomStream s(2024, 2);
  const int n = 1000000;
  std::vector<double> ratios(n);
  for (int i = 0; i < n; ++i)
    ratios[i] = s.exponential() / s.exponential();
  EmpiricalCdf ecdf(std::move(ratios));
  double d = ks_distance(ecdf, [](double y) { return y / (1.0 + y); });
  CHECK(d < 0.002);
}
