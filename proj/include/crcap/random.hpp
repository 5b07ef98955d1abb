#pragma once

#include <cmath>
#include <cstdint>

#include "crcap/special.hpp"

namespace crcap {

/// Counter-based random stream. Output i is a keyed 64-bit hash of the
/// counter, so a stream is fully determined by (master_seed, stream_id)
/// and streams with distinct ids are unrelated keyed functions of the
/// counter -- they cannot overlap.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : key1_(mix(master_seed + kGolden * (stream_id + 1))),
        key2_(mix(key1_ ^ mix(stream_id + kGolden))) {}

  std::uint64_t next_u64() {
    std::uint64_t z = mix(counter_++ + key1_);
    return mix(z ^ key2_);
  }

  /// Uniform on the open interval (0,1); never returns 0 or 1.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  /// Standard normal via the inverse CDF (one uniform per variate).
  double normal() { return inverse_normal_cdf(uniform01()); }

  /// Unit-mean exponential.
  double exponential() { return -std::log(uniform01()); }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key1_;
  std::uint64_t key2_;
  std::uint64_t counter_ = 0;
};

}  // namespace crcap
