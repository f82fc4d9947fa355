#pragma once

#include <array>
#include <cstdint>

namespace sltr {

/// SplitMix64 step; used only to expand seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// xoshiro256** with fixed seeding so generated data is reproducible bit for
/// bit across platforms. Stream `s` of seed `k` is seeded by four SplitMix64
/// outputs starting from k ^ (s * 0xD1B54A32D192ED03).
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();

  /// 53-bit uniform in the open interval (0, 1).
  double uniform();

  /// Uniform integer in [0, bound), Lemire's multiply-and-reject.
  std::uint64_t bounded(std::uint64_t bound);

  /// Standard normal by inverse CDF of uniform().
  double normal();

 private:
  std::array<std::uint64_t, 4> s_;
};

/// Inverse of the standard normal CDF (Wichura's AS 241, ~1e-16 relative).
double normal_quantile(double p);

}  // namespace sltr
