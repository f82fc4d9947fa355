#pragma once

#include "sltr/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>

namespace sltr {

struct SimSpec {
  Dims dims;
  std::size_t n = 1;
  double sparsity_pct = 80.0;  // share of W* entries forced to zero, in percent
  double noise_alpha = 0.1;
  std::uint64_t seed = 0;
  /// When set, W* is a sum of this many random rank-1 outer products (before
  /// the sparsity mask) instead of i.i.d. normal entries.
  std::optional<std::size_t> low_rank;

  void validate() const;
};

struct Simulation {
  Dataset data;
  Tensor w_star;
};

/// Streams of the seeded generator used by generate().
enum class SimStream : std::uint64_t {
  coefficients = 0,
  design = 1,
  noise = 2,
  mask = 3,
  factors = 4,
};

/// Draws W* and the samples from N(0, 1), zeros exactly
/// round(sparsity_pct * P / 100) uniformly chosen entries of W* (partial
/// Fisher-Yates on the mask stream) and sets y = X vec(W*) + alpha * noise.
Simulation generate(const SimSpec& spec);

/// Number of entries generate() zeroes for the given spec.
std::size_t zero_count(const SimSpec& spec);

}  // namespace sltr
