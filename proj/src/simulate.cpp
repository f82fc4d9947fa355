#include "sltr/simulate.hpp"

#include "sltr/error.hpp"
#include "sltr/rng.hpp"

#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

namespace sltr {

void SimSpec::validate() const {
  check_dims(dims);
  if (n < 1) throw InvalidArgument("simulation needs at least one sample");
  if (!(sparsity_pct >= 0.0 && sparsity_pct <= 100.0)) throw InvalidArgument("sparsity must lie in [0, 100]");
  if (!(noise_alpha >= 0.0) || !std::isfinite(noise_alpha)) throw InvalidArgument("noise alpha must be >= 0");
  if (low_rank && *low_rank < 1) throw InvalidArgument("low_rank must be at least 1");
}

std::size_t zero_count(const SimSpec& spec) {
  const double p = static_cast<double>(element_count(spec.dims));
  return static_cast<std::size_t>(std::llround(spec.sparsity_pct * p / 100.0));
}

namespace {

Tensor dense_coefficients(const Dims& dims, std::uint64_t seed) {
  Rng rng(seed, static_cast<std::uint64_t>(SimStream::coefficients));
  Tensor w(dims);
  for (double& v : w.data()) v = rng.normal();
  return w;
}

// Factors are drawn term by term, mode by mode, entry by entry.
Tensor low_rank_coefficients(const Dims& dims, std::size_t rank, std::uint64_t seed) {
  Rng rng(seed, static_cast<std::uint64_t>(SimStream::factors));
  std::vector<std::vector<std::vector<double>>> factors(rank);
  for (auto& term : factors) {
    term.resize(dims.size());
    for (std::size_t m = 0; m < dims.size(); ++m) {
      term[m].resize(dims[m]);
      for (double& v : term[m]) v = rng.normal();
    }
  }
  Tensor w(dims);
  std::vector<std::size_t> index(dims.size(), 0);
  for (double& entry : w.data()) {
    double sum = 0.0;
    for (const auto& term : factors) {
      double prod = 1.0;
      for (std::size_t m = 0; m < dims.size(); ++m) prod *= term[m][index[m]];
      sum += prod;
    }
    entry = sum;
    for (std::size_t m = 0; m < dims.size() && ++index[m] == dims[m]; ++m) index[m] = 0;
  }
  return w;
}

}  // namespace

Simulation generate(const SimSpec& spec) {
  spec.validate();
  const std::size_t p = element_count(spec.dims);

  Tensor w_star = spec.low_rank ? low_rank_coefficients(spec.dims, *spec.low_rank, spec.seed)
                                : dense_coefficients(spec.dims, spec.seed);

  Rng mask(spec.seed, static_cast<std::uint64_t>(SimStream::mask));
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t zeros = zero_count(spec);
  for (std::size_t j = 0; j < zeros; ++j) {
    const std::size_t pick = j + static_cast<std::size_t>(mask.bounded(p - j));
    std::swap(order[j], order[pick]);
    w_star.data()[order[j]] = 0.0;
  }

  Rng design_rng(spec.seed, static_cast<std::uint64_t>(SimStream::design));
  const auto rows = static_cast<Eigen::Index>(spec.n);
  const auto cols = static_cast<Eigen::Index>(p);
  Matrix x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = design_rng.normal();
  }

  Rng noise_rng(spec.seed, static_cast<std::uint64_t>(SimStream::noise));
  Vector noise(rows);
  for (Eigen::Index i = 0; i < rows; ++i) noise[i] = noise_rng.normal();

  Vector y = x * w_star.flat();
  y += spec.noise_alpha * noise;
  return {Dataset(spec.dims, std::move(x), std::move(y)), std::move(w_star)};
}

}  // namespace sltr
