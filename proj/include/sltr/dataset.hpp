#pragma once

#include "sltr/tensor.hpp"

#include <cstddef>
#include <span>

namespace sltr {

/// N tensor samples with scalar responses. Samples are stored as the rows of
/// the N x P design matrix, each row being the vectorized sample.
class Dataset {
 public:
  Dataset(Dims dims, Matrix x, Vector y);

  const Dims& dims() const noexcept { return dims_; }
  std::size_t n() const noexcept { return static_cast<std::size_t>(y_.size()); }
  std::size_t features() const noexcept { return static_cast<std::size_t>(x_.cols()); }

  const Matrix& design() const noexcept { return x_; }
  const Vector& y() const noexcept { return y_; }

  Tensor sample(std::size_t i) const;

  /// Rows `rows` in the given order.
  Dataset subset(std::span<const std::size_t> rows) const;

 private:
  Dims dims_;
  Matrix x_;
  Vector y_;
};

}  // namespace sltr
