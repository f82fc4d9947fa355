#include "sltr/dataset.hpp"

#include "sltr/error.hpp"

#include <string>

namespace sltr {

Dataset::Dataset(Dims dims, Matrix x, Vector y) : dims_(std::move(dims)), x_(std::move(x)), y_(std::move(y)) {
  check_dims(dims_);
  if (y_.size() == 0) throw InvalidArgument("dataset must hold at least one sample");
  if (x_.rows() != y_.size()) {
    throw InvalidArgument("design has " + std::to_string(x_.rows()) + " rows but y has " +
                          std::to_string(y_.size()) + " entries");
  }
  if (static_cast<std::size_t>(x_.cols()) != element_count(dims_)) {
    throw InvalidArgument("design has " + std::to_string(x_.cols()) + " columns, dims need " +
                          std::to_string(element_count(dims_)));
  }
}

Tensor Dataset::sample(std::size_t i) const {
  if (i >= n()) throw InvalidArgument("sample index out of range");
  return tensorize(x_.row(static_cast<Eigen::Index>(i)).transpose(), dims_);
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Matrix x(static_cast<Eigen::Index>(rows.size()), x_.cols());
  Vector y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= n()) throw InvalidArgument("subset row out of range");
    x.row(static_cast<Eigen::Index>(k)) = x_.row(static_cast<Eigen::Index>(rows[k]));
    y[static_cast<Eigen::Index>(k)] = y_[static_cast<Eigen::Index>(rows[k])];
  }
  return Dataset(dims_, std::move(x), std::move(y));
}

}  // namespace sltr
