#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace sltr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Dims = std::vector<std::size_t>;

/// Product of all extents.
std::size_t element_count(std::span<const std::size_t> dims);

/// Throws InvalidArgument unless dims is non-empty with positive entries.
void check_dims(std::span<const std::size_t> dims);

/// Dense M-order tensor of doubles.
///
/// Storage is generalized column-major: element (i_1, ..., i_M) lives at
/// offset sum_m i_m * prod_{l<m} p_l, so mode 0 varies fastest and the mode-0
/// unfolding is a plain reshape of the buffer.
class Tensor {
 public:
  explicit Tensor(Dims dims);
  Tensor(Dims dims, std::vector<double> data);

  static Tensor zeros(Dims dims) { return Tensor(std::move(dims)); }

  std::size_t order() const noexcept { return dims_.size(); }
  const Dims& dims() const noexcept { return dims_; }
  std::size_t dim(std::size_t mode) const { return dims_.at(mode); }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  /// Flat offset of a multi-index (zero-based).
  std::size_t offset(std::span<const std::size_t> index) const;
  double operator()(std::span<const std::size_t> index) const { return data_[offset(index)]; }
  double& operator()(std::span<const std::size_t> index) { return data_[offset(index)]; }

  Eigen::Map<const Vector> flat() const { return {data_.data(), static_cast<Eigen::Index>(data_.size())}; }
  Eigen::Map<Vector> flat() { return {data_.data(), static_cast<Eigen::Index>(data_.size())}; }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Dims dims_;
  std::vector<double> data_;
};

/// Mode-`mode` matricization (zero-based mode). The result has p_mode rows;
/// column j = sum_{k != mode} i_k * J_k with J_k = prod_{l<k, l != mode} p_l.
Matrix unfold(const Tensor& t, std::size_t mode);

/// Inverse of unfold for the given target dims.
Tensor fold(const Matrix& a, std::size_t mode, const Dims& dims);

Vector vectorize(const Tensor& t);
Tensor tensorize(const Vector& v, const Dims& dims);

double inner(const Tensor& a, const Tensor& b);
double frobenius_norm(const Tensor& t);
double l1_norm(const Tensor& t);
double linf_norm(const Tensor& t);

}  // namespace sltr
