#include "sltr/tensor.hpp"

#include "sltr/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace sltr {

namespace {

struct ModeSplit {
  std::size_t left;   // prod of extents before the mode
  std::size_t extent;
  std::size_t right;  // prod of extents after the mode
};

ModeSplit split_at(const Dims& dims, std::size_t mode) {
  if (mode >= dims.size()) {
    throw InvalidArgument("mode " + std::to_string(mode) + " out of range for order " +
                          std::to_string(dims.size()));
  }
  ModeSplit s{1, dims[mode], 1};
  for (std::size_t l = 0; l < mode; ++l) s.left *= dims[l];
  for (std::size_t l = mode + 1; l < dims.size(); ++l) s.right *= dims[l];
  return s;
}

void require_same_dims(const Tensor& a, const Tensor& b, const char* op) {
  if (a.dims() != b.dims()) throw InvalidArgument(std::string(op) + ": tensor dims differ");
}

}  // namespace

std::size_t element_count(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

void check_dims(std::span<const std::size_t> dims) {
  if (dims.empty()) throw InvalidArgument("tensor order must be at least 1");
  if (std::any_of(dims.begin(), dims.end(), [](std::size_t d) { return d == 0; })) {
    throw InvalidArgument("tensor dims must be positive");
  }
}

Tensor::Tensor(Dims dims) : dims_(std::move(dims)) {
  check_dims(dims_);
  data_.assign(element_count(dims_), 0.0);
}

Tensor::Tensor(Dims dims, std::vector<double> data) : dims_(std::move(dims)), data_(std::move(data)) {
  check_dims(dims_);
  if (data_.size() != element_count(dims_)) {
    throw InvalidArgument("tensor data length " + std::to_string(data_.size()) +
                          " does not match dims product " + std::to_string(element_count(dims_)));
  }
}

std::size_t Tensor::offset(std::span<const std::size_t> index) const {
  if (index.size() != dims_.size()) throw InvalidArgument("index order mismatch");
  std::size_t off = 0;
  std::size_t stride = 1;
  for (std::size_t m = 0; m < dims_.size(); ++m) {
    if (index[m] >= dims_[m]) throw InvalidArgument("index out of range");
    off += index[m] * stride;
    stride *= dims_[m];
  }
  return off;
}

Matrix unfold(const Tensor& t, std::size_t mode) {
  const auto [left, extent, right] = split_at(t.dims(), mode);
  Matrix a(extent, left * right);
  const auto src = t.data();
  // Viewing the buffer as a (left, extent, right) column-major block, the
  // column of element (l, i, r) is l + left * r.
  for (std::size_t r = 0; r < right; ++r) {
    for (std::size_t i = 0; i < extent; ++i) {
      const double* in = src.data() + left * (i + extent * r);
      for (std::size_t l = 0; l < left; ++l) a(i, l + left * r) = in[l];
    }
  }
  return a;
}

Tensor fold(const Matrix& a, std::size_t mode, const Dims& dims) {
  check_dims(dims);
  const auto [left, extent, right] = split_at(dims, mode);
  if (static_cast<std::size_t>(a.rows()) != extent ||
      static_cast<std::size_t>(a.cols()) != left * right) {
    throw InvalidArgument("fold: matrix is " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + ", expected " + std::to_string(extent) + "x" +
                          std::to_string(left * right));
  }
  Tensor t(dims);
  auto dst = t.data();
  for (std::size_t r = 0; r < right; ++r) {
    for (std::size_t i = 0; i < extent; ++i) {
      double* out = dst.data() + left * (i + extent * r);
      for (std::size_t l = 0; l < left; ++l) out[l] = a(i, l + left * r);
    }
  }
  return t;
}

Vector vectorize(const Tensor& t) { return t.flat(); }

Tensor tensorize(const Vector& v, const Dims& dims) {
  check_dims(dims);
  if (static_cast<std::size_t>(v.size()) != element_count(dims)) {
    throw InvalidArgument("tensorize: vector length " + std::to_string(v.size()) +
                          " does not match dims product " + std::to_string(element_count(dims)));
  }
  return Tensor(dims, std::vector<double>(v.data(), v.data() + v.size()));
}

double inner(const Tensor& a, const Tensor& b) {
  require_same_dims(a, b, "inner");
  return a.flat().dot(b.flat());
}

double frobenius_norm(const Tensor& t) { return t.flat().norm(); }

double l1_norm(const Tensor& t) { return t.flat().lpNorm<1>(); }

double linf_norm(const Tensor& t) { return t.flat().lpNorm<Eigen::Infinity>(); }

}  // namespace sltr
