#pragma once

#include "sltr/tensor.hpp"

#include <cstddef>

namespace sltr {

/// Thin SVD: a = u * diag(s) * v^T with s non-increasing and non-negative.
struct SvdFactors {
  Matrix u;
  Vector s;
  Matrix v;
};

/// Deterministic one-sided Jacobi SVD. Throws NumericalFailure on
/// non-finite input.
SvdFactors svd(const Matrix& a);

/// Singular values only (cheaper than svd).
Vector singular_values(const Matrix& a);

double spectral_norm(const Matrix& a);
double nuclear_norm(const Matrix& a);

/// Number of singular values above rel_tol * s_max (0 for the zero matrix).
std::size_t numerical_rank(const Matrix& a, double rel_tol = 1e-8);

/// Overlapped tensor nuclear norm: mean over modes of the nuclear norm of
/// each unfolding. Requires order >= 2.
double tensor_nuclear_norm(const Tensor& t);

/// Ridge plug-in point tensor((X^T X + eps I)^{-1} X^T y).
struct Backbone {
  Tensor tensor;
  double epsilon;
};

enum class BackboneRoute {
  automatic,  // woodbury when P > N, direct otherwise
  direct,     // P x P system
  woodbury,   // X^T (X X^T + eps I)^{-1} y, an N x N system
};

Backbone backbone(const Matrix& x, const Vector& y, double epsilon, const Dims& dims,
                  BackboneRoute route = BackboneRoute::automatic);

}  // namespace sltr
