#pragma once

#include "sltr/tensor.hpp"

#include <cstddef>
#include <vector>

namespace sltr {

struct BaselineConfig {
  double lambda = 1.0;
  double l1_ratio = 1.0;  // 1 = lasso, 0 = ridge
  std::size_t max_iter = 1000;
  double tol = 1e-3;

  void validate() const;
};

struct LinearFit {
  Vector w;
  std::vector<double> objective;  // one entry per iteration, non-increasing
  std::size_t iterations = 0;
  bool converged = false;
};

/// Elastic net on vectorized samples:
///   1/2 ||y - X w||^2 + lambda (r ||w||_1 + (1 - r)/2 ||w||^2),  r = l1_ratio.
/// Monotone FISTA with backtracking, started from zero. Stops when the
/// relative change of the proximal-gradient point is <= tol.
LinearFit fit_elastic_net(const Matrix& x, const Vector& y, const BaselineConfig& cfg);

/// fit_elastic_net with l1_ratio forced to 1.
LinearFit fit_lasso(const Matrix& x, const Vector& y, BaselineConfig cfg);

double elastic_net_objective(const Matrix& x, const Vector& y, const Vector& w, double lambda, double l1_ratio);

}  // namespace sltr
