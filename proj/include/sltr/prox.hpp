#pragma once

#include "sltr/tensor.hpp"

namespace sltr {

/// Center and radii of the two constraint balls of one mode subproblem:
/// ||w - c||_inf <= lambda and ||w - c||_spec <= tau.
struct ConstraintCenter {
  ConstraintCenter(Matrix center, double lambda, double tau);

  Matrix c;
  double lambda;
  double tau;
};

/// Soft-thresholding: argmin_w gamma ||w||_1 + 1/2 ||w - v||_F^2.
Matrix prox_l1(const Matrix& v, double gamma);

/// Singular-value soft-thresholding: argmin_w gamma ||w||_* + 1/2 ||w - v||_F^2.
Matrix prox_nuclear(const Matrix& v, double gamma);

/// Entrywise clamp of v into [c - lambda, c + lambda].
Matrix project_linf_ball(const Matrix& v, const ConstraintCenter& ctr);

/// c + U diag(min(s, tau)) V^T where U diag(s) V^T = svd(v - c).
Matrix project_spectral_ball(const Matrix& v, const ConstraintCenter& ctr);

/// Pulls v toward the center along the segment [c, v] until it lies in both
/// balls; returns v unchanged when it is already feasible.
Matrix radial_retraction(const Matrix& v, const ConstraintCenter& ctr);

}  // namespace sltr
