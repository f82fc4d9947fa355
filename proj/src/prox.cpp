#include "sltr/prox.hpp"

#include "sltr/error.hpp"
#include "sltr/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sltr {

namespace {

void require_step(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("prox step must be positive and finite");
}

void require_shape(const Matrix& v, const ConstraintCenter& ctr) {
  if (v.rows() != ctr.c.rows() || v.cols() != ctr.c.cols()) {
    throw InvalidArgument("operand shape differs from constraint center");
  }
}

}  // namespace

ConstraintCenter::ConstraintCenter(Matrix center, double lambda_, double tau_)
    : c(std::move(center)), lambda(lambda_), tau(tau_) {
  if (!(lambda > 0.0) || !(tau > 0.0)) throw InvalidArgument("constraint radii must be positive");
}

Matrix prox_l1(const Matrix& v, double gamma) {
  require_step(gamma);
  return v.unaryExpr([gamma](double x) {
    const double mag = std::abs(x) - gamma;
    return mag > 0.0 ? std::copysign(mag, x) : 0.0;
  });
}

Matrix prox_nuclear(const Matrix& v, double gamma) {
  require_step(gamma);
  const SvdFactors f = svd(v);
  const Vector shrunk = (f.s.array() - gamma).max(0.0);
  return f.u * shrunk.asDiagonal() * f.v.transpose();
}

Matrix project_linf_ball(const Matrix& v, const ConstraintCenter& ctr) {
  require_shape(v, ctr);
  Matrix out(v.rows(), v.cols());
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const double c = ctr.c(i, j);
      out(i, j) = std::clamp(v(i, j), c - ctr.lambda, c + ctr.lambda);
    }
  }
  return out;
}

Matrix project_spectral_ball(const Matrix& v, const ConstraintCenter& ctr) {
  require_shape(v, ctr);
  const Matrix diff = v - ctr.c;
  const SvdFactors f = svd(diff);
  if (f.s.size() == 0 || f.s[0] <= ctr.tau) return v;
  const Vector clipped = f.s.array().min(ctr.tau);
  return ctr.c + f.u * clipped.asDiagonal() * f.v.transpose();
}

Matrix radial_retraction(const Matrix& v, const ConstraintCenter& ctr) {
  require_shape(v, ctr);
  const Matrix diff = v - ctr.c;
  const double inf_dist = diff.lpNorm<Eigen::Infinity>();
  const double spec_dist = spectral_norm(diff);
  double scale = 1.0;
  if (inf_dist > ctr.lambda) scale = std::min(scale, ctr.lambda / inf_dist);
  if (spec_dist > ctr.tau) scale = std::min(scale, ctr.tau / spec_dist);
  if (scale == 1.0) return v;
  Matrix out = ctr.c + scale * diff;
  // Rounding in c + scale*diff can leave an entry a hair outside the box.
  return project_linf_ball(out, ctr);
}

}  // namespace sltr
