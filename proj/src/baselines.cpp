#include "sltr/baselines.hpp"

#include "sltr/error.hpp"

#include <cmath>
#include <string>

namespace sltr {

void BaselineConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("baseline lambda must be positive");
  if (!(l1_ratio >= 0.0 && l1_ratio <= 1.0)) throw InvalidArgument("l1_ratio must lie in [0, 1]");
  if (!(tol > 0.0)) throw InvalidArgument("baseline tol must be positive");
  if (max_iter < 1) throw InvalidArgument("baseline max_iter must be at least 1");
}

namespace {

struct SmoothPart {
  const Matrix& x;
  const Vector& y;
  double ridge;  // lambda * (1 - r)

  double value(const Vector& w) const { return 0.5 * (x * w - y).squaredNorm() + 0.5 * ridge * w.squaredNorm(); }
  Vector gradient(const Vector& w) const { return x.transpose() * (x * w - y) + ridge * w; }
};

Vector soft_threshold(const Vector& v, double t) {
  return v.unaryExpr([t](double a) {
    const double mag = std::abs(a) - t;
    return mag > 0.0 ? std::copysign(mag, a) : 0.0;
  });
}

}  // namespace

double elastic_net_objective(const Matrix& x, const Vector& y, const Vector& w, double lambda, double l1_ratio) {
  return 0.5 * (x * w - y).squaredNorm() + lambda * (l1_ratio * w.lpNorm<1>() + 0.5 * (1.0 - l1_ratio) * w.squaredNorm());
}

LinearFit fit_elastic_net(const Matrix& x, const Vector& y, const BaselineConfig& cfg) {
  cfg.validate();
  if (x.rows() != y.size()) throw InvalidArgument("baseline: design rows differ from response length");
  if (!x.allFinite() || !y.allFinite()) throw NumericalFailure("baseline: non-finite input");

  const SmoothPart smooth{x, y, cfg.lambda * (1.0 - cfg.l1_ratio)};
  const double l1_weight = cfg.lambda * cfg.l1_ratio;
  auto total = [&](const Vector& w) { return smooth.value(w) + l1_weight * w.lpNorm<1>(); };

  // Largest column norm squared is a lower bound on ||X||_2^2.
  double lipschitz = x.colwise().squaredNorm().maxCoeff() + smooth.ridge;
  if (!(lipschitz > 0.0)) lipschitz = 1.0;

  const Eigen::Index p = x.cols();
  Vector w = Vector::Zero(p);
  Vector probe = w;
  Vector prev_z = w;
  double w_objective = total(w);
  double momentum = 1.0;

  LinearFit out;
  for (std::size_t k = 1; k <= cfg.max_iter; ++k) {
    const Vector grad = smooth.gradient(probe);
    const double probe_value = smooth.value(probe);
    Vector z;
    for (;;) {
      z = soft_threshold(probe - grad / lipschitz, l1_weight / lipschitz);
      const Vector d = z - probe;
      const double bound = probe_value + grad.dot(d) + 0.5 * lipschitz * d.squaredNorm();
      // Slack absorbs rounding when the quadratic model is exact.
      if (smooth.value(z) <= bound + 1e-12 * std::abs(bound)) break;
      lipschitz *= 2.0;
      if (!std::isfinite(lipschitz)) throw NumericalFailure("baseline: backtracking diverged", k);
    }

    const double z_objective = total(z);
    if (!std::isfinite(z_objective)) throw NumericalFailure("baseline: non-finite objective", k);
    Vector next = z_objective <= w_objective ? z : w;
    const double next_objective = std::min(z_objective, w_objective);

    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    probe = next + (momentum / next_momentum) * (z - next) + ((momentum - 1.0) / next_momentum) * (next - w);
    momentum = next_momentum;

    const double base = prev_z.norm();
    const double step = (z - prev_z).norm();
    const double change = base > 0.0 ? step / base : step;
    prev_z = std::move(z);

    w = std::move(next);
    w_objective = next_objective;
    out.objective.push_back(w_objective);
    out.iterations = k;
    if (change <= cfg.tol) {
      out.converged = true;
      break;
    }
  }
  out.w = std::move(w);
  return out;
}

LinearFit fit_lasso(const Matrix& x, const Vector& y, BaselineConfig cfg) {
  cfg.l1_ratio = 1.0;
  return fit_elastic_net(x, y, cfg);
}

}  // namespace sltr
