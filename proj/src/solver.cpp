#include "sltr/solver.hpp"

#include "sltr/executor.hpp"

#include <array>
#include <chrono>
#include <limits>
#include <cmath>
#include <optional>
#include <string>

namespace sltr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double kDivergenceGrowth = 1e6;

}  // namespace

void SolverConfig::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(lambda)) throw InvalidArgument("lambda must be positive");
  if (!positive(tau)) throw InvalidArgument("tau must be positive");
  if (!positive(epsilon)) throw InvalidArgument("epsilon must be positive");
  if (!positive(gamma)) throw InvalidArgument("gamma must be positive");
  if (!(rho > 0.0 && rho < 2.0)) throw InvalidArgument("rho must lie in (0, 2)");
  if (!positive(tol)) throw InvalidArgument("tol must be positive");
  if (max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
}

SubproblemResult solve_subproblem(const Matrix& center, const SolverConfig& cfg, Executor* inner, std::size_t mode) {
  cfg.validate();
  if (!center.allFinite()) throw NumericalFailure("subproblem center is not finite");
  const ConstraintCenter ctr(center, cfg.lambda, cfg.tau);
  const double l1_step = cfg.paper_faithful_steps ? 4.0 * cfg.lambda : cfg.gamma;
  const double nuclear_step = cfg.paper_faithful_steps ? 4.0 * cfg.lambda : cfg.gamma;

  std::array<Matrix, 4> copies{center, center, center, center};
  std::array<Matrix, 4> pulled;
  Matrix w = center;

  const std::function<void(std::size_t)> apply = [&](std::size_t i) {
    switch (i) {
      case 0: pulled[0] = prox_l1(copies[0], l1_step); break;
      case 1: pulled[1] = prox_nuclear(copies[1], nuclear_step); break;
      case 2: pulled[2] = project_linf_ball(copies[2], ctr); break;
      default: pulled[3] = project_spectral_ball(copies[3], ctr); break;
    }
  };

  SubproblemResult result;
  result.trace.reserve(std::min<std::size_t>(cfg.max_iter, 1024));
  double first_change = -1.0;

  for (std::size_t t = 1; t <= cfg.max_iter; ++t) {
    try {
      if (inner != nullptr) {
        inner->run(pulled.size(), apply);
      } else {
        for (std::size_t i = 0; i < pulled.size(); ++i) apply(i);
      }
    } catch (const NumericalFailure& e) {
      throw DivergenceError("mode " + std::to_string(mode) + ": " + e.what() + " at sweep " + std::to_string(t), mode,
                            result.trace);
    }

    // Fixed summation order keeps the result independent of scheduling.
    Matrix avg = ((pulled[0] + pulled[1]) + pulled[2]) + pulled[3];
    avg *= 0.25;
    for (std::size_t i = 0; i < copies.size(); ++i) copies[i] += cfg.rho * (2.0 * avg - w - pulled[i]);
    Matrix next = w + cfg.rho * (avg - w);

    const double base = w.norm();
    const double step = (next - w).norm();
    const double change = base > 0.0 ? step / base : step;
    w = std::move(next);

    const double objective = w.allFinite() ? w.lpNorm<1>() + nuclear_norm(w) : std::numeric_limits<double>::infinity();
    result.trace.push_back({t, change, objective});
    result.iterations = t;

    if (!std::isfinite(change) || !std::isfinite(objective)) {
      throw DivergenceError("mode " + std::to_string(mode) + ": non-finite iterate at sweep " + std::to_string(t),
                            mode, result.trace);
    }
    if (first_change < 0.0) {
      first_change = change;
    } else if (first_change > 0.0 && change > kDivergenceGrowth * first_change) {
      throw DivergenceError("mode " + std::to_string(mode) + ": relative change grew past the divergence guard",
                            mode, result.trace);
    }
    if (change <= cfg.tol) {
      result.converged = true;
      break;
    }
  }

  result.w = radial_retraction(w, ctr);
  return result;
}

FitResult fit_from_backbone(const Tensor& backbone, const SolverConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  const std::size_t modes = backbone.order();
  const std::size_t threads = cfg.threads == 0 ? default_thread_count() : cfg.threads;
  const bool use_pool = threads > 1 && (cfg.parallel_modes || cfg.parallel_prox);
  std::optional<Executor> pool;
  if (use_pool) pool.emplace(threads);
  Executor* inner = use_pool && cfg.parallel_prox ? &*pool : nullptr;

  std::vector<std::optional<SubproblemResult>> solved(modes);
  std::vector<double> mode_seconds(modes, 0.0);
  const std::function<void(std::size_t)> solve_mode = [&](std::size_t m) {
    const auto t0 = Clock::now();
    solved[m] = solve_subproblem(unfold(backbone, m), cfg, inner, m);
    mode_seconds[m] = seconds_since(t0);
  };
  if (use_pool && cfg.parallel_modes) {
    pool->run(modes, solve_mode);
  } else {
    for (std::size_t m = 0; m < modes; ++m) solve_mode(m);
  }

  Tensor sum(backbone.dims());
  FitResult result{.w_hat = sum, .per_mode = {}, .trace = {}, .iterations_used = {}, .converged = {}, .timings = {}};
  for (std::size_t m = 0; m < modes; ++m) {
    Tensor folded = fold(solved[m]->w, m, backbone.dims());
    sum.flat() += folded.flat();
    result.per_mode.push_back(std::move(folded));
    result.trace.push_back(std::move(solved[m]->trace));
    result.iterations_used.push_back(solved[m]->iterations);
    result.converged.push_back(solved[m]->converged);
  }
  sum.flat() /= static_cast<double>(modes);
  result.w_hat = std::move(sum);
  result.timings.mode_seconds = std::move(mode_seconds);
  result.timings.total_seconds = seconds_since(start);
  return result;
}

FitResult fit(const Dataset& ds, const SolverConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  const Backbone b = backbone(ds.design(), ds.y(), cfg.epsilon, ds.dims());
  const double backbone_seconds = seconds_since(start);
  FitResult result = fit_from_backbone(b.tensor, cfg);
  result.timings.backbone_seconds = backbone_seconds;
  result.timings.total_seconds = seconds_since(start);
  return result;
}

Vector predict(const Tensor& w, std::span<const Tensor> xs) {
  Vector out(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) out[static_cast<Eigen::Index>(i)] = inner(w, xs[i]);
  return out;
}

Vector predict(const Tensor& w, const Dataset& ds) {
  if (w.dims() != ds.dims()) throw InvalidArgument("predict: coefficient dims differ from dataset dims");
  return ds.design() * w.flat();
}

ObjectiveAndGaps objective_and_gaps(const Matrix& w, const ConstraintCenter& ctr) {
  if (w.rows() != ctr.c.rows() || w.cols() != ctr.c.cols()) {
    throw InvalidArgument("objective_and_gaps: shape mismatch");
  }
  const Matrix diff = w - ctr.c;
  return {w.lpNorm<1>(), nuclear_norm(w), diff.lpNorm<Eigen::Infinity>() - ctr.lambda,
          spectral_norm(diff) - ctr.tau};
}

}  // namespace sltr
