#pragma once

#include "sltr/baselines.hpp"
#include "sltr/dataset.hpp"
#include "sltr/solver.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sltr {

double mse(const Vector& y, const Vector& yhat);

/// ||w_hat - w_star||_F / ||w_star||_F; rejects a zero w_star.
double coefficient_error(const Tensor& w_hat, const Tensor& w_star);

/// Mann-Whitney AUC: probability that a positive outscores a negative, ties
/// counting one half. Labels are 0/1 and both classes must be present.
double auc(const Vector& scores, std::span<const int> labels);

struct GridCell {
  double lambda;
  double tau;
  double epsilon;

  friend auto operator<=>(const GridCell&, const GridCell&) = default;
};

/// lambda, tau in {1e-3, 10^-2.5, ..., 1e1} and epsilon in {0.1, 1, 10}.
std::vector<GridCell> default_grid();

/// Seeded shuffle of 0..n-1 cut into k contiguous folds whose sizes differ
/// by at most one.
std::vector<std::vector<std::size_t>> fold_assignment(std::size_t n, std::size_t k, std::uint64_t seed);

struct CvReport {
  std::vector<GridCell> grid;
  std::vector<double> per_cell;                // mean validation MSE
  std::vector<std::vector<double>> per_fold;   // [cell][fold]
  std::size_t selected = 0;
  std::uint64_t fold_seed = 0;
  std::size_t fits = 0;
};

/// k-fold cross-validation of the SLTR estimator over `grid`. Folds come
/// from fold_assignment(N, k, cfg_template.seed); the remaining solver
/// settings come from cfg_template. The selected cell has the smallest mean
/// validation MSE, ties going to the lexicographically smallest
/// (lambda, tau, epsilon).
CvReport kfold_cv(const Dataset& ds, std::span<const GridCell> grid, std::size_t k,
                  const SolverConfig& cfg_template);

struct BaselineCvResult {
  std::vector<double> lambdas;
  std::vector<double> per_lambda;  // mean validation MSE
  std::size_t selected = 0;
};

/// Same protocol for the elastic net / lasso baselines over lambda.
BaselineCvResult kfold_cv_baseline(const Dataset& ds, std::span<const double> lambdas, std::size_t k,
                                   const BaselineConfig& cfg_template, std::uint64_t seed);

struct BoundInputs {
  double lambda = 0.0;
  double tau = 0.0;
  Dims dims;
  /// Orthogonal-rank bound for the general bound.
  std::optional<std::size_t> rank;
  /// Per-mode unfolding ranks for the three-mode bound.
  std::optional<std::array<std::size_t, 3>> mode_ranks;
};

/// 4 sqrt(2) (lambda sqrt(prod p) + tau sqrt(R)).
double theorem1_bound(const BoundInputs& b);

/// max over m of sqrt(r_m * min of the other two ranks).
double corollary_rank_factor(const std::array<std::size_t, 3>& ranks);

/// 4 sqrt(2) (lambda sqrt(prod p) + tau R'), three-mode tensors only.
double corollary1_bound(const BoundInputs& b);

/// Numerical rank of each unfolding at tolerance rel_tol * s_max.
std::vector<std::size_t> unfolding_ranks(const Tensor& t, double rel_tol = 1e-8);

}  // namespace sltr
