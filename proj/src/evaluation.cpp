#include "sltr/evaluation.hpp"

#include "sltr/error.hpp"
#include "sltr/executor.hpp"
#include "sltr/linalg.hpp"
#include "sltr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace sltr {

namespace {

constexpr std::uint64_t kFoldStream = 5;

struct FoldSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validate;
};

std::vector<FoldSplit> make_splits(std::size_t n, std::size_t k, std::uint64_t seed) {
  const auto folds = fold_assignment(n, k, seed);
  std::vector<FoldSplit> splits(k);
  for (std::size_t f = 0; f < k; ++f) {
    splits[f].validate = folds[f];
    for (std::size_t g = 0; g < k; ++g) {
      if (g != f) splits[f].train.insert(splits[f].train.end(), folds[g].begin(), folds[g].end());
    }
  }
  return splits;
}

std::size_t argmin_with_ties(const std::vector<double>& scores, auto&& less_key) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] < scores[best] || (scores[i] == scores[best] && less_key(i, best))) best = i;
  }
  return best;
}

}  // namespace

double mse(const Vector& y, const Vector& yhat) {
  if (y.size() != yhat.size()) throw InvalidArgument("mse: length mismatch");
  if (y.size() == 0) throw InvalidArgument("mse: empty input");
  return (y - yhat).squaredNorm() / static_cast<double>(y.size());
}

double coefficient_error(const Tensor& w_hat, const Tensor& w_star) {
  if (w_hat.dims() != w_star.dims()) throw InvalidArgument("coefficient_error: dims mismatch");
  const double scale = frobenius_norm(w_star);
  if (scale == 0.0) throw InvalidArgument("coefficient_error: true coefficient is zero");
  return (w_hat.flat() - w_star.flat()).norm() / scale;
}

double auc(const Vector& scores, std::span<const int> labels) {
  if (static_cast<std::size_t>(scores.size()) != labels.size()) throw InvalidArgument("auc: length mismatch");
  const std::size_t n = labels.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[static_cast<Eigen::Index>(a)] < scores[static_cast<Eigen::Index>(b)];
  });

  // Midranks (1-based) of each tied run.
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[static_cast<Eigen::Index>(order[j + 1])] == scores[static_cast<Eigen::Index>(order[i])]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
    i = j + 1;
  }

  double positives = 0.0;
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw InvalidArgument("auc: labels must be 0 or 1");
    if (labels[i] == 1) {
      positives += 1.0;
      rank_sum += rank[i];
    }
  }
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0.0 || negatives == 0.0) throw InvalidArgument("auc: both classes must be present");
  return (rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

std::vector<GridCell> default_grid() {
  std::vector<double> radii;
  for (int e = -6; e <= 2; ++e) radii.push_back(std::pow(10.0, 0.5 * e));
  std::vector<GridCell> grid;
  for (double lambda : radii) {
    for (double tau : radii) {
      for (double epsilon : {0.1, 1.0, 10.0}) grid.push_back({lambda, tau, epsilon});
    }
  }
  return grid;
}

std::vector<std::vector<std::size_t>> fold_assignment(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
  if (n < k) throw InvalidArgument("cross-validation needs at least as many samples as folds");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed, kFoldStream);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[static_cast<std::size_t>(rng.bounded(i + 1))]);

  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t cursor = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(cursor),
                    order.begin() + static_cast<std::ptrdiff_t>(cursor + size));
    cursor += size;
  }
  return folds;
}

CvReport kfold_cv(const Dataset& ds, std::span<const GridCell> grid, std::size_t k, const SolverConfig& cfg_template) {
  if (grid.empty()) throw InvalidArgument("cross-validation grid is empty");
  cfg_template.validate();
  const auto splits = make_splits(ds.n(), k, cfg_template.seed);

  CvReport report;
  report.grid.assign(grid.begin(), grid.end());
  report.fold_seed = cfg_template.seed;
  report.per_fold.assign(grid.size(), std::vector<double>(k, 0.0));

  const std::size_t threads = cfg_template.threads == 0 ? default_thread_count() : cfg_template.threads;
  Executor pool(threads);
  for (std::size_t f = 0; f < k; ++f) {
    const Dataset train = ds.subset(splits[f].train);
    const Dataset held_out = ds.subset(splits[f].validate);

    // One backbone per distinct epsilon and fold.
    std::map<double, Tensor> backbones;
    for (const auto& cell : grid) {
      if (!backbones.contains(cell.epsilon)) {
        backbones.emplace(cell.epsilon, backbone(train.design(), train.y(), cell.epsilon, ds.dims()).tensor);
      }
    }

    pool.run(grid.size(), [&](std::size_t c) {
      SolverConfig cfg = cfg_template;
      cfg.lambda = grid[c].lambda;
      cfg.tau = grid[c].tau;
      cfg.epsilon = grid[c].epsilon;
      cfg.threads = 1;
      double score = std::numeric_limits<double>::infinity();
      try {
        const FitResult r = fit_from_backbone(backbones.at(cfg.epsilon), cfg);
        score = mse(held_out.y(), predict(r.w_hat, held_out));
      } catch (const DivergenceError&) {
        // A diverging cell can never be selected.
      }
      report.per_fold[c][f] = score;
    });
    report.fits += grid.size();
  }

  report.per_cell.resize(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    double sum = 0.0;
    for (double v : report.per_fold[c]) sum += v;
    report.per_cell[c] = sum / static_cast<double>(k);
  }
  report.selected = argmin_with_ties(report.per_cell, [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });
  return report;
}

BaselineCvResult kfold_cv_baseline(const Dataset& ds, std::span<const double> lambdas, std::size_t k,
                                   const BaselineConfig& cfg_template, std::uint64_t seed) {
  if (lambdas.empty()) throw InvalidArgument("cross-validation grid is empty");
  const auto splits = make_splits(ds.n(), k, seed);
  BaselineCvResult result;
  result.lambdas.assign(lambdas.begin(), lambdas.end());
  result.per_lambda.assign(lambdas.size(), 0.0);
  for (const auto& split : splits) {
    const Dataset train = ds.subset(split.train);
    const Dataset held_out = ds.subset(split.validate);
    for (std::size_t c = 0; c < lambdas.size(); ++c) {
      BaselineConfig cfg = cfg_template;
      cfg.lambda = lambdas[c];
      const LinearFit fit = fit_elastic_net(train.design(), train.y(), cfg);
      result.per_lambda[c] += mse(held_out.y(), held_out.design() * fit.w) / static_cast<double>(k);
    }
  }
  result.selected =
      argmin_with_ties(result.per_lambda, [&](std::size_t a, std::size_t b) { return lambdas[a] < lambdas[b]; });
  return result;
}

double theorem1_bound(const BoundInputs& b) {
  if (!(b.lambda >= 0.0) || !(b.tau >= 0.0)) throw InvalidArgument("bound radii must be non-negative");
  check_dims(b.dims);
  if (!b.rank || *b.rank < 1) throw InvalidArgument("theorem bound needs a rank R >= 1");
  const double p = static_cast<double>(element_count(b.dims));
  return 4.0 * std::sqrt(2.0) * (b.lambda * std::sqrt(p) + b.tau * std::sqrt(static_cast<double>(*b.rank)));
}

double corollary_rank_factor(const std::array<std::size_t, 3>& r) {
  auto term = [](std::size_t a, std::size_t b, std::size_t c) {
    return std::sqrt(static_cast<double>(a) * static_cast<double>(std::min(b, c)));
  };
  return std::max({term(r[0], r[1], r[2]), term(r[1], r[0], r[2]), term(r[2], r[0], r[1])});
}

double corollary1_bound(const BoundInputs& b) {
  if (!(b.lambda >= 0.0) || !(b.tau >= 0.0)) throw InvalidArgument("bound radii must be non-negative");
  check_dims(b.dims);
  if (b.dims.size() != 3) throw InvalidArgument("corollary bound applies to three-mode tensors only");
  if (!b.mode_ranks) throw InvalidArgument("corollary bound needs per-mode ranks");
  const std::size_t p = element_count(b.dims);
  for (std::size_t m = 0; m < 3; ++m) {
    const std::size_t r = (*b.mode_ranks)[m];
    if (r < 1 || r > std::min(b.dims[m], p / b.dims[m])) {
      throw InvalidArgument("mode rank " + std::to_string(m) + " outside [1, min unfolding extent]");
    }
  }
  return 4.0 * std::sqrt(2.0) *
         (b.lambda * std::sqrt(static_cast<double>(p)) + b.tau * corollary_rank_factor(*b.mode_ranks));
}

std::vector<std::size_t> unfolding_ranks(const Tensor& t, double rel_tol) {
  std::vector<std::size_t> ranks;
  for (std::size_t m = 0; m < t.order(); ++m) ranks.push_back(numerical_rank(unfold(t, m), rel_tol));
  return ranks;
}

}  // namespace sltr
