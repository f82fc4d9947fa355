#pragma once

#include "sltr/dataset.hpp"
#include "sltr/error.hpp"
#include "sltr/linalg.hpp"
#include "sltr/prox.hpp"
#include "sltr/tensor.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sltr {

class Executor;

struct SolverConfig {
  double lambda = 1.0;   // l-inf radius around the backbone
  double tau = 1.0;      // spectral radius around the backbone
  double epsilon = 1.0;  // backbone ridge parameter
  double rho = 1.0;      // PPXA relaxation, in (0, 2)
  double gamma = 1.0;    // prox step for the l1 and nuclear terms
  std::size_t max_iter = 1000;
  double tol = 1e-3;
  bool parallel_modes = true;
  bool parallel_prox = true;
  /// Use prox_{4 lambda} for both norm terms, as the published pseudo-code
  /// writes it, instead of `gamma`.
  bool paper_faithful_steps = false;
  /// Seeds the fold assignment when the config is used as a CV template;
  /// the solver itself draws no random numbers.
  std::uint64_t seed = 0;
  /// Worker threads shared by both parallel layers; 0 means
  /// default_thread_count(), 1 forces sequential execution.
  std::size_t threads = 0;

  void validate() const;
};

struct TraceRow {
  std::size_t iteration;
  double relative_change;
  double objective;  // ||W||_1 + ||W||_* of the running iterate
};

struct SubproblemResult {
  Matrix w;
  std::vector<TraceRow> trace;
  std::size_t iterations = 0;
  bool converged = false;
};

/// PPXA iteration exceeded the growth guard or produced non-finite values.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t mode, std::vector<TraceRow> trace)
      : Error(what), mode_(mode), trace_(std::move(trace)) {}

  std::size_t mode() const noexcept { return mode_; }
  const std::vector<TraceRow>& trace() const noexcept { return trace_; }

 private:
  std::size_t mode_;
  std::vector<TraceRow> trace_;
};

/// Solves  min ||W||_1 + ||W||_*  s.t.  ||W - C||_inf <= lambda,
/// ||W - C||_spec <= tau  for one unfolding C of the backbone.
///
/// Four copies are carried, one per term; each sweep applies soft
/// thresholding, singular-value thresholding and the two ball projections to
/// its own copy, averages the four results with equal weights and relaxes
/// the copies and the running iterate by cfg.rho. Iteration stops once the
/// relative Frobenius change of the running iterate is <= cfg.tol. The
/// returned W is retracted radially toward C so that both constraints hold
/// exactly. `inner`, when given, evaluates the four operators concurrently.
SubproblemResult solve_subproblem(const Matrix& center, const SolverConfig& cfg, Executor* inner = nullptr,
                                  std::size_t mode = 0);

struct Timings {
  double backbone_seconds = 0.0;
  std::vector<double> mode_seconds;
  double total_seconds = 0.0;
};

struct FitResult {
  Tensor w_hat;
  std::vector<Tensor> per_mode;
  std::vector<std::vector<TraceRow>> trace;
  std::vector<std::size_t> iterations_used;
  std::vector<bool> converged;
  Timings timings;
};

/// Full estimator: backbone, M independent mode subproblems, average of the
/// folded solutions. Output does not depend on the threading flags.
FitResult fit(const Dataset& ds, const SolverConfig& cfg);

/// Same as fit, starting from a precomputed backbone tensor.
FitResult fit_from_backbone(const Tensor& backbone, const SolverConfig& cfg);

Vector predict(const Tensor& w, std::span<const Tensor> xs);
Vector predict(const Tensor& w, const Dataset& ds);

struct ObjectiveAndGaps {
  double l1;
  double nuclear;
  double linf_gap;  // ||w - c||_inf - lambda, <= 0 when feasible
  double spec_gap;  // ||w - c||_spec - tau
};

ObjectiveAndGaps objective_and_gaps(const Matrix& w, const ConstraintCenter& ctr);

}  // namespace sltr
