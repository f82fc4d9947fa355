#include "sltr/sltr.h"

#include "sltr/baselines.hpp"
#include "sltr/error.hpp"
#include "sltr/evaluation.hpp"
#include "sltr/executor.hpp"
#include "sltr/io.hpp"
#include "sltr/simulate.hpp"
#include "sltr/solver.hpp"

#include <exception>
#include <new>
#include <string>

struct sltr_tensor {
  sltr::Tensor value;
};

struct sltr_dataset {
  sltr::Dataset value;
};

struct sltr_fit {
  sltr::FitResult value;
};

struct sltr_cv_report {
  sltr::CvReport value;
};

namespace {

thread_local std::string last_error;

sltr_status fail(sltr_status status, const char* what) {
  last_error = what;
  return status;
}

template <typename F>
sltr_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return SLTR_OK;
  } catch (const sltr::InvalidArgument& e) {
    return fail(SLTR_ERR_INVALID_ARGUMENT, e.what());
  } catch (const sltr::DivergenceError& e) {
    return fail(SLTR_ERR_DIVERGENCE, e.what());
  } catch (const sltr::NumericalFailure& e) {
    return fail(SLTR_ERR_NUMERICAL, e.what());
  } catch (const sltr::FormatError& e) {
    return fail(SLTR_ERR_FORMAT, e.what());
  } catch (const sltr::IoError& e) {
    return fail(SLTR_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SLTR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SLTR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SLTR_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw sltr::InvalidArgument(what);
}

sltr::Dims dims_from(size_t order, const size_t* dims) {
  require(order == 0 || dims != nullptr, "dims pointer is null");
  return sltr::Dims(dims, dims + order);
}

sltr::SolverConfig to_cpp(const sltr_solver_config& c) {
  sltr::SolverConfig cfg;
  cfg.lambda = c.lambda;
  cfg.tau = c.tau;
  cfg.epsilon = c.epsilon;
  cfg.rho = c.rho;
  cfg.gamma = c.gamma;
  cfg.max_iter = c.max_iter;
  cfg.tol = c.tol;
  cfg.parallel_modes = c.parallel_modes != 0;
  cfg.parallel_prox = c.parallel_prox != 0;
  cfg.paper_faithful_steps = c.paper_faithful_steps != 0;
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  return cfg;
}

const sltr::FitResult& fit_of(const sltr_fit* fit, size_t mode) {
  require(fit != nullptr, "fit handle is null");
  require(mode < fit->value.per_mode.size(), "mode out of range");
  return fit->value;
}

}  // namespace

extern "C" {

const char* sltr_version(void) { return "1.0.0"; }

const char* sltr_status_name(sltr_status status) {
  switch (status) {
    case SLTR_OK: return "ok";
    case SLTR_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SLTR_ERR_NUMERICAL: return "numerical failure";
    case SLTR_ERR_DIVERGENCE: return "divergence";
    case SLTR_ERR_FORMAT: return "format error";
    case SLTR_ERR_IO: return "i/o error";
    case SLTR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* sltr_last_error(void) { return last_error.c_str(); }

size_t sltr_default_threads(void) { return sltr::default_thread_count(); }

// ---- tensors

sltr_status sltr_tensor_new(size_t order, const size_t* dims, const double* data, sltr_tensor** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    sltr::Dims d = dims_from(order, dims);
    sltr::check_dims(d);
    const size_t count = sltr::element_count(d);
    std::vector<double> values = data ? std::vector<double>(data, data + count) : std::vector<double>(count, 0.0);
    *out = new sltr_tensor{sltr::Tensor(std::move(d), std::move(values))};
  });
}

void sltr_tensor_free(sltr_tensor* t) { delete t; }

size_t sltr_tensor_order(const sltr_tensor* t) { return t ? t->value.order() : 0; }

size_t sltr_tensor_dim(const sltr_tensor* t, size_t mode) {
  return t && mode < t->value.order() ? t->value.dim(mode) : 0;
}

size_t sltr_tensor_size(const sltr_tensor* t) { return t ? t->value.size() : 0; }

const double* sltr_tensor_data(const sltr_tensor* t) { return t ? t->value.data().data() : nullptr; }

sltr_status sltr_tensor_read(const char* path, sltr_tensor** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new sltr_tensor{sltr::io::read_tensor(path)};
  });
}

sltr_status sltr_tensor_write(const sltr_tensor* t, const char* path) {
  return guarded([&] {
    require(t != nullptr && path != nullptr, "null argument");
    sltr::io::write_tensor(t->value, path);
  });
}

// ---- datasets

sltr_status sltr_dataset_new(size_t order, const size_t* dims, size_t n, const double* x, const double* y,
                             sltr_dataset** out) {
  return guarded([&] {
    require(out != nullptr && x != nullptr && y != nullptr, "null argument");
    sltr::Dims d = dims_from(order, dims);
    sltr::check_dims(d);
    require(n >= 1, "dataset needs at least one sample");
    const auto p = static_cast<Eigen::Index>(sltr::element_count(d));
    const auto rows = static_cast<Eigen::Index>(n);
    sltr::Matrix design = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(x, rows, p);
    sltr::Vector responses = Eigen::Map<const sltr::Vector>(y, rows);
    *out = new sltr_dataset{sltr::Dataset(std::move(d), std::move(design), std::move(responses))};
  });
}

void sltr_dataset_free(sltr_dataset* ds) { delete ds; }

size_t sltr_dataset_n(const sltr_dataset* ds) { return ds ? ds->value.n() : 0; }

size_t sltr_dataset_order(const sltr_dataset* ds) { return ds ? ds->value.dims().size() : 0; }

size_t sltr_dataset_dim(const sltr_dataset* ds, size_t mode) {
  return ds && mode < ds->value.dims().size() ? ds->value.dims()[mode] : 0;
}

sltr_status sltr_dataset_responses(const sltr_dataset* ds, double* out, size_t len) {
  return guarded([&] {
    require(ds != nullptr && out != nullptr, "null argument");
    require(len >= ds->value.n(), "output buffer too small");
    const auto& y = ds->value.y();
    for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = y[i];
  });
}

sltr_status sltr_dataset_slice(const sltr_dataset* ds, size_t first, size_t count, sltr_dataset** out) {
  return guarded([&] {
    require(ds != nullptr && out != nullptr, "null argument");
    require(count >= 1 && first + count <= ds->value.n(), "slice out of range");
    std::vector<size_t> rows(count);
    for (size_t i = 0; i < count; ++i) rows[i] = first + i;
    *out = new sltr_dataset{ds->value.subset(rows)};
  });
}

sltr_status sltr_dataset_read(const char* path, sltr_dataset** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new sltr_dataset{sltr::io::read_dataset(path)};
  });
}

sltr_status sltr_dataset_write(const sltr_dataset* ds, const char* path) {
  return guarded([&] {
    require(ds != nullptr && path != nullptr, "null argument");
    sltr::io::write_dataset(ds->value, path);
  });
}

// ---- simulation

sltr_status sltr_simulate(const sltr_sim_spec* spec, sltr_dataset** data, sltr_tensor** w_star) {
  return guarded([&] {
    require(spec != nullptr && data != nullptr && w_star != nullptr, "null argument");
    sltr::SimSpec s;
    s.dims = dims_from(spec->order, spec->dims);
    s.n = spec->n;
    s.sparsity_pct = spec->sparsity_pct;
    s.noise_alpha = spec->noise_alpha;
    s.seed = spec->seed;
    if (spec->low_rank > 0) s.low_rank = spec->low_rank;
    sltr::Simulation sim = sltr::generate(s);
    auto* ds = new sltr_dataset{std::move(sim.data)};
    try {
      *w_star = new sltr_tensor{std::move(sim.w_star)};
    } catch (...) {
      delete ds;
      throw;
    }
    *data = ds;
  });
}

// ---- estimator

void sltr_solver_config_init(sltr_solver_config* cfg) {
  if (cfg == nullptr) return;
  const sltr::SolverConfig d;
  *cfg = sltr_solver_config{d.lambda, d.tau, d.epsilon, d.rho, d.gamma, d.max_iter, d.tol, d.parallel_modes ? 1 : 0,
                            d.parallel_prox ? 1 : 0, d.paper_faithful_steps ? 1 : 0, d.seed, d.threads};
}

sltr_status sltr_fit_new(const sltr_dataset* ds, const sltr_solver_config* cfg, sltr_fit** out) {
  return guarded([&] {
    require(ds != nullptr && cfg != nullptr && out != nullptr, "null argument");
    *out = new sltr_fit{sltr::fit(ds->value, to_cpp(*cfg))};
  });
}

void sltr_fit_free(sltr_fit* fit) { delete fit; }

sltr_status sltr_fit_coefficients(const sltr_fit* fit, sltr_tensor** out) {
  return guarded([&] {
    require(fit != nullptr && out != nullptr, "null argument");
    *out = new sltr_tensor{fit->value.w_hat};
  });
}

sltr_status sltr_fit_mode_coefficients(const sltr_fit* fit, size_t mode, sltr_tensor** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new sltr_tensor{fit_of(fit, mode).per_mode[mode]};
  });
}

size_t sltr_fit_modes(const sltr_fit* fit) { return fit ? fit->value.per_mode.size() : 0; }

size_t sltr_fit_iterations(const sltr_fit* fit, size_t mode) {
  return fit && mode < fit->value.iterations_used.size() ? fit->value.iterations_used[mode] : 0;
}

int sltr_fit_converged(const sltr_fit* fit, size_t mode) {
  return fit && mode < fit->value.converged.size() && fit->value.converged[mode] ? 1 : 0;
}

size_t sltr_fit_trace_length(const sltr_fit* fit, size_t mode) {
  return fit && mode < fit->value.trace.size() ? fit->value.trace[mode].size() : 0;
}

sltr_status sltr_fit_trace_row(const sltr_fit* fit, size_t mode, size_t row, size_t* iteration,
                               double* relative_change, double* objective) {
  return guarded([&] {
    const auto& trace = fit_of(fit, mode).trace[mode];
    require(row < trace.size(), "trace row out of range");
    if (iteration) *iteration = trace[row].iteration;
    if (relative_change) *relative_change = trace[row].relative_change;
    if (objective) *objective = trace[row].objective;
  });
}

double sltr_fit_backbone_seconds(const sltr_fit* fit) { return fit ? fit->value.timings.backbone_seconds : 0.0; }

double sltr_fit_mode_seconds(const sltr_fit* fit, size_t mode) {
  return fit && mode < fit->value.timings.mode_seconds.size() ? fit->value.timings.mode_seconds[mode] : 0.0;
}

double sltr_fit_total_seconds(const sltr_fit* fit) { return fit ? fit->value.timings.total_seconds : 0.0; }

sltr_status sltr_predict(const sltr_tensor* w, const sltr_dataset* ds, double* out, size_t len) {
  return guarded([&] {
    require(w != nullptr && ds != nullptr && out != nullptr, "null argument");
    require(len >= ds->value.n(), "output buffer too small");
    const sltr::Vector yhat = sltr::predict(w->value, ds->value);
    for (Eigen::Index i = 0; i < yhat.size(); ++i) out[i] = yhat[i];
  });
}

// ---- baselines

void sltr_baseline_config_init(sltr_baseline_config* cfg) {
  if (cfg == nullptr) return;
  const sltr::BaselineConfig d;
  *cfg = sltr_baseline_config{d.lambda, d.l1_ratio, d.max_iter, d.tol};
}

sltr_status sltr_fit_elastic_net(const sltr_dataset* ds, const sltr_baseline_config* cfg, sltr_tensor** out) {
  return guarded([&] {
    require(ds != nullptr && cfg != nullptr && out != nullptr, "null argument");
    const sltr::BaselineConfig c{cfg->lambda, cfg->l1_ratio, cfg->max_iter, cfg->tol};
    const sltr::LinearFit f = sltr::fit_elastic_net(ds->value.design(), ds->value.y(), c);
    *out = new sltr_tensor{sltr::tensorize(f.w, ds->value.dims())};
  });
}

// ---- evaluation

sltr_status sltr_mse(const double* y, const double* yhat, size_t n, double* out) {
  return guarded([&] {
    require(y != nullptr && yhat != nullptr && out != nullptr, "null argument");
    const auto len = static_cast<Eigen::Index>(n);
    *out = sltr::mse(Eigen::Map<const sltr::Vector>(y, len), Eigen::Map<const sltr::Vector>(yhat, len));
  });
}

sltr_status sltr_coefficient_error(const sltr_tensor* w_hat, const sltr_tensor* w_star, double* out) {
  return guarded([&] {
    require(w_hat != nullptr && w_star != nullptr && out != nullptr, "null argument");
    *out = sltr::coefficient_error(w_hat->value, w_star->value);
  });
}

sltr_status sltr_auc(const double* scores, const int* labels, size_t n, double* out) {
  return guarded([&] {
    require(scores != nullptr && labels != nullptr && out != nullptr, "null argument");
    *out = sltr::auc(Eigen::Map<const sltr::Vector>(scores, static_cast<Eigen::Index>(n)), std::span(labels, n));
  });
}

sltr_status sltr_default_grid(sltr_grid_cell* out, size_t cap, size_t* count) {
  return guarded([&] {
    require(count != nullptr, "null argument");
    const auto grid = sltr::default_grid();
    *count = grid.size();
    require(out != nullptr || cap == 0, "null output with non-zero capacity");
    for (size_t i = 0; i < grid.size() && i < cap; ++i) out[i] = {grid[i].lambda, grid[i].tau, grid[i].epsilon};
  });
}

sltr_status sltr_kfold_cv(const sltr_dataset* ds, const sltr_grid_cell* grid, size_t cells, size_t folds,
                          const sltr_solver_config* tmpl, sltr_cv_report** out) {
  return guarded([&] {
    require(ds != nullptr && tmpl != nullptr && out != nullptr, "null argument");
    require(grid != nullptr || cells == 0, "null grid");
    std::vector<sltr::GridCell> g;
    for (size_t i = 0; i < cells; ++i) g.push_back({grid[i].lambda, grid[i].tau, grid[i].epsilon});
    *out = new sltr_cv_report{sltr::kfold_cv(ds->value, g, folds, to_cpp(*tmpl))};
  });
}

void sltr_cv_report_free(sltr_cv_report* report) { delete report; }

size_t sltr_cv_report_cells(const sltr_cv_report* report) { return report ? report->value.grid.size() : 0; }

sltr_status sltr_cv_report_cell(const sltr_cv_report* report, size_t index, sltr_grid_cell* cell, double* mean_mse) {
  return guarded([&] {
    require(report != nullptr, "null report");
    require(index < report->value.grid.size(), "cell index out of range");
    const auto& c = report->value.grid[index];
    if (cell) *cell = {c.lambda, c.tau, c.epsilon};
    if (mean_mse) *mean_mse = report->value.per_cell[index];
  });
}

size_t sltr_cv_report_selected(const sltr_cv_report* report) { return report ? report->value.selected : 0; }

uint64_t sltr_cv_report_fold_seed(const sltr_cv_report* report) { return report ? report->value.fold_seed : 0; }

sltr_status sltr_theorem1_bound(double lambda, double tau, size_t order, const size_t* dims, size_t rank, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    sltr::BoundInputs b{lambda, tau, dims_from(order, dims), rank, std::nullopt};
    *out = sltr::theorem1_bound(b);
  });
}

sltr_status sltr_corollary1_bound(double lambda, double tau, const size_t dims[3], const size_t ranks[3], double* out) {
  return guarded([&] {
    require(dims != nullptr && ranks != nullptr && out != nullptr, "null argument");
    sltr::BoundInputs b{lambda, tau, dims_from(3, dims), std::nullopt, std::array<size_t, 3>{ranks[0], ranks[1], ranks[2]}};
    *out = sltr::corollary1_bound(b);
  });
}

}  // extern "C"
