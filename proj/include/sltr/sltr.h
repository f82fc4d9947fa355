/*
 * C interface to the sparse + low-rank tensor regression library.
 *
 * Every object is an opaque handle owned by the caller and released with the
 * matching *_free function. Functions that can fail return an sltr_status;
 * on failure sltr_last_error() describes the problem for the calling thread.
 * Mode indices are zero-based.
 */
#ifndef SLTR_SLTR_H
#define SLTR_SLTR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SLTR_API __declspec(dllexport)
#else
#define SLTR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sltr_status {
  SLTR_OK = 0,
  SLTR_ERR_INVALID_ARGUMENT = 1,
  SLTR_ERR_NUMERICAL = 2,
  SLTR_ERR_DIVERGENCE = 3,
  SLTR_ERR_FORMAT = 4,
  SLTR_ERR_IO = 5,
  SLTR_ERR_INTERNAL = 6
} sltr_status;

typedef struct sltr_tensor sltr_tensor;
typedef struct sltr_dataset sltr_dataset;
typedef struct sltr_fit sltr_fit;
typedef struct sltr_cv_report sltr_cv_report;

SLTR_API const char* sltr_version(void);
SLTR_API const char* sltr_status_name(sltr_status status);
/* Message of the last failed call on this thread; "" if none. */
SLTR_API const char* sltr_last_error(void);
/* SLTR_THREADS if set, otherwise the hardware concurrency. */
SLTR_API size_t sltr_default_threads(void);

/* ---- tensors ---------------------------------------------------------- */

/* data may be NULL for a zero tensor; otherwise prod(dims) doubles in
 * canonical (mode-0 fastest) order. */
SLTR_API sltr_status sltr_tensor_new(size_t order, const size_t* dims, const double* data, sltr_tensor** out);
SLTR_API void sltr_tensor_free(sltr_tensor* t);
SLTR_API size_t sltr_tensor_order(const sltr_tensor* t);
SLTR_API size_t sltr_tensor_dim(const sltr_tensor* t, size_t mode);
SLTR_API size_t sltr_tensor_size(const sltr_tensor* t);
SLTR_API const double* sltr_tensor_data(const sltr_tensor* t);
SLTR_API sltr_status sltr_tensor_read(const char* path, sltr_tensor** out);
SLTR_API sltr_status sltr_tensor_write(const sltr_tensor* t, const char* path);

/* ---- datasets --------------------------------------------------------- */

/* x holds n samples back to back, each prod(dims) doubles in canonical order. */
SLTR_API sltr_status sltr_dataset_new(size_t order, const size_t* dims, size_t n, const double* x, const double* y,
                                      sltr_dataset** out);
SLTR_API void sltr_dataset_free(sltr_dataset* ds);
SLTR_API size_t sltr_dataset_n(const sltr_dataset* ds);
SLTR_API size_t sltr_dataset_order(const sltr_dataset* ds);
SLTR_API size_t sltr_dataset_dim(const sltr_dataset* ds, size_t mode);
/* Copies the n responses into out (capacity len). */
SLTR_API sltr_status sltr_dataset_responses(const sltr_dataset* ds, double* out, size_t len);
/* Rows [first, first + count) as a new dataset. */
SLTR_API sltr_status sltr_dataset_slice(const sltr_dataset* ds, size_t first, size_t count, sltr_dataset** out);
SLTR_API sltr_status sltr_dataset_read(const char* path, sltr_dataset** out);
SLTR_API sltr_status sltr_dataset_write(const sltr_dataset* ds, const char* path);

/* ---- simulation ------------------------------------------------------- */

typedef struct sltr_sim_spec {
  size_t order;
  const size_t* dims;
  size_t n;
  double sparsity_pct;
  double noise_alpha;
  uint64_t seed;
  size_t low_rank; /* 0: i.i.d. normal W*, otherwise number of rank-1 terms */
} sltr_sim_spec;

SLTR_API sltr_status sltr_simulate(const sltr_sim_spec* spec, sltr_dataset** data, sltr_tensor** w_star);

/* ---- estimator -------------------------------------------------------- */

typedef struct sltr_solver_config {
  double lambda;
  double tau;
  double epsilon;
  double rho;
  double gamma;
  size_t max_iter;
  double tol;
  int parallel_modes;
  int parallel_prox;
  int paper_faithful_steps;
  uint64_t seed;
  size_t threads; /* 0: sltr_default_threads(); 1: sequential */
} sltr_solver_config;

SLTR_API void sltr_solver_config_init(sltr_solver_config* cfg);

SLTR_API sltr_status sltr_fit_new(const sltr_dataset* ds, const sltr_solver_config* cfg, sltr_fit** out);
SLTR_API void sltr_fit_free(sltr_fit* fit);
SLTR_API sltr_status sltr_fit_coefficients(const sltr_fit* fit, sltr_tensor** out);
SLTR_API sltr_status sltr_fit_mode_coefficients(const sltr_fit* fit, size_t mode, sltr_tensor** out);
SLTR_API size_t sltr_fit_modes(const sltr_fit* fit);
SLTR_API size_t sltr_fit_iterations(const sltr_fit* fit, size_t mode);
SLTR_API int sltr_fit_converged(const sltr_fit* fit, size_t mode);
SLTR_API size_t sltr_fit_trace_length(const sltr_fit* fit, size_t mode);
SLTR_API sltr_status sltr_fit_trace_row(const sltr_fit* fit, size_t mode, size_t row, size_t* iteration,
                                        double* relative_change, double* objective);
SLTR_API double sltr_fit_backbone_seconds(const sltr_fit* fit);
SLTR_API double sltr_fit_mode_seconds(const sltr_fit* fit, size_t mode);
SLTR_API double sltr_fit_total_seconds(const sltr_fit* fit);

/* out receives one prediction per sample (capacity len >= n). */
SLTR_API sltr_status sltr_predict(const sltr_tensor* w, const sltr_dataset* ds, double* out, size_t len);

/* ---- baselines -------------------------------------------------------- */

typedef struct sltr_baseline_config {
  double lambda;
  double l1_ratio; /* 1: lasso */
  size_t max_iter;
  double tol;
} sltr_baseline_config;

SLTR_API void sltr_baseline_config_init(sltr_baseline_config* cfg);
SLTR_API sltr_status sltr_fit_elastic_net(const sltr_dataset* ds, const sltr_baseline_config* cfg, sltr_tensor** out);

/* ---- evaluation ------------------------------------------------------- */

SLTR_API sltr_status sltr_mse(const double* y, const double* yhat, size_t n, double* out);
SLTR_API sltr_status sltr_coefficient_error(const sltr_tensor* w_hat, const sltr_tensor* w_star, double* out);
SLTR_API sltr_status sltr_auc(const double* scores, const int* labels, size_t n, double* out);

typedef struct sltr_grid_cell {
  double lambda;
  double tau;
  double epsilon;
} sltr_grid_cell;

/* Writes up to cap cells; *count receives the full grid size. */
SLTR_API sltr_status sltr_default_grid(sltr_grid_cell* out, size_t cap, size_t* count);
/* Folds are seeded by tmpl->seed. */
SLTR_API sltr_status sltr_kfold_cv(const sltr_dataset* ds, const sltr_grid_cell* grid, size_t cells, size_t folds,
                                   const sltr_solver_config* tmpl, sltr_cv_report** out);
SLTR_API void sltr_cv_report_free(sltr_cv_report* report);
SLTR_API size_t sltr_cv_report_cells(const sltr_cv_report* report);
SLTR_API sltr_status sltr_cv_report_cell(const sltr_cv_report* report, size_t index, sltr_grid_cell* cell,
                                         double* mean_mse);
SLTR_API size_t sltr_cv_report_selected(const sltr_cv_report* report);
SLTR_API uint64_t sltr_cv_report_fold_seed(const sltr_cv_report* report);

SLTR_API sltr_status sltr_theorem1_bound(double lambda, double tau, size_t order, const size_t* dims, size_t rank,
                                         double* out);
SLTR_API sltr_status sltr_corollary1_bound(double lambda, double tau, const size_t dims[3], const size_t ranks[3],
                                           double* out);

#ifdef __cplusplus
}
#endif

#endif /* SLTR_SLTR_H */
