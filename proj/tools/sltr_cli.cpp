// Command-line front end. Talks to the library only through the C API.

#include "sltr/sltr.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(sltr_status status) {
  if (status != SLTR_OK) {
    throw CliError(std::string(sltr_status_name(status)) + ": " + sltr_last_error());
  }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using TensorPtr = std::unique_ptr<sltr_tensor, Deleter<sltr_tensor, sltr_tensor_free>>;
using DatasetPtr = std::unique_ptr<sltr_dataset, Deleter<sltr_dataset, sltr_dataset_free>>;
using FitPtr = std::unique_ptr<sltr_fit, Deleter<sltr_fit, sltr_fit_free>>;
using ReportPtr = std::unique_ptr<sltr_cv_report, Deleter<sltr_cv_report, sltr_cv_report_free>>;

TensorPtr read_tensor(const std::string& path) {
  sltr_tensor* t = nullptr;
  check(sltr_tensor_read(path.c_str(), &t));
  return TensorPtr(t);
}

DatasetPtr read_dataset(const std::string& path) {
  sltr_dataset* d = nullptr;
  check(sltr_dataset_read(path.c_str(), &d));
  return DatasetPtr(d);
}

std::vector<size_t> parse_dims(const std::string& text) {
  std::vector<size_t> dims;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, token.find(',') != std::string::npos ? ',' : 'x')) {
    if (token.empty()) continue;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(token, &used);
    } catch (const std::exception&) {
      throw CliError("invalid dims '" + text + "'");
    }
    if (used != token.size() || v == 0) throw CliError("invalid dims '" + text + "'");
    dims.push_back(static_cast<size_t>(v));
  }
  if (dims.empty()) throw CliError("invalid dims '" + text + "'");
  return dims;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, sep)) {
    if (!token.empty()) parts.push_back(token);
  }
  return parts;
}

std::string dims_text(const std::vector<size_t>& dims) {
  std::string s;
  for (size_t i = 0; i < dims.size(); ++i) s += (i ? "x" : "") + std::to_string(dims[i]);
  return s;
}

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool has_dataset_magic(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[8] = {};
  in.read(magic, sizeof magic);
  return in.gcount() == 8 && std::memcmp(magic, "SLTRDS1\n", 8) == 0;
}

// Whitespace-separated numbers; '#' starts a comment.
std::vector<double> read_numbers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open " + path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        throw CliError("non-numeric value '" + token + "' in " + path);
      }
      if (used != token.size()) throw CliError("non-numeric value '" + token + "' in " + path);
      values.push_back(v);
    }
  }
  return values;
}

std::vector<double> responses_or_numbers(const std::string& path) {
  if (!has_dataset_magic(path)) return read_numbers(path);
  auto ds = read_dataset(path);
  std::vector<double> y(sltr_dataset_n(ds.get()));
  check(sltr_dataset_responses(ds.get(), y.data(), y.size()));
  return y;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::trunc);
      if (!file_) throw CliError("cannot create " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct SolverFlags {
  sltr_solver_config cfg{};
  bool sequential = false;
  bool paper_faithful = false;

  SolverFlags() { sltr_solver_config_init(&cfg); }

  void attach(CLI::App* app) {
    app->add_option("--lambda", cfg.lambda, "l-inf radius around the backbone")->capture_default_str();
    app->add_option("--tau", cfg.tau, "spectral radius around the backbone")->capture_default_str();
    app->add_option("--epsilon", cfg.epsilon, "backbone ridge parameter")->capture_default_str();
    app->add_option("--rho", cfg.rho, "relaxation in (0, 2)")->capture_default_str();
    app->add_option("--gamma", cfg.gamma, "prox step size")->capture_default_str();
    app->add_option("--max-iter", cfg.max_iter, "iteration cap per mode")->capture_default_str();
    app->add_option("--tol", cfg.tol, "relative-change stopping tolerance")->capture_default_str();
    app->add_option("--threads", cfg.threads, "worker threads (0 = SLTR_THREADS or hardware)")->capture_default_str();
    app->add_flag("--sequential", sequential, "disable both parallel layers");
    app->add_flag("--paper-faithful-steps", paper_faithful, "use prox steps 4*lambda for both norm terms");
  }

  sltr_solver_config resolved() const {
    sltr_solver_config c = cfg;
    c.paper_faithful_steps = paper_faithful ? 1 : 0;
    if (sequential) {
      c.threads = 1;
      c.parallel_modes = 0;
      c.parallel_prox = 0;
    }
    return c;
  }
};

// ---- subcommands

struct SimulateArgs {
  std::string dims;
  size_t n = 0;
  double sparsity = 80.0;
  double alpha = 0.1;
  uint64_t seed = 0;
  size_t low_rank = 0;
  std::string out;
  std::string truth;
};

void run_simulate(const SimulateArgs& a) {
  const auto dims = parse_dims(a.dims);
  sltr_sim_spec spec{dims.size(), dims.data(), a.n, a.sparsity, a.alpha, a.seed, a.low_rank};
  sltr_dataset* ds = nullptr;
  sltr_tensor* w = nullptr;
  check(sltr_simulate(&spec, &ds, &w));
  DatasetPtr data(ds);
  TensorPtr truth(w);
  check(sltr_dataset_write(data.get(), a.out.c_str()));
  const std::string truth_path = a.truth.empty() ? a.out + ".wstar" : a.truth;
  check(sltr_tensor_write(truth.get(), truth_path.c_str()));
}

struct FitArgs {
  std::string data;
  std::string out;
  std::string trace;
  SolverFlags solver;
};

void run_fit(const FitArgs& a) {
  auto ds = read_dataset(a.data);
  const sltr_solver_config cfg = a.solver.resolved();
  sltr_fit* raw = nullptr;
  check(sltr_fit_new(ds.get(), &cfg, &raw));
  FitPtr fit(raw);

  sltr_tensor* w = nullptr;
  check(sltr_fit_coefficients(fit.get(), &w));
  TensorPtr coef(w);
  check(sltr_tensor_write(coef.get(), a.out.c_str()));

  Output out(a.trace);
  auto& os = out.stream();
  os << "mode\titeration\trelative_change\tobjective\n";
  for (size_t m = 0; m < sltr_fit_modes(fit.get()); ++m) {
    for (size_t r = 0; r < sltr_fit_trace_length(fit.get(), m); ++r) {
      size_t it = 0;
      double change = 0.0, objective = 0.0;
      check(sltr_fit_trace_row(fit.get(), m, r, &it, &change, &objective));
      os << m << '\t' << it << '\t' << real(change) << '\t' << real(objective) << '\n';
    }
  }
  for (size_t m = 0; m < sltr_fit_modes(fit.get()); ++m) {
    if (!sltr_fit_converged(fit.get(), m)) {
      std::cerr << "sltr: warning: mode " << m << " stopped at max-iter " << sltr_fit_iterations(fit.get(), m)
                << " without meeting tol\n";
    }
  }
}

struct PredictArgs {
  std::string model;
  std::string data;
  std::string out;
};

void run_predict(const PredictArgs& a) {
  auto w = read_tensor(a.model);
  auto ds = read_dataset(a.data);
  std::vector<double> yhat(sltr_dataset_n(ds.get()));
  check(sltr_predict(w.get(), ds.get(), yhat.data(), yhat.size()));
  Output out(a.out);
  for (double v : yhat) out.stream() << real(v) << '\n';
}

struct CvArgs {
  std::string data;
  std::string grid_file;
  size_t folds = 5;
  uint64_t seed = 0;
  std::string out;
  SolverFlags solver;
};

std::vector<sltr_grid_cell> read_grid(const std::string& path) {
  if (path.empty()) {
    size_t count = 0;
    check(sltr_default_grid(nullptr, 0, &count));
    std::vector<sltr_grid_cell> grid(count);
    check(sltr_default_grid(grid.data(), grid.size(), &count));
    return grid;
  }
  std::ifstream in(path);
  if (!in) throw CliError("cannot open " + path);
  std::vector<sltr_grid_cell> grid;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    std::string token;
    while (fields >> token) tokens.push_back(token);
    if (tokens.empty()) continue;
    if (tokens.size() == 3 && tokens[0] == "lambda") continue;  // header row
    if (tokens.size() != 3) throw CliError(path + ":" + std::to_string(line_no) + ": expected lambda tau epsilon");
    try {
      grid.push_back({std::stod(tokens[0]), std::stod(tokens[1]), std::stod(tokens[2])});
    } catch (const std::exception&) {
      throw CliError(path + ":" + std::to_string(line_no) + ": non-numeric grid entry");
    }
  }
  return grid;
}

void run_cv(const CvArgs& a) {
  auto ds = read_dataset(a.data);
  const auto grid = read_grid(a.grid_file);
  sltr_solver_config cfg = a.solver.resolved();
  cfg.seed = a.seed;
  sltr_cv_report* raw = nullptr;
  check(sltr_kfold_cv(ds.get(), grid.data(), grid.size(), a.folds, &cfg, &raw));
  ReportPtr report(raw);

  Output out(a.out);
  auto& os = out.stream();
  const size_t selected = sltr_cv_report_selected(report.get());
  os << "lambda\ttau\tepsilon\tmean_mse\tselected\n";
  for (size_t i = 0; i < sltr_cv_report_cells(report.get()); ++i) {
    sltr_grid_cell cell{};
    double score = 0.0;
    check(sltr_cv_report_cell(report.get(), i, &cell, &score));
    os << real(cell.lambda) << '\t' << real(cell.tau) << '\t' << real(cell.epsilon) << '\t' << real(score) << '\t'
       << (i == selected ? 1 : 0) << '\n';
  }
}

struct BenchArgs {
  std::string dims_list = "10x10x5,15x15x5,20x20x5";
  size_t trials = 20;
  double sparsity = 80.0;
  double alpha = 0.1;
  size_t n = 0;
  uint64_t seed = 0;
  std::string out;
  SolverFlags solver;
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    for (double x : v) m.variance += (x - m.mean) * (x - m.mean);
    m.variance /= static_cast<double>(v.size() - 1);
  }
  return m;
}

void run_bench(const BenchArgs& a) {
  if (a.trials < 1) throw CliError("--trials must be at least 1");
  Output out(a.out);
  auto& os = out.stream();
  os << "dims\tn\tvariant\tthreads\ttrials\tmean_seconds\tvariance_seconds\n";
  const size_t parallel_threads = a.solver.cfg.threads == 0 ? sltr_default_threads() : a.solver.cfg.threads;
  for (const auto& entry : split(a.dims_list, ',')) {
    const auto dims = parse_dims(entry);
    size_t p = 1;
    for (size_t d : dims) p *= d;
    // Sample-size rule of the timing experiments: 50% of P for matrices, 8% otherwise.
    const size_t n = a.n > 0 ? a.n : std::max<size_t>(1, static_cast<size_t>(std::llround((dims.size() == 2 ? 0.5 : 0.08) * static_cast<double>(p))));

    std::vector<double> sequential_times, parallel_times;
    for (size_t t = 0; t < a.trials; ++t) {
      sltr_sim_spec spec{dims.size(), dims.data(), n, a.sparsity, a.alpha, a.seed + t, 0};
      sltr_dataset* ds_raw = nullptr;
      sltr_tensor* w_raw = nullptr;
      check(sltr_simulate(&spec, &ds_raw, &w_raw));
      DatasetPtr ds(ds_raw);
      TensorPtr truth(w_raw);

      for (bool parallel : {false, true}) {
        sltr_solver_config cfg = a.solver.resolved();
        cfg.threads = parallel ? parallel_threads : 1;
        cfg.parallel_modes = parallel ? 1 : 0;
        cfg.parallel_prox = parallel ? 1 : 0;
        sltr_fit* fit_raw = nullptr;
        check(sltr_fit_new(ds.get(), &cfg, &fit_raw));
        FitPtr fit(fit_raw);
        (parallel ? parallel_times : sequential_times).push_back(sltr_fit_total_seconds(fit.get()));
      }
    }
    for (bool parallel : {false, true}) {
      const Moments m = moments(parallel ? parallel_times : sequential_times);
      os << dims_text(dims) << '\t' << n << '\t' << (parallel ? "parallel" : "sequential") << '\t'
         << (parallel ? parallel_threads : 1) << '\t' << a.trials << '\t' << real(m.mean) << '\t' << real(m.variance)
         << '\n';
    }
  }
}

struct EvalArgs {
  std::string pred;
  std::string truth;
  std::string metric = "mse";
};

void run_eval(const EvalArgs& a) {
  double value = 0.0;
  if (a.metric == "ce") {
    auto w_hat = read_tensor(a.pred);
    auto w_star = read_tensor(a.truth);
    check(sltr_coefficient_error(w_hat.get(), w_star.get(), &value));
  } else {
    const auto pred = read_numbers(a.pred);
    const auto truth = responses_or_numbers(a.truth);
    if (pred.size() != truth.size()) {
      throw CliError("prediction count " + std::to_string(pred.size()) + " differs from truth count " +
                     std::to_string(truth.size()));
    }
    if (a.metric == "mse") {
      check(sltr_mse(truth.data(), pred.data(), pred.size(), &value));
    } else {
      std::vector<int> labels;
      for (double v : truth) {
        if (v != 0.0 && v != 1.0) throw CliError("auc labels must be 0 or 1");
        labels.push_back(static_cast<int>(v));
      }
      check(sltr_auc(pred.data(), labels.data(), pred.size(), &value));
    }
  }
  std::cout << real(value) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse and low-rank tensor regression"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sltr_version());

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic dataset and its true coefficient");
  simulate->add_option("--dims", sim.dims, "tensor shape, e.g. 20x20x5")->required();
  simulate->add_option("--n", sim.n, "number of samples")->required();
  simulate->add_option("--sparsity", sim.sparsity, "percent of coefficient entries set to zero")->capture_default_str();
  simulate->add_option("--alpha", sim.alpha, "noise scale")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "generator seed")->capture_default_str();
  simulate->add_option("--low-rank", sim.low_rank, "rank-1 terms in the coefficient (0 = i.i.d.)")->capture_default_str();
  simulate->add_option("--out", sim.out, "dataset file")->required();
  simulate->add_option("--truth", sim.truth, "coefficient file (default <out>.wstar)");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "estimate the coefficient tensor");
  fit_cmd->add_option("--data", fit.data, "dataset file")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--out", fit.out, "coefficient tensor file")->required();
  fit_cmd->add_option("--trace", fit.trace, "trace table file (default stdout)");
  fit.solver.attach(fit_cmd);

  PredictArgs pred;
  auto* predict = app.add_subcommand("predict", "predict responses with a fitted coefficient");
  predict->add_option("--model", pred.model, "coefficient tensor file")->required()->check(CLI::ExistingFile);
  predict->add_option("--data", pred.data, "dataset file")->required()->check(CLI::ExistingFile);
  predict->add_option("--out", pred.out, "predictions file (default stdout)");

  CvArgs cv;
  auto* cv_cmd = app.add_subcommand("cv", "k-fold cross-validation over a parameter grid");
  cv_cmd->add_option("--data", cv.data, "dataset file")->required()->check(CLI::ExistingFile);
  cv_cmd->add_option("--grid-file", cv.grid_file, "lines of 'lambda tau epsilon' (default built-in grid)")
      ->check(CLI::ExistingFile);
  cv_cmd->add_option("--folds", cv.folds, "fold count")->capture_default_str();
  cv_cmd->add_option("--seed", cv.seed, "fold assignment seed")->capture_default_str();
  cv_cmd->add_option("--out", cv.out, "report file (default stdout)");
  cv.solver.attach(cv_cmd);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "time sequential and parallel fits on simulated data");
  bench_cmd->add_option("--dims-list", bench.dims_list, "comma-separated shapes")->capture_default_str();
  bench_cmd->add_option("--trials", bench.trials, "trials per shape")->capture_default_str();
  bench_cmd->add_option("--sparsity", bench.sparsity, "percent of zero coefficients")->capture_default_str();
  bench_cmd->add_option("--alpha", bench.alpha, "noise scale")->capture_default_str();
  bench_cmd->add_option("--n", bench.n, "samples (default 50% of P for 2-mode, 8% otherwise)");
  bench_cmd->add_option("--seed", bench.seed, "first trial seed")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "table file (default stdout)");
  bench.solver.attach(bench_cmd);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "score predictions or coefficients");
  eval_cmd->add_option("--pred", eval.pred, "predictions text file, or tensor file for ce")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--truth", eval.truth, "responses/labels (text or dataset), or tensor file for ce")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--metric", eval.metric, "mse, ce or auc")
      ->check(CLI::IsMember({"mse", "ce", "auc"}))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) run_simulate(sim);
    else if (*fit_cmd) run_fit(fit);
    else if (*predict) run_predict(pred);
    else if (*cv_cmd) run_cv(cv);
    else if (*bench_cmd) run_bench(bench);
    else if (*eval_cmd) run_eval(eval);
  } catch (const std::exception& e) {
    std::cerr << "sltr: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
