#include "sltr/linalg.hpp"

#include "sltr/error.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace sltr {

namespace {

void require_finite(const Matrix& a, const char* op) {
  if (!a.allFinite()) throw NumericalFailure(std::string(op) + ": non-finite input");
}

// Divide and conquer; Eigen falls back to one-sided Jacobi below 16 columns.
template <int Options>
Eigen::BDCSVD<Matrix> run_svd(const Matrix& a, const char* op) {
  require_finite(a, op);
  Eigen::BDCSVD<Matrix> solver(a, Options);
  if (solver.info() != Eigen::Success) throw NumericalFailure(std::string(op) + ": SVD did not converge");
  return solver;
}

}  // namespace

SvdFactors svd(const Matrix& a) {
  auto solver = run_svd<Eigen::ComputeThinU | Eigen::ComputeThinV>(a, "svd");
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

Vector singular_values(const Matrix& a) { return run_svd<0>(a, "singular_values").singularValues(); }

double spectral_norm(const Matrix& a) {
  const Vector s = singular_values(a);
  return s.size() == 0 ? 0.0 : s[0];
}

double nuclear_norm(const Matrix& a) { return singular_values(a).sum(); }

std::size_t numerical_rank(const Matrix& a, double rel_tol) {
  const Vector s = singular_values(a);
  if (s.size() == 0 || s[0] == 0.0) return 0;
  const double cut = rel_tol * s[0];
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cut) ++r;
  }
  return r;
}

double tensor_nuclear_norm(const Tensor& t) {
  if (t.order() < 2) throw InvalidArgument("tensor nuclear norm needs order >= 2");
  double total = 0.0;
  for (std::size_t m = 0; m < t.order(); ++m) total += nuclear_norm(unfold(t, m));
  return total / static_cast<double>(t.order());
}

Backbone backbone(const Matrix& x, const Vector& y, double epsilon, const Dims& dims, BackboneRoute route) {
  check_dims(dims);
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("backbone epsilon must be positive");
  if (x.rows() != y.size()) throw InvalidArgument("backbone: design rows differ from response length");
  if (static_cast<std::size_t>(x.cols()) != element_count(dims)) {
    throw InvalidArgument("backbone: design columns differ from dims product");
  }
  require_finite(x, "backbone");
  if (!y.allFinite()) throw NumericalFailure("backbone: non-finite response");

  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (route == BackboneRoute::automatic) route = p > n ? BackboneRoute::woodbury : BackboneRoute::direct;

  Vector w;
  if (route == BackboneRoute::direct) {
    Matrix gram = Matrix::Identity(p, p) * epsilon;
    gram.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
    Eigen::LLT<Matrix> llt(gram.selfadjointView<Eigen::Lower>());
    if (llt.info() != Eigen::Success) throw NumericalFailure("backbone: ridge system is not positive definite");
    w = llt.solve(x.transpose() * y);
  } else {
    Matrix kernel = Matrix::Identity(n, n) * epsilon;
    kernel.selfadjointView<Eigen::Lower>().rankUpdate(x);
    Eigen::LLT<Matrix> llt(kernel.selfadjointView<Eigen::Lower>());
    if (llt.info() != Eigen::Success) throw NumericalFailure("backbone: kernel system is not positive definite");
    w = x.transpose() * llt.solve(y);
  }
  if (!w.allFinite()) throw NumericalFailure("backbone: solution is not finite");
  return {tensorize(w, dims), epsilon};
}

}  // namespace sltr
