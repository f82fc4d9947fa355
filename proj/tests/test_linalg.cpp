#include "oracles.hpp"

#include "sltr/error.hpp"
#include "sltr/linalg.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <limits>

using namespace sltr;

namespace {

// Singular values from the eigenvalues of A^T A (or A A^T), descending.
Vector eigen_singular_values(const Matrix& a) {
  const Matrix gram = a.rows() <= a.cols() ? Matrix(a * a.transpose()) : Matrix(a.transpose() * a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  Vector s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return s.reverse();
}

Vector ridge_oracle(const Matrix& x, const Vector& y, double eps) {
  const Matrix a = x.transpose() * x + eps * Matrix::Identity(x.cols(), x.cols());
  return a.fullPivLu().solve(x.transpose() * y);
}

}  // namespace

TEST_CASE("svd of small fixed matrices") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = 1;
  const SvdFactors f = svd(d);
  CHECK(f.s[0] == doctest::Approx(3.0));
  CHECK(f.s[1] == doctest::Approx(1.0));
  CHECK(spectral_norm(d) == doctest::Approx(3.0));

  const SvdFactors z = svd(Matrix::Zero(3, 2));
  CHECK(z.s.isZero());
  CHECK(spectral_norm(Matrix::Zero(4, 4)) == 0.0);
}

TEST_CASE("svd rejects non-finite input") {
  Matrix a = Matrix::Ones(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(svd(a), NumericalFailure);
  a(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(spectral_norm(a), NumericalFailure);
}

TEST_CASE("property: svd reconstructs, sorts and matches the Gram-eigenvalue oracle") {
  auto gen = oracle::engine(3);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index rows = 1 + trial % 9;
    const Eigen::Index cols = 1 + (trial * 7) % 11;
    const Matrix a = oracle::random_matrix(gen, rows, cols);
    const SvdFactors f = svd(a);
    const Matrix back = f.u * f.s.asDiagonal() * f.v.transpose();
    CHECK((back - a).norm() <= 1e-10 * a.norm());
    for (Eigen::Index i = 0; i + 1 < f.s.size(); ++i) CHECK(f.s[i] >= f.s[i + 1]);
    CHECK(f.s.minCoeff() >= 0.0);
    CHECK(f.s.squaredNorm() == doctest::Approx(a.squaredNorm()).epsilon(1e-12));
    const Vector ref = eigen_singular_values(a);
    CHECK(spectral_norm(a) == doctest::Approx(ref[0]).epsilon(1e-10));
    CHECK(nuclear_norm(a) >= spectral_norm(a));
  }
}

TEST_CASE("random 5x7 singular values square-sum to the Frobenius norm") {
  auto gen = oracle::engine(57);
  const Matrix a = oracle::random_matrix(gen, 5, 7);
  CHECK(svd(a).s.squaredNorm() == doctest::Approx(a.squaredNorm()).epsilon(1e-13));
}

TEST_CASE("tensor nuclear norm") {
  SUBCASE("unit rank-one outer product has norm one") {
    Vector a(3), b(4);
    a << 1, 2, 2;
    b << 1, -1, 1, 1;
    a /= a.norm();
    b /= b.norm();
    const Matrix outer = a * b.transpose();
    const Tensor t = fold(outer, 0, Dims{3, 4});
    CHECK(tensor_nuclear_norm(t) == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("zero tensor") { CHECK(tensor_nuclear_norm(Tensor::zeros({3, 4, 2})) == 0.0); }
  SUBCASE("order one is rejected") { CHECK_THROWS_AS(tensor_nuclear_norm(Tensor::zeros({3})), InvalidArgument); }
  SUBCASE("random 3x4x2 against per-mode oracle") {
    auto gen = oracle::engine(342);
    const Tensor t = oracle::random_tensor(gen, {3, 4, 2});
    double expected = 0.0;
    for (std::size_t m = 0; m < 3; ++m) expected += eigen_singular_values(oracle::unfold_by_walk(t, m)).sum();
    CHECK(tensor_nuclear_norm(t) == doctest::Approx(expected / 3.0).epsilon(1e-10));
  }
}

TEST_CASE("property: tensor nuclear norm is homogeneous and subadditive") {
  auto gen = oracle::engine(99);
  for (int trial = 0; trial < 40; ++trial) {
    const Dims dims = trial % 2 ? Dims{3, 4, 2} : Dims{5, 3};
    const Tensor a = oracle::random_tensor(gen, dims);
    const Tensor b = oracle::random_tensor(gen, dims);
    Tensor sum = a;
    sum.flat() += b.flat();
    Tensor scaled = a;
    scaled.flat() *= -2.5;
    CHECK(tensor_nuclear_norm(sum) <= tensor_nuclear_norm(a) + tensor_nuclear_norm(b) + 1e-12);
    CHECK(tensor_nuclear_norm(scaled) == doctest::Approx(2.5 * tensor_nuclear_norm(a)).epsilon(1e-12));
  }
}

TEST_CASE("backbone on an identity design is y / (1 + eps)") {
  const Matrix x = Matrix::Identity(4, 4);
  Vector y(4);
  y << 1, -2, 3, 0.5;
  const double eps = 1e-3;
  const Backbone b = backbone(x, y, eps, Dims{2, 2});
  CHECK(b.epsilon == eps);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(b.tensor.data()[i] == doctest::Approx(y[i] / (1 + eps)).epsilon(1e-14));
}

TEST_CASE("backbone of zero response is zero") {
  auto gen = oracle::engine(1);
  const Matrix x = oracle::random_matrix(gen, 6, 12);
  CHECK(backbone(x, Vector::Zero(6), 1.0, Dims{3, 4}).tensor == Tensor::zeros({3, 4}));
}

TEST_CASE("backbone argument checks") {
  const Matrix x = Matrix::Identity(4, 4);
  const Vector y = Vector::Ones(4);
  CHECK_THROWS_AS(backbone(x, y, 0.0, Dims{4}), InvalidArgument);
  CHECK_THROWS_AS(backbone(x, y, 1.0, Dims{3}), InvalidArgument);
  CHECK_THROWS_AS(backbone(x, Vector::Ones(3), 1.0, Dims{4}), InvalidArgument);
  Matrix bad = x;
  bad(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(backbone(bad, y, 1.0, Dims{4}), NumericalFailure);
}

TEST_CASE("random 4x24 design: woodbury agrees with the direct solve") {
  auto gen = oracle::engine(424);
  const Matrix x = oracle::random_matrix(gen, 4, 24);
  const Vector y = oracle::random_matrix(gen, 4, 1);
  const Dims dims{2, 3, 4};
  const Tensor wood = backbone(x, y, 0.5, dims, BackboneRoute::woodbury).tensor;
  const Tensor direct = backbone(x, y, 0.5, dims, BackboneRoute::direct).tensor;
  const Vector ref = ridge_oracle(x, y, 0.5);
  CHECK((wood.flat() - ref).norm() <= 1e-8 * ref.norm());
  CHECK((direct.flat() - ref).norm() <= 1e-8 * ref.norm());
  CHECK(backbone(x, y, 0.5, dims).tensor == wood);
}

TEST_CASE("property: backbone routes agree for N != P and shrink with eps") {
  auto gen = oracle::engine(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + trial % 13;
    const Eigen::Index p = 12;
    if (n == p) continue;
    const Matrix x = oracle::random_matrix(gen, n, p);
    const Vector y = oracle::random_matrix(gen, n, 1);
    const Dims dims{3, 4};
    for (double eps : {1e-2, 1.0, 30.0}) {
      const Vector a = backbone(x, y, eps, dims, BackboneRoute::direct).tensor.flat();
      const Vector b = backbone(x, y, eps, dims, BackboneRoute::woodbury).tensor.flat();
      CHECK((a - b).norm() <= 1e-8 * std::max(a.norm(), 1e-300));
    }
    double previous = std::numeric_limits<double>::infinity();
    for (double eps : {1e-2, 1e-1, 1.0, 10.0, 1e2, 1e4, 1e8}) {
      const double norm = frobenius_norm(backbone(x, y, eps, dims).tensor);
      CHECK(norm <= previous);
      previous = norm;
    }
    CHECK(previous < 1e-5);
  }
}
