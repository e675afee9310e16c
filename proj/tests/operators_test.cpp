#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "splitlab/operators.hpp"
#include "splitlab/rng.hpp"

using namespace splitlab;

namespace {

Matrix random_psd(Rng& rng, int dim, double scale) {
  Matrix G(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) G(i, j) = rng.normal();
  Matrix Q = G * G.transpose();
  return scale / std::max(1.0, Q.norm()) * Q;
}

}  // namespace

TEST_CASE("quadratic prox satisfies its optimality system") {
  Rng rng(11);
  Matrix Q = random_psd(rng, 4, 3.0);
  Vector b = rng.normal_vector(4);
  FunctionOracle f = FunctionOracle::quadratic(Q, b);
  for (double gamma : {0.1, 1.0, 10.0}) {
    Vector w = rng.normal_vector(4);
    Vector x = f.prox(gamma, w);
    // x + gamma (Qx + b) = w
    CHECK(((x + gamma * (Q * x + b)) - w).norm() < 1e-10);
  }
  CHECK(f.value(Vector::Zero(4)) == 0.0);
  CHECK(f.smooth());
}

TEST_CASE("l1 prox is the soft threshold") {
  FunctionOracle f = FunctionOracle::l1(0.5);
  Vector w(3);
  w << 2.0, -0.3, 0.1;
  Vector x = f.prox(1.0, w);  // threshold 0.5
  CHECK(x[0] == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(x[1] == 0.0);
  CHECK(x[2] == 0.0);
  CHECK(f.value(w) == doctest::Approx(1.2));
  CHECK_FALSE(f.smooth());
  CHECK_THROWS(f.gradient(w));
}

TEST_CASE("box prox clips and its indicator rejects infeasible points") {
  Vector lo(2), hi(2);
  lo << -1.0, -1.0;
  hi << 1.0, 2.0;
  FunctionOracle f = FunctionOracle::indicator_box(lo, hi);
  Vector w(2);
  w << 5.0, -3.0;
  Vector x = f.prox(0.7, w);
  CHECK(x[0] == 1.0);
  CHECK(x[1] == -1.0);
  CHECK(f.value(x) == 0.0);
  CHECK(std::isinf(f.value(w)));
}

TEST_CASE("huber branches, gradient bound, prox formula") {
  double delta = 0.8;
  FunctionOracle f = FunctionOracle::huber(delta);
  Vector a(1), b(1);
  a << delta / 2.0;
  b << 2.0 * delta;
  CHECK(f.value(a) == doctest::Approx(delta * delta / 8.0).epsilon(1e-14));
  CHECK(f.value(b) == doctest::Approx(1.5 * delta * delta).epsilon(1e-14));
  CHECK(f.smooth());
  // the slope saturates at delta
  Rng rng(3);
  double sup = 0.0;
  for (int i = 0; i < 200; ++i)
    sup = std::max(sup, std::abs(f.gradient(10.0 * rng.normal_vector(1))[0]));
  CHECK(sup <= delta + 1e-14);
  // piecewise prox: quadratic branch divides by 1+gamma, linear branch shifts
  double gamma = 0.6;
  Vector in(1);
  in << 0.9 * (1.0 + gamma) * delta;
  CHECK(f.prox(gamma, in)[0] == doctest::Approx(in[0] / (1.0 + gamma)).epsilon(1e-14));
  in << 3.0 * delta;
  CHECK(f.prox(gamma, in)[0] == doctest::Approx(in[0] - gamma * delta).epsilon(1e-14));
}

TEST_CASE("prox optimality: subgradient of the objective vanishes") {
  // (w - x)/gamma must be a subgradient of f at x; verified through the
  // subgradient inequality against random probe points
  Rng rng(17);
  std::vector<FunctionOracle> fs;
  fs.push_back(FunctionOracle::l1(0.3));
  fs.push_back(FunctionOracle::huber(0.5));
  fs.push_back(FunctionOracle::quadratic(random_psd(rng, 3, 2.0), rng.normal_vector(3)));
  for (const auto& f : fs) {
    for (double gamma : {0.1, 1.0, 10.0}) {
      for (int t = 0; t < 50; ++t) {
        Vector w = 3.0 * rng.normal_vector(3);
        Vector x = f.prox(gamma, w);
        Vector u = (w - x) / gamma;
        Vector z = 3.0 * rng.normal_vector(3);
        CHECK(f.value(z) >= f.value(x) + u.dot(z - x) - 1e-9);
      }
    }
  }
}

TEST_CASE("resolvents are firmly nonexpansive") {
  Rng rng(23);
  std::vector<OperatorOracle> ops;
  Matrix G(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) G(i, j) = rng.normal();
  ops.push_back(OperatorOracle::linear(G * G.transpose() + 0.5 * (G - G.transpose())));
  Vector dir(3);
  dir << 1.0, 2.0, -1.0;
  ops.push_back(OperatorOracle::normal_cone_line(dir));
  ops.push_back(OperatorOracle::subdifferential(FunctionOracle::l1(0.4)));
  ops.push_back(OperatorOracle::zero());
  for (const auto& op : ops) {
    for (double gamma : {0.1, 1.0, 10.0}) {
      for (int t = 0; t < 100; ++t) {
        Vector x = 2.0 * rng.normal_vector(3);
        Vector y = 2.0 * rng.normal_vector(3);
        Vector jx = op.resolvent(gamma, x), jy = op.resolvent(gamma, y);
        CHECK((jx - jy).squaredNorm() <= (jx - jy).dot(x - y) + 1e-12);
        // reflected resolvent stays nonexpansive
        Vector rx = op.reflected_resolvent(gamma, x), ry = op.reflected_resolvent(gamma, y);
        CHECK((rx - ry).norm() <= (x - y).norm() + 1e-12);
      }
    }
  }
}

TEST_CASE("symmetric PSD linear operator is cocoercive with its spectral constant") {
  Rng rng(31);
  Matrix Q = random_psd(rng, 4, 1.0);
  double lmax = Eigen::SelfAdjointEigenSolver<Matrix>(Q).eigenvalues().maxCoeff();
  double beta = 1.0 / lmax;
  for (int t = 0; t < 100; ++t) {
    Vector x = rng.normal_vector(4), y = rng.normal_vector(4);
    Vector d = Q * (x - y);
    CHECK(d.dot(x - y) >= beta * d.squaredNorm() - 1e-12);
  }
}

TEST_CASE("linear operator constructor rejects non-monotone maps") {
  CHECK_THROWS(OperatorOracle::linear(-Matrix::Identity(2, 2)));
  // a pure skew map is monotone and must be accepted
  Matrix K(2, 2);
  K << 0.0, 1.0, -1.0, 0.0;
  CHECK_NOTHROW(OperatorOracle::linear(K));
}

TEST_CASE("dr_operator_apply matches the averaged reflected composition") {
  Rng rng(41);
  Matrix K(2, 2);
  K << 0.0, 1.0, -1.0, 0.0;
  OperatorOracle A = OperatorOracle::linear(K);
  Vector e1(2);
  e1 << 1.0, 0.0;
  OperatorOracle B = OperatorOracle::normal_cone_line(e1);
  for (double lambda : {0.5, 1.0, 1.8}) {
    Vector w = rng.normal_vector(2);
    DrStep s = dr_operator_apply(A, B, 0.7, lambda, w);
    Vector ref = (1.0 - lambda / 2.0) * w +
                 (lambda / 2.0) *
                     A.reflected_resolvent(0.7, B.reflected_resolvent(0.7, w));
    CHECK((s.Tw - ref).norm() < 1e-13);
    CHECK((s.Tw - (w + lambda * (s.y - s.x))).norm() < 1e-13);
  }
}

TEST_CASE("dr_operator_matrix reproduces the map and rejects nonlinear resolvents") {
  Rng rng(43);
  Matrix K(2, 2);
  K << 0.0, 0.5, -0.5, 0.0;
  OperatorOracle A = OperatorOracle::linear(K);
  OperatorOracle B = OperatorOracle::zero();
  Matrix T = dr_operator_matrix(A, B, 1.0, 1.0, 2);
  for (int t = 0; t < 20; ++t) {
    Vector w = rng.normal_vector(2);
    CHECK((T * w - dr_operator_apply(A, B, 1.0, 1.0, w).Tw).norm() < 1e-13);
  }
  OperatorOracle L1 = OperatorOracle::subdifferential(FunctionOracle::l1(1.0));
  CHECK_THROWS(dr_operator_matrix(L1, B, 1.0, 1.0, 2));
}

TEST_CASE("scaled sums evaluate and sums of operators apply pointwise") {
  FunctionOracle q = FunctionOracle::quadratic(Matrix::Identity(2, 2), Vector::Zero(2));
  FunctionOracle s = FunctionOracle::scaled_sum({{2.0, q}, {1.0, FunctionOracle::zero()}});
  Vector x(2);
  x << 1.0, 2.0;
  CHECK(s.value(x) == doctest::Approx(5.0));
  CHECK((s.gradient(x) - 2.0 * x).norm() < 1e-14);

  OperatorOracle sum = OperatorOracle::sum(
      {OperatorOracle::linear(Matrix::Identity(2, 2)), OperatorOracle::zero()});
  auto v = sum.apply(x);
  REQUIRE(v.has_value());
  CHECK((*v - x).norm() == 0.0);
}
