#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "splitlab/algorithms.hpp"
#include "splitlab/instances.hpp"
#include "splitlab/rng.hpp"

using namespace splitlab;

TEST_CASE("two-subspace DR matrix is a scaled rotation") {
  Instance inst = two_subspace_feasibility(2);
  Matrix T = dr_operator_matrix(*inst.A, *inst.B, 1.0, 1.0, 2);
  Matrix expect(2, 2);
  expect << 0.5, -0.5, 0.5, 0.5;
  CHECK((T - expect).cwiseAbs().maxCoeff() < 1e-12);

  for (int N : {2, 3, 7, 20}) {
    Instance ins = two_subspace_feasibility(N);
    Matrix TN = dr_operator_matrix(*ins.A, *ins.B, 1.0, 1.0, 2);
    double c = std::sqrt((N - 1.0) / N);
    // both singular values equal the contraction factor
    Eigen::JacobiSVD<Matrix> svd(TN);
    CHECK(svd.singularValues()[0] == doctest::Approx(c).epsilon(1e-12));
    CHECK(svd.singularValues()[1] == doctest::Approx(c).epsilon(1e-12));
  }
}

TEST_CASE("two-subspace trajectory norm follows the exact geometric decay") {
  for (int N : {2, 5, 12, 30}) {
    Instance inst = two_subspace_feasibility(N);
    Vector w1(2);
    w1 << 1.0, 0.0;
    Trace t = drs_run(*inst.A, *inst.B, 1.0, broadcast_lambda(1.0, N - 1), w1, N - 1);
    double expect = std::pow((N - 1.0) / N, (N - 1.0) / 2.0);
    CHECK(t.w.back().norm() == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("two-subspace carries a consistent composite view") {
  Instance inst = two_subspace_feasibility(4);
  REQUIRE(inst.composite_form());
  REQUIRE(inst.monotone_form());
  Rng rng(1);
  Vector w1 = rng.normal_vector(2);
  Trace tm = drs_run(*inst.A, *inst.B, 1.0, broadcast_lambda(1.2, 10), w1, 10);
  Trace tc = drs_composite_run(*inst.f, *inst.g, 1.0, broadcast_lambda(1.2, 10), w1, 10);
  for (int k = 0; k <= 10; ++k) CHECK((tm.w[k] - tc.w[k]).norm() < 1e-12);
  CHECK(std::holds_alternative<Instance::PointSet>(inst.fixed_point_set));
}

TEST_CASE("skew rotation matches the two-subspace DR matrix at gamma 1") {
  for (int N : {2, 4, 9, 25}) {
    Instance sk = skew_rotation(N);
    Instance ts = two_subspace_feasibility(N);
    Matrix Tsk = dr_operator_matrix(*sk.A, *sk.B, 1.0, 1.0, 2);
    Matrix Tts = dr_operator_matrix(*ts.A, *ts.B, 1.0, 1.0, 2);
    CHECK((Tsk - Tts).cwiseAbs().maxCoeff() < 1e-12);
  }
  // resolvent sanity at N = 2: (I + M)^{-1} e1 with unit skew
  Instance sk = skew_rotation(2);
  Vector e1(2);
  e1 << 1.0, 0.0;
  Vector r = sk.A->resolvent(1.0, e1);
  CHECK(r[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("composite_fixed_point reconstructs w* and rejects wrong candidates") {
  FunctionOracle f =
      FunctionOracle::quadratic(Matrix::Identity(1, 1), -Vector::Ones(1));  // 0.5(x-1)^2 - 0.5
  FunctionOracle g = FunctionOracle::l1(1.0);
  Vector x_star = Vector::Zero(1);  // gradient at 0 is -1, inside [-1,1]
  Vector w = composite_fixed_point(f, g, x_star, 1.0);
  CHECK(w[0] == doctest::Approx(-1.0).epsilon(1e-12));
  Vector wrong = Vector::Ones(1);
  CHECK_THROWS(composite_fixed_point(f, g, wrong, 1.0));
}

TEST_CASE("huber_1d values and smoothness constant") {
  FunctionOracle h = huber_1d(0.3);
  Vector x(1);
  x << 0.15;
  CHECK(h.value(x) == doctest::Approx(0.01125).epsilon(1e-14));
  x << 2.0;
  CHECK(h.value(x) == doctest::Approx(0.3 * 2.0 - 0.045).epsilon(1e-14));
  REQUIRE(h.smoothness_L.has_value());
  CHECK(*h.smoothness_L == 1.0);
}

TEST_CASE("random quadratic composite: spectrum, stationarity, determinism") {
  for (GKind gk : {GKind::Zero, GKind::L1, GKind::Box}) {
    Instance inst = random_quadratic_composite(5, 2.0, gk, 42);
    REQUIRE(inst.composite_form());
    REQUIRE(inst.known_solution.has_value());
    REQUIRE(inst.L.has_value());
    CHECK(*inst.L == 2.0);
    const auto& q = std::get<FunctionOracle::Quadratic>(inst.f->kind());
    Eigen::SelfAdjointEigenSolver<Matrix> es(q.Q);
    CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    CHECK(stationarity_residual(inst, 1.0 / 2.0) <= 1e-8);

    Instance again = random_quadratic_composite(5, 2.0, gk, 42);
    CHECK((*again.known_solution - *inst.known_solution).norm() == 0.0);
    const auto& q2 = std::get<FunctionOracle::Quadratic>(again.f->kind());
    CHECK((q2.Q - q.Q).norm() == 0.0);
    CHECK((q2.b - q.b).norm() == 0.0);
  }
}

TEST_CASE("strongly monotone linear: declared constants are exact") {
  Instance inst = strongly_monotone_linear(4, 0.7, 1.3, 7);
  REQUIRE(inst.monotone_form());
  REQUIRE(inst.mu_f.has_value());
  REQUIRE(inst.beta.has_value());
  CHECK(*inst.mu_f == 0.7);
  CHECK(*inst.beta == 1.3);

  const auto& la = std::get<OperatorOracle::LinearMonotone>(inst.A->kind());
  const auto& lb = std::get<OperatorOracle::LinearMonotone>(inst.B->kind());
  // A - mu I is skew
  Matrix Sk = la.M - 0.7 * Matrix::Identity(4, 4);
  CHECK((Sk + Sk.transpose()).norm() < 1e-12);
  // B symmetric PSD with largest eigenvalue exactly 1/beta
  CHECK((lb.M - lb.M.transpose()).norm() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix> es(lb.M);
  CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(1.0 / 1.3).epsilon(1e-12));
  CHECK(es.eigenvalues().minCoeff() >= -1e-14);
  // cocoercivity of B at exactly beta, sampled
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    Vector x = rng.normal_vector(4), y = rng.normal_vector(4);
    Vector d = lb.M * (x - y);
    CHECK(d.dot(x - y) >= 1.3 * d.squaredNorm() - 1e-12);
  }
  CHECK(stationarity_residual(inst, 0.9) <= 1e-8);
}

TEST_CASE("random nonexpansive maps stay inside the unit ball of operators") {
  Rng rng(3);
  for (std::uint64_t seed : {1ull, 9ull, 77ull}) {
    NonexpansiveMap S = random_nonexpansive_map(4, seed);
    CHECK(S.contraction >= 0.9);
    CHECK(S.contraction <= 1.0);
    for (int t = 0; t < 50; ++t) {
      Vector x = rng.normal_vector(4), y = rng.normal_vector(4);
      CHECK((S(x) - S(y)).norm() <= (x - y).norm() * (1.0 + 1e-12));
    }
  }
  NonexpansiveMap again = random_nonexpansive_map(4, 9);
  CHECK((again.M - random_nonexpansive_map(4, 9).M).norm() == 0.0);
}

TEST_CASE("make_instance lookup") {
  Instance ts = make_instance("two-subspace", {{"N", 6}});
  CHECK(ts.id == two_subspace_feasibility(6).id);
  Instance sk = make_instance("skew", {{"N", 6}});
  CHECK(sk.monotone_form());
  Instance hb = make_instance("huber", {{"delta", 0.4}});
  CHECK(hb.composite_form());
  Instance rq = make_instance("rand-quad", {{"dim", 3}, {"L", 1.0}, {"g_kind", 1}, {"seed", 5}});
  CHECK(rq.composite_form());
  Instance sm = make_instance("sm-linear", {{"dim", 3}, {"mu", 0.5}, {"beta", 1.0}, {"seed", 5}});
  CHECK(sm.monotone_form());
  Instance ne = make_instance("rand-nonexp", {{"dim", 3}, {"seed", 5}});
  CHECK(ne.monotone_form());
  CHECK_THROWS(make_instance("no-such-instance", {}));
}
