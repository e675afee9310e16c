#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "splitlab/certificates.hpp"
#include "splitlab/instances.hpp"

using namespace splitlab;

TEST_CASE("weighted-sum identity for the sublinear rate holds at random points") {
  CertificateReport small = check_thm31_identity(2, 1, 200, 101);
  CHECK(small.pass);
  CHECK(small.max_abs_residual <= 1e-10);
  CertificateReport big = check_thm31_identity(10, 5, 200, 202);
  CHECK(big.pass);
  CHECK(big.max_abs_residual <= kCertificateTol);
  CHECK_THROWS(check_thm31_identity(1, 1, 10, 0));
  CHECK_THROWS(check_thm31_identity(3, 0, 10, 0));
}

TEST_CASE("error-bound certificate constants at the unit point") {
  Prop44Constants c = Prop44Constants::compute(1.0, 1.0);
  CHECK(c.S == 3.0);
  CHECK(c.C == 6.0);
  CHECK(c.D == 11.0);
  CHECK(c.E == doctest::Approx(51.0 / 11.0).epsilon(1e-13));
  CHECK(c.alpha1 == doctest::Approx(6.0).epsilon(1e-14));  // 2(0 + 1 + 2)
  CHECK(c.alpha2 == 6.0);
  CHECK(c.alpha3 == 12.0);
  CHECK(c.P2 > 0.0);
  CHECK(c.Dprime != 0.0);
  CHECK_THROWS(Prop44Constants::compute(0.0, 1.0));
  CHECK_THROWS(Prop44Constants::compute(1.0, 1.5));
}

TEST_CASE("error-bound certificate residual and sign grid") {
  for (double gamma : {0.05, 0.35, 0.7, 1.0}) {
    for (double mubar : {0.05, 0.4, 1.0}) {
      CertificateReport rep = check_prop44(gamma, mubar, 50, 77);
      INFO("gamma=", gamma, " mubar=", mubar, " note=", rep.note);
      CHECK(rep.pass);
      CHECK(rep.max_abs_residual <= 1e-6);
      CHECK(rep.sign_violations.empty());
      CHECK_FALSE(rep.degenerate);
    }
  }
}

TEST_CASE("base stepsize identity certificate") {
  CertificateReport rep = check_lemma51_base(500, 11);
  CHECK(rep.pass);
  CHECK(rep.max_abs_residual <= 1e-10);
}

TEST_CASE("trajectory certificate on smooth objectives") {
  FunctionOracle quad = FunctionOracle::quadratic(Matrix::Identity(1, 1), Vector::Zero(1));
  Vector x0 = Vector::Ones(1), xs = Vector::Zero(1);
  for (int k = 1; k <= 4; ++k) {
    CertificateReport rep = check_lemma51_trajectory(k, quad, x0, xs, 0.0);
    CHECK(rep.pass);
  }
  // starting at the minimizer every term is exactly zero
  CertificateReport atmin = check_lemma51_trajectory(2, quad, xs, xs, 0.0);
  CHECK(atmin.pass);
  CHECK(atmin.max_abs_residual == 0.0);

  FunctionOracle hub = huber_1d(0.5);
  CertificateReport rh = check_lemma51_trajectory(3, hub, x0, xs, 0.0);
  CHECK(rh.pass);

  CHECK_THROWS(check_lemma51_trajectory(2, FunctionOracle::l1(1.0), x0, xs, 0.0));
}

TEST_CASE("smooth interpolation inequality certificate") {
  FunctionOracle quad =
      FunctionOracle::quadratic(Matrix::Identity(3, 3), Vector::Zero(3));
  CertificateReport rq = check_interpolation(quad, 3, 300, 5);
  CHECK(rq.pass);
  // for 0.5||x||^2 the inequality is an identity; only roundoff survives
  CHECK(rq.max_abs_residual <= 1e-12);

  CertificateReport rh = check_interpolation(huber_1d(0.7), 1, 300, 6);
  CHECK(rh.pass);

  CHECK_THROWS(check_interpolation(FunctionOracle::l1(1.0), 2, 10, 0));
}

TEST_CASE("certificate reports are deterministic in the seed") {
  CertificateReport a = check_thm31_identity(6, 3, 100, 99);
  CHECK(a.pass);
  // determinism of the report itself
  CertificateReport b = check_thm31_identity(6, 3, 100, 99);
  CHECK(a.max_abs_residual == b.max_abs_residual);
}
