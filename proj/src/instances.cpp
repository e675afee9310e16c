#include "splitlab/instances.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "splitlab/rng.hpp"

namespace splitlab {

namespace {

Matrix random_orthogonal(int dim, Rng& rng) {
  Matrix G(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) G(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the column signs so the factorization (and hence the sample) is
  // unique, not solver-dependent.
  for (Eigen::Index j = 0; j < dim; ++j)
    if (R(j, j) < 0) Q.col(j) = -Q.col(j);
  return Q;
}

Vector zero2() { return Vector::Zero(2); }

int as_int(double v) { return static_cast<int>(std::llround(v)); }

double param_or(const std::map<std::string, double>& p, const char* key, double dflt) {
  auto it = p.find(key);
  return it == p.end() ? dflt : it->second;
}

}  // namespace

Instance two_subspace_feasibility(int N) {
  if (N < 2) throw std::invalid_argument("two_subspace_feasibility: N must be >= 2");
  double n = static_cast<double>(N);
  Vector p(2), q(2);
  p << 1.0, 0.0;
  q << std::sqrt(n - 1.0), 1.0;  // slope 1/sqrt(N-1); normalized by the oracle
  Instance inst;
  inst.id = "two-subspace";
  inst.B = OperatorOracle::normal_cone_line(p);
  inst.A = OperatorOracle::normal_cone_line(q);
  inst.f = FunctionOracle::indicator_line(p);
  inst.g = FunctionOracle::indicator_line(q);
  inst.known_solution = zero2();
  inst.known_fixed_point[1.0] = zero2();
  inst.fixed_point_set = Instance::PointSet{zero2()};
  return inst;
}

Instance skew_rotation(int N) {
  if (N < 2) throw std::invalid_argument("skew_rotation: N must be >= 2");
  double s = 1.0 / std::sqrt(static_cast<double>(N) - 1.0);
  Matrix M(2, 2);
  M << 0.0, s, -s, 0.0;
  Instance inst;
  inst.id = "skew";
  inst.A = OperatorOracle::linear(M);
  inst.B = OperatorOracle::zero();
  inst.known_solution = zero2();
  inst.known_fixed_point[1.0] = zero2();
  inst.fixed_point_set = Instance::PointSet{zero2()};
  return inst;
}

Vector composite_fixed_point(const FunctionOracle& f, const FunctionOracle& g,
                             const Vector& x_star, double gamma) {
  if (!f.smooth()) throw std::invalid_argument("composite_fixed_point: f must be smooth");
  if (gamma <= 0) throw std::invalid_argument("composite_fixed_point: gamma must be positive");
  Vector w = x_star + gamma * f.gradient(x_star);
  Vector x = f.prox(gamma, w);
  Vector y = g.prox(gamma, 2.0 * x - w);
  // Tw - w = lambda (y - x), so lambda drops out of the fixed point test.
  if ((y - x).norm() > 1e-10)
    throw std::runtime_error("composite_fixed_point: candidate is not a fixed point; "
                             "the supplied x_star is not optimal");
  return w;
}

FunctionOracle huber_1d(double delta) { return FunctionOracle::huber(delta); }

Instance random_quadratic_composite(int dim, double L, GKind g_kind, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_quadratic_composite: dim must be >= 1");
  if (L <= 0) throw std::invalid_argument("random_quadratic_composite: L must be positive");
  Rng rng(seed);

  Vector d(dim);
  for (Eigen::Index i = 0; i < dim; ++i) d[i] = std::max(rng.uniform() * L, 1e-3 * L);
  d[0] = L;  // top of the spectrum sits exactly at L
  Matrix R = random_orthogonal(dim, rng);
  Matrix Q = R * d.asDiagonal() * R.transpose();
  Q = 0.5 * (Q + Q.transpose());
  Vector b = rng.normal_vector(dim);

  Instance inst;
  inst.id = "rand-quad";
  inst.f = FunctionOracle::quadratic(Q, b);
  inst.L = L;
  double gamma = 1.0 / L;

  switch (g_kind) {
    case GKind::Zero: {
      inst.g = FunctionOracle::zero();
      Vector x_star = Q.ldlt().solve(-b);
      inst.known_solution = x_star;
      inst.known_fixed_point[gamma] = composite_fixed_point(*inst.f, *inst.g, x_star, gamma);
      return inst;
    }
    case GKind::L1: {
      inst.g = FunctionOracle::l1(rng.uniform(0.1, 1.0));
      break;
    }
    case GKind::Box: {
      Vector lo(dim), hi(dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        lo[i] = rng.uniform(-2.0, -0.5);
        hi[i] = rng.uniform(0.5, 2.0);
      }
      inst.g = FunctionOracle::indicator_box(std::move(lo), std::move(hi));
      break;
    }
  }

  // Oracle solution: long-run inner solve at gamma = 1/L, lambda = 1 to
  // residual 1e-13; downstream gap comparisons must use tolerance >= 1e-6.
  Vector w = Vector::Zero(dim);
  Vector x, y;
  for (int k = 0; k < 500000; ++k) {
    x = inst.f->prox(gamma, w);
    y = inst.g->prox(gamma, 2.0 * x - w);
    w += y - x;
    if ((y - x).norm() <= 1e-13) break;
  }
  if ((y - x).norm() > 1e-13)
    throw std::runtime_error("random_quadratic_composite: oracle solve did not converge");
  inst.known_solution = y;  // the prox_g point, feasible for the box case
  inst.known_fixed_point[gamma] = w;
  return inst;
}

Instance strongly_monotone_linear(int dim, double mu, double beta, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("strongly_monotone_linear: dim must be >= 1");
  if (mu <= 0 || beta <= 0)
    throw std::invalid_argument("strongly_monotone_linear: mu and beta must be positive");
  Rng rng(seed);

  Matrix G(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) G(i, j) = rng.normal();
  Matrix K = 0.5 * (G - G.transpose());
  Matrix MA = mu * Matrix::Identity(dim, dim) + K;

  // B = (1/(2 beta)) (I + W), W symmetric orthogonal with +1 forced into its
  // spectrum, so the largest eigenvalue of B is exactly 1/beta and the
  // cocoercivity constant is exactly beta (not an upper bound).
  Matrix U = random_orthogonal(dim, rng);
  Vector signs(dim);
  signs[0] = 1.0;
  for (Eigen::Index i = 1; i < dim; ++i) signs[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
  Matrix W = U * signs.asDiagonal() * U.transpose();
  Matrix MB = (Matrix::Identity(dim, dim) + 0.5 * (W + W.transpose())) / (2.0 * beta);

  Instance inst;
  inst.id = "sm-linear";
  inst.A = OperatorOracle::linear(MA);
  inst.A->mu_strong = mu;
  inst.B = OperatorOracle::linear(MB);
  inst.B->beta_cocoercive = beta;
  inst.known_solution = Vector::Zero(dim);
  inst.known_fixed_point[1.0] = Vector::Zero(dim);
  inst.fixed_point_set = Instance::PointSet{Vector::Zero(dim)};
  inst.beta = beta;
  inst.mu_f = mu;
  inst.mu = mu;
  return inst;
}

NonexpansiveMap random_nonexpansive_map(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_nonexpansive_map: dim must be >= 1");
  Rng rng(seed);
  Matrix R = random_orthogonal(dim, rng);
  if (R.determinant() < 0) R.col(dim - 1) = -R.col(dim - 1);
  double c = rng.uniform(0.9, 1.0);
  return NonexpansiveMap{c * R, c};
}

double stationarity_residual(const Instance& inst, double gamma) {
  if (gamma <= 0) throw std::invalid_argument("stationarity_residual: gamma must be positive");
  if (!inst.known_solution)
    throw std::invalid_argument("stationarity_residual: instance has no known solution");
  const Vector& xs = *inst.known_solution;

  if (inst.composite_form() && inst.f->smooth()) {
    Vector w = xs + gamma * inst.f->gradient(xs);
    Vector x = inst.f->prox(gamma, w);
    Vector u = (w - x) / gamma;  // in del f(x)
    Vector y = inst.g->prox(gamma, 2.0 * x - w);
    Vector v = (2.0 * x - w - y) / gamma;  // in del g(y)
    return (u + v).norm() + (y - x).norm();
  }
  if (inst.monotone_form()) {
    // Seed the sweep at w = x* + gamma B(x*) when B is single-valued; for
    // set-valued B at a zero of B (the normal cone cases here) w = x* works.
    Vector w = xs;
    if (auto Bx = inst.B->apply(xs)) w += gamma * *Bx;
    Vector x = inst.B->resolvent(gamma, w);
    Vector u = (w - x) / gamma;  // in Bx
    Vector y = inst.A->resolvent(gamma, 2.0 * x - w);
    Vector v = (2.0 * x - w - y) / gamma;  // in Ay
    return (u + v).norm() + (y - x).norm() + (x - xs).norm();
  }
  throw std::invalid_argument("stationarity_residual: instance exposes no usable oracles");
}

Instance make_instance(const std::string& id, const std::map<std::string, double>& params) {
  if (id == "two-subspace") return two_subspace_feasibility(as_int(param_or(params, "N", 2)));
  if (id == "skew") return skew_rotation(as_int(param_or(params, "N", 2)));
  if (id == "huber") {
    Instance inst;
    inst.id = "huber";
    inst.f = huber_1d(param_or(params, "delta", 1.0));
    inst.g = FunctionOracle::zero();
    inst.known_solution = Vector::Zero(1);
    inst.L = 1.0;
    inst.known_fixed_point[param_or(params, "gamma", 1.0)] = Vector::Zero(1);
    inst.fixed_point_set = Instance::PointSet{Vector::Zero(1)};
    return inst;
  }
  if (id == "rand-quad") {
    int gk = as_int(param_or(params, "g_kind", 0.0));
    if (gk < 0 || gk > 2) throw std::invalid_argument("rand-quad: g_kind must be 0, 1, or 2");
    return random_quadratic_composite(as_int(param_or(params, "dim", 10)),
                                      param_or(params, "L", 1.0), static_cast<GKind>(gk),
                                      static_cast<std::uint64_t>(param_or(params, "seed", 1.0)));
  }
  if (id == "sm-linear")
    return strongly_monotone_linear(as_int(param_or(params, "dim", 4)),
                                    param_or(params, "mu", 1.0), param_or(params, "beta", 1.0),
                                    static_cast<std::uint64_t>(param_or(params, "seed", 1.0)));
  if (id == "rand-nonexp") {
    // Wrap the map S as a monotone instance: with B = 0 and gamma = 1,
    // A = 2 (I + S)^{-1} - I makes the DR step at lambda = 1 coincide with the
    // half-averaged iteration of S. I + S is invertible because ||S|| < 1.
    NonexpansiveMap S = random_nonexpansive_map(
        as_int(param_or(params, "dim", 3)),
        static_cast<std::uint64_t>(param_or(params, "seed", 1.0)));
    Eigen::Index dim = S.M.rows();
    Matrix MA =
        2.0 * (Matrix::Identity(dim, dim) + S.M).inverse() - Matrix::Identity(dim, dim);
    Instance inst;
    inst.id = "rand-nonexp";
    inst.A = OperatorOracle::linear(MA);
    inst.B = OperatorOracle::zero();
    inst.known_solution = Vector::Zero(dim);
    inst.known_fixed_point[1.0] = Vector::Zero(dim);
    inst.fixed_point_set = Instance::PointSet{Vector::Zero(dim)};
    return inst;
  }
  throw std::invalid_argument("unknown instance id: " + id);
}

}  // namespace splitlab
