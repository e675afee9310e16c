#include "splitlab/algorithms.hpp"

#include <cmath>
#include <stdexcept>

namespace splitlab {

double fixed_point_residual(const Trace& trace, int k) {
  if (k < 1 || k > trace.iterations())
    throw std::out_of_range("fixed_point_residual: iteration index out of range");
  return trace.residual_sq[static_cast<std::size_t>(k) - 1];
}

StepsizeSchedule silver_schedule(int k) {
  if (k < 1) throw std::invalid_argument("silver_schedule: k must be >= 1");
  if (k > 20) throw std::invalid_argument("silver_schedule: k > 20 not supported");
  std::vector<double> values{std::sqrt(2.0)};
  for (int level = 1; level < k; ++level) {
    std::vector<double> next = values;
    next.push_back(1.0 + std::pow(kSilverRatio, level - 1));
    next.insert(next.end(), values.begin(), values.end());
    values = std::move(next);
  }
  return StepsizeSchedule{std::move(values), k};
}

std::vector<double> broadcast_lambda(double lambda, int N) {
  return std::vector<double>(static_cast<std::size_t>(N), lambda);
}

namespace {

void check_run_args(const std::vector<double>& lambdas, double gamma, int N) {
  if (N < 1) throw std::invalid_argument("run: iteration count must be positive");
  if (gamma <= 0) throw std::invalid_argument("run: gamma must be positive");
  if (lambdas.size() < static_cast<std::size_t>(N))
    throw std::invalid_argument("run: relaxation schedule shorter than iteration count");
}

}  // namespace

Trace drs_run(const OperatorOracle& A, const OperatorOracle& B, double gamma,
              const std::vector<double>& lambdas, Vector w1, int N) {
  check_run_args(lambdas, gamma, N);
  Trace t;
  t.gamma = gamma;
  t.lambdas.assign(lambdas.begin(), lambdas.begin() + N);
  t.w.reserve(N + 1);
  t.w.push_back(std::move(w1));
  for (int k = 0; k < N; ++k) {
    DrStep s = dr_operator_apply(A, B, gamma, lambdas[k], t.w.back());
    t.residual_sq.push_back((s.Tw - t.w.back()).squaredNorm());
    t.x.push_back(std::move(s.x));
    t.y.push_back(std::move(s.y));
    t.w.push_back(std::move(s.Tw));
  }
  return t;
}

Trace drs_composite_run(const FunctionOracle& f, const FunctionOracle& g, double gamma,
                        const std::vector<double>& lambdas, Vector w1, int N) {
  check_run_args(lambdas, gamma, N);
  Trace t;
  t.gamma = gamma;
  t.lambdas.assign(lambdas.begin(), lambdas.begin() + N);
  t.w.push_back(std::move(w1));
  for (int k = 0; k < N; ++k) {
    Vector x = f.prox(gamma, t.w.back());
    Vector y = g.prox(gamma, 2.0 * x - t.w.back());
    Vector next = t.w.back() + lambdas[k] * (y - x);
    t.residual_sq.push_back((next - t.w.back()).squaredNorm());
    t.x.push_back(std::move(x));
    t.y.push_back(std::move(y));
    t.w.push_back(std::move(next));
  }
  return t;
}

Trace accelerated_drs_run(const FunctionOracle& f, const FunctionOracle& g, double gamma,
                          double lambda, Vector w1, int N, std::function<double(int)> momentum) {
  if (N < 1) throw std::invalid_argument("run: iteration count must be positive");
  if (gamma <= 0) throw std::invalid_argument("run: gamma must be positive");
  if (!momentum) momentum = [](int k) { return static_cast<double>(k) / (k + 3); };
  Trace t;
  t.gamma = gamma;
  t.lambdas.assign(static_cast<std::size_t>(N), lambda);
  t.u.emplace();
  t.u->push_back(w1);
  t.w.push_back(std::move(w1));
  for (int k = 1; k <= N; ++k) {
    Vector x = f.prox(gamma, t.w.back());
    Vector y = g.prox(gamma, 2.0 * x - t.w.back());
    Vector u_next = t.w.back() + lambda * (y - x);
    Vector w_next = u_next + momentum(k) * (u_next - t.u->back());
    t.residual_sq.push_back((w_next - t.w.back()).squaredNorm());
    t.x.push_back(std::move(x));
    t.y.push_back(std::move(y));
    t.u->push_back(std::move(u_next));
    t.w.push_back(std::move(w_next));
  }
  return t;
}

Trace km_run(const std::function<Vector(const Vector&)>& S, Vector w1, int N) {
  if (N < 1) throw std::invalid_argument("km_run: iteration count must be positive");
  Trace t;
  t.lambdas.assign(static_cast<std::size_t>(N), 0.5);
  t.w.push_back(std::move(w1));
  for (int k = 0; k < N; ++k) {
    Vector s = S(t.w.back());
    Vector next = 0.5 * t.w.back() + 0.5 * s;
    t.residual_sq.push_back((next - t.w.back()).squaredNorm());
    t.x.push_back(t.w.back());
    t.y.push_back(std::move(s));
    t.w.push_back(std::move(next));
  }
  return t;
}

GdTrace gd_run(const FunctionOracle& F, const std::vector<double>& steps, Vector x0, int N) {
  if (N < 0) throw std::invalid_argument("gd_run: negative iteration count");
  if (!F.smooth()) throw std::runtime_error("gd_run: objective must be smooth");
  if (steps.size() < static_cast<std::size_t>(N))
    throw std::invalid_argument("gd_run: stepsize schedule shorter than iteration count");
  GdTrace t;
  t.steps.assign(steps.begin(), steps.begin() + N);
  t.x.push_back(std::move(x0));
  t.gradient.push_back(F.gradient(t.x.back()));
  t.value.push_back(F.value(t.x.back()));
  for (int i = 0; i < N; ++i) {
    t.x.push_back(t.x.back() - steps[i] * t.gradient.back());
    t.gradient.push_back(F.gradient(t.x.back()));
    t.value.push_back(F.value(t.x.back()));
  }
  return t;
}

}  // namespace splitlab
