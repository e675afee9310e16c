#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "splitlab/operators.hpp"
#include "splitlab/vector.hpp"

namespace splitlab {

/// Full per-iteration record of one run. Indexing follows the 1-based
/// convention of the iteration w^1 .. w^{N+1}; w() holds N+1 vectors,
/// x()/y() hold N, residual_sq()[k-1] = ||w^{k+1} - w^k||^2.
struct Trace {
  std::vector<Vector> w;
  std::vector<Vector> x;
  std::vector<Vector> y;
  std::optional<std::vector<Vector>> u;  // accelerated variant only, u^1..u^{N+1}
  std::vector<double> residual_sq;
  double gamma = 0.0;
  std::vector<double> lambdas;

  int iterations() const { return static_cast<int>(x.size()); }
};

/// residual_sq at 1-based iteration k, i.e. ||w^{k+1} - w^k||^2.
double fixed_point_residual(const Trace& trace, int k);

struct StepsizeSchedule {
  std::vector<double> values;
  int k_level = 0;
};

/// pi_k of length 2^k - 1: pi_1 = [sqrt 2], pi_{k+1} = [pi_k, 1 + rho^{k-1}, pi_k],
/// rho = 1 + sqrt 2.
StepsizeSchedule silver_schedule(int k);

inline const double kSilverRatio = 1.0 + std::sqrt(2.0);

std::vector<double> broadcast_lambda(double lambda, int N);

/// Algorithm: x^k = J_{gamma B}(w^k); y^k = J_{gamma A}(2x^k - w^k);
/// w^{k+1} = w^k + lambda_k (y^k - x^k).
Trace drs_run(const OperatorOracle& A, const OperatorOracle& B, double gamma,
              const std::vector<double>& lambdas, Vector w1, int N);

/// Composite variant with x^k = prox_{gamma f}(w^k), y^k = prox_{gamma g}(2x^k - w^k).
/// The f-then-g order is load-bearing.
Trace drs_composite_run(const FunctionOracle& f, const FunctionOracle& g, double gamma,
                        const std::vector<double>& lambdas, Vector w1, int N);

/// Accelerated variant: u^{k+1} = w^k + lambda (y^k - x^k),
/// w^{k+1} = u^{k+1} + m_k (u^{k+1} - u^k), default m_k = k/(k+3).
/// The momentum override exists for the reduction test against drs_composite_run.
Trace accelerated_drs_run(const FunctionOracle& f, const FunctionOracle& g, double gamma,
                          double lambda, Vector w1, int N,
                          std::function<double(int)> momentum = {});

/// Half-averaged fixed point iteration w^{k+1} = (w^k + S w^k)/2 for nonexpansive S.
Trace km_run(const std::function<Vector(const Vector&)>& S, Vector w1, int N);

struct GdTrace {
  std::vector<Vector> x;         // x^0 .. x^N
  std::vector<Vector> gradient;  // grad F(x^0) .. grad F(x^N)
  std::vector<double> value;     // F(x^0) .. F(x^N)
  std::vector<double> steps;     // h_0 .. h_{N-1}
};

/// x^{i+1} = x^i - h_i grad F(x^i). The caller scales the schedule by 1/L.
GdTrace gd_run(const FunctionOracle& F, const std::vector<double>& steps, Vector x0, int N);

}  // namespace splitlab
