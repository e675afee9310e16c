#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "splitlab/algorithms.hpp"
#include "splitlab/instances.hpp"
#include "splitlab/rates.hpp"
#include "splitlab/vector.hpp"

namespace splitlab {

struct BoundCheckReport {
  std::string bound_id;
  std::string instance_id;
  double gamma = 0.0;
  double lambda = 0.0;
  std::string lambda_schedule;  // set instead of lambda for scheduled runs
  int N = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs/rhs, 0 when both vanish
  bool pass = false;
  std::string notes;
};

/// Pass tolerance: relative 1e-7 plus absolute 1e-12, absorbing drift on
/// 50-step double-precision trajectories without masking real violations.
bool bound_holds(double lhs, double rhs);
double bound_ratio(double lhs, double rhs);

struct SearchReport {
  std::string target;
  int budget = 0;
  std::uint64_t seed = 0;
  int dim = 0;
  double best_ratio = 0.0;
  std::string best_descriptor;  // reproduction recipe for the max-ratio cell
  std::vector<std::string> violations;
};

/// Distance from w to the recorded fixed point set. Throws when the set is
/// unknown.
double dist_to_fixed_set(const Instance& inst, const Vector& w);

/// f(y) + g(y) - f(x*) - g(x*) when the composite view and a reference
/// solution exist (and y is feasible); empty otherwise.
std::optional<double> objective_gap(const Instance& inst, const Vector& y);

/// Run the natural algorithm for the instance form: resolvent DRS for
/// monotone instances, prox DRS for composite ones.
Trace run_on_instance(const Instance& inst, double gamma, const std::vector<double>& lambdas,
                      Vector w1, int N);

/// Compares the observed quantity the bound speaks about (final residual,
/// per-step contraction, trajectory error-bound ratio, or objective gap)
/// against evaluate(bound) with the prescribed initial-distance scaling.
BoundCheckReport verify_bound(const Instance& inst, const BoundSpec& bound, double gamma,
                              double lambda, const Vector& w1, int N);

/// mu = sup dist/||(I-T)w|| for linear T: the reciprocal of the smallest
/// nonzero singular value of I - T. +infinity when I - T vanishes on the
/// complement of its kernel (T = I).
double estimate_error_bound_mu(const Instance& inst, double gamma, double lambda);

/// Checks dist(w^k) <= (1/(1-r)) ||Tw^k - w^k|| at every trajectory point;
/// the necessity direction of the error bound under observed linear rate r.
BoundCheckReport check_eb_necessity(const Instance& inst, const Trace& trace, double r);

/// Samples admissible instances and parameters for one conjectured bound and
/// hunts for ratio > 1 + 1e-6. Never asserts conjecture truth: a clean run
/// only means the budget failed to falsify. Cells derive their RNG from
/// (seed, cell index), so results are order-independent and reproducible.
SearchReport conjecture_search(const std::string& target, int budget, std::uint64_t seed,
                               int dim);

/// Sweeps Huber curvature delta over logspace[1e-4, 1] with x0 = 1 and
/// reports the max gap/bound ratio against the level-k silver GD bound.
SearchReport huber_tightness_sweep(int k, int grid_points = 400);

void write_trace_csv(std::ostream& os, const Trace& trace, const Instance* inst);
void write_bound_csv(std::ostream& os, const std::vector<BoundCheckReport>& reports);

/// Shortest round-trip decimal for a double (CSV cells, golden files).
std::string format_double(double v);

/// Dispatch a full experiment described by a JSON document mirroring the CLI
/// flags ({"command": "silver"|"run"|"check"|"certify"|"search", ...}).
/// Returns the process exit code (0 ok, 1 failed check, 2 usage error,
/// 3 conjecture violation).
int run_experiment(const std::string& config_json, std::ostream& out, std::ostream& err);

}  // namespace splitlab
