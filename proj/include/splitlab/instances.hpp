#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "splitlab/operators.hpp"
#include "splitlab/vector.hpp"

namespace splitlab {

/// A problem instance with whatever reference data is available. Monotone-form
/// instances carry (A, B); composite-form ones carry (f, g); some carry both
/// views of the same problem.
struct Instance {
  std::string id;

  std::optional<OperatorOracle> A, B;
  std::optional<FunctionOracle> f, g;

  std::optional<Vector> known_solution;          // x*, 0 in Ax* + Bx*
  std::map<double, Vector> known_fixed_point;    // gamma -> w* with Tw* = w*

  struct PointSet {
    Vector w;
  };
  struct SubspaceSet {
    Matrix basis;  // columns span the fixed point set
  };
  struct UnknownSet {};
  std::variant<UnknownSet, PointSet, SubspaceSet> fixed_point_set;

  // declared constants, where meaningful
  std::optional<double> beta;   // cocoercivity of B
  std::optional<double> L;      // smoothness of f
  std::optional<double> mu_f;   // strong monotonicity of A
  std::optional<double> mu;     // restricted strong monotonicity of A + B

  bool monotone_form() const { return A.has_value() && B.has_value(); }
  bool composite_form() const { return f.has_value() && g.has_value(); }
};

/// Two-line feasibility problem in the plane: B is the normal cone of the
/// x-axis, A the normal cone of the line with slope 1/sqrt(N-1). The DR map
/// at lambda = 1 is sqrt((N-1)/N) times rotation by arcsin(1/sqrt N).
Instance two_subspace_feasibility(int N);

/// Skew linear field A x = (x2/sqrt(N-1), -x1/sqrt(N-1)) against B = 0; at
/// gamma = 1, lambda = 1 its DR matrix coincides with two_subspace_feasibility(N)'s.
Instance skew_rotation(int N);

/// w* = x* + gamma grad f(x*), verified to be a DR fixed point (lambda = 1)
/// to 1e-10. Throws if verification fails, which signals a wrong x*.
Vector composite_fixed_point(const FunctionOracle& f, const FunctionOracle& g,
                             const Vector& x_star, double gamma);

/// One-dimensional Huber penalty: quadratic up to delta, slope delta beyond.
/// 1-smooth with minimizer 0.
FunctionOracle huber_1d(double delta);

enum class GKind { Zero, L1, Box };

/// f = 0.5 x'Qx + b'x with spectrum inside (0, L], largest eigenvalue exactly
/// L, plus a simple nonsmooth g. Reference solution is closed form for
/// g = zero and a long-run inner solve (residual <= 1e-13) otherwise.
Instance random_quadratic_composite(int dim, double L, GKind g_kind, std::uint64_t seed);

/// A = mu I + random skew, B = (1/(2 beta)) (I + W) with W symmetric
/// orthogonal keeping +1 in its spectrum, so B's cocoercivity constant is
/// exactly beta. Zero set is the origin; restricted strong monotonicity
/// modulus >= mu.
Instance strongly_monotone_linear(int dim, double mu, double beta, std::uint64_t seed);

/// Linear nonexpansive map c R with R a random rotation and c in [0.9, 1].
struct NonexpansiveMap {
  Matrix M;
  double contraction;
  Vector operator()(const Vector& w) const { return M * w; }
};

NonexpansiveMap random_nonexpansive_map(int dim, std::uint64_t seed);

/// Numeric check that 0 is in Ax* + Bx* (or del f + del g) at the recorded
/// solution, via subgradient reconstruction from one resolvent/prox sweep at
/// the given gamma. Returns the residual norm.
double stationarity_residual(const Instance& inst, double gamma);

/// Lookup by stable id; params are instance-specific (N, dim, L, mu, beta,
/// delta, seed, g_kind as 0/1/2).
Instance make_instance(const std::string& id, const std::map<std::string, double>& params);

}  // namespace splitlab
