#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "splitlab/operators.hpp"
#include "splitlab/vector.hpp"

namespace splitlab {

/// Numeric validation of the proof machinery behind the rate results:
/// multiplier-sum identities checked at random points, plus sign conditions
/// on derived constants. Identities are polynomial, so random points catch
/// transcription errors with probability 1.

struct CertificateReport {
  std::string certificate;
  int trials = 0;
  double max_abs_residual = 0.0;
  std::vector<std::string> sign_violations;  // offending parameter points
  bool degenerate = false;  // vanishing denominator; distinct from failure
  std::string note;
  bool pass = false;
};

inline constexpr double kCertificateTol = 1e-8;

/// Constants from the restricted-strong-monotonicity error bound derivation,
/// with beta normalized to 1 and mu_f_bar = min(mu_f, 1).
struct Prop44Constants {
  double gamma = 0.0, mu_f_bar = 0.0;
  double alpha1 = 0.0, alpha2 = 0.0, alpha3 = 0.0;
  double S = 0.0, C = 0.0, D = 0.0, E = 0.0, Dprime = 0.0, P1 = 0.0, P2 = 0.0;

  static Prop44Constants compute(double gamma, double mu_f_bar);
};

/// Weighted-sum identity underlying the KM sublinear rate: the two
/// nonexpansiveness inequality families, combined with the stated
/// multipliers, telescope into the rate term minus three sum-of-squares
/// families. Samples free iterates w^1..w^{N+1} (w* = 0) and reports the
/// worst |LHS - RHS|.
CertificateReport check_thm31_identity(int N, int dim, int trials, std::uint64_t seed);

/// The alpha-weighted combination of cocoercivity and restricted strong
/// monotonicity inequalities versus mu^2 ||Tw-w||^2 - ||w-w*||^2 minus
/// squared-norm terms. Also evaluates the D, E, P2 sign conditions at
/// (gamma, mu_f_bar) and confirms the residual is identical for
/// lambda in {0.5, 1, 1.5}.
CertificateReport check_prop44(double gamma, double mu_f_bar, int trials, std::uint64_t seed);

enum class Lemma51Mode { BaseIdentity, Trajectory };

/// BaseIdentity: the k = 1 displayed equality over free samples, with
/// g^0 = (x^0 - x^1)/h_0 substituted. Trajectory: runs gradient descent with
/// the level-k silver schedule on 1-smooth F and asserts the full
/// weighted-sum expression is >= -1e-8 along the actual trajectory.
CertificateReport check_lemma51_base(int trials, std::uint64_t seed);
CertificateReport check_lemma51_trajectory(int k, const FunctionOracle& F, const Vector& x0,
                                           const Vector& x_star, double F_star);

/// Smooth interpolation inequality
///   F(y) >= F(x) + <grad F(x), y-x> + 0.5 ||grad F(y) - grad F(x)||^2
/// for 1-smooth F, sampled pairs.
CertificateReport check_interpolation(const FunctionOracle& F, int dim, int trials,
                                      std::uint64_t seed);

}  // namespace splitlab
