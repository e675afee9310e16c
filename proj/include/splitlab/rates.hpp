#pragma once

#include <map>
#include <string>
#include <variant>

namespace splitlab {

// Closed-form right-hand sides for every rate bound and conjectured bound,
// each tagged with the parameters it needs. Conjecture bounds are findings,
// never correctness gates.

struct KmSublinear {  // lambda (N-1)^{N-1} / ((2-lambda) N^N)
  int N;
  double lambda;
};
struct KmSublinearLambda1 {  // (N-1)^{N-1} / N^N
  int N;
};
struct LinearErrorBound {  // sqrt(1 - (2/lambda - 1)/mu^2)
  double mu;
  double lambda;
};
struct ErrorBoundFromRate {  // mu = 1/(1-r)
  double r;
};
struct RsmErrorBound {  // mu = (gamma + gamma min(mu_f beta,1) + beta)/(lambda gamma min(mu_f beta,1))
  double gamma;
  double beta;
  double mu_f;
  double lambda;
};
struct SilverGd {  // L / (4 rho^k - 2)
  int k;
  double L;
};
struct ConjCocoercive {  // lambda^2 / ((N-1)lambda + 1)^2
  int N;
  double lambda;
  double beta;
  double gamma;
};
struct ConjComposite {  // 1 / (4 gamma ((N-1)lambda + 1))
  int N;
  double lambda;
  double gamma;
  double L;
};
struct ConjSilverDrs {  // 1 / (4 gamma rho^k)
  int k;
  double gamma;
  double L;
};
struct ConjAccelerated {  // 2 / (gamma ((N^2 + 7N - 8)lambda + 8))
  int N;
  double lambda;
  double gamma;
  double L;
};

using BoundSpec = std::variant<KmSublinear, KmSublinearLambda1, LinearErrorBound,
                               ErrorBoundFromRate, RsmErrorBound, SilverGd, ConjCocoercive,
                               ConjComposite, ConjSilverDrs, ConjAccelerated>;

/// Stable id used by the CLI and CSV output.
std::string bound_id(const BoundSpec& b);

bool is_conjecture(const BoundSpec& b);

struct Applicability {
  bool ok;
  std::string reason;  // empty when ok
};

/// Parameter-range predicate; boundary membership follows the source's
/// open/closed interval notation literally.
Applicability applicable(const BoundSpec& b);

/// Exact formula value. Throws unless applicable(b).ok or force is set.
double evaluate(const BoundSpec& b, bool force = false);

struct Interval {
  double lo;
  double hi;
  bool empty() const { return lo >= hi; }
};

/// The lambda window [1, 1 + sqrt((N-1)/N)) attached to the sublinear DRS rate,
/// under the k := N reading of the window parameter (an interpretation, not a
/// statement of the source).
Interval theoretical_km_rate_lambda_range(int N);

/// Construct a BoundSpec from its stable id plus named parameters.
BoundSpec make_bound(const std::string& id, const std::map<std::string, double>& params);

}  // namespace splitlab
