#include "splitlab/rates.hpp"

#include <cmath>
#include <stdexcept>

#include "splitlab/algorithms.hpp"

namespace splitlab {

namespace {

// (N-1)^{N-1}/N^N with the 0^0 = 1 convention at N = 1 (bound 1, consistent
// with nonexpansiveness).
double km_constant(int N) {
  if (N == 1) return 1.0;
  double n = static_cast<double>(N);
  return std::pow((n - 1.0) / n, n - 1.0) / n;
}

double min_mu_beta(double mu_f, double beta) { return std::min(mu_f * beta, 1.0); }

}  // namespace

std::string bound_id(const BoundSpec& b) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, KmSublinear>) return "km-sublinear";
        if constexpr (std::is_same_v<T, KmSublinearLambda1>) return "km-sublinear-l1";
        if constexpr (std::is_same_v<T, LinearErrorBound>) return "linear-eb";
        if constexpr (std::is_same_v<T, ErrorBoundFromRate>) return "eb-from-rate";
        if constexpr (std::is_same_v<T, RsmErrorBound>) return "rsm-eb";
        if constexpr (std::is_same_v<T, SilverGd>) return "silver-gd";
        if constexpr (std::is_same_v<T, ConjCocoercive>) return "conj-cocoercive";
        if constexpr (std::is_same_v<T, ConjComposite>) return "conj-composite";
        if constexpr (std::is_same_v<T, ConjSilverDrs>) return "conj-silver-drs";
        if constexpr (std::is_same_v<T, ConjAccelerated>) return "conj-accel";
      },
      b);
}

bool is_conjecture(const BoundSpec& b) { return bound_id(b).rfind("conj-", 0) == 0; }

Applicability applicable(const BoundSpec& b) {
  auto fail = [](std::string why) { return Applicability{false, std::move(why)}; };
  return std::visit(
      [&](const auto& v) -> Applicability {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, KmSublinear>) {
          if (v.N < 1) return fail("N must be >= 1");
          Interval win = theoretical_km_rate_lambda_range(v.N);
          if (win.empty() || v.lambda < win.lo || v.lambda >= win.hi)
            return fail("lambda outside [1, 1+sqrt((N-1)/N)) (k := N interpretation)");
          return {true, {}};
        } else if constexpr (std::is_same_v<T, KmSublinearLambda1>) {
          if (v.N < 1) return fail("N must be >= 1");
          return {true, {}};
        } else if constexpr (std::is_same_v<T, LinearErrorBound>) {
          if (v.lambda <= 0 || v.lambda >= 2) return fail("lambda outside (0,2)");
          if (v.mu <= 0) return fail("mu must be positive");
          if (v.mu * v.mu <= 2.0 / v.lambda - 1.0)
            return fail("mu^2 must exceed 2/lambda - 1 for a nontrivial linear rate");
          return {true, {}};
        } else if constexpr (std::is_same_v<T, ErrorBoundFromRate>) {
          if (v.r <= 0 || v.r >= 1) return fail("rate r outside (0,1)");
          return {true, {}};
        } else if constexpr (std::is_same_v<T, RsmErrorBound>) {
          if (v.lambda <= 0 || v.lambda >= 2) return fail("lambda outside (0,2)");
          if (v.beta <= 0) return fail("beta must be positive");
          if (v.gamma <= 0 || v.gamma > v.beta) return fail("gamma outside (0, beta]");
          if (v.mu_f <= 0) return fail("mu_f must be positive");
          return {true, {}};
        } else if constexpr (std::is_same_v<T, SilverGd>) {
          if (v.k < 1) return fail("k must be >= 1");
          if (v.L <= 0) return fail("L must be positive");
          return {true, {}};
        } else if constexpr (std::is_same_v<T, ConjCocoercive>) {
          if (v.N < 1) return fail("N must be >= 1");
          if (v.beta <= 0) return fail("beta must be positive");
          if (v.gamma <= 0 || v.gamma >= v.beta) return fail("gamma outside (0, beta)");
          if (v.lambda <= 0 || v.lambda >= 2) return fail("lambda outside (0,2)");
          return {true, {}};
        } else if constexpr (std::is_same_v<T, ConjComposite>) {
          if (v.N < 1) return fail("N must be >= 1");
          if (v.L <= 0) return fail("L must be positive");
          if (v.gamma <= 0 || v.gamma >= (2.0 * std::sqrt(2.0) - 1.0) / v.L)
            return fail("gamma outside (0, (2 sqrt 2 - 1)/L)");
          if (v.lambda <= 0 || v.lambda >= (1.0 + std::sqrt(5.0)) / 2.0)
            return fail("lambda outside (0, (1+sqrt 5)/2)");
          return {true, {}};
        } else if constexpr (std::is_same_v<T, ConjSilverDrs>) {
          if (v.k < 1) return fail("k must be >= 1");
          if (v.L <= 0) return fail("L must be positive");
          if (v.gamma <= 0 || v.gamma >= (2.0 * std::sqrt(2.0) - 1.0) / v.L)
            return fail("gamma outside (0, (2 sqrt 2 - 1)/L)");
          return {true, {}};
        } else if constexpr (std::is_same_v<T, ConjAccelerated>) {
          if (v.N < 1) return fail("N must be >= 1");
          if (v.L <= 0) return fail("L must be positive");
          if (v.gamma <= 0 || v.gamma > 1.0 / v.L) return fail("gamma outside (0, 1/L]");
          if (v.lambda <= 0 || v.lambda > 1.0) return fail("lambda outside (0, 1]");
          return {true, {}};
        }
      },
      b);
}

double evaluate(const BoundSpec& b, bool force) {
  if (!force) {
    Applicability a = applicable(b);
    if (!a.ok) throw std::domain_error("evaluate(" + bound_id(b) + "): " + a.reason);
  }
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, KmSublinear>) {
          double n = static_cast<double>(v.N);
          double base = v.N == 1 ? 1.0 / n : std::pow((n - 1.0) / n, n - 1.0) / n;
          return v.lambda / (2.0 - v.lambda) * base;
        } else if constexpr (std::is_same_v<T, KmSublinearLambda1>) {
          return km_constant(v.N);
        } else if constexpr (std::is_same_v<T, LinearErrorBound>) {
          return std::sqrt(1.0 - (2.0 / v.lambda - 1.0) / (v.mu * v.mu));
        } else if constexpr (std::is_same_v<T, ErrorBoundFromRate>) {
          return 1.0 / (1.0 - v.r);
        } else if constexpr (std::is_same_v<T, RsmErrorBound>) {
          double m = min_mu_beta(v.mu_f, v.beta);
          return (v.gamma + v.gamma * m + v.beta) / (v.lambda * v.gamma * m);
        } else if constexpr (std::is_same_v<T, SilverGd>) {
          return v.L / (4.0 * std::pow(kSilverRatio, v.k) - 2.0);
        } else if constexpr (std::is_same_v<T, ConjCocoercive>) {
          double d = (v.N - 1.0) * v.lambda + 1.0;
          return v.lambda * v.lambda / (d * d);
        } else if constexpr (std::is_same_v<T, ConjComposite>) {
          return 1.0 / (4.0 * v.gamma * ((v.N - 1.0) * v.lambda + 1.0));
        } else if constexpr (std::is_same_v<T, ConjSilverDrs>) {
          return 1.0 / (4.0 * v.gamma * std::pow(kSilverRatio, v.k));
        } else if constexpr (std::is_same_v<T, ConjAccelerated>) {
          double n = static_cast<double>(v.N);
          return 2.0 / (v.gamma * ((n * n + 7.0 * n - 8.0) * v.lambda + 8.0));
        }
      },
      b);
}

Interval theoretical_km_rate_lambda_range(int N) {
  if (N < 1) throw std::invalid_argument("theoretical_km_rate_lambda_range: N must be >= 1");
  double n = static_cast<double>(N);
  return Interval{1.0, 1.0 + std::sqrt((n - 1.0) / n)};
}

BoundSpec make_bound(const std::string& id, const std::map<std::string, double>& params) {
  auto get = [&](const char* key) {
    auto it = params.find(key);
    if (it == params.end())
      throw std::invalid_argument("bound '" + id + "' requires parameter '" + key + "'");
    return it->second;
  };
  auto get_or = [&](const char* key, double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
  };
  auto geti = [&](const char* key) { return static_cast<int>(std::llround(get(key))); };
  if (id == "km-sublinear") return KmSublinear{geti("N"), get("lambda")};
  if (id == "km-sublinear-l1") return KmSublinearLambda1{geti("N")};
  if (id == "linear-eb") return LinearErrorBound{get("mu"), get("lambda")};
  if (id == "eb-from-rate") return ErrorBoundFromRate{get("r")};
  if (id == "rsm-eb") return RsmErrorBound{get("gamma"), get("beta"), get("mu_f"), get("lambda")};
  if (id == "silver-gd") return SilverGd{geti("k"), get_or("L", 1.0)};
  if (id == "conj-cocoercive")
    return ConjCocoercive{geti("N"), get("lambda"), get("beta"), get("gamma")};
  if (id == "conj-composite")
    return ConjComposite{geti("N"), get("lambda"), get("gamma"), get_or("L", 1.0)};
  if (id == "conj-silver-drs") return ConjSilverDrs{geti("k"), get("gamma"), get_or("L", 1.0)};
  if (id == "conj-accel")
    return ConjAccelerated{geti("N"), get("lambda"), get("gamma"), get_or("L", 1.0)};
  throw std::invalid_argument("unknown bound id: " + id);
}

}  // namespace splitlab
