#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "splitlab/vector.hpp"

namespace splitlab {

/// Closed proper convex function exposed through value / prox / gradient.
/// Prox is exact (closed form or direct linear solve) for every kind.
class FunctionOracle {
 public:
  struct Quadratic {  // 0.5 x'Qx + b'x, Q symmetric PSD
    Matrix Q;
    Vector b;
  };
  struct L1 {  // weight * ||x||_1
    double weight;
  };
  struct IndicatorOfLine {  // indicator of span(direction)
    Vector direction;       // unit
  };
  struct IndicatorOfBox {  // indicator of [lo, hi]
    Vector lo, hi;
  };
  struct Huber {  // sum_i huber_delta(x_i); 1-smooth
    double delta;
  };
  struct Zero {};
  struct ScaledSum {  // sum_i coeff_i * f_i
    std::vector<std::pair<double, std::shared_ptr<const FunctionOracle>>> terms;
  };
  using Kind = std::variant<Quadratic, L1, IndicatorOfLine, IndicatorOfBox, Huber, Zero, ScaledSum>;

  static FunctionOracle quadratic(Matrix Q, Vector b);
  static FunctionOracle l1(double weight);
  static FunctionOracle indicator_line(Vector direction);
  static FunctionOracle indicator_box(Vector lo, Vector hi);
  static FunctionOracle huber(double delta);
  static FunctionOracle zero();
  static FunctionOracle scaled_sum(std::vector<std::pair<double, FunctionOracle>> terms);

  double value(const Vector& x) const;  // +inf for indicator violation beyond 1e-9
  Vector prox(double gamma, const Vector& w) const;
  Vector gradient(const Vector& x) const;  // throws for nonsmooth kinds
  bool smooth() const;

  const Kind& kind() const { return kind_; }

  std::optional<double> smoothness_L;
  std::optional<double> strong_convexity;

  static constexpr double kIndicatorTol = 1e-9;

 private:
  explicit FunctionOracle(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

/// Maximally monotone operator exposed through resolvent evaluation.
class OperatorOracle {
 public:
  struct LinearMonotone {  // x -> Mx + offset, M + M' PSD
    Matrix M;
    Vector offset;
  };
  struct NormalConeOfLine {  // normal cone of span(direction)
    Vector direction;        // unit
  };
  struct Subdifferential {
    std::shared_ptr<const FunctionOracle> f;
  };
  struct Zero {};
  struct Sum {
    std::vector<std::shared_ptr<const OperatorOracle>> terms;
  };
  using Kind = std::variant<LinearMonotone, NormalConeOfLine, Subdifferential, Zero, Sum>;

  static OperatorOracle linear(Matrix M);
  static OperatorOracle linear(Matrix M, Vector offset);
  static OperatorOracle normal_cone_line(Vector direction);
  static OperatorOracle subdifferential(FunctionOracle f);
  static OperatorOracle zero();
  static OperatorOracle sum(std::vector<OperatorOracle> terms);

  /// J_{gamma A}(w) = (I + gamma A)^{-1} w
  Vector resolvent(double gamma, const Vector& w) const;
  /// R_{gamma A}(w) = 2 J_{gamma A}(w) - w
  Vector reflected_resolvent(double gamma, const Vector& w) const;
  /// Single-valued evaluation where it exists (linear, zero, smooth subdifferential, sums of those).
  std::optional<Vector> apply(const Vector& x) const;
  /// True when w -> J(w) is a linear map (usable for matrix assembly).
  bool linear_kind() const;

  const Kind& kind() const { return kind_; }

  std::optional<double> beta_cocoercive;
  std::optional<double> mu_strong;

  static constexpr double kMonotonicityTol = 1e-10;

 private:
  explicit OperatorOracle(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

struct DrStep {
  Vector Tw;  // w + lambda (y - x)
  Vector x;   // J_{gamma B}(w)
  Vector y;   // J_{gamma A}(2x - w)
};

/// One application of the Douglas-Rachford operator
///   T = (1 - lambda/2) I + (lambda/2) R_{gamma A} R_{gamma B}.
DrStep dr_operator_apply(const OperatorOracle& A, const OperatorOracle& B, double gamma,
                         double lambda, const Vector& w);

/// Matrix of w -> Tw, assembled by applying T to the canonical basis.
/// Requires both resolvents to be linear maps.
Matrix dr_operator_matrix(const OperatorOracle& A, const OperatorOracle& B, double gamma,
                          double lambda, Eigen::Index dim);

}  // namespace splitlab
