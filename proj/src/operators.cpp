#include "splitlab/operators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace splitlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_symmetric_psd(const Matrix& Q, double tol, const char* what) {
  if (Q.rows() != Q.cols()) throw std::invalid_argument(std::string(what) + ": matrix not square");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument(std::string(what) + ": matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(Q, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw std::invalid_argument(std::string(what) + ": matrix not positive semidefinite");
}

Vector unit_direction(Vector d) {
  double n = d.norm();
  if (n <= 0.0 || !std::isfinite(n)) throw std::invalid_argument("line direction must be nonzero");
  return d / n;
}

double huber_scalar(double t, double delta) {
  double a = std::abs(t);
  return a <= delta ? 0.5 * t * t : delta * a - 0.5 * delta * delta;
}

double huber_prox_scalar(double w, double delta, double gamma) {
  // argmin_z huber(z) + (z - w)^2 / (2 gamma)
  if (std::abs(w) <= (1.0 + gamma) * delta) return w / (1.0 + gamma);
  return w - gamma * delta * (w > 0 ? 1.0 : -1.0);
}

}  // namespace

FunctionOracle FunctionOracle::quadratic(Matrix Q, Vector b) {
  check_symmetric_psd(Q, 1e-10, "Quadratic");
  if (Q.rows() != b.size()) throw std::invalid_argument("Quadratic: Q/b dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(Q, Eigen::EigenvaluesOnly);
  FunctionOracle f(Kind{Quadratic{std::move(Q), std::move(b)}});
  f.smoothness_L = es.eigenvalues().maxCoeff();
  f.strong_convexity = std::max(0.0, es.eigenvalues().minCoeff());
  return f;
}

FunctionOracle FunctionOracle::l1(double weight) {
  if (weight < 0) throw std::invalid_argument("L1: negative weight");
  return FunctionOracle(Kind{L1{weight}});
}

FunctionOracle FunctionOracle::indicator_line(Vector direction) {
  return FunctionOracle(Kind{IndicatorOfLine{unit_direction(std::move(direction))}});
}

FunctionOracle FunctionOracle::indicator_box(Vector lo, Vector hi) {
  require_same_dim(lo, hi, "IndicatorOfBox");
  if ((hi - lo).minCoeff() < 0) throw std::invalid_argument("IndicatorOfBox: empty box");
  return FunctionOracle(Kind{IndicatorOfBox{std::move(lo), std::move(hi)}});
}

FunctionOracle FunctionOracle::huber(double delta) {
  if (delta <= 0) throw std::invalid_argument("Huber: delta must be positive");
  FunctionOracle f(Kind{Huber{delta}});
  f.smoothness_L = 1.0;
  return f;
}

FunctionOracle FunctionOracle::zero() {
  FunctionOracle f(Kind{Zero{}});
  f.smoothness_L = 0.0;
  return f;
}

FunctionOracle FunctionOracle::scaled_sum(std::vector<std::pair<double, FunctionOracle>> terms) {
  ScaledSum s;
  bool all_smooth = true;
  double L = 0.0;
  for (auto& [c, f] : terms) {
    if (c < 0) throw std::invalid_argument("ScaledSum: negative coefficient breaks convexity");
    if (f.smooth() && f.smoothness_L)
      L += c * *f.smoothness_L;
    else
      all_smooth = false;
    s.terms.emplace_back(c, std::make_shared<FunctionOracle>(std::move(f)));
  }
  FunctionOracle out(Kind{std::move(s)});
  if (all_smooth) out.smoothness_L = L;
  return out;
}

bool FunctionOracle::smooth() const {
  return std::visit(
      [](const auto& k) -> bool {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Quadratic> || std::is_same_v<T, Huber> ||
                      std::is_same_v<T, Zero>) {
          return true;
        } else if constexpr (std::is_same_v<T, ScaledSum>) {
          for (const auto& [c, f] : k.terms)
            if (!f->smooth()) return false;
          return true;
        } else {
          return false;
        }
      },
      kind_);
}

double FunctionOracle::value(const Vector& x) const {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          return 0.5 * x.dot(k.Q * x) + k.b.dot(x);
        } else if constexpr (std::is_same_v<T, L1>) {
          return k.weight * x.lpNorm<1>();
        } else if constexpr (std::is_same_v<T, IndicatorOfLine>) {
          double dist = (x - k.direction * k.direction.dot(x)).norm();
          return dist <= kIndicatorTol ? 0.0 : kInf;
        } else if constexpr (std::is_same_v<T, IndicatorOfBox>) {
          require_same_dim(x, k.lo, "IndicatorOfBox::value");
          for (Eigen::Index i = 0; i < x.size(); ++i)
            if (x[i] < k.lo[i] - kIndicatorTol || x[i] > k.hi[i] + kIndicatorTol) return kInf;
          return 0.0;
        } else if constexpr (std::is_same_v<T, Huber>) {
          double v = 0.0;
          for (Eigen::Index i = 0; i < x.size(); ++i) v += huber_scalar(x[i], k.delta);
          return v;
        } else if constexpr (std::is_same_v<T, Zero>) {
          return 0.0;
        } else {  // ScaledSum
          double v = 0.0;
          for (const auto& [c, f] : k.terms) v += c * f->value(x);
          return v;
        }
      },
      kind_);
}

Vector FunctionOracle::prox(double gamma, const Vector& w) const {
  if (gamma <= 0) throw std::invalid_argument("prox: gamma must be positive");
  return std::visit(
      [&](const auto& k) -> Vector {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          require_same_dim(w, k.b, "prox(Quadratic)");
          Matrix lhs = Matrix::Identity(w.size(), w.size()) + gamma * k.Q;
          return lhs.ldlt().solve(w - gamma * k.b);
        } else if constexpr (std::is_same_v<T, L1>) {
          double t = gamma * k.weight;
          Vector z(w.size());
          for (Eigen::Index i = 0; i < w.size(); ++i)
            z[i] = std::copysign(std::max(std::abs(w[i]) - t, 0.0), w[i]);
          return z;
        } else if constexpr (std::is_same_v<T, IndicatorOfLine>) {
          require_same_dim(w, k.direction, "prox(IndicatorOfLine)");
          return k.direction * k.direction.dot(w);
        } else if constexpr (std::is_same_v<T, IndicatorOfBox>) {
          require_same_dim(w, k.lo, "prox(IndicatorOfBox)");
          return w.cwiseMax(k.lo).cwiseMin(k.hi);
        } else if constexpr (std::is_same_v<T, Huber>) {
          Vector z(w.size());
          for (Eigen::Index i = 0; i < w.size(); ++i)
            z[i] = huber_prox_scalar(w[i], k.delta, gamma);
          return z;
        } else if constexpr (std::is_same_v<T, Zero>) {
          return w;
        } else {  // ScaledSum: closed form only when a single nonzero term remains
          const FunctionOracle* only = nullptr;
          double coeff = 0.0;
          for (const auto& [c, f] : k.terms) {
            if (c == 0.0 || std::holds_alternative<Zero>(f->kind())) continue;
            if (only) throw std::runtime_error("prox(ScaledSum): no closed form for multiple terms");
            only = f.get();
            coeff = c;
          }
          if (!only) return w;
          return only->prox(gamma * coeff, w);
        }
      },
      kind_);
}

Vector FunctionOracle::gradient(const Vector& x) const {
  return std::visit(
      [&](const auto& k) -> Vector {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Quadratic>) {
          require_same_dim(x, k.b, "gradient(Quadratic)");
          return k.Q * x + k.b;
        } else if constexpr (std::is_same_v<T, Huber>) {
          Vector g(x.size());
          for (Eigen::Index i = 0; i < x.size(); ++i)
            g[i] = std::abs(x[i]) <= k.delta ? x[i] : k.delta * (x[i] > 0 ? 1.0 : -1.0);
          return g;
        } else if constexpr (std::is_same_v<T, Zero>) {
          return Vector::Zero(x.size());
        } else if constexpr (std::is_same_v<T, ScaledSum>) {
          Vector g = Vector::Zero(x.size());
          for (const auto& [c, f] : k.terms) g += c * f->gradient(x);
          return g;
        } else {
          throw std::runtime_error("gradient: unsupported for nonsmooth function kind");
        }
      },
      kind_);
}

OperatorOracle OperatorOracle::linear(Matrix M) {
  return linear(std::move(M), Vector::Zero(0));
}

OperatorOracle OperatorOracle::linear(Matrix M, Vector offset) {
  if (M.rows() != M.cols()) throw std::invalid_argument("LinearMonotone: matrix not square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  if (lo < -kMonotonicityTol)
    throw std::invalid_argument("LinearMonotone: M + M' is not positive semidefinite");
  if (offset.size() == 0) offset = Vector::Zero(M.rows());
  if (offset.size() != M.rows()) throw std::invalid_argument("LinearMonotone: offset dimension");
  OperatorOracle op(Kind{LinearMonotone{std::move(M), std::move(offset)}});
  op.mu_strong = std::max(0.0, lo);
  return op;
}

OperatorOracle OperatorOracle::normal_cone_line(Vector direction) {
  return OperatorOracle(Kind{NormalConeOfLine{unit_direction(std::move(direction))}});
}

OperatorOracle OperatorOracle::subdifferential(FunctionOracle f) {
  OperatorOracle op(Kind{Subdifferential{std::make_shared<FunctionOracle>(std::move(f))}});
  const auto& fn = *std::get<Subdifferential>(op.kind_).f;
  if (fn.smooth() && fn.smoothness_L && *fn.smoothness_L > 0)
    op.beta_cocoercive = 1.0 / *fn.smoothness_L;
  if (fn.strong_convexity) op.mu_strong = fn.strong_convexity;
  return op;
}

OperatorOracle OperatorOracle::zero() { return OperatorOracle(Kind{Zero{}}); }

OperatorOracle OperatorOracle::sum(std::vector<OperatorOracle> terms) {
  Sum s;
  for (auto& t : terms) s.terms.push_back(std::make_shared<OperatorOracle>(std::move(t)));
  return OperatorOracle(Kind{std::move(s)});
}

std::optional<Vector> OperatorOracle::apply(const Vector& x) const {
  return std::visit(
      [&](const auto& k) -> std::optional<Vector> {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LinearMonotone>) {
          return k.M * x + k.offset;
        } else if constexpr (std::is_same_v<T, Subdifferential>) {
          if (!k.f->smooth()) return std::nullopt;
          return k.f->gradient(x);
        } else if constexpr (std::is_same_v<T, Zero>) {
          return Vector::Zero(x.size());
        } else if constexpr (std::is_same_v<T, Sum>) {
          Vector acc = Vector::Zero(x.size());
          for (const auto& t : k.terms) {
            auto v = t->apply(x);
            if (!v) return std::nullopt;
            acc += *v;
          }
          return acc;
        } else {
          return std::nullopt;  // set-valued
        }
      },
      kind_);
}

bool OperatorOracle::linear_kind() const {
  return std::visit(
      [](const auto& k) -> bool {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LinearMonotone>) {
          return k.offset.isZero(0.0);
        } else if constexpr (std::is_same_v<T, NormalConeOfLine> || std::is_same_v<T, Zero>) {
          return true;
        } else if constexpr (std::is_same_v<T, Sum>) {
          for (const auto& t : k.terms)
            if (!t->linear_kind()) return false;
          return true;
        } else {
          return false;
        }
      },
      kind_);
}

Vector OperatorOracle::resolvent(double gamma, const Vector& w) const {
  if (gamma <= 0) throw std::invalid_argument("resolvent: gamma must be positive");
  return std::visit(
      [&](const auto& k) -> Vector {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LinearMonotone>) {
          if (k.M.rows() != w.size()) throw std::invalid_argument("resolvent: dimension mismatch");
          Matrix lhs = Matrix::Identity(w.size(), w.size()) + gamma * k.M;
          Eigen::PartialPivLU<Matrix> lu(lhs);
          // I + gamma M is nonsingular for monotone M; a failure is a construction bug
          Vector z = lu.solve(w - gamma * k.offset);
          if (!z.allFinite()) throw std::runtime_error("resolvent: singular linear system");
          return z;
        } else if constexpr (std::is_same_v<T, NormalConeOfLine>) {
          require_same_dim(w, k.direction, "resolvent(NormalConeOfLine)");
          return k.direction * k.direction.dot(w);  // gamma-independent projection
        } else if constexpr (std::is_same_v<T, Subdifferential>) {
          return k.f->prox(gamma, w);
        } else if constexpr (std::is_same_v<T, Zero>) {
          return w;
        } else {  // Sum: direct solve when every term is linear/affine
          Matrix M = Matrix::Zero(w.size(), w.size());
          Vector off = Vector::Zero(w.size());
          for (const auto& t : k.terms) {
            if (const auto* lin = std::get_if<LinearMonotone>(&t->kind())) {
              M += lin->M;
              off += lin->offset;
            } else if (std::holds_alternative<Zero>(t->kind())) {
              // contributes nothing
            } else {
              throw std::runtime_error("resolvent(Sum): no closed form for non-linear terms");
            }
          }
          Matrix lhs = Matrix::Identity(w.size(), w.size()) + gamma * M;
          return Eigen::PartialPivLU<Matrix>(lhs).solve(w - gamma * off);
        }
      },
      kind_);
}

Vector OperatorOracle::reflected_resolvent(double gamma, const Vector& w) const {
  return 2.0 * resolvent(gamma, w) - w;
}

DrStep dr_operator_apply(const OperatorOracle& A, const OperatorOracle& B, double gamma,
                         double lambda, const Vector& w) {
  DrStep s;
  s.x = B.resolvent(gamma, w);
  s.y = A.resolvent(gamma, 2.0 * s.x - w);
  s.Tw = w + lambda * (s.y - s.x);
  return s;
}

Matrix dr_operator_matrix(const OperatorOracle& A, const OperatorOracle& B, double gamma,
                          double lambda, Eigen::Index dim) {
  if (!A.linear_kind() || !B.linear_kind())
    throw std::runtime_error("dr_operator_matrix: operator is not linear");
  Matrix T(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    Vector e = Vector::Zero(dim);
    e[j] = 1.0;
    T.col(j) = dr_operator_apply(A, B, gamma, lambda, e).Tw;
  }
  return T;
}

}  // namespace splitlab
