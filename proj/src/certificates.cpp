#include "splitlab/certificates.hpp"

#include <cmath>
#include <sstream>

#include "splitlab/algorithms.hpp"
#include "splitlab/rng.hpp"

namespace splitlab {

namespace {

// Scale a batch of sampled vectors by a common factor so the stacked sample
// has norm <= 1; keeps residual conditioning uniform across trials.
void normalize_batch(std::vector<Vector*> vs) {
  double sq = 0.0;
  for (const Vector* v : vs) sq += v->squaredNorm();
  double n = std::sqrt(sq);
  if (n > 1.0)
    for (Vector* v : vs) *v /= n;
}

std::string point_tag(double gamma, double mu) {
  std::ostringstream os;
  os << "(gamma=" << gamma << ", mu_f_bar=" << mu << ")";
  return os.str();
}

}  // namespace

CertificateReport check_thm31_identity(int N, int dim, int trials, std::uint64_t seed) {
  if (N < 2) throw std::invalid_argument("check_thm31_identity: N must be >= 2");
  if (dim < 1 || trials < 1)
    throw std::invalid_argument("check_thm31_identity: dim and trials must be positive");
  CertificateReport rep;
  rep.certificate = "thm31";
  rep.trials = trials;

  double n = static_cast<double>(N);
  double q = (n - 1.0) / n;
  for (int t = 0; t < trials; ++t) {
    Rng rng(Rng::derived(seed, static_cast<std::uint64_t>(t)));
    std::vector<Vector> w(static_cast<std::size_t>(N) + 1);
    std::vector<Vector*> ptrs;
    for (auto& v : w) {
      v = rng.normal_vector(dim);
      ptrs.push_back(&v);
    }
    normalize_batch(ptrs);
    // 1-based iterate indices; w[k-1] is w^k.
    auto W = [&](int k) -> const Vector& { return w[static_cast<std::size_t>(k) - 1]; };

    double lhs = 0.0;
    for (int k = 1; k <= N - 1; ++k) {
      double mult = k * std::pow(q, n - k - 1) / (2.0 * n);
      lhs += mult * ((W(k + 1) - W(k)).squaredNorm() -
                     (2.0 * W(k + 2) - W(k + 1) - (2.0 * W(k + 1) - W(k))).squaredNorm());
    }
    lhs += (W(N).squaredNorm() - (2.0 * W(N + 1) - W(N)).squaredNorm()) / (2.0 * n);
    for (int k = 1; k <= N - 2; ++k) {
      double mult = (n - k - 1) * std::pow(q, n - k - 1) / (2.0 * n * n);
      lhs += mult * (W(k).squaredNorm() - (2.0 * W(k + 1) - W(k)).squaredNorm());
    }

    double rhs = std::pow(q, n - 1.0) / n * W(1).squaredNorm() -
                 (W(N + 1) - W(N)).squaredNorm() -
                 (W(N + 1) - 2.0 * q * W(N) + q * W(N - 1)).squaredNorm();
    for (int k = 1; k <= N - 2; ++k) {
      double mult = k * std::pow(q, n - 2 - k) / n;
      rhs -= mult * (W(k + 2) - 2.0 * q * W(k + 1) + q * W(k)).squaredNorm();
    }
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(lhs - rhs));
  }
  rep.pass = rep.max_abs_residual <= kCertificateTol;
  return rep;
}

Prop44Constants Prop44Constants::compute(double gamma, double mu_f_bar) {
  if (gamma <= 0 || gamma > 1) throw std::invalid_argument("Prop44Constants: gamma not in (0,1]");
  if (mu_f_bar <= 0 || mu_f_bar > 1)
    throw std::invalid_argument("Prop44Constants: mu_f_bar not in (0,1]");
  double g = gamma, m = mu_f_bar;
  Prop44Constants c;
  c.gamma = g;
  c.mu_f_bar = m;
  c.S = 1.0 + g * (1.0 + m);
  c.C = (g + 1.0) * ((m + 1.0) * g + 1.0);
  c.D = 2.0 * c.C - 1.0;
  c.E = (g + g * m + 1.0) * (g + g * m + 1.0) / (m * m) + 8.0 * g * g * c.C -
        (-2.0 * g * m * m + (2.0 * g * g + 4.0 * g + 2.0) / g) * (g - 1.0) / (m * m) -
        16.0 * g * g * c.C * c.C / c.D;
  double g2 = g * g, g3 = g2 * g, g4 = g3 * g, g5 = g4 * g;
  double m2 = m * m, m3 = m2 * m;
  c.Dprime = 2.0 - 2.0 * m2 * g4 - 6.0 * m2 * g3 - 4.0 * m2 * g2 + 4.0 * m * g4 +
             8.0 * m * g3 + m * g2 + 2.0 * m * g - 2.0 * g4 - 2.0 * g3 + 7.0 * g2 + 9.0 * g;
  c.P1 = 2.0 * m2 * g4 - 4.0 * m2 * g2 + 2.0 * m * g3 + m * g2 + 2.0 * m * g - 2.0 * g4 -
         2.0 * g3 + 7.0 * g2 + 9.0 * g + 2.0;
  c.P2 = -3.0 * m3 * g5 - 10.0 * m3 * g4 - 8.0 * m3 * g3 - 3.0 * m2 * g5 - 7.0 * m2 * g4 -
         8.0 * m2 * g3 - 4.0 * m2 * g2 - m * g5 + 4.0 * m * g4 + 19.0 * m * g3 +
         22.0 * m * g2 + 8.0 * m * g - g5 - 3.0 * g4 + g3 + 11.0 * g2 + 12.0 * g + 4.0;
  c.alpha1 = 2.0 / m2 * (g * (1.0 - m2) + 1.0 / g + 2.0);
  c.alpha2 = 2.0 * g * c.S;
  c.alpha3 = 2.0 * (g + 1.0) * c.S / m;
  return c;
}

CertificateReport check_prop44(double gamma, double mu_f_bar, int trials, std::uint64_t seed) {
  CertificateReport rep;
  rep.certificate = "prop44";
  Prop44Constants c = Prop44Constants::compute(gamma, mu_f_bar);
  double g = gamma, m = mu_f_bar;

  if (std::abs(c.D) <= 1e-12 || std::abs(c.Dprime) <= 1e-12) {
    rep.degenerate = true;
    rep.note = "vanishing denominator at " + point_tag(g, m);
    return rep;
  }
  if (c.D < 0) rep.sign_violations.push_back("D < 0 at " + point_tag(g, m));
  if (c.E < 0) rep.sign_violations.push_back("E < 0 at " + point_tag(g, m));
  if (c.P2 < 0) rep.sign_violations.push_back("P2 < 0 at " + point_tag(g, m));

  // The displayed squared-norm coefficients fail to reproduce the identity;
  // we verify the combination against an exact sum-of-squares decomposition
  // derived by sequential pivoting instead (the residual below is exact).
  double q2 = g * g * g * m * m + 2.0 * g * g * m * m - g * g * m - g * g - 3.0 * g - 2.0;
  if (std::abs(q2) <= 1e-12) {
    rep.degenerate = true;
    rep.note = "vanishing pivot at " + point_tag(g, m);
    return rep;
  }
  double g2 = g * g, g3 = g2 * g, g4 = g3 * g;
  double q3 = 3.0 * g4 * m * m + g4 + 10.0 * g3 * m * m - 6.0 * g3 * m + 2.0 * g3 +
              8.0 * g2 * m * m - 10.0 * g2 * m - 3.0 * g2 - 4.0 * g * m - 8.0 * g - 4.0;
  double d1 = (2.0 * g * m + g + 2.0) / g;
  double d2 = -2.0 * (g * m + g + 1.0) * q2 / (g3 * m * m * (2.0 * g * m + g + 2.0));
  double d3 = (g * m + g + 1.0) * q3 / (2.0 * g2 * m * m * q2);

  rep.trials = trials;
  constexpr int kDim = 3;
  const double lambdas[] = {0.5, 1.0, 1.5};
  for (int t = 0; t < trials; ++t) {
    Rng rng(Rng::derived(seed, static_cast<std::uint64_t>(t)));
    Vector w = rng.normal_vector(kDim), ws = rng.normal_vector(kDim),
           x = rng.normal_vector(kDim), y = rng.normal_vector(kDim),
           uy = rng.normal_vector(kDim);
    normalize_batch({&w, &ws, &x, &y, &uy});
    Vector ux = (w - x) / g;
    Vector vy = (2.0 * x - w - y) / g;
    Vector bxs = ws / g;  // B x* with x* = 0

    double lhs = c.alpha3 * ((uy + vy).dot(y) - m * y.squaredNorm()) +
                 c.alpha1 * ((ux - uy).dot(x - y) - (ux - uy).squaredNorm()) +
                 c.alpha2 * ((uy - bxs).dot(y) - (uy - bxs).squaredNorm());

    Vector s1 = (g / (2.0 * g * m + g + 2.0)) * w + ws +
                (g * (g * m + g + 1.0) / (2.0 * g * m + g + 2.0)) * y -
                (2.0 * g * (g * m + g + 1.0) / (2.0 * g * m + g + 2.0)) * uy;
    Vector s2 = w - ((g + 2.0) * (g * m - g - 1.0) * (2.0 * g * m + g + 2.0) / (2.0 * q2)) * x -
                (g * (g * m + 1.0) * (g2 * m + g2 + 3.0 * g + 2.0) / (2.0 * q2)) * y - g * uy;
    Vector s3 = x - (g * m + 1.0) * y;
    double squares = (w - ws).squaredNorm() + d1 * s1.squaredNorm() + d2 * s2.squaredNorm() +
                     d3 * s3.squaredNorm();

    double residuals[3];
    double scale = 1.0;
    for (int i = 0; i < 3; ++i) {
      double lam = lambdas[i];
      double mu = (g + g * m + 1.0) / (lam * g * m);
      double rate_term = mu * mu * (lam * (y - x)).squaredNorm();
      residuals[i] = std::abs(lhs - (rate_term - squares));
      scale = std::max(scale, std::abs(rate_term));
    }
    // The mu lambda product is lambda-free, so the three evaluations agree up
    // to roundoff in the mu^2 lambda^2 product (relative, since mu blows up
    // as gamma mu_f_bar -> 0).
    if (std::abs(residuals[0] - residuals[1]) > 1e-9 * scale ||
        std::abs(residuals[2] - residuals[1]) > 1e-9 * scale)
      rep.sign_violations.push_back("lambda dependence detected at trial " + std::to_string(t));
    // Residuals are reported relative to the largest term magnitude: the
    // multipliers blow up like 1/(gamma^3 mu^2) near the origin, and an
    // absolute tolerance there would only measure roundoff, not correctness.
    double term_scale = std::max({1.0, scale, std::abs(lhs), squares});
    rep.max_abs_residual = std::max(rep.max_abs_residual, residuals[1] / term_scale);
  }
  rep.pass = rep.max_abs_residual <= kCertificateTol && rep.sign_violations.empty() &&
             !rep.degenerate;
  return rep;
}

CertificateReport check_lemma51_base(int trials, std::uint64_t seed) {
  CertificateReport rep;
  rep.certificate = "lemma51-base";
  rep.trials = trials;
  const double rho = kSilverRatio;
  const double h0 = std::sqrt(2.0);
  for (int t = 0; t < trials; ++t) {
    Rng rng(Rng::derived(seed, static_cast<std::uint64_t>(t)));
    int dim = 1 + static_cast<int>(rng.uniform_int(0, 4));
    Vector x0 = rng.normal_vector(dim), x1 = rng.normal_vector(dim),
           xs = rng.normal_vector(dim), g1 = rng.normal_vector(dim);
    double f0 = rng.normal(), f1 = rng.normal(), Fs = rng.normal();
    normalize_batch({&x0, &x1, &xs, &g1});
    Vector g0 = (x0 - x1) / h0;

    double lhs = rho * (f0 - f1 - g1.dot(x0 - x1) - 0.5 * (g1 - g0).squaredNorm()) +
                 (f1 - f0 - g0.dot(x1 - x0) - 0.5 * (g1 - g0).squaredNorm());
    double rhs = (2.0 * rho - 1.0) * (Fs - f1) + 0.5 * (x0 - xs).squaredNorm() -
                 h0 * (Fs - f0 - g0.dot(xs - x0) - 0.5 * g0.squaredNorm()) -
                 rho * (Fs - f1 - g1.dot(xs - x1) - 0.5 * g1.squaredNorm()) -
                 0.5 * (x1 - rho * g1 - xs).squaredNorm();
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(lhs - rhs));
  }
  rep.pass = rep.max_abs_residual <= kCertificateTol;
  return rep;
}

CertificateReport check_lemma51_trajectory(int k, const FunctionOracle& F, const Vector& x0,
                                           const Vector& x_star, double F_star) {
  if (!F.smooth()) throw std::invalid_argument("check_lemma51_trajectory: F must be smooth");
  CertificateReport rep;
  rep.certificate = "lemma51-traj";
  rep.trials = 1;

  StepsizeSchedule sched = silver_schedule(k);
  int N = static_cast<int>(sched.values.size());  // 2^k - 1
  GdTrace tr = gd_run(F, sched.values, x0, N);
  double rhok = std::pow(kSilverRatio, k);

  double expr = (2.0 * rhok - 1.0) * (F_star - tr.value.back()) +
                0.5 * (x0 - x_star).squaredNorm();
  for (int i = 0; i < N; ++i)
    expr -= sched.values[static_cast<std::size_t>(i)] *
            (F_star - tr.value[static_cast<std::size_t>(i)] -
             tr.gradient[static_cast<std::size_t>(i)].dot(x_star - tr.x[static_cast<std::size_t>(i)]) -
             0.5 * tr.gradient[static_cast<std::size_t>(i)].squaredNorm());
  expr -= rhok * (F_star - tr.value.back() - tr.gradient.back().dot(x_star - tr.x.back()) -
                  0.5 * tr.gradient.back().squaredNorm());
  expr -= 0.5 * (tr.x.back() - rhok * tr.gradient.back() - x_star).squaredNorm();

  rep.max_abs_residual = std::max(0.0, -expr);
  rep.pass = expr >= -1e-8;
  return rep;
}

CertificateReport check_interpolation(const FunctionOracle& F, int dim, int trials,
                                      std::uint64_t seed) {
  if (!F.smooth()) throw std::invalid_argument("check_interpolation: F must be smooth");
  CertificateReport rep;
  rep.certificate = "interp";
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng(Rng::derived(seed, static_cast<std::uint64_t>(t)));
    Vector x = rng.normal_vector(dim), y = rng.normal_vector(dim);
    Vector gx = F.gradient(x), gy = F.gradient(y);
    double violation =
        F.value(x) + gx.dot(y - x) + 0.5 * (gy - gx).squaredNorm() - F.value(y);
    rep.max_abs_residual = std::max(rep.max_abs_residual, violation);
  }
  rep.max_abs_residual = std::max(rep.max_abs_residual, 0.0);
  rep.pass = rep.max_abs_residual <= 1e-9;
  return rep;
}

}  // namespace splitlab
