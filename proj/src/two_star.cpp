#include "cergm/two_star.hpp"

#include <cmath>

#include "cergm/errors.hpp"

namespace cergm {

namespace {

double stationary_equation(double delta, double beta2) {
  return std::log((0.5 + delta) / (0.5 - delta)) - 2.0 * beta2 * delta;
}

}  // namespace

double stationary_delta(double beta2) {
  if (beta2 <= 2.0) return 0.0;
  // G(0) = 0 with G'(0) < 0 and G -> +inf at 1/2, G convex: one sign change.
  double lo = 0.0, hi = 0.5;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (stationary_equation(mid, beta2) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

StationaryPoint stationary_graphon(double beta2) {
  const double delta = stationary_delta(beta2);
  Eigen::Vector2d c(0.5, 0.5);
  Eigen::Matrix2d h;
  h << 0.5 + delta, 0.5, 0.5, 0.5 - delta;
  const BlockGraphon graphon = delta == 0.0 ? uniform(0.5) : BlockGraphon(c, h);

  const Eigen::VectorXd g = h * c;
  const double beta1 = beta2;
  double residual = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double lhs = 2.0 * beta1 - 2.0 * beta2 * g(i) - 2.0 * beta2 * g(j);
      const double rhs = std::log((1.0 - h(i, j)) / h(i, j));
      residual = std::max(residual, std::abs(lhs - rhs));
    }
  }
  return {beta2, delta, graphon, beta1, residual};
}

StepPerturbation checkerboard_sign_perturbation(double e) {
  Eigen::Matrix2d v;
  v << e, -e, -e, e;
  return {{0.5, 0.5}, v};
}

StepPerturbation localized_perturbation(double e) {
  Eigen::Matrix3d v;
  v << 0.0, -e, e, -e, 0.0, 0.0, e, 0.0, 0.0;
  return {{0.5, 0.25, 0.25}, v};
}

double second_variation(double delta, double beta2, const StepPerturbation& perturbation) {
  const auto& w = perturbation.widths;
  const auto& v = perturbation.values;
  const auto K = static_cast<Eigen::Index>(w.size());
  if (K == 0 || v.rows() != K || v.cols() != K) throw DomainError("second_variation: shape mismatch");
  if (!(delta >= 0.0 && delta < 0.5)) throw DomainError("second_variation: delta must lie in [0, 1/2)");
  if ((v - v.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw DomainError("second_variation: perturbation not symmetric");

  // Which half each interval lies in; 1/2 must be a breakpoint.
  std::vector<int> half(K);
  double start = 0.0;
  for (Eigen::Index i = 0; i < K; ++i) {
    if (!(w[i] > 0.0)) throw DomainError("second_variation: interval widths must be positive");
    const double end = start + w[i];
    if (start < 0.5 - 1e-12 && end > 0.5 + 1e-12) {
      throw DomainError("second_variation: intervals must not straddle 1/2");
    }
    half[i] = end <= 0.5 + 1e-12 ? 0 : 1;
    start = end;
  }
  if (std::abs(start - 1.0) > 1e-12) throw DomainError("second_variation: widths must sum to 1");

  double mean = 0.0;
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = 0; j < K; ++j) mean += w[i] * w[j] * v(i, j);
  if (std::abs(mean) > 1e-12) throw DomainError("second_variation: perturbation must integrate to zero");

  const double same_half_weight = 1.0 / (1.0 - 4.0 * delta * delta);
  double degree_term = 0.0, quadratic = 0.0;
  for (Eigen::Index i = 0; i < K; ++i) {
    double d = 0.0;
    for (Eigen::Index j = 0; j < K; ++j) {
      d += w[j] * v(i, j);
      const double weight = half[i] == half[j] ? same_half_weight : 1.0;
      quadratic += weight * w[i] * w[j] * v(i, j) * v(i, j);
    }
    degree_term += w[i] * d * d;
  }
  return beta2 * degree_term - quadratic;
}

SaddleReport saddle_check(double beta2) {
  const double delta = stationary_delta(beta2);
  const double a = second_variation(delta, beta2, checkerboard_sign_perturbation(1.0));
  const double b = second_variation(delta, beta2, localized_perturbation(1.0));
  const bool opposite = (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0);
  return {delta, a, b, opposite ? SaddleVerdict::kSaddle : SaddleVerdict::kMaxCandidate};
}

const char* to_string(SaddleVerdict v) { return v == SaddleVerdict::kSaddle ? "saddle" : "max-candidate"; }

}  // namespace cergm
