#include "cergm/fixed_point.hpp"

#include <algorithm>
#include <cmath>

#include "cergm/errors.hpp"

namespace cergm {

namespace {

constexpr double kExpLimit = 700.0;

// Mean over the grid of 1 / (1 + e_x e_y k) and its derivative in log k.
struct Fit {
  double mean;
  double slope;
};

Fit mean_response(const std::vector<double>& e, double k) {
  const auto n = static_cast<double>(e.size());
  double total = 0.0, slope = 0.0;
  for (double ex : e) {
    for (double ey : e) {
      const double s = 1.0 / (1.0 + ex * ey * k);
      total += s;
      slope -= s * (1.0 - s);
    }
  }
  return {total / (n * n), slope / (n * n)};
}

// log k = 2 beta1 such that the mean response equals epsilon.
double solve_log_k(const std::vector<double>& e, double epsilon, double guess) {
  double lo = -2.0 * kExpLimit, hi = 2.0 * kExpLimit;
  double x = std::clamp(guess, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const Fit f = mean_response(e, std::exp(std::clamp(x, -kExpLimit, kExpLimit)));
    const double r = f.mean - epsilon;
    if (std::abs(r) <= 1e-15) break;
    // Mean response decreases in log k.
    if (r > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = f.slope < 0.0 ? x - r / f.slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    x = next;
  }
  return x;
}

double logistic(double u) { return u >= 0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u)); }

}  // namespace

FixedPointResult el_fixed_point_star(int p, double epsilon, double beta2, const FixedPointOptions& options) {
  if (p < 2) throw DomainError("el_fixed_point_star: p must be >= 2");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("el_fixed_point_star: epsilon must lie in (0, 1)");
  if (options.grid_size < 2) throw DomainError("el_fixed_point_star: grid_size must be >= 2");
  if (!(options.damping > 0.0 && options.damping <= 1.0)) {
    throw DomainError("el_fixed_point_star: damping must lie in (0, 1]");
  }
  const int N = options.grid_size;
  const double amp = options.perturbation * std::min(epsilon, 1.0 - epsilon);
  std::vector<double> g(N);
  for (int x = 0; x < N; ++x) g[x] = 2 * x < N ? epsilon + amp : epsilon - amp;
  if (N % 2 == 1) g[N / 2] = epsilon;  // keep the mean exact

  std::vector<double> a(N), e(N), next(N);
  double log_k = 0.0, change = 0.0;
  int sweep = 0;
  bool converged = false;
  auto refresh = [&]() {
    for (int x = 0; x < N; ++x) {
      a[x] = p * beta2 * std::pow(g[x], p - 1);
      e[x] = std::exp(-std::clamp(a[x], -kExpLimit, kExpLimit));
    }
    log_k = solve_log_k(e, epsilon, log_k);
  };
  for (; sweep < options.max_sweeps; ++sweep) {
    refresh();
    const double k = std::exp(std::clamp(log_k, -kExpLimit, kExpLimit));
    change = 0.0;
    for (int x = 0; x < N; ++x) {
      double row = 0.0;
      for (int y = 0; y < N; ++y) row += 1.0 / (1.0 + e[x] * e[y] * k);
      next[x] = (1.0 - options.damping) * g[x] + options.damping * row / N;
      change = std::max(change, std::abs(next[x] - g[x]));
    }
    g.swap(next);
    if (change <= options.tolerance) {
      converged = true;
      ++sweep;
      break;
    }
  }
  refresh();
  const double beta1 = 0.5 * log_k;

  std::vector<double> sorted = g;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> levels, weights;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < sorted.size() && sorted[j] - sorted[i] <= options.cluster_tolerance) sum += sorted[j++];
    levels.push_back(sum / static_cast<double>(j - i));
    weights.push_back(static_cast<double>(j - i) / N);
    i = j;
  }
  const auto K = static_cast<Eigen::Index>(levels.size());
  Eigen::VectorXd c(K);
  Eigen::MatrixXd h(K, K);
  std::vector<double> la(K);
  for (Eigen::Index i = 0; i < K; ++i) {
    c(i) = weights[i];
    la[i] = p * beta2 * std::pow(levels[i], p - 1);
  }
  c /= c.sum();
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = 0; j < K; ++j) h(i, j) = logistic(la[i] + la[j] - 2.0 * beta1);

  std::vector<double> residuals(K);
  for (Eigen::Index i = 0; i < K; ++i) {
    double z = 0.0;
    for (Eigen::Index j = 0; j < K; ++j) z += c(j) * h(i, j);
    residuals[i] = levels[i] - z;
  }
  return {converged, sweep, change, beta1, g, BlockGraphon(c, h), levels, residuals};
}

}  // namespace cergm
