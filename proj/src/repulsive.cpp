#include "cergm/repulsive.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cergm/errors.hpp"
#include "cergm/graphon.hpp"

namespace cergm {

namespace {

double scan_value(double epsilon, double beta2, double tau) {
  return beta2 * tau - 0.5 * entropy_integral(checkerboard(epsilon, tau));
}

}  // namespace

RepulsiveScan repulsive_triangle_scan(double epsilon, double beta2, int grid_points) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("repulsive scan: epsilon must lie in (0, 1)");
  if (beta2 > 0.0) throw DomainError("repulsive scan: beta2 must be <= 0");
  if (grid_points < 3) throw DomainError("repulsive scan: need at least 3 grid points");

  const double top = epsilon * epsilon * epsilon;
  const double r = std::min(epsilon, 1.0 - epsilon);
  const double bottom = std::max(0.0, top - r * r * r);
  auto f = [&](double tau) { return scan_value(epsilon, beta2, std::clamp(tau, bottom, top)); };

  std::vector<double> taus(grid_points), values(grid_points);
  for (int k = 0; k < grid_points; ++k) {
    taus[k] = k + 1 == grid_points ? top : bottom + (top - bottom) * k / (grid_points - 1.0);
    values[k] = f(taus[k]);
  }

  double best_tau = top, best = values.back();
  auto offer = [&](double tau, double v) {
    if (v > best) {
      best = v;
      best_tau = tau;
    }
  };
  offer(bottom, values.front());
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto refine = [&](double a, double b) {
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = f(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = f(x1);
      }
    }
    const double tau = 0.5 * (a + b);
    offer(tau, f(tau));
  };
  // The entropy has infinite slope at the bottom end (a 0 or 1 value), so a
  // maximum can hide inside the first grid cell.
  if (values[0] >= values[1]) refine(taus[0], taus[1]);
  for (int k = 1; k + 1 < grid_points; ++k) {
    if (!(values[k] >= values[k - 1] && values[k] >= values[k + 1])) continue;
    refine(taus[k - 1], taus[k + 1]);
    offer(taus[k], values[k]);
  }
  return {best_tau, best, bottom, top, best_tau == top};
}

double repulsive_critical_beta2(double epsilon, int grid_points, double lower, double tolerance) {
  if (!(lower < 0.0)) throw DomainError("repulsive critical: lower end must be negative");
  if (repulsive_triangle_scan(epsilon, lower, grid_points).uniform) {
    throw DomainError("repulsive critical: the constant graphon still wins at the lower end");
  }
  double lo = lower, hi = 0.0;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (repulsive_triangle_scan(epsilon, mid, grid_points).uniform) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace cergm
