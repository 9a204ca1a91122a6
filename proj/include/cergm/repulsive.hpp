#pragma once

namespace cergm {

struct RepulsiveScan {
  double tau_star;
  double lower_bound;  // beta2 tau* - 1/2 int I(checkerboard(epsilon, tau*))
  double tau_min;
  double tau_max;      // epsilon^3, the constant graphon
  bool uniform;        // tau* == epsilon^3
};

/// Maximizes beta2 tau - 1/2 int I(checkerboard(epsilon, tau)) over the
/// admissible tau range: grid of `grid_points`, golden-section refinement of
/// every interior grid maximum, exact endpoints. Requires beta2 <= 0.
RepulsiveScan repulsive_triangle_scan(double epsilon, double beta2, int grid_points = 2001);

/// Bisection in beta2 on [lower, 0] for the point where the scan stops
/// returning the constant graphon.
double repulsive_critical_beta2(double epsilon, int grid_points = 2001, double lower = -50.0,
                                double tolerance = 1e-6);

}  // namespace cergm
