#pragma once

#include <vector>

#include "cergm/graphon.hpp"

namespace cergm {

struct FixedPointOptions {
  int grid_size = 256;
  double damping = 0.5;
  int max_sweeps = 2000;
  double tolerance = 1e-12;
  // Initial profile: epsilon +- perturbation * min(epsilon, 1 - epsilon) on the
  // two halves of the grid.
  double perturbation = 0.1;
  double cluster_tolerance = 1e-6;
};

struct FixedPointResult {
  bool converged;
  int sweeps;
  double change;  // sup-norm of the last update
  double beta1;
  std::vector<double> profile;  // g on the grid
  BlockGraphon graphon;         // logistic reconstruction on the clustered profile
  std::vector<double> degrees;  // distinct g values
  std::vector<double> residuals;  // F at each distinct g value
};

/// Damped iteration of the star degree equation
///   g(x) = int [1 + exp(2 beta1 - p beta2 g(x)^{p-1} - p beta2 g(y)^{p-1})]^{-1} dy
/// with beta1 re-solved every sweep so that int g = epsilon. Non-convergence is
/// reported in the result rather than thrown.
FixedPointResult el_fixed_point_star(int p, double epsilon, double beta2, const FixedPointOptions& options = {});

}  // namespace cergm
