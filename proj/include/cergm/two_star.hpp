#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cergm/graphon.hpp"

namespace cergm {

/// Positive root of log((1/2 + d)/(1/2 - d)) = 2 beta2 d on (0, 1/2); zero
/// when beta2 <= 2.
double stationary_delta(double beta2);

/// The half/half graphon with 1/2 + delta on the first diagonal block,
/// 1/2 - delta on the second and 1/2 across, at edge density 1/2.
struct StationaryPoint {
  double beta2;
  double delta;
  BlockGraphon graphon;
  double lagrange_beta1;  // equals beta2
  // max over block pairs of |2 b1 - 2 b2 g_i - 2 b2 g_j - log((1 - h_ij)/h_ij)|
  double euler_lagrange_residual;
};

StationaryPoint stationary_graphon(double beta2);

/// Signed symmetric step function on consecutive intervals of [0,1]. The
/// interval boundaries must include 1/2.
struct StepPerturbation {
  std::vector<double> widths;
  Eigen::MatrixXd values;
};

/// +e on the two diagonal half-squares, -e across.
StepPerturbation checkerboard_sign_perturbation(double e);
/// Intervals [0,1/2), [1/2,3/4), [3/4,1): -e between the first two, +e
/// between the first and last, zero elsewhere.
StepPerturbation localized_perturbation(double e);

/// Second-order change of the two-star objective at the stationary graphon
/// with parameter delta:
///   beta2 int (int dh dy)^2 dx - (1 - 4 delta^2)^{-1} int_{same half} dh^2 - int_{across} dh^2.
/// Throws DomainError if the perturbation does not integrate to zero.
double second_variation(double delta, double beta2, const StepPerturbation& perturbation);

enum class SaddleVerdict { kMaxCandidate, kSaddle };

struct SaddleReport {
  double delta;
  double checkerboard_value;
  double localized_value;
  SaddleVerdict verdict;
};

/// Saddle iff the two canonical directions give values of opposite sign.
SaddleReport saddle_check(double beta2);

const char* to_string(SaddleVerdict v);

}  // namespace cergm
