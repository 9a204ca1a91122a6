#pragma once

#include <optional>
#include <string>

#include "cergm/subgraph.hpp"

namespace cergm {

enum class Classification { kUniformCertified, kUniformNumerical, kNonuniformCertified, kNonuniformNumerical };

const char* to_string(Classification c);
bool is_uniform(Classification c);

/// A closed-form verdict on whether h == epsilon is optimal.
struct Certificate {
  bool uniform;
  std::string name;
  std::string detail;
};

/// beta2 * epsilon^{e(H)} - I(epsilon)/2, the value of the constant graphon.
double uniform_objective(const SubgraphSpec& H, double epsilon, double beta2);

/// Smallest beta2 at which the clique beats the constant graphon:
/// -I(eps)/2 / (eps^{v(H)/2} - eps^{e(H)}). Empty unless e(H) > v(H)/2.
std::optional<double> threshold_ve(const SubgraphSpec& H, double epsilon);

/// 1 / (2 eps (1 - eps)); above it the two-star optimizer is not constant.
double threshold_twostar(double epsilon);

/// Checks, in order: zero coupling, constant density (e(H) <= 1), weak
/// repulsion, U-region exterior, degree-equation monotonicity at
/// epsilon = 1/2, then the two non-uniformity thresholds.
std::optional<Certificate> certify(const SubgraphSpec& H, double epsilon, double beta2);

/// Bracket [lo, hi] for psi / beta2 at large beta2 (two-star or triangle).
struct LimitBracket {
  double lo;
  double hi;
};

LimitBracket limit_ratio(const SubgraphSpec& H, double epsilon, double beta2);

}  // namespace cergm
