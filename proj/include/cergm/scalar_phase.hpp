#pragma once

#include <optional>
#include <vector>

namespace cergm {

/// l(x) = beta1 x + beta2 x^p - x log x - (1-x) log(1-x) on [0, 1].
struct ScalarModel {
  int p = 2;
  double beta1 = 0.0;
  double beta2 = 0.0;
};

struct MaximizerSet {
  std::vector<double> points;  // ascending, one or two entries
  std::vector<double> values;
  bool on_curve = false;
};

double ell(double x, const ScalarModel& model);
double ell_deriv(double x, const ScalarModel& model);

/// All global maximizers of l. Zeros of l' are bracketed on a fine grid
/// (uniform in x, plus logit-spaced tails near 0 and 1) and refined by
/// bisection; candidates within kTieTolerance of the best value are kept.
MaximizerSet global_maximizers(const ScalarModel& model);

struct CriticalPoint {
  double beta1;
  double beta2;
};

/// Endpoint of the transition curve: (log(p-1) - p/(p-1), p^{p-1}/(p-1)^p).
CriticalPoint critical_point(int p);
/// (p-1)/p, the edge density at the bottom of the U-region.
double critical_density(int p);

struct CurvePoint {
  double beta1;
  double x_low;
  double x_high;
};

/// The beta1 at which l has two equal global maxima, for beta2 above the
/// critical value. Throws DomainError otherwise.
CurvePoint transition_curve(double beta2, int p);

enum class URegion { kOutside, kInside, kBoundary };

struct URegionQuery {
  double epsilon;
  double B;  // the beta2 coordinate of the region (2 beta2 for the graphon model)
  int p;
};

struct URegionResult {
  URegion where;
  std::optional<double> x_low;
  std::optional<double> x_high;
};

URegionResult u_region(const URegionQuery& query);

/// Two-valued degree profile: value `low` on measure `low_measure`, `high` on the rest.
struct TwoValuedProfile {
  double low;
  double high;
  double low_measure;

  double mean() const { return low_measure * low + (1.0 - low_measure) * high; }
};

/// Optimizer of sup { B int g^p - int I(g) : int g = epsilon } inside the region.
TwoValuedProfile u_region_optimizer(double epsilon, double B, int p);

/// B int g^p - int I(g) for a two-valued profile.
double profile_objective(const TwoValuedProfile& g, double B, int p);

inline constexpr double kTieTolerance = 1e-10;

const char* to_string(URegion r);

}  // namespace cergm
