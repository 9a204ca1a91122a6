#include "cergm/certificates.hpp"

#include <cmath>
#include <sstream>

#include "cergm/errors.hpp"
#include "cergm/graphon.hpp"
#include "cergm/scalar_phase.hpp"

namespace cergm {

namespace {

void require_open_unit(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
}

constexpr double kHalfTolerance = 1e-12;

}  // namespace

const char* to_string(Classification c) {
  switch (c) {
    case Classification::kUniformCertified:
      return "uniform-certified";
    case Classification::kUniformNumerical:
      return "uniform-numerical";
    case Classification::kNonuniformCertified:
      return "nonuniform-certified";
    case Classification::kNonuniformNumerical:
      return "nonuniform-numerical";
  }
  return "?";
}

bool is_uniform(Classification c) {
  return c == Classification::kUniformCertified || c == Classification::kUniformNumerical;
}

double uniform_objective(const SubgraphSpec& H, double epsilon, double beta2) {
  return beta2 * std::pow(epsilon, H.edge_count()) - 0.5 * i_fun(epsilon);
}

std::optional<double> threshold_ve(const SubgraphSpec& H, double epsilon) {
  require_open_unit(epsilon);
  const double v = H.vertex_count(), e = H.edge_count();
  if (!(e > v / 2.0)) return std::nullopt;
  return -0.5 * i_fun(epsilon) / (std::pow(epsilon, v / 2.0) - std::pow(epsilon, e));
}

double threshold_twostar(double epsilon) {
  require_open_unit(epsilon);
  return 1.0 / (2.0 * epsilon * (1.0 - epsilon));
}

std::optional<Certificate> certify(const SubgraphSpec& H, double epsilon, double beta2) {
  require_open_unit(epsilon);
  const int e = H.edge_count();
  const auto star = H.star_order();

  if (beta2 == 0.0) return Certificate{true, "zero-coupling", "entropy alone is strictly concave"};
  if (e <= 1) return Certificate{true, "constant-density", "t(H, h) is fixed by the edge density"};
  if (beta2 < 0.0 && -beta2 * e * (e - 1) < 2.0) {
    return Certificate{true, "weak-repulsion", "|beta2| e(H)(e(H)-1) < 2"};
  }
  if (star || beta2 > 0.0) {
    // Jensen (stars) or Hoelder (beta2 >= 0) reduce to a one-dimensional
    // problem with exponent e(H) and coupling 2 beta2.
    const auto r = u_region({epsilon, 2.0 * beta2, e});
    if (r.where == URegion::kOutside) {
      std::ostringstream os;
      os << "(epsilon, 2 beta2) outside the U-region for exponent " << e;
      return Certificate{true, "u-region-exterior", os.str()};
    }
  }
  if (star && std::abs(epsilon - 0.5) <= kHalfTolerance && beta2 <= 4.0 / (e * (e - 1.0))) {
    return Certificate{true, "f-prime-bound", "degree equation strictly monotone: beta2 <= 4/(p(p-1)) at epsilon = 1/2"};
  }
  if (auto ve = threshold_ve(H, epsilon); ve && beta2 > *ve) {
    std::ostringstream os;
    os << "clique beats the constant graphon for beta2 > " << *ve;
    return Certificate{false, "clique-threshold", os.str()};
  }
  if (star == 2 && beta2 > threshold_twostar(epsilon)) {
    std::ostringstream os;
    os << "two-block perturbation beats the constant graphon for beta2 > " << threshold_twostar(epsilon);
    return Certificate{false, "two-star-threshold", os.str()};
  }
  return std::nullopt;
}

LimitBracket limit_ratio(const SubgraphSpec& H, double epsilon, double beta2) {
  require_open_unit(epsilon);
  if (!(beta2 > 0.0)) throw DomainError("limit_ratio: beta2 must be positive");
  double lo = 0.0;
  if (H.star_order() == 2) {
    lo = max_two_star_density(epsilon);
  } else if (H.is_triangle()) {
    lo = max_triangle_density(epsilon);
  } else {
    throw DomainError("limit_ratio: only the two-star and the triangle have a closed-form maximal density");
  }
  return {lo, lo + std::log(2.0) / (2.0 * beta2)};
}

}  // namespace cergm
