#include "cergm/scalar_phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cergm/errors.hpp"
#include "cergm/graphon.hpp"

namespace cergm {

namespace {

constexpr int kGridPoints = 10000;

void require_order(int p) {
  if (p < 2) throw DomainError("scalar model: star order p must be >= 2");
}

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// Bisection for a sign change of f on [lo, hi], run to floating-point resolution.
template <typename F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> root_grid() {
  std::vector<double> xs;
  const double tail_end = std::log(1.0 / (kGridPoints - 1.0));
  for (double u = -700.0; u < tail_end; u += 0.5) xs.push_back(logistic(u));
  for (int k = 1; k < kGridPoints; ++k) xs.push_back(static_cast<double>(k) / kGridPoints);
  for (double u = -tail_end; u < 36.0; u += 0.5) xs.push_back(logistic(u));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  xs.erase(std::remove_if(xs.begin(), xs.end(), [](double x) { return !(x > 0.0 && x < 1.0); }), xs.end());
  return xs;
}

const std::vector<double>& grid() {
  static const std::vector<double> xs = root_grid();
  return xs;
}

}  // namespace

double ell(double x, const ScalarModel& model) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("l(x): x must lie in [0, 1]");
  return model.beta1 * x + model.beta2 * std::pow(x, model.p) - i_fun(x);
}

double ell_deriv(double x, const ScalarModel& model) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("l'(x): x must lie in (0, 1)");
  return model.beta1 + model.p * model.beta2 * std::pow(x, model.p - 1) - i_fun_deriv(x);
}

MaximizerSet global_maximizers(const ScalarModel& model) {
  require_order(model.p);
  const auto& xs = grid();
  auto deriv = [&](double x) { return ell_deriv(x, model); };

  std::vector<double> candidates;
  double prev = deriv(xs.front());
  if (prev <= 0.0) {
    // l' is +infinity at 0+, so a maximizer sits left of the first grid point.
    const double lo = std::numeric_limits<double>::min();
    candidates.push_back(deriv(lo) <= 0.0 ? lo : bisect(deriv, lo, xs.front()));
  }
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double next = deriv(xs[k + 1]);
    if (prev > 0.0 && next <= 0.0) candidates.push_back(bisect(deriv, xs[k], xs[k + 1]));
    prev = next;
  }
  if (prev > 0.0) {
    const double hi = std::nextafter(1.0, 0.0);
    candidates.push_back(deriv(hi) > 0.0 ? hi : bisect(deriv, xs.back(), hi));
  }

  double best = -std::numeric_limits<double>::infinity();
  for (double x : candidates) best = std::max(best, ell(x, model));
  MaximizerSet out;
  for (double x : candidates) {
    const double v = ell(x, model);
    if (v >= best - kTieTolerance) {
      out.points.push_back(x);
      out.values.push_back(v);
    }
  }
  if (out.points.size() > 2) {
    // Degenerate plateau: keep the extreme pair.
    out.points = {out.points.front(), out.points.back()};
    out.values = {out.values.front(), out.values.back()};
  }
  out.on_curve = out.points.size() == 2;
  return out;
}

CriticalPoint critical_point(int p) {
  require_order(p);
  const double pm1 = p - 1.0;
  return {std::log(pm1) - p / pm1, std::pow(static_cast<double>(p), p - 1) / std::pow(pm1, p)};
}

double critical_density(int p) {
  require_order(p);
  return (p - 1.0) / p;
}

CurvePoint transition_curve(double beta2, int p) {
  require_order(p);
  const double beta2c = critical_point(p).beta2;
  if (!(beta2 > beta2c)) throw DomainError("transition curve: beta2 must exceed the critical value");

  // phi(x) = log(x/(1-x)) - p beta2 x^{p-1}; l' = beta1 - phi. phi rises to a
  // local max at x_a, falls to a local min at x_b, then rises again.
  const double peak = critical_density(p);
  const double level = 1.0 / (p * (p - 1.0) * beta2);
  auto w = [&](double x) { return std::pow(x, p - 1) * (1.0 - x) - level; };
  const double x_a = bisect(w, 0.0, peak);
  const double x_b = bisect(w, peak, 1.0);
  auto phi = [&](double x) { return std::log(x) - std::log1p(-x) - p * beta2 * std::pow(x, p - 1); };

  auto maxima = [&](double beta1) {
    auto f = [&](double x) { return beta1 - phi(x); };
    return std::pair{bisect(f, std::numeric_limits<double>::min(), x_a), bisect(f, x_b, std::nextafter(1.0, 0.0))};
  };
  auto gap = [&](double beta1) {
    const ScalarModel m{p, beta1, beta2};
    auto [lo, hi] = maxima(beta1);
    return ell(hi, m) - ell(lo, m);
  };
  const double beta1 = bisect(gap, phi(x_b), phi(x_a));
  auto [lo, hi] = maxima(beta1);
  return {beta1, lo, hi};
}

URegionResult u_region(const URegionQuery& q) {
  require_order(q.p);
  if (!(q.epsilon > 0.0 && q.epsilon < 1.0)) throw DomainError("u_region: epsilon must lie in (0, 1)");
  const double beta2c = critical_point(q.p).beta2;
  if (q.B < beta2c - kTieTolerance) return {URegion::kOutside, std::nullopt, std::nullopt};
  if (q.B <= beta2c + kTieTolerance) {
    const bool bottom = std::abs(q.epsilon - critical_density(q.p)) <= kTieTolerance;
    return {bottom ? URegion::kBoundary : URegion::kOutside, std::nullopt, std::nullopt};
  }
  const auto curve = transition_curve(q.B, q.p);
  URegionResult out{URegion::kOutside, curve.x_low, curve.x_high};
  if (std::abs(q.epsilon - curve.x_low) <= kTieTolerance || std::abs(q.epsilon - curve.x_high) <= kTieTolerance) {
    out.where = URegion::kBoundary;
  } else if (curve.x_low < q.epsilon && q.epsilon < curve.x_high) {
    out.where = URegion::kInside;
  }
  return out;
}

TwoValuedProfile u_region_optimizer(double epsilon, double B, int p) {
  const auto r = u_region({epsilon, B, p});
  if (r.where != URegion::kInside) throw DomainError("u_region_optimizer: (epsilon, B) is not inside the U-region");
  const double x1 = *r.x_low, x2 = *r.x_high;
  return {x1, x2, (x2 - epsilon) / (x2 - x1)};
}

double profile_objective(const TwoValuedProfile& g, double B, int p) {
  const double m = g.low_measure;
  return B * (m * std::pow(g.low, p) + (1.0 - m) * std::pow(g.high, p)) - m * i_fun(g.low) -
         (1.0 - m) * i_fun(g.high);
}

const char* to_string(URegion r) {
  switch (r) {
    case URegion::kOutside:
      return "outside";
    case URegion::kInside:
      return "inside";
    case URegion::kBoundary:
      return "boundary";
  }
  return "?";
}

}  // namespace cergm
