#include "cergm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cergm/errors.hpp"
#include "cergm/scalar_phase.hpp"
#include "cergm/two_star.hpp"

namespace cergm {

namespace {

constexpr double kKktTolerance = 1e-10;
// Iterates live in logit space, where I'(h) is the logit itself; the limit
// only keeps exp() finite.
constexpr double kLogitLimit = 700.0;
// Entries with h (1 - h) below this no longer move the edge density.
constexpr double kSaturation = 1e-12;
constexpr double kSnapDistance = 1e-6;
constexpr double kMinStep = 1e-12;
constexpr double kTieDistance = 1e-4;
constexpr double kConsolidateTolerance = 1e-6;
// Stop once the objective gains less than kStallGain (relative) over
// kStallWindow iterations.
constexpr int kStallWindow = 50;
constexpr double kStallGain = 1e-14;

double logistic(double u) { return u >= 0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u)); }
double logit(double x) { return std::log(x) - std::log1p(-x); }

void require_open_unit(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
}

void validate(const SolverConfig& config) {
  if (config.max_blocks < 1) throw DomainError("solver: max_blocks must be >= 1");
  if (config.restarts < 0) throw DomainError("solver: restarts must be >= 0");
  if (!(config.initial_step > 0.0)) throw DomainError("solver: initial_step must be positive");
  if (!(config.backtrack > 0.0 && config.backtrack < 1.0)) throw DomainError("solver: backtrack must lie in (0, 1)");
  if (!(config.interior_margin > 0.0 && config.interior_margin < 0.5)) {
    throw DomainError("solver: interior_margin must lie in (0, 1/2)");
  }
  if (!(config.tol_objective > 0.0 && config.tol_constraint > 0.0)) throw DomainError("solver: tolerances must be positive");
  if (config.max_iterations < 1) throw DomainError("solver: max_iterations must be >= 1");
}

// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  Eigen::VectorXd out = (v.array() - theta).max(0.0).matrix();
  return out / out.sum();
}

// Logit-space iterate.
struct State {
  Eigen::VectorXd c;
  Eigen::MatrixXd U;
};

class Problem {
 public:
  Problem(const SubgraphSpec& H, double epsilon, double beta2) : H_(H), epsilon_(epsilon), beta2_(beta2) {}

  double bound() const { return bound_; }

  Eigen::MatrixXd values(const Eigen::MatrixXd& U) const { return U.unaryExpr([](double u) { return logistic(u); }); }

  double density(const Eigen::VectorXd& c, const Eigen::MatrixXd& U, double shift) const {
    double total = 0.0;
    for (Eigen::Index i = 0; i < U.rows(); ++i)
      for (Eigen::Index j = 0; j < U.cols(); ++j)
        total += c(i) * c(j) * logistic(std::clamp(U(i, j) + shift, -bound_, bound_));
    return total;
  }

  // Shift every logit by the same amount so that the edge density is epsilon.
  // Safeguarded Newton on the shift; the density is nondecreasing in it.
  void restore(State& s) const {
    double lo = -2.0 * bound_ - 1.0, hi = 2.0 * bound_ + 1.0, x = 0.0;
    for (int it = 0; it < 200; ++it) {
      double value = 0.0, slope = 0.0;
      for (Eigen::Index i = 0; i < s.U.rows(); ++i) {
        for (Eigen::Index j = 0; j < s.U.cols(); ++j) {
          const double u = s.U(i, j) + x;
          const double w = s.c(i) * s.c(j);
          const double h = logistic(std::clamp(u, -bound_, bound_));
          value += w * h;
          if (u > -bound_ && u < bound_) slope += w * h * (1.0 - h);
        }
      }
      const double r = value - epsilon_;
      if (r == 0.0) break;
      if (r < 0.0) {
        lo = x;
      } else {
        hi = x;
      }
      double next = slope > 0.0 ? x - r / slope : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (next == x || hi - lo <= 1e-15 * std::max(1.0, std::abs(x))) break;
      x = next;
    }
    s.U = (s.U.array() + x).cwiseMax(-bound_).cwiseMin(bound_).matrix();
  }

  BlockGraphon graphon(const State& s) const { return BlockGraphon(s.c, values(s.U)); }

  double value(const State& s) const { return objective(graphon(s), H_, beta2_); }

  struct Derivatives {
    double objective;
    double multiplier;
    Eigen::MatrixXd value_direction;   // damped Euler-Lagrange step in logit space
    Eigen::VectorXd fraction_direction;
    double kkt;
  };

  Derivatives derivatives(const State& s) const {
    const BlockGraphon h = graphon(s);
    const auto terms = hom_density_terms(H_, h);
    const auto& c = s.c;
    const auto K = c.size();
    const Eigen::MatrixXd& v = h.values();
    const Eigen::VectorXd g = v * c;

    // d f / d c_k before the constraint term.
    Eigen::VectorXd a(K);
    for (Eigen::Index k = 0; k < K; ++k) {
      double entropy_row = 0.0;
      for (Eigen::Index j = 0; j < K; ++j) entropy_row += c(j) * i_fun(v(k, j));
      a(k) = beta2_ * terms.fraction_gradient(k) - entropy_row;
    }

    // Pair residual beta2 T - U/2; at a stationary point it equals the
    // multiplier wherever h is not saturated.
    const Eigen::MatrixXd pair = beta2_ * terms.pair_derivative - 0.5 * s.U;
    const double lambda = multiplier(c, v, pair, a, g);

    Derivatives d;
    d.multiplier = lambda;
    d.objective = beta2_ * terms.density - 0.5 * entropy_integral(h);
    d.value_direction = 2.0 * (pair.array() - lambda).matrix();

    // Residuals are measured in value units: how far one full Euler-Lagrange
    // step would move h.
    double kkt = 0.0;
    for (Eigen::Index i = 0; i < K; ++i) {
      for (Eigen::Index j = 0; j < K; ++j) {
        const double target = std::clamp(s.U(i, j) + d.value_direction(i, j), -bound_, bound_);
        kkt = std::max(kkt, std::abs(logistic(target) - v(i, j)));
      }
    }

    const Eigen::VectorXd r = a - 2.0 * lambda * g;
    const double mean = c.dot(r);
    for (Eigen::Index k = 0; k < K; ++k) {
      const double excess = r(k) - mean;
      if (c(k) > 1e-12) {
        kkt = std::max(kkt, std::abs(excess));
      } else if (excess > 0.0) {
        kkt = std::max(kkt, excess);
      }
    }
    d.fraction_direction = r.array() - mean;
    d.kkt = kkt;
    return d;
  }

  double epsilon() const { return epsilon_; }

 private:
  // Mean of the pair residual weighted by each entry's pull on the edge
  // density, c_i c_j h (1 - h). When every entry is saturated the multiplier
  // is the one that best balances the fraction equations instead.
  double multiplier(const Eigen::VectorXd& c, const Eigen::MatrixXd& v, const Eigen::MatrixXd& pair,
                    const Eigen::VectorXd& entropy_free_gradient, const Eigen::VectorXd& g) const {
    const auto K = c.size();
    double weight = 0.0, total = 0.0;
    for (Eigen::Index i = 0; i < K; ++i) {
      for (Eigen::Index j = 0; j < K; ++j) {
        const double sensitivity = v(i, j) * (1.0 - v(i, j));
        if (sensitivity <= kSaturation) continue;
        weight += c(i) * c(j) * sensitivity;
        total += c(i) * c(j) * sensitivity * pair(i, j);
      }
    }
    if (weight > 0.0) return total / weight;
    const double a_mean = c.dot(entropy_free_gradient);
    double num = 0.0, den = 0.0;
    for (Eigen::Index k = 0; k < K; ++k) {
      num += c(k) * (entropy_free_gradient(k) - a_mean) * (g(k) - epsilon_);
      den += c(k) * (g(k) - epsilon_) * (g(k) - epsilon_);
    }
    return den > 0.0 ? 0.5 * num / den : 0.0;
  }

  const SubgraphSpec& H_;
  double epsilon_;
  double beta2_;
  double bound_ = kLogitLimit;
};

// Start values are pulled into [margin, 1 - margin].
State initial_state(const Problem& problem, const BlockGraphon& start, double margin) {
  State s;
  s.c = start.fractions() / start.fractions().sum();
  s.U = start.values().unaryExpr([&](double x) { return logit(std::clamp(x, margin, 1.0 - margin)); });
  problem.restore(s);
  return s;
}

double stationarity_residual(const SubgraphSpec& H, double epsilon, double beta2, const BlockGraphon& h) {
  const Problem problem(H, epsilon, beta2);
  State s{h.fractions(), h.values().unaryExpr([&](double x) {
            if (x <= 0.0) return -problem.bound();
            if (x >= 1.0) return problem.bound();
            return std::clamp(logit(x), -problem.bound(), problem.bound());
          })};
  return problem.derivatives(s).kkt;
}

// Snap values within kSnapDistance of 0 or 1, re-fit the rest to the edge
// constraint, keep the result only if the objective does not drop.
BlockGraphon snap(const BlockGraphon& h, const SubgraphSpec& H, double epsilon, double beta2, double tol_constraint) {
  const auto K = h.blocks();
  Eigen::MatrixXd v = h.values();
  Eigen::MatrixXd logits = Eigen::MatrixXd::Zero(K, K);
  std::vector<std::pair<int, int>> free_cells;
  bool any = false;
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      if (v(i, j) < kSnapDistance && v(i, j) > 0.0) {
        v(i, j) = 0.0;
        any = true;
      } else if (v(i, j) > 1.0 - kSnapDistance && v(i, j) < 1.0) {
        v(i, j) = 1.0;
        any = true;
      } else if (v(i, j) > 0.0 && v(i, j) < 1.0) {
        free_cells.emplace_back(i, j);
        logits(i, j) = logit(v(i, j));
      }
    }
  }
  if (!any) return h;
  const Eigen::VectorXd& c = h.fractions();
  auto fill = [&](double shift) {
    Eigen::MatrixXd out = v;
    for (auto [i, j] : free_cells) out(i, j) = logistic(logits(i, j) + shift);
    return out;
  };
  auto density = [&](const Eigen::MatrixXd& m) { return c.dot(m * c); };

  double free_weight = 0.0;
  for (auto [i, j] : free_cells) free_weight += c(i) * c(j);
  Eigen::MatrixXd snapped = v;
  if (free_weight > 0.0) {
    double lo = -60.0, hi = 60.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (density(fill(mid)) < epsilon) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    snapped = fill(0.5 * (lo + hi));
  }
  if (std::abs(density(snapped) - epsilon) > tol_constraint) return h;
  BlockGraphon candidate(c, snapped);
  if (objective(candidate, H, beta2) < objective(h, H, beta2)) return h;
  return candidate;
}

BlockGraphon random_start(int K, double epsilon, std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::normal_distribution<double> normal(0.0, 2.0);
  Eigen::VectorXd c(K);
  for (int k = 0; k < K; ++k) c(k) = gamma(rng) + 1e-3;
  c /= c.sum();
  Eigen::MatrixXd h(K, K);
  const double centre = logit(epsilon);
  for (int i = 0; i < K; ++i) {
    for (int j = i; j < K; ++j) {
      h(i, j) = h(j, i) = logistic(centre + normal(rng));
    }
  }
  return BlockGraphon(c, h);
}

bool wants(const SolverConfig& config, StartKind kind) {
  return config.starts.empty() || std::find(config.starts.begin(), config.starts.end(), kind) != config.starts.end();
}

}  // namespace

const char* to_string(StartKind k) {
  switch (k) {
    case StartKind::kUniform:
      return "uniform";
    case StartKind::kClique:
      return "clique";
    case StartKind::kAnticlique:
      return "anticlique";
    case StartKind::kCheckerboard:
      return "checkerboard";
    case StartKind::kURegionLift:
      return "u-region-lift";
    case StartKind::kStationary:
      return "stationary";
    case StartKind::kRandom:
      return "random";
  }
  return "?";
}

AscentResult ascend(const SubgraphSpec& H, double epsilon, double beta2, const BlockGraphon& start,
                    const SolverConfig& config) {
  require_open_unit(epsilon);
  validate(config);
  const Problem problem(H, epsilon, beta2);
  State state = initial_state(problem, start, config.interior_margin);
  auto d = problem.derivatives(state);

  double value_step = config.initial_step;
  double fraction_step = config.initial_step;
  int iterations = 0;
  double reference = d.objective;
  for (; iterations < config.max_iterations && d.kkt > kKktTolerance; ++iterations) {
    if (iterations > 0 && iterations % kStallWindow == 0) {
      if (d.objective - reference <= kStallGain * (1.0 + std::abs(d.objective))) break;
      reference = d.objective;
    }
    bool moved = false;

    // Logit step: at unit length this is the Euler-Lagrange fixed-point map.
    for (double step = std::min(config.initial_step, 2.0 * value_step); step >= kMinStep; step *= config.backtrack) {
      State trial = state;
      trial.U = (state.U + step * d.value_direction).cwiseMax(-problem.bound()).cwiseMin(problem.bound());
      problem.restore(trial);
      const double f = problem.value(trial);
      if (f > d.objective) {
        state = std::move(trial);
        value_step = step;
        moved = true;
        break;
      }
    }
    if (moved) d = problem.derivatives(state);

    if (state.c.size() > 1 && d.fraction_direction.cwiseAbs().maxCoeff() > 0.0) {
      bool fraction_moved = false;
      for (double step = std::min(config.initial_step, 2.0 * fraction_step); step >= kMinStep;
           step *= config.backtrack) {
        State trial = state;
        trial.c = project_simplex(state.c + step * d.fraction_direction);
        problem.restore(trial);
        const double f = problem.value(trial);
        if (f > d.objective) {
          state = std::move(trial);
          fraction_step = step;
          fraction_moved = true;
          break;
        }
      }
      if (fraction_moved) {
        d = problem.derivatives(state);
        moved = true;
      }
    }
    if (!moved) break;
  }

  BlockGraphon result = snap(problem.graphon(state), H, epsilon, beta2, config.tol_constraint);
  return {result, objective(result, H, beta2), iterations, stationarity_residual(H, epsilon, beta2, result),
          d.multiplier};
}

std::vector<std::pair<StartKind, BlockGraphon>> structured_starts(const SubgraphSpec& H, double epsilon,
                                                                  double beta2) {
  require_open_unit(epsilon);
  std::vector<std::pair<StartKind, BlockGraphon>> out;
  out.emplace_back(StartKind::kUniform, uniform(epsilon));
  out.emplace_back(StartKind::kClique, clique(epsilon));
  out.emplace_back(StartKind::kAnticlique, anticlique(epsilon));

  const double top = epsilon * epsilon * epsilon;
  const double r_max = std::min(epsilon, 1.0 - epsilon);
  for (double f : {0.25, 0.5, 0.75, 1.0}) {
    const double r = f * r_max;
    out.emplace_back(StartKind::kCheckerboard, checkerboard(epsilon, std::max(0.0, top - r * r * r)));
  }

  if ((H.star_order() || beta2 > 0.0) && H.edge_count() >= 2) {
    const auto r = u_region({epsilon, 2.0 * beta2, H.edge_count()});
    if (r.where == URegion::kInside) {
      const auto g = u_region_optimizer(epsilon, 2.0 * beta2, H.edge_count());
      Eigen::Vector2d c(g.low_measure, 1.0 - g.low_measure);
      Eigen::Vector2d z(g.low, g.high);
      Eigen::Matrix2d h = (z * z.transpose() / epsilon).cwiseMin(1.0);
      out.emplace_back(StartKind::kURegionLift, BlockGraphon(c, h));
    }
  }

  double delta = 0.5 * r_max;
  if (H.star_order() == 2 && std::abs(epsilon - 0.5) <= 1e-12 && beta2 > 2.0) delta = stationary_delta(beta2);
  Eigen::Vector2d c(0.5, 0.5);
  Eigen::Matrix2d h;
  h << epsilon + delta, epsilon, epsilon, epsilon - delta;
  out.emplace_back(StartKind::kStationary, BlockGraphon(c, h));
  return out;
}

SolveResult solve_canonical(const SubgraphSpec& H, double epsilon, double beta2, const SolverConfig& config) {
  require_open_unit(epsilon);
  validate(config);
  const double base = uniform_objective(H, epsilon, beta2);
  const auto certificate = certify(H, epsilon, beta2);

  SolveResult result{uniform(epsilon), base, base, Classification::kUniformNumerical, std::nullopt, {}, {}};
  if (certificate) result.certificate = certificate->name;
  if (certificate && certificate->uniform) {
    result.classification = Classification::kUniformCertified;
    if (!config.audit) return result;
  }

  struct Candidate {
    BlockGraphon graphon;
    double value;
    double kkt;
  };
  std::vector<Candidate> candidates;
  auto consider = [&](const BlockGraphon& h, double value, std::optional<double> kkt) {
    if (std::abs(edge_density(h) - epsilon) > config.tol_constraint) return;
    candidates.push_back({h, value, kkt ? *kkt : stationarity_residual(H, epsilon, beta2, h)});
  };

  SolveDiagnostics& diag = result.diagnostics;
  double best_value = -std::numeric_limits<double>::infinity();
  double worst_value = std::numeric_limits<double>::infinity();
  auto run = [&](const BlockGraphon& start) {
    consider(start, objective(start, H, beta2), std::nullopt);
    const auto a = ascend(H, epsilon, beta2, start, config);
    diag.iterations += a.iterations;
    ++diag.starts;
    consider(a.graphon, a.objective, a.kkt_residual);
    best_value = std::max(best_value, a.objective);
    worst_value = std::min(worst_value, a.objective);
  };

  for (const auto& [kind, start] : structured_starts(H, epsilon, beta2)) {
    if (wants(config, kind)) run(start);
  }
  if (wants(config, StartKind::kRandom)) {
    for (int k = 0; k < config.restarts; ++k) {
      run(random_start(config.max_blocks, epsilon, config.seed, static_cast<std::uint64_t>(k)));
    }
  }
  diag.restart_spread = diag.starts > 0 ? best_value - worst_value : 0.0;

  // Highest value; among values equal to rounding, the best-converged one.
  std::optional<Candidate> best;
  for (const auto& cand : candidates) {
    if (!best) {
      best = cand;
      continue;
    }
    const double slack = 1e-13 * (1.0 + std::abs(best->value));
    if (cand.value > best->value + slack || (cand.value >= best->value - slack && cand.kkt < best->kkt)) best = cand;
  }
  if (!best) best = Candidate{uniform(epsilon), base, 0.0};

  // Blocks that agree to solver precision are merged and the result polished;
  // kept when it is at least as good.
  if (const BlockGraphon merged = best->graphon.canonical(kConsolidateTolerance);
      merged.blocks() < best->graphon.canonical().blocks()) {
    const auto a = ascend(H, epsilon, beta2, merged, config);
    diag.iterations += a.iterations;
    if (a.objective >= best->value - 1e-13 * (1.0 + std::abs(best->value)) &&
        std::abs(edge_density(a.graphon) - epsilon) <= config.tol_constraint) {
      best = Candidate{a.graphon, a.objective, a.kkt_residual};
    }
  }
  diag.kkt_residual = best->kkt;

  if (result.classification == Classification::kUniformCertified) {
    diag.audit_psi = best->value;
    return result;
  }

  const BlockGraphon canon = best->graphon.canonical();
  const double gain = best->value - base;
  if (certificate && !certificate->uniform) {
    result.classification = Classification::kNonuniformCertified;
  } else if (gain > config.tol_objective) {
    result.classification = Classification::kNonuniformNumerical;
  } else {
    result.classification = Classification::kUniformNumerical;
  }

  if (result.classification == Classification::kUniformNumerical || gain <= 0.0) {
    result.best = uniform(epsilon);
    result.psi = base;
    diag.kkt_residual = stationarity_residual(H, epsilon, beta2, result.best);
    if (block_distance(canon, result.best) >= kTieDistance) result.ties.push_back(canon);
  } else {
    result.best = canon;
    result.psi = best->value;
    for (const auto& cand : candidates) {
      if (cand.value < best->value - config.tol_objective) continue;
      const BlockGraphon other = cand.graphon.canonical();
      if (block_distance(other, result.best) < kTieDistance) continue;
      bool seen = false;
      for (const auto& t : result.ties) seen = seen || block_distance(other, t) < kTieDistance;
      if (!seen) result.ties.push_back(other);
    }
  }
  diag.constraint_residual = std::abs(edge_density(result.best) - epsilon);
  return result;
}

DegreeResiduals star_degree_residuals(int p, double beta2, const BlockGraphon& h) {
  if (p < 2) throw DomainError("star_degree_residuals: p must be >= 2");
  const Eigen::VectorXd& c = h.fractions();
  const Eigen::VectorXd g = degree_profile(h);
  const auto K = c.size();
  const double epsilon = edge_density(h);
  Eigen::VectorXd a(K);
  for (Eigen::Index i = 0; i < K; ++i) a(i) = p * beta2 * std::pow(g(i), p - 1);

  auto reconstructed = [&](double beta1) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < K; ++i)
      for (Eigen::Index j = 0; j < K; ++j) total += c(i) * c(j) * logistic(a(i) + a(j) - 2.0 * beta1);
    return total;
  };
  // Decreasing in beta1.
  double lo = -1.0, hi = 1.0;
  while (reconstructed(lo) < epsilon && lo > -1e6) lo *= 2.0;
  while (reconstructed(hi) > epsilon && hi < 1e6) hi *= 2.0;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (reconstructed(mid) > epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  DegreeResiduals out;
  out.beta1 = 0.5 * (lo + hi);
  for (Eigen::Index i = 0; i < K; ++i) {
    double z = 0.0;
    for (Eigen::Index j = 0; j < K; ++j) z += c(j) * logistic(a(i) + a(j) - 2.0 * out.beta1);
    out.degrees.push_back(g(i));
    out.residuals.push_back(g(i) - z);
  }
  return out;
}

MonotonicityReport monotonicity_audit(const SubgraphSpec& H, double epsilon, std::vector<double> beta2_list,
                                      const SolverConfig& config) {
  std::sort(beta2_list.begin(), beta2_list.end());
  MonotonicityReport report;
  for (double b : beta2_list) {
    const auto r = solve_canonical(H, epsilon, b, config);
    report.entries.push_back({b, r.classification, r.psi});
  }
  bool seen = false;
  for (const auto& e : report.entries) {
    if (e.beta2 <= 0.0) continue;
    if (!is_uniform(e.classification)) {
      seen = true;
    } else if (seen) {
      report.violations.push_back(e.beta2);
    }
  }
  seen = false;
  for (auto it = report.entries.rbegin(); it != report.entries.rend(); ++it) {
    if (it->beta2 >= 0.0) continue;
    if (!is_uniform(it->classification)) {
      seen = true;
    } else if (seen) {
      report.violations.push_back(it->beta2);
    }
  }
  return report;
}

}  // namespace cergm
