#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cergm/certificates.hpp"
#include "cergm/graphon.hpp"
#include "cergm/subgraph.hpp"

namespace cergm {

enum class StartKind { kUniform, kClique, kAnticlique, kCheckerboard, kURegionLift, kStationary, kRandom };

const char* to_string(StartKind k);

struct SolverConfig {
  int max_blocks = 4;
  int restarts = 24;  // random starts, on top of the structured ones
  double initial_step = 1.0;
  double backtrack = 0.5;
  double interior_margin = 1e-9;
  double tol_objective = 1e-9;
  double tol_constraint = 1e-9;
  std::uint64_t seed = 1;
  int max_iterations = 20000;
  // Run the numerical search even when a uniform certificate applies.
  bool audit = false;
  // Empty means every structured start plus `restarts` random ones.
  std::vector<StartKind> starts;
};

struct SolveDiagnostics {
  int iterations = 0;  // summed over all starts
  int starts = 0;
  double constraint_residual = 0.0;
  double kkt_residual = 0.0;   // of the winning start
  double restart_spread = 0.0;  // max - min objective over starts
  std::optional<double> audit_psi;  // numerical optimum when audit is on
};

struct SolveResult {
  BlockGraphon best;
  double psi;
  double uniform_psi;
  Classification classification;
  std::optional<std::string> certificate;
  SolveDiagnostics diagnostics;
  // Other optimizers within tol_objective of psi that are not the same step
  // function (e.g. h and 1 - h at epsilon = 1/2).
  std::vector<BlockGraphon> ties;
};

/// One local ascent from `start` (values are pulled into the interior box,
/// edge density is restored before the first step).
struct AscentResult {
  BlockGraphon graphon;
  double objective;
  int iterations;
  double kkt_residual;
  double multiplier;  // Lagrange multiplier of the edge constraint
};

AscentResult ascend(const SubgraphSpec& H, double epsilon, double beta2, const BlockGraphon& start,
                    const SolverConfig& config);

/// sup over block graphons with edge density epsilon of
/// beta2 t(H, h) - 1/2 int I(h).
SolveResult solve_canonical(const SubgraphSpec& H, double epsilon, double beta2, const SolverConfig& config = {});

/// Structured starting points used by solve_canonical (without random ones).
std::vector<std::pair<StartKind, BlockGraphon>> structured_starts(const SubgraphSpec& H, double epsilon, double beta2);

/// For a p-star: the multiplier beta1 that makes the logistic reconstruction
/// reproduce edge density epsilon, and F(z) at each block degree z.
struct DegreeResiduals {
  double beta1;
  std::vector<double> degrees;
  std::vector<double> residuals;
};

DegreeResiduals star_degree_residuals(int p, double beta2, const BlockGraphon& h);

struct MonotonicityEntry {
  double beta2;
  Classification classification;
  double psi;
};

struct MonotonicityReport {
  std::vector<MonotonicityEntry> entries;  // sorted by beta2
  std::vector<double> violations;           // beta2 values breaking one-sidedness
  bool ok() const { return violations.empty(); }
};

/// Once non-uniform at some beta2 > 0, every larger tested beta2 must be
/// non-uniform too (and symmetrically below zero). Violations indicate an
/// under-resolved search, not a failure of the statement.
MonotonicityReport monotonicity_audit(const SubgraphSpec& H, double epsilon, std::vector<double> beta2_list,
                                      const SolverConfig& config = {});

}  // namespace cergm
