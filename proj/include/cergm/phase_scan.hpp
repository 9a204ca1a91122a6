#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cergm/solver.hpp"

namespace cergm {

/// n evenly spaced values from a to b inclusive ("a:b:n").
struct GridRange {
  double a;
  double b;
  int n;

  std::vector<double> values() const;
  static GridRange parse(const std::string& text);
};

struct PhaseCell {
  double epsilon;
  double beta2;
  double psi;
  Classification classification;
  std::string certificate;  // empty when none applied
  int k_effective;
  double delta_over_uniform;
};

/// A change of uniformity between neighbouring beta2 cells of one epsilon row,
/// narrowed by bisection to [beta2_low, beta2_high].
struct Transition {
  double epsilon;
  double beta2_low;
  double beta2_high;
  bool to_nonuniform;  // uniform at beta2_low, non-uniform at beta2_high

  double beta2() const { return 0.5 * (beta2_low + beta2_high); }
};

struct PhaseScanResult {
  std::vector<PhaseCell> cells;  // row-major: epsilon outer, beta2 inner
  std::vector<Transition> transitions;
};

struct PhaseScanOptions {
  SolverConfig solver;
  int threads = 1;
  double refine_tolerance = 1e-3;
};

/// Solves every cell on a bounded worker pool; results are ordered by cell
/// index whatever the completion order.
PhaseScanResult phase_scan(const SubgraphSpec& H, const GridRange& epsilon, const GridRange& beta2,
                           const PhaseScanOptions& options = {});

/// CSV with a '#' header line documenting each column.
void write_phase_csv(std::ostream& out, const PhaseScanResult& scan);

/// The --threads value if given, else ERGM_THREADS, else 1.
int resolve_threads(std::optional<int> flag);

}  // namespace cergm
