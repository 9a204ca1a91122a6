#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "cergm/solver.hpp"
#include "cergm/subgraph.hpp"

namespace cergm {

struct WeightedGraph {
  AdjacencyGraph graph;
  double probability;
};

struct EnumerationResult {
  int n;
  double epsilon;
  double delta;
  double beta2;
  double psi_n_delta;  // (1/n^2) log sum over admitted G of exp(n^2 beta2 t(H, G))
  std::uint64_t num_admitted;
  double mean_t;  // expectation of t(H, G) under the conditional measure
  std::vector<WeightedGraph> top_graphs;
};

struct EnumerationOptions {
  int top_k = 5;
  bool reverse = false;  // walk graph indices from the top down
  int threads = 1;
};

inline constexpr int kMaxEnumerationVertices = 7;
inline constexpr double kWindowSlack = 1e-12;

/// Exact sum over all 2^{n(n-1)/2} labelled graphs with |2|E|/n^2 - epsilon| < delta
/// (up to kWindowSlack).
/// Throws EmptyWindowError when no edge count falls inside the window.
EnumerationResult enumerate_psi(int n, double epsilon, double delta, const SubgraphSpec& H, double beta2,
                                const EnumerationOptions& options = {});

/// The k most probable admitted graphs (all of them if fewer), ties broken by
/// graph index.
std::vector<WeightedGraph> conditional_top(int n, double epsilon, double delta, const SubgraphSpec& H, double beta2,
                                           int k);

struct SweepRow {
  int n;
  std::optional<double> psi_n_delta;  // empty when the window is empty at this n
  std::uint64_t num_admitted;
  std::optional<double> gap;  // psi_n_delta - solver psi
};

struct ConvergenceTable {
  double solver_psi;
  std::vector<SweepRow> rows;
};

ConvergenceTable convergence_sweep(const std::vector<int>& n_list, double epsilon, double delta, const SubgraphSpec& H,
                                   double beta2, const SolverConfig& config = {});

/// Graph with a fixed number of edges and an integer homomorphism count that
/// is updated incrementally under edge swaps.
class EdgeSwapState {
 public:
  struct Swap {
    int remove_slot;  // index into present edges
    int add_slot;     // index into absent pairs
  };

  EdgeSwapState(const SubgraphSpec& H, AdjacencyGraph graph);

  const AdjacencyGraph& graph() const { return graph_; }
  std::int64_t hom_count() const { return hom_; }
  double density() const;  // hom_count / n^{v(H)}
  std::size_t present_count() const { return present_.size(); }
  std::size_t absent_count() const { return absent_.size(); }
  bool frozen() const { return present_.empty() || absent_.empty(); }

  Swap propose(std::mt19937_64& rng) const;
  /// Change of hom_count if `swap` were applied (the graph is left as is).
  std::int64_t delta(const Swap& swap);
  void apply(const Swap& swap, std::int64_t delta);
  /// Full recount from scratch.
  std::int64_t recount() const { return hom_count_graph(H_, graph_); }

 private:
  std::int64_t codegree(int a, int b) const;

  SubgraphSpec H_;
  AdjacencyGraph graph_;
  std::vector<Edge> present_;
  std::vector<Edge> absent_;
  std::vector<int> degree_;
  std::int64_t hom_;
  double scale_;  // n^{v(H)}
};

struct McmcRun {
  int n;
  std::int64_t edge_count;
  double beta2;
  SubgraphSpec H;
  std::int64_t steps;
  std::int64_t burn_in;
  std::uint64_t seed;
  double acceptance_rate;
  double mean_t;
  double standard_error;  // batch means over the post burn-in samples
  std::vector<double> degree_profile;  // mean sorted degree sequence / n
  bool frozen;
};

/// Metropolis chain on graphs with exactly edge_count edges. Proposal: swap a
/// uniform present edge with a uniform absent pair; accept with
/// min(1, exp(n^2 beta2 dt)). The starting graph is the first edge_count pairs
/// of a seeded random permutation.
McmcRun mcmc_sample(int n, std::int64_t edge_count, const SubgraphSpec& H, double beta2, std::int64_t steps,
                    std::int64_t burn_in, std::uint64_t seed);

}  // namespace cergm
