#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace cergm {

class BlockGraphon;

using Edge = std::pair<int, int>;

/// A finite simple graph H whose homomorphism density enters the model.
///
/// Edges are stored normalized (first < second) in insertion order.
/// Vertices need not be connected; isolated vertices contribute a factor 1
/// to every density.
class SubgraphSpec {
 public:
  /// Throws DomainError on loops, duplicate edges, out-of-range endpoints
  /// or more than kMaxVertices vertices.
  SubgraphSpec(int vertex_count, std::vector<Edge> edges);

  static SubgraphSpec edge();
  static SubgraphSpec star(int p);  // center 0, leaves 1..p
  static SubgraphSpec triangle();

  /// Parses "edge", "triangle", "star:p", or a JSON object {"v":..,"edges":..}.
  static SubgraphSpec parse(const std::string& text);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<int> degrees() const;

  /// p if H is a p-star (one center adjacent to p leaves, no other vertices).
  std::optional<int> star_order() const;
  bool is_triangle() const;
  bool is_edge() const { return star_order() == 1; }

  /// Short display name ("edge", "star:2", "triangle" or "graph(v=..,e=..)").
  std::string name() const;

  static constexpr int kMaxVertices = 8;

  friend bool operator==(const SubgraphSpec&, const SubgraphSpec&) = default;

 private:
  int vertex_count_;
  std::vector<Edge> edges_;
};

void to_json(nlohmann::json& j, const SubgraphSpec& h);
void from_json(const nlohmann::json& j, SubgraphSpec& h);

/// Simple undirected graph on n vertices as a dense 0/1 matrix.
class AdjacencyGraph {
 public:
  explicit AdjacencyGraph(int n);
  /// Throws DomainError unless symmetric with zero diagonal.
  explicit AdjacencyGraph(std::vector<std::vector<bool>> rows);

  static AdjacencyGraph complete(int n);
  static AdjacencyGraph path(int n);
  /// Upper-triangle bit string, row-major over pairs (0,1),(0,2),...,(n-2,n-1).
  static AdjacencyGraph from_bitstring(int n, const std::string& bits);

  int size() const { return n_; }
  bool has_edge(int i, int j) const { return adj_[index(i, j)] != 0; }
  void set_edge(int i, int j, bool present);
  std::int64_t edge_count() const;
  std::vector<int> degrees() const;
  std::string to_bitstring() const;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  int n_;
  std::vector<std::uint8_t> adj_;
};

/// |hom(H, G)|: all maps V(H) -> V(G) sending edges to edges.
std::int64_t hom_count_graph(const SubgraphSpec& H, const AdjacencyGraph& G);

/// |hom(H, G)| / n^{v(H)}. Uses closed forms for stars and triangles.
double hom_density_graph(const SubgraphSpec& H, const AdjacencyGraph& G);

/// Reference implementation: plain enumeration of all n^{v(H)} maps.
std::int64_t hom_count_brute_force(const SubgraphSpec& H, const AdjacencyGraph& G);

/// Work budget (number of block assignments) for exact block evaluation.
inline constexpr double kDefaultAssignmentBudget = 1e8;

/// t(H, h) for a block graphon: sum over a: V(H) -> blocks of
/// prod_v c_{a(v)} * prod_{ij in E(H)} h_{a(i) a(j)}.
double hom_density_blocks(const SubgraphSpec& H, const BlockGraphon& h,
                          double budget = kDefaultAssignmentBudget);

/// d t / d h_{ij} with h_{ij} = h_{ji} treated as one variable.
Eigen::MatrixXd hom_density_gradient(const SubgraphSpec& H, const BlockGraphon& h,
                                     double budget = kDefaultAssignmentBudget);

/// Everything the solver needs from one pass over the block assignments.
struct BlockDensityTerms {
  double density = 0.0;
  // Derivative density of t with respect to a symmetric perturbation
  // supported on block pair (i, j), per unit of perturbed measure. Finite
  // even when a block has zero fraction.
  Eigen::MatrixXd pair_derivative;
  // d t / d c_k holding the values fixed.
  Eigen::VectorXd fraction_gradient;
};

BlockDensityTerms hom_density_terms(const SubgraphSpec& H, const BlockGraphon& h,
                                    double budget = kDefaultAssignmentBudget);

}  // namespace cergm
