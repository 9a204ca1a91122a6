#include "cergm/subgraph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "cergm/errors.hpp"
#include "cergm/graphon.hpp"

namespace cergm {

SubgraphSpec::SubgraphSpec(int vertex_count, std::vector<Edge> edges) : vertex_count_(vertex_count) {
  if (vertex_count < 1 || vertex_count > kMaxVertices) {
    throw DomainError("subgraph: vertex count must be in [1, " + std::to_string(kMaxVertices) + "]");
  }
  std::set<Edge> seen;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= vertex_count || b >= vertex_count) {
      throw DomainError("subgraph: edge endpoint out of range");
    }
    if (a == b) throw DomainError("subgraph: self-loop");
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) throw DomainError("subgraph: duplicate edge");
    edges_.emplace_back(a, b);
  }
}

SubgraphSpec SubgraphSpec::edge() { return SubgraphSpec(2, {{0, 1}}); }

SubgraphSpec SubgraphSpec::star(int p) {
  if (p < 1 || p + 1 > kMaxVertices) throw DomainError("subgraph: star order out of range");
  std::vector<Edge> edges;
  for (int leaf = 1; leaf <= p; ++leaf) edges.emplace_back(0, leaf);
  return SubgraphSpec(p + 1, std::move(edges));
}

SubgraphSpec SubgraphSpec::triangle() { return SubgraphSpec(3, {{0, 1}, {0, 2}, {1, 2}}); }

SubgraphSpec SubgraphSpec::parse(const std::string& text) {
  if (text == "edge") return edge();
  if (text == "triangle") return triangle();
  if (text.rfind("star:", 0) == 0) {
    std::size_t used = 0;
    int p = 0;
    try {
      p = std::stoi(text.substr(5), &used);
    } catch (const std::exception&) {
      throw DomainError("subgraph: bad star order in '" + text + "'");
    }
    if (used != text.size() - 5) throw DomainError("subgraph: bad star order in '" + text + "'");
    return star(p);
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    throw DomainError("subgraph: expected edge, triangle, star:p or a JSON object, got '" + text + "'");
  }
  SubgraphSpec out = edge();
  from_json(j, out);
  return out;
}

std::vector<int> SubgraphSpec::degrees() const {
  std::vector<int> deg(vertex_count_, 0);
  for (auto [a, b] : edges_) {
    ++deg[a];
    ++deg[b];
  }
  return deg;
}

std::optional<int> SubgraphSpec::star_order() const {
  const int e = edge_count();
  if (e == 0 || vertex_count_ != e + 1) return std::nullopt;
  auto deg = degrees();
  if (e == 1) return 1;
  int centers = 0;
  for (int d : deg) {
    if (d == e) {
      ++centers;
    } else if (d != 1) {
      return std::nullopt;
    }
  }
  if (centers != 1) return std::nullopt;
  return e;
}

bool SubgraphSpec::is_triangle() const {
  return vertex_count_ == 3 && edge_count() == 3;
}

std::string SubgraphSpec::name() const {
  if (auto p = star_order()) return *p == 1 ? "edge" : "star:" + std::to_string(*p);
  if (is_triangle()) return "triangle";
  std::ostringstream os;
  os << "graph(v=" << vertex_count_ << ",e=" << edge_count() << ")";
  return os.str();
}

void to_json(nlohmann::json& j, const SubgraphSpec& h) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [a, b] : h.edges()) edges.push_back({a, b});
  j = nlohmann::json{{"v", h.vertex_count()}, {"edges", edges}};
}

void from_json(const nlohmann::json& j, SubgraphSpec& h) {
  if (!j.is_object() || !j.contains("v") || !j.contains("edges")) {
    throw DomainError("subgraph: JSON must have fields \"v\" and \"edges\"");
  }
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw DomainError("subgraph: each edge must be a pair");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  h = SubgraphSpec(j.at("v").get<int>(), std::move(edges));
}

// ---------------------------------------------------------------------------
// AdjacencyGraph

AdjacencyGraph::AdjacencyGraph(int n) : n_(n) {
  if (n < 1) throw DomainError("graph: need at least one vertex");
  adj_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
}

AdjacencyGraph::AdjacencyGraph(std::vector<std::vector<bool>> rows) : AdjacencyGraph(static_cast<int>(rows.size())) {
  for (int i = 0; i < n_; ++i) {
    if (static_cast<int>(rows[i].size()) != n_) throw DomainError("graph: adjacency matrix not square");
    if (rows[i][i]) throw DomainError("graph: nonzero diagonal");
    for (int j = 0; j < n_; ++j) {
      if (rows[i][j] != rows[j][i]) throw DomainError("graph: adjacency matrix not symmetric");
      adj_[index(i, j)] = rows[i][j] ? 1 : 0;
    }
  }
}

AdjacencyGraph AdjacencyGraph::complete(int n) {
  AdjacencyGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.set_edge(i, j, true);
  return g;
}

AdjacencyGraph AdjacencyGraph::path(int n) {
  AdjacencyGraph g(n);
  for (int i = 0; i + 1 < n; ++i) g.set_edge(i, i + 1, true);
  return g;
}

AdjacencyGraph AdjacencyGraph::from_bitstring(int n, const std::string& bits) {
  AdjacencyGraph g(n);
  const std::size_t pairs = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  if (bits.size() != pairs) throw DomainError("graph: bitstring length does not match n(n-1)/2");
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++k) {
      if (bits[k] != '0' && bits[k] != '1') throw DomainError("graph: bitstring must contain only 0/1");
      g.set_edge(i, j, bits[k] == '1');
    }
  }
  return g;
}

void AdjacencyGraph::set_edge(int i, int j, bool present) {
  if (i == j) throw DomainError("graph: self-loop");
  adj_[index(i, j)] = present ? 1 : 0;
  adj_[index(j, i)] = present ? 1 : 0;
}

std::int64_t AdjacencyGraph::edge_count() const {
  std::int64_t m = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) m += has_edge(i, j);
  return m;
}

std::vector<int> AdjacencyGraph::degrees() const {
  std::vector<int> deg(n_, 0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) deg[i] += has_edge(i, j);
  return deg;
}

std::string AdjacencyGraph::to_bitstring() const {
  std::string bits;
  bits.reserve(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_ - 1) / 2);
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) bits.push_back(has_edge(i, j) ? '1' : '0');
  return bits;
}

// ---------------------------------------------------------------------------
// Homomorphism counts on finite graphs

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw BudgetError("homomorphism count overflows 64 bits");
  return out;
}

std::int64_t checked_pow(std::int64_t base, int exponent) {
  std::int64_t out = 1;
  for (int k = 0; k < exponent; ++k) out = checked_mul(out, base);
  return out;
}

std::int64_t count_backtracking(const SubgraphSpec& H, const AdjacencyGraph& G) {
  const int v = H.vertex_count();
  const int n = G.size();
  // Earlier-neighbour lists let each partial map be checked incrementally.
  std::vector<std::vector<int>> back(v);
  for (auto [a, b] : H.edges()) back[std::max(a, b)].push_back(std::min(a, b));
  std::vector<int> image(v, 0);
  std::int64_t total = 0;
  auto recurse = [&](auto&& self, int vertex) -> void {
    if (vertex == v) {
      ++total;
      return;
    }
    for (int x = 0; x < n; ++x) {
      bool ok = true;
      for (int u : back[vertex]) {
        if (!G.has_edge(image[u], x)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      image[vertex] = x;
      self(self, vertex + 1);
    }
  };
  recurse(recurse, 0);
  return total;
}

std::int64_t count_triangle_maps(const AdjacencyGraph& G) {
  // trace(A^3) = sum over ordered adjacent pairs of common neighbours.
  const int n = G.size();
  std::int64_t total = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!G.has_edge(i, j)) continue;
      for (int k = 0; k < n; ++k) total += G.has_edge(j, k) && G.has_edge(k, i);
    }
  }
  return total;
}

}  // namespace

std::int64_t hom_count_brute_force(const SubgraphSpec& H, const AdjacencyGraph& G) {
  const int v = H.vertex_count();
  const int n = G.size();
  std::vector<int> image(v, 0);
  std::int64_t total = 0;
  while (true) {
    bool ok = true;
    for (auto [a, b] : H.edges()) {
      if (!G.has_edge(image[a], image[b])) {
        ok = false;
        break;
      }
    }
    total += ok;
    int pos = 0;
    while (pos < v && ++image[pos] == n) image[pos++] = 0;
    if (pos == v) break;
  }
  return total;
}

std::int64_t hom_count_graph(const SubgraphSpec& H, const AdjacencyGraph& G) {
  if (auto p = H.star_order()) {
    std::int64_t total = 0;
    for (int d : G.degrees()) total += checked_pow(d, *p);
    return total;
  }
  if (H.is_triangle()) return count_triangle_maps(G);
  return count_backtracking(H, G);
}

double hom_density_graph(const SubgraphSpec& H, const AdjacencyGraph& G) {
  const double n = G.size();
  if (auto p = H.star_order()) {
    double total = 0.0;
    for (int d : G.degrees()) total += std::pow(d / n, *p);
    return total / n;
  }
  return static_cast<double>(hom_count_graph(H, G)) / std::pow(n, H.vertex_count());
}

// ---------------------------------------------------------------------------
// Block graphon densities

namespace {

void check_budget(const SubgraphSpec& H, int blocks, double budget) {
  const double work = std::pow(static_cast<double>(blocks), H.vertex_count());
  if (work > budget) {
    std::ostringstream os;
    os << "hom density: " << blocks << "^" << H.vertex_count() << " assignments exceed budget " << budget;
    throw BudgetError(os.str());
  }
}

// Calls fn(assignment) for every map V(H) -> {0..K-1}.
template <typename Fn>
void for_each_assignment(int vertices, int blocks, Fn&& fn) {
  std::vector<int> a(vertices, 0);
  while (true) {
    fn(a);
    int pos = 0;
    while (pos < vertices && ++a[pos] == blocks) a[pos++] = 0;
    if (pos == vertices) return;
  }
}

}  // namespace

double hom_density_blocks(const SubgraphSpec& H, const BlockGraphon& h, double budget) {
  check_budget(H, h.blocks(), budget);
  const auto& c = h.fractions();
  const auto& vals = h.values();
  double total = 0.0;
  for_each_assignment(H.vertex_count(), h.blocks(), [&](const std::vector<int>& a) {
    double term = 1.0;
    for (int x : a) term *= c(x);
    if (term == 0.0) return;
    for (auto [u, w] : H.edges()) term *= vals(a[u], a[w]);
    total += term;
  });
  return total;
}

BlockDensityTerms hom_density_terms(const SubgraphSpec& H, const BlockGraphon& h, double budget) {
  check_budget(H, h.blocks(), budget);
  const int K = h.blocks();
  const int v = H.vertex_count();
  const int e = H.edge_count();
  const auto& c = h.fractions();
  const auto& vals = h.values();
  const auto& edges = H.edges();

  BlockDensityTerms out;
  out.pair_derivative = Eigen::MatrixXd::Zero(K, K);
  out.fraction_gradient = Eigen::VectorXd::Zero(K);

  std::vector<double> cw(v), hv(e), prefix(e + 1), suffix(e + 1);
  for_each_assignment(v, K, [&](const std::vector<int>& a) {
    for (int x = 0; x < v; ++x) cw[x] = c(a[x]);
    for (int k = 0; k < e; ++k) hv[k] = vals(a[edges[k].first], a[edges[k].second]);
    prefix[0] = 1.0;
    for (int k = 0; k < e; ++k) prefix[k + 1] = prefix[k] * hv[k];
    suffix[e] = 1.0;
    for (int k = e - 1; k >= 0; --k) suffix[k] = suffix[k + 1] * hv[k];
    const double edge_product = prefix[e];

    double vertex_product = 1.0;
    for (double w : cw) vertex_product *= w;
    out.density += vertex_product * edge_product;

    if (edge_product != 0.0) {
      for (int x = 0; x < v; ++x) {
        double others = edge_product;
        for (int y = 0; y < v; ++y)
          if (y != x) others *= cw[y];
        out.fraction_gradient(a[x]) += others;
      }
    }

    for (int k = 0; k < e; ++k) {
      const auto [p, q] = edges[k];
      double term = prefix[k] * suffix[k + 1];
      if (term == 0.0) continue;
      for (int y = 0; y < v; ++y)
        if (y != p && y != q) term *= cw[y];
      out.pair_derivative(a[p], a[q]) += 0.5 * term;
      out.pair_derivative(a[q], a[p]) += 0.5 * term;
    }
  });
  return out;
}

Eigen::MatrixXd hom_density_gradient(const SubgraphSpec& H, const BlockGraphon& h, double budget) {
  const auto terms = hom_density_terms(H, h, budget);
  const auto& c = h.fractions();
  Eigen::MatrixXd grad = terms.pair_derivative;
  for (int i = 0; i < h.blocks(); ++i) {
    for (int j = 0; j < h.blocks(); ++j) {
      const double weight = (i == j) ? c(i) * c(i) : 2.0 * c(i) * c(j);
      grad(i, j) *= weight;
    }
  }
  return grad;
}

}  // namespace cergm
