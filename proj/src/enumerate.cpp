#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <thread>

#include "cergm/errors.hpp"
#include "cergm/oracle.hpp"

namespace cergm {

namespace {

constexpr std::uint64_t kChunk = std::uint64_t{1} << 14;

struct Ranked {
  double log_weight;
  std::uint64_t mask;
};

// Higher weight first; equal weights by lower index.
bool ranks_before(const Ranked& a, const Ranked& b) {
  if (a.log_weight != b.log_weight) return a.log_weight > b.log_weight;
  return a.mask < b.mask;
}

struct Partial {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;    // sum exp(w - max)
  double t_sum = 0.0;  // sum t exp(w - max)
  std::uint64_t count = 0;
  std::vector<Ranked> top;  // heap under ranks_before

  void add(double w, double t) {
    if (w > max) {
      const double scale = std::exp(max - w);
      sum *= scale;
      t_sum *= scale;
      max = w;
    }
    const double e = std::exp(w - max);
    sum += e;
    t_sum += t * e;
    ++count;
  }

  void merge(const Partial& o) {
    if (o.count == 0) return;
    if (count == 0) {
      max = o.max;
      sum = o.sum;
      t_sum = o.t_sum;
      count = o.count;
      return;
    }
    const double m = std::max(max, o.max);
    sum = sum * std::exp(max - m) + o.sum * std::exp(o.max - m);
    t_sum = t_sum * std::exp(max - m) + o.t_sum * std::exp(o.max - m);
    max = m;
    count += o.count;
  }
};

void offer(std::vector<Ranked>& heap, std::size_t k, Ranked r) {
  if (k == 0) return;
  if (heap.size() < k) {
    heap.push_back(r);
    std::push_heap(heap.begin(), heap.end(), ranks_before);
  } else if (ranks_before(r, heap.front())) {
    std::pop_heap(heap.begin(), heap.end(), ranks_before);
    heap.back() = r;
    std::push_heap(heap.begin(), heap.end(), ranks_before);
  }
}

AdjacencyGraph graph_from_mask(int n, std::uint64_t mask) {
  AdjacencyGraph g(n);
  int bit = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++bit)
      if ((mask >> bit) & 1U) g.set_edge(i, j, true);
  return g;
}

}  // namespace

EnumerationResult enumerate_psi(int n, double epsilon, double delta, const SubgraphSpec& H, double beta2,
                                const EnumerationOptions& options) {
  if (n < 1 || n > kMaxEnumerationVertices) throw DomainError("enumerate: n must lie in [1, 7]");
  if (!(delta > 0.0)) throw DomainError("enumerate: delta must be positive");
  if (options.top_k < 0) throw DomainError("enumerate: top_k must be nonnegative");
  const int pairs = n * (n - 1) / 2;
  const double n2 = static_cast<double>(n) * n;

  std::vector<bool> admitted(pairs + 1);
  bool any = false;
  for (int m = 0; m <= pairs; ++m) {
    // Densities within kWindowSlack of the window edge count as on the edge
    // (excluded), so decimal inputs like 0.5 +- 0.1 behave as written.
    admitted[m] = std::abs(2.0 * m / n2 - epsilon) < delta - kWindowSlack;
    any = any || admitted[m];
  }
  if (!any) throw EmptyWindowError("enumerate: no edge count at this n falls inside the window");

  const std::uint64_t total = std::uint64_t{1} << pairs;
  const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
  const double scale = std::pow(static_cast<double>(n), H.vertex_count());
  const auto k = static_cast<std::size_t>(options.top_k);

  std::vector<Partial> partials(chunks);
  auto work = [&](std::uint64_t chunk) {
    Partial& part = partials[chunk];
    const std::uint64_t begin = chunk * kChunk, end = std::min(total, begin + kChunk);
    for (std::uint64_t step = begin; step < end; ++step) {
      const std::uint64_t mask = options.reverse ? total - 1 - step : step;
      if (!admitted[std::popcount(mask)]) continue;
      const double t = static_cast<double>(hom_count_graph(H, graph_from_mask(n, mask))) / scale;
      const double w = n2 * beta2 * t;
      part.add(w, t);
      offer(part.top, k, {w, mask});
    }
  };

  const int threads = std::max(1, options.threads);
  if (threads == 1 || chunks == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) work(c);
  } else {
    std::vector<std::thread> pool;
    for (int id = 0; id < threads; ++id) {
      pool.emplace_back([&, id]() {
        for (std::uint64_t c = id; c < chunks; c += threads) work(c);
      });
    }
    for (auto& th : pool) th.join();
  }

  Partial all;
  std::vector<Ranked> top;
  for (const auto& part : partials) {
    all.merge(part);
    for (const auto& r : part.top) offer(top, k, r);
  }
  const double log_z = all.max + std::log(all.sum);
  std::sort(top.begin(), top.end(), ranks_before);

  EnumerationResult out{n, epsilon, delta, beta2, log_z / n2, all.count, all.t_sum / all.sum, {}};
  for (const auto& r : top) out.top_graphs.push_back({graph_from_mask(n, r.mask), std::exp(r.log_weight - log_z)});
  return out;
}

std::vector<WeightedGraph> conditional_top(int n, double epsilon, double delta, const SubgraphSpec& H, double beta2,
                                           int k) {
  EnumerationOptions options;
  options.top_k = k;
  return enumerate_psi(n, epsilon, delta, H, beta2, options).top_graphs;
}

ConvergenceTable convergence_sweep(const std::vector<int>& n_list, double epsilon, double delta, const SubgraphSpec& H,
                                   double beta2, const SolverConfig& config) {
  ConvergenceTable table{solve_canonical(H, epsilon, beta2, config).psi, {}};
  for (int n : n_list) {
    SweepRow row{n, std::nullopt, 0, std::nullopt};
    try {
      EnumerationOptions options;
      options.top_k = 0;
      const auto r = enumerate_psi(n, epsilon, delta, H, beta2, options);
      row.psi_n_delta = r.psi_n_delta;
      row.num_admitted = r.num_admitted;
      row.gap = r.psi_n_delta - table.solver_psi;
    } catch (const EmptyWindowError&) {
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace cergm
