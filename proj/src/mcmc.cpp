#include <algorithm>
#include <cmath>
#include <numeric>

#include "cergm/errors.hpp"
#include "cergm/oracle.hpp"

namespace cergm {

namespace {

constexpr int kBatches = 20;

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

EdgeSwapState::EdgeSwapState(const SubgraphSpec& H, AdjacencyGraph graph)
    : H_(H), graph_(std::move(graph)), hom_(0), scale_(std::pow(static_cast<double>(graph_.size()), H.vertex_count())) {
  const int n = graph_.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      (graph_.has_edge(i, j) ? present_ : absent_).emplace_back(i, j);
    }
  }
  degree_ = graph_.degrees();
  hom_ = recount();
}

double EdgeSwapState::density() const { return static_cast<double>(hom_) / scale_; }

EdgeSwapState::Swap EdgeSwapState::propose(std::mt19937_64& rng) const {
  if (frozen()) throw DomainError("edge swap: chain is frozen");
  std::uniform_int_distribution<std::size_t> pick_present(0, present_.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_absent(0, absent_.size() - 1);
  const auto r = static_cast<int>(pick_present(rng));
  const auto a = static_cast<int>(pick_absent(rng));
  return {r, a};
}

std::int64_t EdgeSwapState::codegree(int a, int b) const {
  std::int64_t out = 0;
  for (int w = 0; w < graph_.size(); ++w) out += graph_.has_edge(a, w) && graph_.has_edge(b, w);
  return out;
}

std::int64_t EdgeSwapState::delta(const Swap& swap) {
  const auto [a, b] = present_[swap.remove_slot];
  const auto [c, d] = absent_[swap.add_slot];
  if (const auto p = H_.star_order()) {
    if (*p == 1) return 0;
    // Only the endpoint degrees change; p-star homs are sum_v deg(v)^p.
    std::int64_t change = 0;
    int touched[4] = {a, b, c, d};
    std::sort(touched, touched + 4);
    for (int k = 0; k < 4; ++k) {
      if (k > 0 && touched[k] == touched[k - 1]) continue;
      const int v = touched[k];
      const int after = degree_[v] - (v == a) - (v == b) + (v == c) + (v == d);
      change += ipow(after, *p) - ipow(degree_[v], *p);
    }
    return change;
  }
  if (H_.is_triangle()) {
    const std::int64_t lost = codegree(a, b);
    graph_.set_edge(a, b, false);
    const std::int64_t gained = codegree(c, d);
    graph_.set_edge(a, b, true);
    return 6 * (gained - lost);
  }
  graph_.set_edge(a, b, false);
  graph_.set_edge(c, d, true);
  const std::int64_t after = recount();
  graph_.set_edge(c, d, false);
  graph_.set_edge(a, b, true);
  return after - hom_;
}

void EdgeSwapState::apply(const Swap& swap, std::int64_t delta) {
  const Edge removed = present_[swap.remove_slot];
  const Edge added = absent_[swap.add_slot];
  graph_.set_edge(removed.first, removed.second, false);
  graph_.set_edge(added.first, added.second, true);
  --degree_[removed.first];
  --degree_[removed.second];
  ++degree_[added.first];
  ++degree_[added.second];
  present_[swap.remove_slot] = added;
  absent_[swap.add_slot] = removed;
  hom_ += delta;
}

McmcRun mcmc_sample(int n, std::int64_t edge_count, const SubgraphSpec& H, double beta2, std::int64_t steps,
                    std::int64_t burn_in, std::uint64_t seed) {
  if (n < 2) throw DomainError("mcmc: n must be >= 2");
  const std::int64_t pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;
  if (edge_count < 0 || edge_count > pairs) throw DomainError("mcmc: edge_count must lie in [0, n(n-1)/2]");
  if (steps < 1 || burn_in < 0) throw DomainError("mcmc: steps must be positive and burn_in nonnegative");

  std::mt19937_64 rng(seed);
  std::vector<Edge> all;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) all.emplace_back(i, j);
  std::shuffle(all.begin(), all.end(), rng);
  AdjacencyGraph start(n);
  for (std::int64_t k = 0; k < edge_count; ++k) start.set_edge(all[k].first, all[k].second, true);
  EdgeSwapState state(H, std::move(start));

  McmcRun run{n, edge_count, beta2, H, steps, burn_in, seed, 0.0, state.density(), 0.0, {}, state.frozen()};
  auto profile = [&]() {
    std::vector<double> d(n);
    const auto deg = state.graph().degrees();
    for (int i = 0; i < n; ++i) d[i] = static_cast<double>(deg[i]) / n;
    std::sort(d.begin(), d.end());
    return d;
  };
  if (run.frozen) {
    run.degree_profile = profile();
    return run;
  }

  const double exponent_scale = beta2 * static_cast<double>(n) * n / std::pow(static_cast<double>(n), H.vertex_count());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::int64_t accepted = 0;
  const std::int64_t batch_len = std::max<std::int64_t>(1, steps / kBatches);
  std::vector<double> batch_sums(kBatches, 0.0);
  std::vector<std::int64_t> batch_counts(kBatches, 0);
  std::vector<double> degree_sum(n, 0.0);
  std::int64_t profile_samples = 0;
  const std::int64_t thin = std::max(1, n);
  double t_sum = 0.0;

  for (std::int64_t step = 0; step < burn_in + steps; ++step) {
    const auto swap = state.propose(rng);
    const std::int64_t d = state.delta(swap);
    const double log_ratio = exponent_scale * static_cast<double>(d);
    if (log_ratio >= 0.0 || unit(rng) < std::exp(log_ratio)) {
      state.apply(swap, d);
      if (step >= burn_in) ++accepted;
    }
    if (step < burn_in) continue;
    const std::int64_t k = step - burn_in;
    const double t = state.density();
    t_sum += t;
    const auto b = std::min<std::int64_t>(kBatches - 1, k / batch_len);
    batch_sums[b] += t;
    ++batch_counts[b];
    if (k % thin == 0) {
      const auto p = profile();
      for (int i = 0; i < n; ++i) degree_sum[i] += p[i];
      ++profile_samples;
    }
  }

  run.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(steps);
  run.mean_t = t_sum / static_cast<double>(steps);
  std::vector<double> means;
  for (int b = 0; b < kBatches; ++b)
    if (batch_counts[b] > 0) means.push_back(batch_sums[b] / static_cast<double>(batch_counts[b]));
  if (means.size() > 1) {
    const double mu = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(means.size());
    double var = 0.0;
    for (double m : means) var += (m - mu) * (m - mu);
    var /= static_cast<double>(means.size() - 1);
    run.standard_error = std::sqrt(var / static_cast<double>(means.size()));
  }
  run.degree_profile.resize(n);
  for (int i = 0; i < n; ++i) run.degree_profile[i] = degree_sum[i] / static_cast<double>(profile_samples);
  return run;
}

}  // namespace cergm
