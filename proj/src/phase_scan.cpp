#include "cergm/phase_scan.hpp"

#include <atomic>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <thread>

#include "cergm/certificates.hpp"
#include "cergm/errors.hpp"

namespace cergm {

namespace {

PhaseCell solve_cell(const SubgraphSpec& H, double epsilon, double beta2, const SolverConfig& config) {
  const auto r = solve_canonical(H, epsilon, beta2, config);
  return {epsilon,
          beta2,
          r.psi,
          r.classification,
          r.certificate.value_or(""),
          r.best.canonical().blocks(),
          r.psi - r.uniform_psi};
}

// Uniform or not at one point; a closed-form certificate settles it without a solve.
bool uniform_at(const SubgraphSpec& H, double epsilon, double beta2, const SolverConfig& config) {
  if (const auto cert = certify(H, epsilon, beta2)) return cert->uniform;
  return is_uniform(solve_canonical(H, epsilon, beta2, config).classification);
}

template <typename F>
void parallel_for(std::size_t count, int threads, F&& body) {
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < count; i = next++) body(i);
  };
  const auto pool_size = static_cast<std::size_t>(std::max(1, threads));
  if (pool_size == 1 || count <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(pool_size, count); ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<double> GridRange::values() const {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = n == 1 ? a : a + (b - a) * k / (n - 1.0);
  return out;
}

GridRange GridRange::parse(const std::string& text) {
  std::istringstream in(text);
  GridRange r{};
  char c1 = 0, c2 = 0;
  if (!(in >> r.a >> c1 >> r.b >> c2 >> r.n) || c1 != ':' || c2 != ':' || !in.eof()) {
    throw DomainError("range must look like a:b:n, got '" + text + "'");
  }
  if (r.n < 1) throw DomainError("range: n must be >= 1");
  if (r.n > 1 && !(r.b > r.a)) throw DomainError("range: need a < b when n > 1");
  return r;
}

PhaseScanResult phase_scan(const SubgraphSpec& H, const GridRange& epsilon, const GridRange& beta2,
                           const PhaseScanOptions& options) {
  const auto eps = epsilon.values();
  const auto b2 = beta2.values();
  for (double e : eps) {
    if (!(e > 0.0 && e < 1.0)) throw DomainError("phase scan: epsilon values must lie in (0, 1)");
  }
  if (!(options.refine_tolerance > 0.0)) throw DomainError("phase scan: refine tolerance must be positive");

  PhaseScanResult out;
  out.cells.resize(eps.size() * b2.size());
  parallel_for(out.cells.size(), options.threads, [&](std::size_t i) {
    out.cells[i] = solve_cell(H, eps[i / b2.size()], b2[i % b2.size()], options.solver);
  });

  for (std::size_t r = 0; r < eps.size(); ++r) {
    for (std::size_t k = 0; k + 1 < b2.size(); ++k) {
      const auto& lo = out.cells[r * b2.size() + k];
      const auto& hi = out.cells[r * b2.size() + k + 1];
      if (is_uniform(lo.classification) != is_uniform(hi.classification)) {
        out.transitions.push_back({eps[r], lo.beta2, hi.beta2, is_uniform(lo.classification)});
      }
    }
  }
  parallel_for(out.transitions.size(), options.threads, [&](std::size_t i) {
    Transition& t = out.transitions[i];
    while (t.beta2_high - t.beta2_low > options.refine_tolerance) {
      const double mid = t.beta2();
      const bool uniform_mid = uniform_at(H, t.epsilon, mid, options.solver);
      if (uniform_mid == t.to_nonuniform) {
        t.beta2_low = mid;
      } else {
        t.beta2_high = mid;
      }
    }
  });
  return out;
}

void write_phase_csv(std::ostream& out, const PhaseScanResult& scan) {
  out << "# epsilon: edge density; beta2: coupling; psi: best objective found; classification: "
         "uniform-certified|uniform-numerical|nonuniform-certified|nonuniform-numerical; certificate: closed-form "
         "rule that fired (empty if none); K_effective: blocks of the canonical optimizer; delta_over_uniform: psi "
         "minus the constant-graphon value\n";
  out << "epsilon,beta2,psi,classification,certificate,K_effective,delta_over_uniform\n";
  const auto old_precision = out.precision(17);
  for (const auto& c : scan.cells) {
    out << c.epsilon << ',' << c.beta2 << ',' << c.psi << ',' << to_string(c.classification) << ',' << c.certificate
        << ',' << c.k_effective << ',' << c.delta_over_uniform << '\n';
  }
  out.precision(old_precision);
}

int resolve_threads(std::optional<int> flag) {
  if (flag) {
    if (*flag < 1) throw DomainError("--threads must be >= 1");
    return *flag;
  }
  if (const char* env = std::getenv("ERGM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
    throw DomainError("ERGM_THREADS must be a positive integer");
  }
  return 1;
}

}  // namespace cergm
