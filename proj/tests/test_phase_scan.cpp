#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "cergm/certificates.hpp"
#include "cergm/errors.hpp"
#include "cergm/phase_scan.hpp"

using namespace cergm;

namespace {

PhaseScanOptions fast(int threads) {
  PhaseScanOptions o;
  o.solver.restarts = 4;
  o.threads = threads;
  return o;
}

}  // namespace

TEST_SUITE("phase_scan") {
  TEST_CASE("grid ranges") {
    const auto g = GridRange::parse("0.1:0.5:5");
    CHECK(g.n == 5);
    const auto v = g.values();
    REQUIRE(v.size() == 5);
    CHECK(v.front() == 0.1);
    CHECK(v.back() == 0.5);
    CHECK(v[2] == doctest::Approx(0.3));
    CHECK(GridRange::parse("2:2:1").values() == std::vector<double>{2.0});
    CHECK_THROWS_AS(GridRange::parse("0.1:0.5"), DomainError);
    CHECK_THROWS_AS(GridRange::parse("0.1:0.5:0"), DomainError);
    CHECK_THROWS_AS(GridRange::parse("a:b:c"), DomainError);
  }

  TEST_CASE("two-star row at epsilon = 1/2 switches at beta2 = 2") {
    const auto r = phase_scan(SubgraphSpec::star(2), {0.5, 0.5, 1}, {1.0, 3.0, 5}, fast(2));
    REQUIRE(r.cells.size() == 5);
    CHECK(is_uniform(r.cells[0].classification));
    CHECK(is_uniform(r.cells[2].classification));
    CHECK_FALSE(is_uniform(r.cells[3].classification));
    REQUIRE(r.transitions.size() == 1);
    const auto& t = r.transitions[0];
    CHECK(t.to_nonuniform);
    CHECK(t.beta2_high - t.beta2_low <= 1e-3);
    CHECK(std::abs(t.beta2() - 2.0) <= 1e-3);
  }

  TEST_CASE("two-star transitions stay below the two-block threshold") {
    const auto r = phase_scan(SubgraphSpec::star(2), {0.3, 0.7, 3}, {0.5, 6.0, 6}, fast(4));
    for (const auto& t : r.transitions) {
      if (!t.to_nonuniform) continue;
      CHECK(t.beta2_low <= threshold_twostar(t.epsilon) + 1e-9);
    }
    for (const auto& c : r.cells) {
      CHECK(c.delta_over_uniform >= -1e-12);
      if (c.beta2 > threshold_twostar(c.epsilon)) CHECK_FALSE(is_uniform(c.classification));
    }
  }

  TEST_CASE("star cells outside the U-region are uniform") {
    const auto r = phase_scan(SubgraphSpec::star(3), {0.2, 0.8, 4}, {0.1, 0.5, 3}, fast(2));
    for (const auto& c : r.cells) {
      CHECK(c.classification == Classification::kUniformCertified);
      CHECK(c.k_effective == 1);
    }
  }

  TEST_CASE("results do not depend on the thread count") {
    const auto a = phase_scan(SubgraphSpec::triangle(), {0.3, 0.5, 2}, {-3.0, 3.0, 3}, fast(1));
    const auto b = phase_scan(SubgraphSpec::triangle(), {0.3, 0.5, 2}, {-3.0, 3.0, 3}, fast(4));
    std::ostringstream sa, sb;
    write_phase_csv(sa, a);
    write_phase_csv(sb, b);
    CHECK(sa.str() == sb.str());
  }

  TEST_CASE("thread resolution") {
    CHECK(resolve_threads(3) == 3);
    ::setenv("ERGM_THREADS", "5", 1);
    CHECK(resolve_threads(std::nullopt) == 5);
    CHECK(resolve_threads(2) == 2);
    ::unsetenv("ERGM_THREADS");
    CHECK(resolve_threads(std::nullopt) == 1);
    CHECK_THROWS_AS(resolve_threads(0), DomainError);
  }
}
