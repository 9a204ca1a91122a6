#include <doctest.h>

#include <cmath>

#include "cergm/fixed_point.hpp"
#include "cergm/graphon.hpp"
#include "cergm/subgraph.hpp"
#include "cergm/two_star.hpp"

using namespace cergm;

TEST_SUITE("fixed_point") {
  TEST_CASE("weak coupling converges to the constant profile") {
    const auto r = el_fixed_point_star(2, 0.5, 1.0);
    CHECK(r.converged);
    CHECK(r.beta1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.degrees.size() == 1);
    CHECK(r.degrees[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(r.graphon.blocks() == 1);
    for (double g : r.profile) CHECK(g == doctest::Approx(0.5).epsilon(1e-9));
  }

  TEST_CASE("beta2 = 3 reaches the half/half stationary point") {
    const auto r = el_fixed_point_star(2, 0.5, 3.0);
    REQUIRE(r.converged);
    CHECK(r.beta1 == doctest::Approx(3.0).epsilon(1e-9));
    REQUIRE(r.degrees.size() == 2);
    const auto s = stationary_graphon(3.0);
    CHECK(block_distance(r.graphon, s.graphon) < 1e-8);
    CHECK(objective(r.graphon, SubgraphSpec::star(2), 3.0) ==
          doctest::Approx(objective(s.graphon, SubgraphSpec::star(2), 3.0)).epsilon(1e-10));
    for (double f : r.residuals) CHECK(std::abs(f) < 1e-9);
  }

  TEST_CASE("profile integrates to epsilon") {
    for (double eps : {0.3, 0.5, 0.7}) {
      const auto r = el_fixed_point_star(2, eps, 1.5);
      double mean = 0.0;
      for (double g : r.profile) mean += g;
      mean /= double(r.profile.size());
      CHECK(mean == doctest::Approx(eps).epsilon(1e-10));
      CHECK(edge_density(r.graphon) == doctest::Approx(eps).epsilon(1e-8));
    }
  }

  TEST_CASE("three-star at weak coupling") {
    const auto r = el_fixed_point_star(3, 0.4, 0.5);
    CHECK(r.converged);
    CHECK(r.degrees.size() == 1);
    for (double f : r.residuals) CHECK(std::abs(f) < 1e-9);
  }

  TEST_CASE("non-convergence is reported") {
    FixedPointOptions opts;
    opts.max_sweeps = 5;
    const auto r = el_fixed_point_star(2, 0.5, 3.0, opts);
    CHECK_FALSE(r.converged);
    CHECK(r.sweeps == 5);
    CHECK(r.change > opts.tolerance);
  }
}
