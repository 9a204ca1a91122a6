#include <doctest.h>

#include <cmath>
#include <random>

#include "cergm/certificates.hpp"
#include "cergm/errors.hpp"
#include "cergm/graphon.hpp"
#include "oracles.hpp"

using namespace cergm;

namespace {

// Random block graphon with edge density exactly epsilon: a centred random
// step function scaled to fit in [0, 1] around epsilon.
BlockGraphon random_at_density(std::mt19937_64& rng, int K, double epsilon) {
  const auto h = oracle::random_graphon(rng, K, 0.0, 1.0);
  const Eigen::MatrixXd centred = h.values().array() - edge_density(h);
  const double up = centred.maxCoeff(), down = -centred.minCoeff();
  double s = 1.0;
  if (up > 0) s = std::min(s, (1.0 - epsilon) / up);
  if (down > 0) s = std::min(s, epsilon / down);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  s *= u(rng);
  Eigen::MatrixXd v = (epsilon + s * centred.array()).cwiseMax(0.0).cwiseMin(1.0);
  return BlockGraphon(h.fractions(), v);
}

void check_no_sample_beats_uniform(const SubgraphSpec& H, double epsilon, double beta2, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double u = uniform_objective(H, epsilon, beta2);
  for (int trial = 0; trial < 300; ++trial) {
    const auto h = random_at_density(rng, 2 + trial % 3, epsilon);
    REQUIRE(std::abs(edge_density(h) - epsilon) < 1e-12);
    CHECK(objective(h, H, beta2) <= u + 1e-12);
  }
}

}  // namespace

TEST_SUITE("certificates") {
  TEST_CASE("uniform objective") {
    CHECK(uniform_objective(SubgraphSpec::triangle(), 0.5, 2.0) ==
          doctest::Approx(objective(uniform(0.5), SubgraphSpec::triangle(), 2.0)).epsilon(1e-15));
    CHECK(uniform_objective(SubgraphSpec::star(2), 0.5, 1.0) == doctest::Approx(0.596574).epsilon(1e-6));
  }

  TEST_CASE("clique threshold") {
    CHECK(*threshold_ve(SubgraphSpec::triangle(), 0.25) == doctest::Approx(2.570672).epsilon(1e-6));
    CHECK(*threshold_ve(SubgraphSpec::star(2), 0.25) == doctest::Approx(4.498684).epsilon(1e-6));
    CHECK_FALSE(threshold_ve(SubgraphSpec::edge(), 0.25));
    CHECK_FALSE(threshold_ve(SubgraphSpec(4, {{0, 1}, {2, 3}}), 0.25));
    // At the threshold the clique and the constant graphon tie.
    for (double eps : {0.1, 0.25, 0.6}) {
      const auto H = SubgraphSpec::triangle();
      const double b = *threshold_ve(H, eps);
      CHECK(objective(clique(eps), H, b) == doctest::Approx(uniform_objective(H, eps, b)).epsilon(1e-12));
      CHECK(objective(clique(eps), H, b * 1.01) > uniform_objective(H, eps, b * 1.01));
    }
  }

  TEST_CASE("two-star threshold") {
    CHECK(threshold_twostar(0.5) == doctest::Approx(2.0));
    CHECK(threshold_twostar(0.25) == doctest::Approx(1.0 / (2 * 0.25 * 0.75)));
    // Just above the threshold a small checkerboard-sign perturbation of the
    // constant graphon wins.
    const auto H = SubgraphSpec::star(2);
    for (double eps : {0.3, 0.5}) {
      const double b = threshold_twostar(eps) * 1.05;
      const double r = 0.01;
      Eigen::Matrix2d v;
      v << eps + r, eps, eps, eps - r;
      const BlockGraphon h(Eigen::Vector2d(0.5, 0.5), v);
      CHECK(objective(h, H, b) > uniform_objective(H, eps, b));
      const double b_low = threshold_twostar(eps) * 0.95;
      CHECK(objective(h, H, b_low) < uniform_objective(H, eps, b_low));
    }
    CHECK_THROWS_AS(threshold_twostar(0.0), DomainError);
  }

  TEST_CASE("certificate names") {
    const auto tri = SubgraphSpec::triangle();
    const auto two = SubgraphSpec::star(2);
    CHECK(certify(tri, 0.3, 0.0)->name == "zero-coupling");
    CHECK(certify(SubgraphSpec::edge(), 0.3, 50.0)->name == "constant-density");
    CHECK(certify(tri, 0.3, -0.2)->name == "weak-repulsion");
    CHECK(certify(two, 0.5, 0.9)->name == "u-region-exterior");
    CHECK(certify(two, 0.5, 1.5)->name == "f-prime-bound");
    CHECK(certify(two, 0.5, 2.0)->name == "f-prime-bound");
    CHECK_FALSE(certify(two, 0.5, 2.0)->name.empty());
    CHECK(certify(two, 0.5, 2.5)->name == "two-star-threshold");
    CHECK_FALSE(certify(two, 0.5, 2.5)->uniform);
    CHECK(certify(tri, 0.25, 3.0)->name == "clique-threshold");
    CHECK_FALSE(certify(tri, 0.25, 3.0)->uniform);
    CHECK_FALSE(certify(tri, 0.5, -5.0));
    CHECK_THROWS_AS(certify(tri, 1.0, 1.0), DomainError);
  }

  TEST_CASE("uniform certificates hold against random graphons") {
    struct Case {
      SubgraphSpec H;
      double eps, b;
    };
    const std::vector<Case> cases{{SubgraphSpec::star(2), 0.5, 0.9},  {SubgraphSpec::star(2), 0.5, 2.0},
                                  {SubgraphSpec::star(2), 0.3, 1.0},  {SubgraphSpec::triangle(), 0.3, -0.3},
                                  {SubgraphSpec::triangle(), 0.4, 0.5}, {SubgraphSpec::star(3), 0.5, 0.6}};
    std::uint64_t seed = 100;
    for (const auto& c : cases) {
      INFO(c.H.name() << " eps=" << c.eps << " b=" << c.b);
      const auto cert = certify(c.H, c.eps, c.b);
      REQUIRE(cert);
      CHECK(cert->uniform);
      check_no_sample_beats_uniform(c.H, c.eps, c.b, seed++);
    }
  }

  TEST_CASE("limit bracket") {
    const auto b = limit_ratio(SubgraphSpec::star(2), 0.3, 200.0);
    CHECK(b.lo == doctest::Approx(max_two_star_density(0.3)));
    CHECK(b.hi - b.lo == doctest::Approx(std::log(2.0) / 400.0));
    const auto t = limit_ratio(SubgraphSpec::triangle(), 0.25, 100.0);
    CHECK(t.lo == doctest::Approx(0.125));
    CHECK(t.hi == doctest::Approx(0.12846574).epsilon(1e-8));
    // The lower end is attained by a feasible graphon, so psi / beta2 >= lo.
    CHECK(objective(clique(0.25), SubgraphSpec::triangle(), 100.0) / 100.0 >= t.lo);
    CHECK_THROWS_AS(limit_ratio(SubgraphSpec::star(3), 0.3, 10.0), DomainError);
    CHECK_THROWS_AS(limit_ratio(SubgraphSpec::star(2), 0.3, -1.0), DomainError);
  }
}
