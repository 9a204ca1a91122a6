#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "cergm/errors.hpp"
#include "cergm/graphon.hpp"
#include "cergm/subgraph.hpp"
#include "oracles.hpp"

using namespace cergm;

TEST_SUITE("graphon") {
  TEST_CASE("validation") {
    CHECK_THROWS_AS(BlockGraphon(Eigen::Vector2d(0.5, 0.6), Eigen::Matrix2d::Constant(0.5)), DomainError);
    CHECK_THROWS_AS(BlockGraphon(Eigen::Vector2d(-0.1, 1.1), Eigen::Matrix2d::Constant(0.5)), DomainError);
    Eigen::Matrix2d asym;
    asym << 0.1, 0.2, 0.3, 0.4;
    CHECK_THROWS_AS(BlockGraphon(Eigen::Vector2d(0.5, 0.5), asym), DomainError);
    CHECK_THROWS_AS(BlockGraphon(Eigen::Vector2d(0.5, 0.5), Eigen::Matrix2d::Constant(1.5)), DomainError);
  }

  TEST_CASE("entropy function") {
    CHECK(i_fun(0.0) == 0.0);
    CHECK(i_fun(1.0) == 0.0);
    CHECK(i_fun(0.5) == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
    CHECK(i_fun(0.25) == doctest::Approx(0.25 * std::log(0.25) + 0.75 * std::log(0.75)).epsilon(1e-15));
    CHECK(i_fun(0.25) == doctest::Approx(-0.562335).epsilon(1e-6));
    CHECK_THROWS_AS(i_fun(-0.1), DomainError);
    CHECK_THROWS_AS(i_fun(1.1), DomainError);
  }

  TEST_CASE("named graphons") {
    const auto u = uniform(0.5);
    CHECK(u.blocks() == 1);
    CHECK(u.value(0, 0) == 0.5);
    CHECK(edge_density(uniform(0.3)) == doctest::Approx(0.3));
    CHECK(entropy_integral(uniform(0.3)) == doctest::Approx(i_fun(0.3)));

    const auto c = clique(0.25);
    CHECK(c.fraction(0) == doctest::Approx(0.5));
    CHECK(c.value(0, 0) == 1.0);
    CHECK(edge_density(c) == doctest::Approx(0.25));
    CHECK(entropy_integral(c) == 0.0);
    CHECK(hom_density_blocks(SubgraphSpec::triangle(), clique(0.3)) == doctest::Approx(std::pow(0.3, 1.5)));

    const auto a = anticlique(0.5);
    CHECK(a.fraction(0) == doctest::Approx(1 - std::sqrt(0.5)));
    CHECK(edge_density(a) == doctest::Approx(0.5));
    CHECK_THROWS_AS(clique(1.2), DomainError);
  }

  TEST_CASE("checkerboard") {
    const auto flat = checkerboard(0.5, 0.125);
    CHECK(flat.value(0, 0) == doctest::Approx(0.5));
    CHECK(flat.value(0, 1) == doctest::Approx(0.5));
    const auto bip = checkerboard(0.5, 0.0);
    CHECK(bip.value(0, 1) == doctest::Approx(1.0));
    CHECK(bip.value(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(hom_density_blocks(SubgraphSpec::triangle(), bip) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(entropy_integral(bip) == doctest::Approx(0.0));
    CHECK(edge_density(bip) == doctest::Approx(0.5));
    const auto mid = checkerboard(0.5, 0.1);
    CHECK(mid.value(0, 1) - 0.5 == doctest::Approx(0.29240).epsilon(1e-5));
    CHECK_THROWS_AS(checkerboard(0.2, 0.01), DomainError);
    CHECK_THROWS_AS(checkerboard(0.5, 0.2), DomainError);
    for (double e : {0.3, 0.5, 0.7}) {
      const double r = std::min(e, 1 - e);
      for (double f : {0.0, 0.3, 0.8, 1.0}) {
        const double tau = e * e * e - std::pow(f * r, 3);
        CHECK(std::abs(hom_density_blocks(SubgraphSpec::triangle(), checkerboard(e, tau)) - tau) <= 1e-12);
      }
    }
  }

  TEST_CASE("objective") {
    const auto two = SubgraphSpec::star(2);
    CHECK(objective(uniform(0.5), two, 1.0) == doctest::Approx(0.25 + 0.5 * std::log(2.0)).epsilon(1e-14));
    CHECK(objective(uniform(0.5), two, 1.0) == doctest::Approx(0.596574).epsilon(1e-6));
    CHECK(objective(clique(0.25), SubgraphSpec::triangle(), 1.0) == doctest::Approx(0.125));
    std::mt19937_64 rng(1);
    const auto h = oracle::random_graphon(rng, 3);
    CHECK(objective(h, two, 0.0) == doctest::Approx(-0.5 * entropy_integral(h)));
    for (double e : {0.2, 0.5, 0.8}) {
      for (double b : {-2.0, 0.0, 1.5}) {
        CHECK(objective(uniform(e), SubgraphSpec::triangle(), b) == b * e * e * e - 0.5 * i_fun(e));
      }
    }
  }

  TEST_CASE("degree profile") {
    const auto g = degree_profile(uniform(0.4));
    CHECK(g.size() == 1);
    CHECK(g(0) == doctest::Approx(0.4));
    const auto gc = degree_profile(clique(0.36));
    CHECK(gc(0) == doctest::Approx(0.6));
    CHECK(gc(1) == doctest::Approx(0.0));
    std::mt19937_64 rng(2);
    const auto h = oracle::random_graphon(rng, 4);
    CHECK(h.fractions().dot(degree_profile(h)) == doctest::Approx(edge_density(h)));
  }

  TEST_CASE("extremal densities") {
    CHECK(max_two_star_density(0.5) == doctest::Approx(std::pow(0.5, 1.5)));
    CHECK(2 * 0.5 + std::pow(0.5, 1.5) - 1 == doctest::Approx(std::pow(0.5, 1.5)));
    CHECK(max_two_star_density(0.3) == doctest::Approx(0.185662).epsilon(1e-6));
    CHECK(max_triangle_density(0.25) == doctest::Approx(0.125));
    CHECK(max_two_star_density(0.64) == doctest::Approx(0.512));
  }

  TEST_CASE("complement") {
    CHECK(block_distance(complement(uniform(0.5)), uniform(0.5)) == doctest::Approx(0.0));
    CHECK(edge_density(complement(clique(0.3))) == doctest::Approx(0.7));
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
      const auto h = oracle::random_graphon(rng, 1 + trial % 4);
      CHECK((complement(complement(h)).values() - h.values()).cwiseAbs().maxCoeff() <= 1e-15);
    }
  }

  TEST_CASE("complement preserves the two-star objective at epsilon = 1/2") {
    std::mt19937_64 rng(6);
    const auto two = SubgraphSpec::star(2);
    for (int trial = 0; trial < 50; ++trial) {
      auto h = oracle::random_graphon(rng, 2 + trial % 3);
      // Shift the values so that the edge density is exactly 1/2.
      Eigen::MatrixXd v = h.values().array() + (0.5 - edge_density(h));
      v = v.cwiseMax(0.0).cwiseMin(1.0);
      const BlockGraphon q(h.fractions(), v);
      if (std::abs(edge_density(q) - 0.5) > 1e-14) continue;
      CHECK(std::abs(objective(complement(q), two, 2.7) - objective(q, two, 2.7)) <= 1e-10);
    }
  }

  TEST_CASE("block distance") {
    CHECK(block_distance(clique(0.3), clique(0.3)) == 0.0);
    CHECK(block_distance(uniform(0.4), uniform(0.5)) == doctest::Approx(0.1));
    CHECK(block_distance(clique(0.3), complement(anticlique(0.7))) == doctest::Approx(0.0).epsilon(1e-15));
    Eigen::Matrix2d v;
    v << 0.0, 0.0, 0.0, 1.0;
    const BlockGraphon swapped(Eigen::Vector2d(1 - std::sqrt(0.3), std::sqrt(0.3)), v);
    CHECK(block_distance(clique(0.3), swapped) == doctest::Approx(0.0).epsilon(1e-15));
  }

  TEST_CASE("canonical form") {
    Eigen::Vector3d c(0.2, 0.5, 0.3);
    Eigen::Matrix3d v;
    v << 0.1, 0.4, 0.1, 0.4, 0.9, 0.4, 0.1, 0.4, 0.1;
    const BlockGraphon h(c, v);
    const auto canon = h.canonical();
    CHECK(canon.blocks() == 2);
    CHECK(canon.fraction(0) == doctest::Approx(0.5));
    CHECK(canon.canonical().values() == canon.values());
    CHECK(objective(canon, SubgraphSpec::triangle(), 1.3) ==
          doctest::Approx(objective(h, SubgraphSpec::triangle(), 1.3)).epsilon(1e-14));
    Eigen::Vector3d c0(0.0, 0.4, 0.6);
    CHECK(BlockGraphon(c0, v).canonical().blocks() == 2);
  }

  TEST_CASE("Jensen: entropy integral at least I(edge density)") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto h = oracle::random_graphon(rng, 1 + trial % 5, 0.0, 1.0);
      const auto report = entropy_report(h);
      CHECK(report.entropy_integral >= i_fun(report.edge_density) - 1e-15);
      CHECK(report.entropy_integral >= -std::log(2.0) - 1e-15);
      CHECK(report.entropy_integral <= 0.0);
    }
  }

  TEST_CASE("json and csv") {
    const auto h = clique(0.3);
    nlohmann::json j = h;
    const auto back = graphon_from_json(j);
    CHECK(back.values() == h.values());
    CHECK(back.fractions() == h.fractions());
    std::ostringstream os;
    write_grid_csv(os, h, 4);
    const std::string text = os.str();
    CHECK(text.rfind("x,y,h\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 17);
  }
}
