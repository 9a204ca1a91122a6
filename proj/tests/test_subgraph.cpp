#include <doctest.h>

#include <random>

#include "cergm/errors.hpp"
#include "cergm/graphon.hpp"
#include "cergm/subgraph.hpp"
#include "oracles.hpp"

using namespace cergm;

TEST_SUITE("subgraph") {
  TEST_CASE("construction and validation") {
    const SubgraphSpec tri(3, {{0, 1}, {0, 2}, {1, 2}});
    CHECK(tri.vertex_count() == 3);
    CHECK(tri.edge_count() == 3);
    CHECK(tri.is_triangle());
    const SubgraphSpec two(3, {{0, 1}, {0, 2}});
    CHECK(two.edge_count() == 2);
    CHECK(two.star_order() == 2);
    CHECK_THROWS_AS(SubgraphSpec(2, {{0, 1}, {0, 1}}), DomainError);
    CHECK_THROWS_AS(SubgraphSpec(2, {{1, 0}, {0, 1}}), DomainError);
    CHECK_THROWS_AS(SubgraphSpec(2, {{1, 1}}), DomainError);
    CHECK_THROWS_AS(SubgraphSpec(2, {{0, 2}}), DomainError);
    CHECK_THROWS_AS(SubgraphSpec(9, {}), DomainError);
    // Disconnected H is allowed.
    CHECK_NOTHROW(SubgraphSpec(4, {{0, 1}, {2, 3}}));
  }

  TEST_CASE("named constructors and parsing") {
    CHECK(SubgraphSpec::parse("edge") == SubgraphSpec::edge());
    CHECK(SubgraphSpec::parse("triangle") == SubgraphSpec::triangle());
    CHECK(SubgraphSpec::parse("star:3") == SubgraphSpec::star(3));
    CHECK(SubgraphSpec::parse(R"({"v":3,"edges":[[0,1],[1,2],[0,2]]})").is_triangle());
    CHECK_THROWS_AS(SubgraphSpec::parse("star:x"), DomainError);
    CHECK_THROWS_AS(SubgraphSpec::parse("square"), DomainError);
    CHECK(SubgraphSpec::edge().star_order() == 1);
    CHECK_FALSE(SubgraphSpec(4, {{0, 1}, {1, 2}, {2, 3}}).star_order());
  }

  TEST_CASE("json round trip") {
    const SubgraphSpec h(4, {{0, 1}, {1, 2}, {2, 3}});
    nlohmann::json j = h;
    CHECK(j["v"] == 4);
    CHECK(SubgraphSpec::parse(j.dump()) == h);
  }

  TEST_CASE("finite graph densities") {
    CHECK(hom_density_graph(SubgraphSpec::edge(), AdjacencyGraph::complete(4)) == doctest::Approx(0.75));
    CHECK(hom_count_graph(SubgraphSpec::triangle(), AdjacencyGraph::complete(3)) == 6);
    CHECK(hom_density_graph(SubgraphSpec::triangle(), AdjacencyGraph::complete(3)) == doctest::Approx(6.0 / 27));
    CHECK(hom_count_graph(SubgraphSpec::star(2), AdjacencyGraph::path(3)) == 6);
    CHECK(hom_density_graph(SubgraphSpec::star(2), AdjacencyGraph::path(3)) == doctest::Approx(6.0 / 27));
  }

  TEST_CASE("fast paths agree with brute force for v(H) <= 4 and n <= 4") {
    std::vector<SubgraphSpec> hs = {SubgraphSpec::edge(),
                                    SubgraphSpec::star(2),
                                    SubgraphSpec::star(3),
                                    SubgraphSpec::triangle(),
                                    SubgraphSpec(4, {{0, 1}, {1, 2}, {2, 3}}),
                                    SubgraphSpec(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}),
                                    SubgraphSpec(4, {{0, 1}, {2, 3}}),
                                    SubgraphSpec(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}),
                                    SubgraphSpec(3, {})};
    for (int n = 1; n <= 4; ++n) {
      const int pairs = n * (n - 1) / 2;
      for (int mask = 0; mask < (1 << pairs); ++mask) {
        std::string bits;
        for (int b = 0; b < pairs; ++b) bits += ((mask >> b) & 1) ? '1' : '0';
        const auto G = AdjacencyGraph::from_bitstring(n, bits);
        CHECK(G.to_bitstring() == bits);
        for (const auto& H : hs) CHECK(hom_count_graph(H, G) == hom_count_brute_force(H, G));
      }
    }
  }

  TEST_CASE("block densities") {
    CHECK(hom_density_blocks(SubgraphSpec::triangle(), uniform(0.5)) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(hom_density_blocks(SubgraphSpec::star(2), clique(0.64)) == doctest::Approx(0.512).epsilon(1e-12));
    CHECK(hom_density_blocks(SubgraphSpec::star(2), anticlique(0.3)) ==
          doctest::Approx(2 * 0.3 + std::pow(0.7, 1.5) - 1).epsilon(1e-12));
    CHECK(hom_density_blocks(SubgraphSpec::star(2), anticlique(0.3)) == doctest::Approx(0.185662).epsilon(1e-6));
  }

  TEST_CASE("one block gives epsilon^e exactly") {
    for (double e : {0.1, 0.37, 0.5, 0.9}) {
      for (const auto& H : {SubgraphSpec::star(3), SubgraphSpec::triangle(), SubgraphSpec(4, {{0, 1}, {2, 3}})}) {
        CHECK(hom_density_blocks(H, uniform(e)) == std::pow(e, H.edge_count()));
      }
    }
  }

  TEST_CASE("block density matches recursion oracle and is permutation invariant") {
    std::mt19937_64 rng(11);
    const SubgraphSpec paw(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
    for (int trial = 0; trial < 20; ++trial) {
      const auto h = oracle::random_graphon(rng, 3);
      const double t = hom_density_blocks(paw, h);
      CHECK(t == doctest::Approx(oracle::block_density(paw, h.fractions(), h.values())).epsilon(1e-13));
      Eigen::PermutationMatrix<Eigen::Dynamic> P(3);
      P.indices() << 2, 0, 1;
      const BlockGraphon q(P * h.fractions(), P * h.values() * P.transpose());
      CHECK(hom_density_blocks(paw, q) == doctest::Approx(t).epsilon(1e-13));
    }
  }

  TEST_CASE("gradient examples") {
    const Eigen::Vector2d c(0.3, 0.7);
    Eigen::Matrix2d v;
    v << 0.2, 0.6, 0.6, 0.4;
    const BlockGraphon h(c, v);
    const auto g = hom_density_gradient(SubgraphSpec::edge(), h);
    CHECK(g(0, 0) == doctest::Approx(0.09));
    CHECK(g(0, 1) == doctest::Approx(0.42));
    CHECK(g(1, 1) == doctest::Approx(0.49));
    CHECK(hom_density_gradient(SubgraphSpec::triangle(), uniform(0.4))(0, 0) == doctest::Approx(3 * 0.16));
    const auto fd = oracle::fd_gradient(SubgraphSpec::star(2), c, v, 1e-5);
    const auto g2 = hom_density_gradient(SubgraphSpec::star(2), h);
    CHECK((g2 - fd).cwiseAbs().maxCoeff() < 1e-8);
  }

  TEST_CASE("gradient matches finite differences on random graphons") {
    std::mt19937_64 rng(5);
    for (const auto& H : {SubgraphSpec::star(2), SubgraphSpec::star(3), SubgraphSpec::triangle(),
                          SubgraphSpec(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})}) {
      for (int trial = 0; trial < 10; ++trial) {
        const auto h = oracle::random_graphon(rng, 2 + trial % 3);
        const auto g = hom_density_gradient(H, h);
        const auto fd = oracle::fd_gradient(H, h.fractions(), h.values(), 1e-5);
        CHECK((g - fd).cwiseAbs().maxCoeff() <= 1e-6 * fd.cwiseAbs().maxCoeff());
      }
    }
  }

  TEST_CASE("fraction gradient matches finite differences") {
    std::mt19937_64 rng(8);
    const auto h = oracle::random_graphon(rng, 3);
    const auto terms = hom_density_terms(SubgraphSpec::triangle(), h);
    for (int k = 0; k < 3; ++k) {
      Eigen::VectorXd up = h.fractions(), down = h.fractions();
      up(k) += 1e-6;
      down(k) -= 1e-6;
      const double fd = (oracle::block_density(SubgraphSpec::triangle(), up, h.values()) -
                         oracle::block_density(SubgraphSpec::triangle(), down, h.values())) /
                        2e-6;
      CHECK(terms.fraction_gradient(k) == doctest::Approx(fd).epsilon(1e-7));
    }
  }

  TEST_CASE("two-star density between the Jensen floor and s(epsilon)") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const auto h = oracle::random_graphon(rng, 1 + trial % 4, 0.0, 1.0);
      const double e = edge_density(h);
      const double t = hom_density_blocks(SubgraphSpec::star(2), h);
      CHECK(t >= e * e - 1e-14);
      CHECK(t <= max_two_star_density(e) + 1e-12);
    }
  }

  TEST_CASE("assignment budget") {
    const SubgraphSpec big(8, {{0, 1}, {2, 3}});
    const Eigen::VectorXd c = Eigen::VectorXd::Constant(16, 1.0 / 16);
    const BlockGraphon h(c, Eigen::MatrixXd::Constant(16, 16, 0.5));
    CHECK_THROWS_AS(hom_density_blocks(big, h, 1e6), BudgetError);
    CHECK(hom_density_blocks(SubgraphSpec::edge(), h, 1e6) == doctest::Approx(0.5));
  }
}
