#include <doctest.h>

#include <numeric>

#include "butterfly/exact.hpp"
#include "fixtures.hpp"

using namespace bfly;

TEST_SUITE("exact") {
  TEST_CASE("fixtures") {
    CHECK(count_butterflies_exact(fixtures::fig1()) == 2);
    CHECK(count_butterflies_bruteforce(fixtures::fig1()) == 2);
    CHECK(count_butterflies_exact(fixtures::complete(2, 2)) == 1);
    CHECK(count_butterflies_bruteforce(fixtures::complete(4, 5)) == 60);
    CHECK(count_butterflies_bruteforce(fixtures::make(3, 3, {{0, 0}, {0, 1}, {1, 0}})) == 0);
    CHECK(count_butterflies_exact(generate_synthetic(HubAdversary{1000, 1000})) == 999000);
  }

  TEST_CASE("serial, parallel and brute force agree on random graphs") {
    int graphs = 0;
    for (double p : {0.2, 0.5, 0.8}) {
      for (std::uint64_t seed = 0; seed < 70; ++seed) {
        const auto nu = static_cast<std::uint32_t>(1 + seed % 12);
        const auto nl = static_cast<std::uint32_t>(1 + (seed * 7) % 12);
        const auto g = fixtures::random_graph(nu, nl, p, seed * 31 + 7);
        const std::uint64_t oracle = fixtures::brute_butterflies(g);
        CHECK(count_butterflies_exact(g) == oracle);
        CHECK(count_butterflies_exact_parallel(g) == oracle);
        CHECK(count_butterflies_bruteforce(g) == oracle);
        ++graphs;
      }
    }
    CHECK(graphs >= 200);
  }

  TEST_CASE("complete bipartite closed form") {
    for (std::uint64_t a = 2; a <= 30; ++a) {
      for (std::uint64_t b = 2; b <= 30; b += 7) {
        const auto g = fixtures::complete(std::uint32_t(a), std::uint32_t(b));
        CHECK(count_butterflies_exact(g) == (a * (a - 1) / 2) * (b * (b - 1) / 2));
      }
    }
  }

  TEST_CASE("brute force refuses large sides") {
    CHECK_THROWS_AS(count_butterflies_bruteforce(fixtures::complete(65, 2)), TooLargeError);
  }

  TEST_CASE("wedges") {
    CHECK(count_wedges_exact(fixtures::complete(2, 2)) == 4);
    CHECK(count_wedges_exact(fixtures::make(2, 1, {{0, 0}, {1, 0}})) == 1);
    CHECK(count_wedges_exact(fixtures::complete(1, 5)) == 10);
  }

  TEST_CASE("per-edge counts") {
    const auto k22 = fixtures::complete(2, 2);
    for (std::uint64_t i = 0; i < 4; ++i) CHECK(butterflies_per_edge(k22, k22.edge(i)) == 1);
    CHECK(butterflies_per_edge(fixtures::fig1(), {1, 1}) == 2);
    const auto pendant = fixtures::make(3, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 1}});
    CHECK(butterflies_per_edge(pendant, {2, 1}) == 0);
  }

  TEST_CASE("per-edge kernels match brute force and sum to 4b") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const auto g = fixtures::random_graph(10, 8, 0.45, seed);
      const auto brute = fixtures::brute_per_edge(g);
      const auto serial = butterflies_all_edges(g);
      CHECK(serial == brute);
      CHECK(butterflies_all_edges_parallel(g) == brute);
      for (std::uint64_t i = 0; i < g.edge_count(); i += 5) {
        CHECK(butterflies_per_edge(g, g.edge(i)) == brute[i]);
      }
      CHECK(std::accumulate(serial.begin(), serial.end(), std::uint64_t{0}) ==
            4 * count_butterflies_exact(g));
    }
  }
}
