#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "butterfly/bigraph.hpp"
#include "butterfly/exact.hpp"
#include "fixtures.hpp"

using namespace bfly;

TEST_SUITE("bigraph") {
  TEST_CASE("konect: tiny K22") {
    std::istringstream in("1 1\n1 2\n2 1\n2 2\n");
    const auto g = parse_konect(in);
    CHECK(g.upper_count() == 2);
    CHECK(g.lower_count() == 2);
    CHECK(g.edge_count() == 4);
  }

  TEST_CASE("konect: comments and extra columns") {
    std::istringstream plain("1 1\n1 2\n2 1\n2 2\n");
    std::istringstream annotated("% bip unweighted\n% 4 2 2\n1 1 1 100\n1 2 1 200\n# note\n2 1\n2 2\n");
    CHECK(parse_konect(annotated) == parse_konect(plain));
  }

  TEST_CASE("konect: fig1 sizes") {
    std::istringstream in("1 1\n1 2\n2 1\n2 2\n2 3\n3 2\n3 3\n");
    const auto g = parse_konect(in);
    CHECK(g.edge_count() == 7);
    CHECK(g.upper_count() == 3);
    CHECK(g.lower_count() == 3);
    CHECK(g == fixtures::fig1());
  }

  TEST_CASE("konect: ids compacted by first appearance, labels kept") {
    std::istringstream in("10 7\n3 7\n10 99\n");
    const auto g = parse_konect(in);
    CHECK(g.upper_count() == 2);
    CHECK(g.lower_count() == 2);
    CHECK(g.upper_labels() == std::vector<std::uint64_t>{10, 3});
    CHECK(g.lower_labels() == std::vector<std::uint64_t>{7, 99});
    CHECK(g.has_edge(0, 0));
    CHECK(g.has_edge(1, 0));
    CHECK(g.has_edge(0, 1));
    CHECK_FALSE(g.has_edge(1, 1));
  }

  TEST_CASE("konect: duplicates") {
    std::istringstream a("1 1\n1 1\n2 1\n");
    CHECK(parse_konect(a).edge_count() == 2);
    std::istringstream b("1 1\n1 1\n");
    CHECK_THROWS_AS(parse_konect(b, false), std::invalid_argument);
  }

  TEST_CASE("konect: malformed line carries its number") {
    std::istringstream in("1 1\n% ok\n2 x\n");
    try {
      parse_konect(in);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    std::istringstream one_col("1 1\n5\n");
    CHECK_THROWS_AS(parse_konect(one_col), ParseError);
  }

  TEST_CASE("konect: empty input") {
    std::istringstream only_comments("% nothing\n\n");
    CHECK_THROWS_AS(parse_konect(only_comments), EmptyInputError);
  }

  TEST_CASE("konect: load, write and reload keep the labelled adjacency") {
    std::stringstream src;
    write_konect(fixtures::random_graph(15, 11, 0.3, 5), src);
    const auto first = parse_konect(src);
    std::stringstream buf;
    write_konect(first, buf);
    const auto second = parse_konect(buf);
    REQUIRE(second.edge_count() == first.edge_count());
    CHECK(second.upper_count() == first.upper_count());
    CHECK(second.lower_count() == first.lower_count());
    const auto index_of = [](const std::vector<std::uint64_t>& labels, std::uint64_t label) {
      return static_cast<std::uint32_t>(std::find(labels.begin(), labels.end(), label) -
                                        labels.begin());
    };
    for (std::uint64_t i = 0; i < second.edge_count(); ++i) {
      const EdgeRef e = second.edge(i);
      CHECK(first.has_edge(index_of(first.upper_labels(), second.upper_labels()[e.upper]),
                           index_of(first.lower_labels(), second.lower_labels()[e.lower])));
    }
    std::stringstream again;
    write_konect(second, again);
    CHECK(parse_konect(again) == second);
  }

  TEST_CASE("binary cache round-trips and load_graph sniffs it") {
    const auto g = fixtures::random_graph(20, 9, 0.4, 2);
    const auto dir = std::filesystem::temp_directory_path();
    const auto bin = dir / "bfly_cache_test.bin";
    const auto txt = dir / "bfly_cache_test.txt";
    g.save_binary(bin);
    CHECK(BipartiteGraph::load_binary(bin) == g);
    CHECK(load_graph(bin) == g);
    {
      std::ofstream out(txt);
      out << "1 1\n1 2\n2 1\n2 2\n";
    }
    CHECK(load_graph(txt).edge_count() == 4);
    std::filesystem::remove(bin);
    std::filesystem::remove(txt);
  }

  TEST_CASE("csr invariants") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto g = fixtures::random_graph(13, 17, 0.3, seed);
      std::uint64_t up = 0, lo = 0;
      for (std::uint32_t u = 0; u < g.upper_count(); ++u) {
        const auto n = g.neighbors(VertexRef::upper(u));
        up += n.size();
        for (std::size_t i = 1; i < n.size(); ++i) CHECK(n[i - 1] < n[i]);
        for (std::uint32_t v : n) {
          const auto back = g.neighbors(VertexRef::lower(v));
          CHECK(std::find(back.begin(), back.end(), u) != back.end());
        }
      }
      for (std::uint32_t v = 0; v < g.lower_count(); ++v) lo += g.degree(VertexRef::lower(v));
      CHECK(up == g.edge_count());
      CHECK(lo == g.edge_count());
    }
  }

  TEST_CASE("from_edges rejects out-of-range endpoints") {
    const std::vector<EdgeRef> e{{0, 3}};
    CHECK_THROWS_AS(BipartiteGraph::from_edges(1, 3, e), std::out_of_range);
  }

  TEST_CASE("edge_degree") {
    const auto k22 = fixtures::complete(2, 2);
    for (std::uint64_t i = 0; i < 4; ++i) CHECK(edge_degree(k22, k22.edge(i)) == 2);
    const auto single = fixtures::make(1, 1, {{0, 0}});
    CHECK(edge_degree(single, {0, 0}) == 0);
    const auto f = fixtures::fig1();
    CHECK(edge_degree(f, {0, 0}) == 2);
  }

  TEST_CASE("edge degrees sum to twice the wedges") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto g = fixtures::random_graph(9, 12, 0.35, seed);
      std::uint64_t sum = 0;
      for (std::uint64_t i = 0; i < g.edge_count(); ++i) sum += edge_degree(g, g.edge(i));
      CHECK(sum == 2 * count_wedges_exact(g));
    }
  }

  TEST_CASE("vertex order") {
    // u0: degree 2, u1: degree 3 in fig1.
    const auto f = fixtures::fig1();
    CHECK(vertex_precedes(f, VertexRef::upper(0), VertexRef::upper(1)));
    CHECK_FALSE(vertex_precedes(f, VertexRef::upper(1), VertexRef::upper(1)));
    // Equal degrees, tie broken by global position.
    CHECK(precedes(VertexRef::upper(5), 2, VertexRef::upper(9), 2));
    CHECK_FALSE(precedes(VertexRef::upper(9), 2, VertexRef::upper(5), 2));
    CHECK(precedes(VertexRef::upper(7), 2, VertexRef::lower(0), 2));
    CHECK(global_id(3, VertexRef::lower(1)) == 4);
  }

  TEST_CASE("vertex order is a strict total order") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto g = fixtures::random_graph(6, 7, 0.4, seed);
      std::vector<VertexRef> all;
      for (std::uint32_t i = 0; i < 6; ++i) all.push_back(VertexRef::upper(i));
      for (std::uint32_t i = 0; i < 7; ++i) all.push_back(VertexRef::lower(i));
      for (VertexRef a : all) {
        CHECK_FALSE(vertex_precedes(g, a, a));
        for (VertexRef b : all) {
          if (a == b) continue;
          CHECK(vertex_precedes(g, a, b) != vertex_precedes(g, b, a));
          for (VertexRef c : all) {
            if (vertex_precedes(g, a, b) && vertex_precedes(g, b, c)) {
              CHECK(vertex_precedes(g, a, c));
            }
          }
        }
      }
    }
  }

  TEST_CASE("generators") {
    CHECK(generate_synthetic(CompleteBipartite{2, 2}).edge_count() == 4);
    CHECK(generate_synthetic(ErdosRenyi{10, 10, 0.0, 3}).edge_count() == 0);
    CHECK(generate_synthetic(ErdosRenyi{10, 10, 1.0, 3}).edge_count() == 100);
    CHECK(generate_synthetic(ErdosRenyi{50, 40, 0.2, 9}) ==
          generate_synthetic(ErdosRenyi{50, 40, 0.2, 9}));
    const auto hub = generate_synthetic(HubAdversary{1000, 1000});
    CHECK(hub.edge_count() == 4000);
    CHECK(hub.upper_count() == 1002);
    CHECK(hub.lower_count() == 1002);
    CHECK_THROWS(generate_synthetic(ErdosRenyi{10, 10, 1.5, 0}));
    CHECK_THROWS(generate_synthetic(CompleteBipartite{100000, 100000}));
  }

  TEST_CASE("generator spec grammar") {
    CHECK(std::holds_alternative<CompleteBipartite>(parse_generator_spec("kab:4,5")));
    const auto er = std::get<ErdosRenyi>(parse_generator_spec("er:20,30,0.25,11"));
    CHECK(er.n1 == 20);
    CHECK(er.n2 == 30);
    CHECK(er.p == doctest::Approx(0.25));
    CHECK(er.seed == 11);
    const auto h = std::get<HubAdversary>(parse_generator_spec("hub:7,9"));
    CHECK(h.h == 7);
    CHECK(h.t == 9);
    CHECK_THROWS(parse_generator_spec("kab:4"));
    CHECK_THROWS(parse_generator_spec("star:4"));
    CHECK_THROWS(parse_generator_spec("er:1,2,x,3"));
  }
}
