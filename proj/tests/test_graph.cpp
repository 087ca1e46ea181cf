#include <random>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "qcomp/graph.hpp"
#include "support.hpp"

using namespace qcomp;
using namespace qcomp::testing;

namespace {

void check_invariants(const Graph& g) {
  std::size_t degree_sum = 0;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    auto row = g.neighbors(i);
    degree_sum += row.size();
    for (std::size_t a = 0; a < row.size(); ++a) {
      REQUIRE(row[a] < g.node_count());
      REQUIRE(row[a] != i);
      if (a > 0) REQUIRE(row[a - 1] < row[a]);
      REQUIRE(g.has_edge(row[a], i));
    }
  }
  REQUIRE(degree_sum == 2 * g.edge_count());
}

}  // namespace

TEST_CASE("construction canonicalizes edge lists") {
  const std::vector<Edge> messy{{2, 1}, {1, 2}, {0, 0}, {3, 1}, {1, 3}, {1, 2}};
  const Graph g = Graph::from_edges(4, messy);
  CHECK(g.edge_count() == 2);
  CHECK(g.degree(0) == 0);
  CHECK(g.degree(1) == 2);
  CHECK(g.has_edge(3, 1));
  check_invariants(g);

  CHECK_THROWS_AS(Graph::from_edges(3, std::vector<Edge>{{0, 3}}), std::invalid_argument);
}

TEST_CASE("random edge lists always yield valid simple graphs") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const std::uint32_t n = 1 + rng() % 30;
    std::vector<Edge> edges;
    const std::size_t m = rng() % 120;
    for (std::size_t e = 0; e < m; ++e) edges.emplace_back(rng() % n, rng() % n);
    check_invariants(Graph::from_edges(n, edges));
  }
}

TEST_CASE("intersect") {
  const Graph triangle = Graph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}});
  CHECK(intersect(triangle, path(3)) == path(3));

  const Graph c6 = cycle(6);
  CHECK(intersect(c6, Graph::complete(6)) == c6);

  const Graph a = Graph::from_edges(3, std::vector<Edge>{{0, 1}});
  const Graph b = Graph::from_edges(3, std::vector<Edge>{{1, 2}});
  CHECK(intersect(a, b).edge_count() == 0);
  CHECK(intersect(a, b).node_count() == 3);

  CHECK_THROWS_AS(intersect(path(3), path(4)), std::invalid_argument);
}

TEST_CASE("intersect is commutative and idempotent") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const std::uint32_t n = 2 + rng() % 25;
    const Graph a = coin_flip_graph(n, 0.3, rng);
    const Graph b = coin_flip_graph(n, 0.5, rng);
    CHECK(intersect(a, b) == intersect(b, a));
    CHECK(intersect(a, a) == a);
    for (const auto& [i, j] : intersect(a, b).edges()) CHECK((a.has_edge(i, j) && b.has_edge(i, j)));
  }
}

TEST_CASE("degree") {
  const Graph k5 = Graph::complete(5);
  for (NodeId i = 0; i < 5; ++i) CHECK(degree(k5, i) == 4);
  const Graph e = Graph::empty(4);
  for (NodeId i = 0; i < 4; ++i) CHECK(degree(e, i) == 0);
  const Graph s = star(4);
  CHECK(degree(s, 0) == 4);
  CHECK(degree(s, 3) == 1);
  CHECK_THROWS_AS(degree(s, 5), std::invalid_argument);
}

TEST_CASE("min_degree") {
  CHECK(min_degree(cycle(6)) == 2);
  CHECK(min_degree(star(4)) == 1);
  CHECK(min_degree(Graph::complete(4)) == 3);
  CHECK_THROWS_AS(min_degree(Graph::empty(0)), std::invalid_argument);
}

TEST_CASE("is_connected") {
  CHECK(is_connected(path(5)));
  CHECK_FALSE(is_connected(Graph::from_edges(4, std::vector<Edge>{{0, 1}, {2, 3}})));
  CHECK(is_connected(Graph::empty(1)));
  CHECK_FALSE(is_connected(Graph::empty(2)));
  CHECK_THROWS_AS(is_connected(Graph::empty(0)), std::invalid_argument);
}

TEST_CASE("adding edges never disconnects") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    const std::uint32_t n = 2 + rng() % 20;
    const Graph g = coin_flip_graph(n, 0.2, rng);
    auto edges = g.edges();
    edges.emplace_back(rng() % n, rng() % n);
    const Graph bigger = Graph::from_edges(n, edges);
    if (is_connected(g)) CHECK(is_connected(bigger));
  }
}

TEST_CASE("edge-list text format") {
  const Graph g = petersen();
  std::stringstream buf;
  write_edge_list(buf, g);
  CHECK(buf.str().rfind("n 10\n", 0) == 0);
  CHECK(read_edge_list(buf) == g);

  std::istringstream no_header("0 1\n");
  CHECK_THROWS_AS(read_edge_list(no_header), std::invalid_argument);
  std::istringstream bad_line("n 3\n0 x\n");
  CHECK_THROWS_AS(read_edge_list(bad_line), std::invalid_argument);
}
