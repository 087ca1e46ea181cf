#include <random>
#include <stdexcept>

#include "doctest.h"
#include "qcomp/connectivity.hpp"
#include "qcomp/models.hpp"
#include "support.hpp"

using namespace qcomp;
using namespace qcomp::testing;

namespace {

/// κ by brute force: largest k the exhaustive oracle accepts.
std::size_t brute_force_kappa(const Graph& g) {
  std::size_t k = 0;
  while (k + 1 < g.node_count() && brute_force_k_connected(g, k + 1)) ++k;
  return k;
}

}  // namespace

TEST_CASE("is_k_connected on named graphs") {
  CHECK(is_k_connected(Graph::complete(5), 4));
  CHECK_FALSE(is_k_connected(Graph::complete(5), 5));
  CHECK(is_k_connected(cycle(6), 2));
  CHECK_FALSE(is_k_connected(cycle(6), 3));
  CHECK(is_k_connected(star(4), 1));
  CHECK_FALSE(is_k_connected(star(4), 2));
  CHECK(is_k_connected(petersen(), 3));
  CHECK_FALSE(is_k_connected(petersen(), 4));
  CHECK(is_k_connected(hypercube(4), 4));
  CHECK_FALSE(is_k_connected(hypercube(4), 5));
  CHECK_THROWS_AS(is_k_connected(Graph::empty(1), 1), std::invalid_argument);
  CHECK_THROWS_AS(is_k_connected(cycle(4), 0), std::invalid_argument);
}

TEST_CASE("vertex_connectivity") {
  CHECK(vertex_connectivity(Graph::from_edges(6, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}})) == 0);
  CHECK(vertex_connectivity(path(4)) == 1);
  CHECK(vertex_connectivity(Graph::complete(7)) == 6);
  CHECK(vertex_connectivity(Graph::complete(2)) == 1);
  CHECK(vertex_connectivity(hypercube(5)) == 5);
  CHECK(vertex_connectivity(petersen()) == 3);

  const Graph k33 = complete_bipartite(3, 3);
  CHECK(brute_force_kappa(k33) == 3);
  CHECK(vertex_connectivity(k33) == 3);
  CHECK_THROWS_AS(vertex_connectivity(Graph::empty(1)), std::invalid_argument);
}

TEST_CASE("brute_force_k_connected") {
  CHECK(brute_force_k_connected(cycle(5), 2));
  CHECK_FALSE(brute_force_k_connected(path(5), 2));
  CHECK_FALSE(brute_force_k_connected(Graph::complete(4), 4));
  CHECK(brute_force_k_connected(Graph::complete(4), 3));
  CHECK_THROWS_AS(brute_force_k_connected(cycle(17), 2), std::invalid_argument);
}

TEST_CASE("oracle equivalence on random small graphs") {
  std::mt19937_64 rng(2718);
  std::size_t disagreements = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::uint32_t n = 2 + rng() % 9;
    const double p = std::uniform_real_distribution<double>(0.2, 0.95)(rng);
    const Graph g = coin_flip_graph(n, p, rng);
    for (std::size_t k = 1; k < n; ++k) disagreements += is_k_connected(g, k) != brute_force_k_connected(g, k);
    REQUIRE(vertex_connectivity(g) == brute_force_kappa(g));
  }
  CHECK(disagreements == 0);
}

TEST_CASE("flow-based κ agrees with the biconnectivity fast path on larger graphs") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 150; ++rep) {
    const std::uint32_t n = 20 + rng() % 60;
    const Graph g = coin_flip_graph(n, 3.0 / n + (rng() % 5) * 0.02, rng);
    const std::size_t kappa = vertex_connectivity(g);
    for (std::size_t k = 1; k <= 5; ++k) REQUIRE(is_k_connected(g, k) == (kappa >= k));
  }
}

TEST_CASE("k-connectivity properties on sampled composed graphs") {
  for (std::uint64_t t = 0; t < 30; ++t) {
    const Graph g = sample_composed({150, 14, 400, 2, 0.8}, {77, t});
    const std::size_t delta = min_degree(g);
    for (std::size_t k = 1; k <= 4; ++k) {
      const bool kc = is_k_connected(g, k);
      if (kc) CHECK(delta >= k);  // necessary condition
      if (kc && k >= 2) CHECK(is_k_connected(g, k - 1));
    }
  }
}

TEST_CASE("adding an edge never breaks k-connectivity") {
  std::mt19937_64 rng(404);
  for (int rep = 0; rep < 200; ++rep) {
    const std::uint32_t n = 4 + rng() % 12;
    const Graph g = coin_flip_graph(n, 0.6, rng);
    auto edges = g.edges();
    edges.emplace_back(rng() % n, rng() % n);
    const Graph bigger = Graph::from_edges(n, edges);
    for (std::size_t k = 1; k < n; ++k) {
      if (is_k_connected(g, k)) CHECK(is_k_connected(bigger, k));
    }
  }
}

TEST_CASE("degree_census") {
  CHECK(degree_census(Graph::empty(3)).counts[0] == 3);

  const auto star_census = degree_census(star(4)).counts;
  CHECK(star_census[1] == 4);
  CHECK(star_census[4] == 1);
  CHECK(degree_census(cycle(6)).counts[2] == 6);

  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 50; ++rep) {
    const std::uint32_t n = 1 + rng() % 40;
    const Graph g = coin_flip_graph(n, 0.3, rng);
    const auto c = degree_census(g).counts;
    std::size_t nodes = 0, half_edges = 0;
    for (std::size_t h = 0; h < c.size(); ++h) {
      nodes += c[h];
      half_edges += h * c[h];
    }
    CHECK(nodes == n);
    CHECK(half_edges == 2 * g.edge_count());
  }
}
