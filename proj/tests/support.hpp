#pragma once

// Small fixed graphs and random generators shared by the test suites.

#include <cstdint>
#include <random>
#include <vector>

#include "qcomp/graph.hpp"

namespace qcomp::testing {

inline Graph path(std::uint32_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::from_edges(n, e);
}

inline Graph cycle(std::uint32_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(n, e);
}

/// K_{1,leaves}, center 0.
inline Graph star(std::uint32_t leaves) {
  std::vector<Edge> e;
  for (NodeId i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, e);
}

inline Graph complete_bipartite(std::uint32_t a, std::uint32_t b) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < a; ++i)
    for (NodeId j = 0; j < b; ++j) e.emplace_back(i, a + j);
  return Graph::from_edges(a + b, e);
}

inline Graph hypercube(std::uint32_t dim) {
  const std::uint32_t n = 1u << dim;
  std::vector<Edge> e;
  for (NodeId v = 0; v < n; ++v)
    for (std::uint32_t b = 0; b < dim; ++b)
      if (!(v & (1u << b))) e.emplace_back(v, v | (1u << b));
  return Graph::from_edges(n, e);
}

inline Graph petersen() {
  std::vector<Edge> e;
  for (NodeId i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  return Graph::from_edges(10, e);
}

/// G(n, p) by direct coin flips, independent of the library samplers.
inline Graph coin_flip_graph(std::uint32_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (coin(rng)) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

}  // namespace qcomp::testing
