#pragma once

#include <cstddef>
#include <vector>

#include "qcomp/graph.hpp"

namespace qcomp {

/// counts[h] = number of nodes with degree exactly h, for h in [0, n).
struct DegreeCensus {
  std::vector<std::size_t> counts;
};

DegreeCensus degree_census(const Graph& g);

/// Vertex connectivity κ(g): the largest k with is_k_connected(g, k), 0 when
/// disconnected, n-1 for a complete graph. Requires n >= 2.
std::size_t vertex_connectivity(const Graph& g);

/// True iff g has more than k nodes and stays connected after deleting any
/// k-1 nodes. Requires k >= 1 and n >= 2.
bool is_k_connected(const Graph& g, std::size_t k);

/// Exhaustive test oracle: removes every (k-1)-subset and checks the rest is
/// connected. Limited to n <= 16.
bool brute_force_k_connected(const Graph& g, std::size_t k);

}  // namespace qcomp
