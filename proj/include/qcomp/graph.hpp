#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace qcomp {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable simple undirected graph on nodes 0..n-1.
///
/// Adjacency is held in CSR form: one sorted, duplicate-free neighbor list
/// per node. Every constructor canonicalizes its input (drops self-loops,
/// symmetrizes, sorts, dedups), so a constructed Graph always satisfies the
/// simple-graph invariants.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an arbitrary edge list. Self-loops are dropped,
  /// duplicates and reversed pairs collapse. Throws std::invalid_argument
  /// when an endpoint is >= n.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges);

  static Graph empty(std::size_t n);
  static Graph complete(std::size_t n);

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }

  /// Sorted neighbors of node i. Throws std::invalid_argument for i out of range.
  std::span<const NodeId> neighbors(NodeId i) const;

  std::size_t degree(NodeId i) const;

  bool has_edge(NodeId i, NodeId j) const;

  /// Edges with i < j, in lexicographic order.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
};

/// Edge-set intersection of two graphs on the same node set.
Graph intersect(const Graph& a, const Graph& b);

std::size_t degree(const Graph& g, NodeId i);
std::size_t min_degree(const Graph& g);
bool is_connected(const Graph& g);

/// Debug edge-list format: a header line `n <node_count>` followed by one
/// `i j` pair per line.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

}  // namespace qcomp
