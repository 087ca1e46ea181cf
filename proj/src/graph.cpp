#include "qcomp/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qcomp {

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::size_t> deg(n, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw std::invalid_argument("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                  ") has an endpoint outside [0, " + std::to_string(n) + ")");
    }
    if (u == v) continue;
    ++deg[u];
    ++deg[v];
  }

  Graph g;
  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
  g.neighbors_.resize(g.offsets_[n]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    if (u == v) continue;
    g.neighbors_[fill[u]++] = v;
    g.neighbors_[fill[v]++] = u;
  }

  // sort + dedup each row, then compact
  std::size_t write = 0;
  std::size_t row_begin = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto first = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(row_begin);
    auto last = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]);
    std::sort(first, last);
    auto unique_end = std::unique(first, last);
    row_begin = g.offsets_[i + 1];
    g.offsets_[i] = write;
    for (auto it = first; it != unique_end; ++it) g.neighbors_[write++] = *it;
  }
  g.offsets_[n] = write;
  g.neighbors_.resize(write);
  return g;
}

Graph Graph::empty(std::size_t n) {
  Graph g;
  g.offsets_.assign(n + 1, 0);
  return g;
}

Graph Graph::complete(std::size_t n) {
  Graph g;
  g.offsets_.resize(n + 1);
  g.neighbors_.reserve(n * (n > 0 ? n - 1 : 0));
  g.offsets_[0] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) g.neighbors_.push_back(static_cast<NodeId>(j));
    }
    g.offsets_[i + 1] = g.neighbors_.size();
  }
  return g;
}

std::span<const NodeId> Graph::neighbors(NodeId i) const {
  if (i >= node_count()) {
    throw std::invalid_argument("node index " + std::to_string(i) + " out of range for graph with " +
                                std::to_string(node_count()) + " nodes");
  }
  return {neighbors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

std::size_t Graph::degree(NodeId i) const { return neighbors(i).size(); }

bool Graph::has_edge(NodeId i, NodeId j) const {
  auto row = neighbors(i);
  return std::binary_search(row.begin(), row.end(), j);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId i = 0; i < node_count(); ++i) {
    for (NodeId j : neighbors(i)) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

Graph intersect(const Graph& a, const Graph& b) {
  if (a.node_count() != b.node_count()) {
    throw std::invalid_argument("intersect: node counts differ (" + std::to_string(a.node_count()) +
                                " vs " + std::to_string(b.node_count()) + ")");
  }
  std::vector<Edge> common;
  for (NodeId i = 0; i < a.node_count(); ++i) {
    auto ra = a.neighbors(i);
    auto rb = b.neighbors(i);
    // only the upper half, each edge once
    auto ia = std::upper_bound(ra.begin(), ra.end(), i);
    auto ib = std::upper_bound(rb.begin(), rb.end(), i);
    while (ia != ra.end() && ib != rb.end()) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        common.emplace_back(i, *ia);
        ++ia;
        ++ib;
      }
    }
  }
  return Graph::from_edges(a.node_count(), common);
}

std::size_t degree(const Graph& g, NodeId i) { return g.degree(i); }

std::size_t min_degree(const Graph& g) {
  if (g.node_count() == 0) throw std::invalid_argument("min_degree: graph has no nodes");
  std::size_t best = g.degree(0);
  for (NodeId i = 1; i < g.node_count() && best > 0; ++i) best = std::min(best, g.degree(i));
  return best;
}

bool is_connected(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw std::invalid_argument("is_connected: graph has no nodes");
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "n " << g.node_count() << '\n';
  for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  bool have_header = false;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (!have_header) {
      if (first != "n" || !(fields >> n)) throw std::invalid_argument("edge list: expected header `n <node_count>`");
      have_header = true;
      continue;
    }
    unsigned long long u = 0, v = 0;
    try {
      u = std::stoull(first);
    } catch (const std::exception&) {
      throw std::invalid_argument("edge list: malformed line `" + line + "`");
    }
    if (!(fields >> v)) throw std::invalid_argument("edge list: malformed line `" + line + "`");
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  if (!have_header) throw std::invalid_argument("edge list: missing header");
  return Graph::from_edges(n, edges);
}

}  // namespace qcomp
