#include "qcomp/connectivity.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qcomp {

DegreeCensus degree_census(const Graph& g) {
  DegreeCensus census;
  census.counts.assign(g.node_count(), 0);
  for (NodeId i = 0; i < g.node_count(); ++i) ++census.counts[g.degree(i)];
  return census;
}

namespace {

void require_two_nodes(const Graph& g, const char* what) {
  if (g.node_count() < 2) {
    throw std::invalid_argument(std::string(what) + ": graph needs at least 2 nodes, has " +
                                std::to_string(g.node_count()));
  }
}

/// True iff the connected graph g has no articulation point (iterative Tarjan).
bool is_biconnected(const Graph& g) {
  const std::size_t n = g.node_count();
  constexpr std::size_t kUnseen = SIZE_MAX;
  std::vector<std::size_t> order(n, kUnseen), low(n, 0);
  struct Frame {
    NodeId node;
    NodeId parent;
    std::size_t next;
  };
  std::vector<Frame> stack;
  std::size_t clock = 0;
  std::size_t root_children = 0;
  order[0] = low[0] = clock++;
  stack.push_back({0, 0, 0});
  while (!stack.empty()) {
    Frame& f = stack.back();
    auto row = g.neighbors(f.node);
    if (f.next < row.size()) {
      const NodeId w = row[f.next++];
      if (order[w] == kUnseen) {
        order[w] = low[w] = clock++;
        if (f.node == 0) ++root_children;
        stack.push_back({w, f.node, 0});
      } else if (!(w == f.parent && f.node != 0)) {
        low[f.node] = std::min(low[f.node], order[w]);
      }
      continue;
    }
    const NodeId v = f.node;
    const NodeId parent = f.parent;
    stack.pop_back();
    if (stack.empty()) break;
    low[parent] = std::min(low[parent], low[v]);
    if (parent != 0 && low[v] >= order[parent]) return false;
  }
  return root_children <= 1;
}

/// Unit-capacity node-split flow network for local vertex connectivity.
///
/// Node v becomes v_in = 2v and v_out = 2v+1 joined by one arc of capacity
/// one; each undirected edge {u,v} becomes arcs u_out -> v_in and
/// v_out -> u_in. The number of internally disjoint s-t paths equals the
/// max flow from s_out to t_in.
class SplitNetwork {
 public:
  explicit SplitNetwork(const Graph& g) : n_(g.node_count()) {
    const std::size_t vertices = 2 * n_;
    std::vector<std::size_t> out_deg(vertices, 0);
    auto count_arc = [&](std::size_t from, std::size_t to) {
      ++out_deg[from];
      ++out_deg[to];  // residual twin
    };
    for (NodeId v = 0; v < n_; ++v) {
      count_arc(2 * v, 2 * v + 1);
      for (NodeId w : g.neighbors(v)) count_arc(2 * v + 1, 2 * w);
    }
    first_.assign(vertices + 1, 0);
    for (std::size_t i = 0; i < vertices; ++i) first_[i + 1] = first_[i] + out_deg[i];
    head_.resize(first_.back());
    twin_.resize(first_.back());
    cap_.resize(first_.back());
    std::vector<std::size_t> fill(first_.begin(), first_.end() - 1);
    auto add_arc = [&](std::size_t from, std::size_t to) {
      const std::size_t a = fill[from]++;
      const std::size_t b = fill[to]++;
      head_[a] = static_cast<std::uint32_t>(to);
      head_[b] = static_cast<std::uint32_t>(from);
      twin_[a] = b;
      twin_[b] = a;
      cap_[a] = 1;
      cap_[b] = 0;
    };
    for (NodeId v = 0; v < n_; ++v) {
      add_arc(2 * v, 2 * v + 1);
      for (NodeId w : g.neighbors(v)) add_arc(2 * v + 1, 2 * w);
    }
    base_cap_ = cap_;
    parent_arc_.resize(vertices);
    visited_.assign(vertices, 0);
  }

  /// Max number of internally disjoint s-t paths, stopping once `limit` is reached.
  std::size_t local_connectivity(NodeId s, NodeId t, std::size_t limit) {
    cap_ = base_cap_;
    const std::size_t source = 2 * static_cast<std::size_t>(s) + 1;
    const std::size_t sink = 2 * static_cast<std::size_t>(t);
    std::size_t flow = 0;
    while (flow < limit && augment(source, sink)) ++flow;
    return flow;
  }

 private:
  bool augment(std::size_t source, std::size_t sink) {
    ++stamp_;
    if (stamp_ == 0) {
      std::fill(visited_.begin(), visited_.end(), 0);
      stamp_ = 1;
    }
    queue_.clear();
    queue_.push_back(source);
    visited_[source] = stamp_;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const std::size_t v = queue_[head];
      for (std::size_t a = first_[v]; a < first_[v + 1]; ++a) {
        const std::size_t w = head_[a];
        if (cap_[a] == 0 || visited_[w] == stamp_) continue;
        visited_[w] = stamp_;
        parent_arc_[w] = a;
        if (w == sink) {
          for (std::size_t x = sink; x != source;) {
            const std::size_t arc = parent_arc_[x];
            --cap_[arc];
            ++cap_[twin_[arc]];
            x = head_[twin_[arc]];
          }
          return true;
        }
        queue_.push_back(w);
      }
    }
    return false;
  }

  std::size_t n_;
  std::vector<std::size_t> first_;
  std::vector<std::uint32_t> head_;
  std::vector<std::size_t> twin_;
  std::vector<std::uint8_t> cap_;
  std::vector<std::uint8_t> base_cap_;
  std::vector<std::size_t> parent_arc_;
  std::vector<std::uint32_t> visited_;
  std::uint32_t stamp_ = 0;
  std::vector<std::size_t> queue_;
};

/// min(κ(g), limit) for a connected, non-complete graph via the
/// Esfahanian–Hakimi reduction around a minimum-degree vertex v: flows from v
/// to every non-neighbor, plus flows between non-adjacent neighbor pairs of v.
std::size_t capped_connectivity(const Graph& g, std::size_t limit) {
  const auto n = static_cast<NodeId>(g.node_count());
  NodeId v = 0;
  for (NodeId i = 1; i < n; ++i) {
    if (g.degree(i) < g.degree(v)) v = i;
  }
  std::size_t best = std::min(limit, g.degree(v));
  SplitNetwork net(g);
  auto row = g.neighbors(v);
  for (NodeId w = 0; w < n && best > 0; ++w) {
    if (w == v || std::binary_search(row.begin(), row.end(), w)) continue;
    best = std::min(best, net.local_connectivity(v, w, best));
  }
  for (std::size_t a = 0; a < row.size() && best > 0; ++a) {
    for (std::size_t b = a + 1; b < row.size() && best > 0; ++b) {
      if (g.has_edge(row[a], row[b])) continue;
      best = std::min(best, net.local_connectivity(row[a], row[b], best));
    }
  }
  return best;
}

bool is_complete(const Graph& g) {
  return g.edge_count() == g.node_count() * (g.node_count() - 1) / 2;
}

}  // namespace

std::size_t vertex_connectivity(const Graph& g) {
  require_two_nodes(g, "vertex_connectivity");
  if (!is_connected(g)) return 0;
  if (is_complete(g)) return g.node_count() - 1;
  return capped_connectivity(g, g.node_count());
}

bool is_k_connected(const Graph& g, std::size_t k) {
  require_two_nodes(g, "is_k_connected");
  if (k < 1) throw std::invalid_argument("is_k_connected: k must be >= 1");
  if (g.node_count() <= k) return false;
  if (min_degree(g) < k) return false;
  if (!is_connected(g)) return false;
  if (k == 1) return true;
  if (is_complete(g)) return true;  // κ = n-1 >= k
  if (k == 2) return is_biconnected(g);
  return capped_connectivity(g, k) >= k;
}

bool brute_force_k_connected(const Graph& g, std::size_t k) {
  const std::size_t n = g.node_count();
  if (n > 16) throw std::invalid_argument("brute_force_k_connected: limited to 16 nodes, got " + std::to_string(n));
  require_two_nodes(g, "brute_force_k_connected");
  if (k < 1) throw std::invalid_argument("brute_force_k_connected: k must be >= 1");
  if (n <= k) return false;

  const std::size_t remove = k - 1;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != remove) continue;
    // BFS over the surviving nodes
    std::uint32_t alive = ((1u << n) - 1) & ~mask;
    const auto start = static_cast<NodeId>(std::countr_zero(alive));
    std::uint32_t seen = 1u << start;
    std::vector<NodeId> stack{start};
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(v)) {
        const std::uint32_t bit = 1u << w;
        if ((alive & bit) && !(seen & bit)) {
          seen |= bit;
          stack.push_back(w);
        }
      }
    }
    if (seen != alive) return false;
  }
  return true;
}

}  // namespace qcomp
