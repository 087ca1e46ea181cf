#include "qcomp/models.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "qcomp/errors.hpp"

namespace qcomp {

void ModelParams::validate() const {
  std::vector<FieldError> errs;
  if (n < 2) errs.push_back({"n", "must be >= 2, got " + std::to_string(n)});
  if (q < 1) errs.push_back({"q", "must be >= 1"});
  if (K < q) errs.push_back({"K", "must be >= q (" + std::to_string(q) + "), got " + std::to_string(K)});
  if (K > P) errs.push_back({"P", "must be >= K (" + std::to_string(K) + "), got " + std::to_string(P)});
  if (!(p >= 0.0 && p <= 1.0)) errs.push_back({"p", "must lie in [0, 1], got " + std::to_string(p)});
  if (!errs.empty()) throw ValidationError(std::move(errs));
}

std::size_t shared_keys(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                        std::size_t stop_at) {
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end() && common < stop_at) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return common;
}

KeyAssignment sample_uniform_rings(const ModelParams& params, const Seed& seed) {
  if (params.K > params.P) {
    throw std::invalid_argument("sample_uniform_rings: K (" + std::to_string(params.K) +
                                ") exceeds pool size P (" + std::to_string(params.P) + ")");
  }
  Engine rng = make_engine(seed, Stream::kRings);
  SubsetSampler sampler(params.P);
  KeyAssignment out;
  out.P = params.P;
  out.rings.reserve(params.n);
  for (std::uint32_t i = 0; i < params.n; ++i) out.rings.push_back(sampler.draw(params.K, rng));
  return out;
}

KeyAssignment sample_binomial_rings(std::uint32_t P, double x, std::uint32_t n, const Seed& seed) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("sample_binomial_rings: x must lie in [0, 1], got " + std::to_string(x));
  }
  Engine rng = make_engine(seed, Stream::kBinomialRings);
  KeyAssignment out;
  out.P = P;
  out.rings.resize(n);
  for (auto& ring : out.rings) {
    for_each_bernoulli(P, x, rng, [&](std::uint64_t key) { ring.push_back(static_cast<std::uint32_t>(key)); });
  }
  return out;
}

Graph intersection_graph(const KeyAssignment& assignment, std::uint32_t q) {
  if (q < 1) throw std::invalid_argument("intersection_graph: q must be >= 1");
  const auto n = static_cast<std::uint32_t>(assignment.node_count());

  // Group (key, node) pairs by key; memory scales with the total ring size,
  // not with P.
  std::vector<std::pair<std::uint32_t, NodeId>> entries;
  std::size_t total = 0;
  for (const auto& ring : assignment.rings) total += ring.size();
  entries.reserve(total);
  for (NodeId i = 0; i < n; ++i) {
    for (auto key : assignment.rings[i]) {
      if (key >= assignment.P) throw std::invalid_argument("intersection_graph: key outside pool");
      entries.emplace_back(key, i);
    }
  }
  std::sort(entries.begin(), entries.end());

  // holders_ of group g live in [group_start[g], group_start[g+1]); each node
  // keeps the list of groups it belongs to
  std::vector<NodeId> holders(entries.size());
  std::vector<std::size_t> group_start;
  std::vector<std::vector<std::uint32_t>> node_groups(n);
  for (std::size_t e = 0; e < entries.size(); ++e) {
    if (e == 0 || entries[e].first != entries[e - 1].first) group_start.push_back(e);
    holders[e] = entries[e].second;
    node_groups[entries[e].second].push_back(static_cast<std::uint32_t>(group_start.size() - 1));
  }
  group_start.push_back(entries.size());

  std::vector<std::uint32_t> overlap(n, 0);
  std::vector<NodeId> touched;
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (auto grp : node_groups[i]) {
      auto first = holders.begin() + static_cast<std::ptrdiff_t>(group_start[grp]);
      auto last = holders.begin() + static_cast<std::ptrdiff_t>(group_start[grp + 1]);
      for (auto it = std::upper_bound(first, last, i); it != last; ++it) {
        const NodeId j = *it;
        if (overlap[j] == 0) touched.push_back(j);
        if (++overlap[j] == q) edges.emplace_back(i, j);
      }
    }
    for (NodeId j : touched) overlap[j] = 0;
    touched.clear();
  }
  return Graph::from_edges(n, edges);
}

Graph sample_er(std::uint32_t n, double p, const Seed& seed) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("sample_er: p must lie in [0, 1], got " + std::to_string(p));
  }
  if (p == 1.0) return Graph::complete(n);
  Engine rng = make_engine(seed, Stream::kChannels);
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) / 2;

  // pair index enumerates (0,1),(0,2),...,(0,n-1),(1,2),...
  std::vector<Edge> edges;
  NodeId row = 0;
  std::uint64_t row_start = 0;
  for_each_bernoulli(pairs, p, rng, [&](std::uint64_t idx) {
    while (idx >= row_start + (n - 1 - row)) {
      row_start += n - 1 - row;
      ++row;
    }
    edges.emplace_back(row, static_cast<NodeId>(row + 1 + (idx - row_start)));
  });
  return Graph::from_edges(n, edges);
}

Graph sample_composed(const ModelParams& params, const Seed& seed) {
  params.validate();
  Graph keys = intersection_graph(sample_uniform_rings(params, seed), params.q);
  if (params.p == 1.0) return keys;
  return intersect(keys, sample_er(params.n, params.p, seed));
}

namespace {

/// Uniform `count`-subset of the pool complement of a sorted ring.
std::vector<std::uint32_t> draw_outside(const KeyRing& ring, std::uint32_t P, std::uint32_t count,
                                        Engine& rng) {
  SubsetSampler sampler(P - static_cast<std::uint32_t>(ring.size()));
  std::vector<std::uint32_t> ranks = sampler.draw(count, rng);
  // rank r in the complement -> key: skip ring members not above it
  std::vector<std::uint32_t> keys;
  keys.reserve(count);
  std::size_t below = 0;
  for (std::uint32_t r : ranks) {
    while (below < ring.size() && ring[below] <= r + below) ++below;
    keys.push_back(static_cast<std::uint32_t>(r + below));
  }
  return keys;
}

}  // namespace

CoupledPair sample_coupled_pair(const ModelParams& params, double x, const Seed& seed) {
  params.validate();
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("sample_coupled_pair: x must lie in [0, 1], got " + std::to_string(x));
  }
  CoupledPair out;
  out.uniform_rings = sample_uniform_rings(params, seed);
  out.binomial_rings.P = params.P;
  out.binomial_rings.rings.resize(params.n);
  out.coupling_ok = true;

  Engine size_rng = make_engine(seed, Stream::kCouplingSizes);
  Engine subset_rng = make_engine(seed, Stream::kCouplingSubsets);
  std::binomial_distribution<std::uint32_t> ring_size(params.P, x);
  SubsetSampler within(params.K);

  for (std::uint32_t i = 0; i < params.n; ++i) {
    const std::uint32_t b = x > 0.0 ? ring_size(size_rng) : 0;
    const KeyRing& uniform = out.uniform_rings.rings[i];
    KeyRing& binomial = out.binomial_rings.rings[i];
    if (b <= params.K) {
      for (std::uint32_t pos : within.draw(b, subset_rng)) binomial.push_back(uniform[pos]);
    } else {
      out.coupling_ok = false;
      binomial = uniform;
      auto extra = draw_outside(uniform, params.P, b - params.K, subset_rng);
      binomial.insert(binomial.end(), extra.begin(), extra.end());
      std::sort(binomial.begin(), binomial.end());
    }
  }
  return out;
}

}  // namespace qcomp
