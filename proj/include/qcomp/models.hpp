#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qcomp/graph.hpp"
#include "qcomp/random.hpp"

namespace qcomp {

/// One instance of the composed key-predistribution / on-off channel model.
struct ModelParams {
  std::uint32_t n = 0;   ///< number of sensors
  std::uint32_t K = 0;   ///< key-ring size
  std::uint32_t P = 0;   ///< key-pool size
  std::uint32_t q = 1;   ///< required key overlap
  double p = 1.0;        ///< channel-on probability

  /// Throws ValidationError listing every violated field. Requires n >= 2,
  /// 1 <= q <= K <= P and p in [0, 1]. The degenerate q == K and K == P
  /// (every ring is the whole pool) are accepted.
  void validate() const;
};

using KeyRing = std::vector<std::uint32_t>;

/// Per-node sorted key rings over the pool {0, ..., P-1}.
struct KeyAssignment {
  std::vector<KeyRing> rings;
  std::uint32_t P = 0;

  std::size_t node_count() const noexcept { return rings.size(); }
};

/// |a ∩ b| for sorted rings, stopping early once `stop_at` common keys are found.
std::size_t shared_keys(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                        std::size_t stop_at = SIZE_MAX);

/// Each node draws an independent uniform K-subset of the pool.
KeyAssignment sample_uniform_rings(const ModelParams& params, const Seed& seed);

/// Each key joins each node's ring independently with probability x.
KeyAssignment sample_binomial_rings(std::uint32_t P, double x, std::uint32_t n, const Seed& seed);

/// Edge {i,j} iff rings i and j share at least q keys. Serves both the uniform
/// (G_q) and binomial (H_q) q-intersection graphs.
Graph intersection_graph(const KeyAssignment& assignment, std::uint32_t q);

/// Erdős–Rényi G(n, p).
Graph sample_er(std::uint32_t n, double p, const Seed& seed);

/// Composed WSN topology: uniform q-intersection graph ∩ G(n, p), with the
/// rings and the channels drawn from independent sub-streams of `seed`.
Graph sample_composed(const ModelParams& params, const Seed& seed);

struct CoupledPair {
  KeyAssignment uniform_rings;
  KeyAssignment binomial_rings;
  bool coupling_ok = false;
};

/// Joint draw of a uniform assignment (ring size K) and a binomial assignment
/// (key probability x) on one probability space. For each node a size
/// B ~ Binomial(P, x) is drawn; when B <= K the binomial ring is a uniform
/// B-subset of the uniform ring, otherwise it is the uniform ring plus B-K
/// uniform extra keys. Both marginals are exact either way; coupling_ok
/// reports whether B <= K held at every node, which is exactly when every
/// binomial ring is contained in its uniform ring.
CoupledPair sample_coupled_pair(const ModelParams& params, double x, const Seed& seed);

}  // namespace qcomp
