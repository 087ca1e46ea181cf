#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace qcomp {

/// Per-trial randomness handle. Every sampler output is a pure function of
/// (master_seed, trial_index) and the component tag it asks for.
struct Seed {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
};

/// Tags for independent sub-streams of a single trial.
enum class Stream : std::uint64_t {
  kRings = 1,
  kChannels = 2,
  kBinomialRings = 3,
  kCouplingSizes = 4,
  kCouplingSubsets = 5,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Order-sensitive hash of a word sequence, used for seed splitting.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words) noexcept;

using Engine = std::mt19937_64;

Engine make_engine(const Seed& seed, Stream stream);

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, bound) by rejection (no modulo bias).
std::uint64_t uniform_below(Engine& rng, std::uint64_t bound);

/// Visits, in increasing order, each index in [0, count) that succeeds an
/// independent Bernoulli(prob) trial. Uses geometric skips, so the cost is
/// proportional to the number of successes rather than to count.
template <typename Fn>
void for_each_bernoulli(std::uint64_t count, double prob, Engine& rng, Fn&& fn) {
  if (prob <= 0.0 || count == 0) return;
  if (prob >= 1.0) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const double log_q = std::log1p(-prob);
  std::uint64_t i = 0;
  while (true) {
    const double u = uniform01(rng);
    const double skip = std::floor(std::log1p(-u) / log_q);
    if (skip >= static_cast<double>(count - i)) return;
    i += static_cast<std::uint64_t>(skip);
    fn(i);
    if (++i >= count) return;
  }
}

/// Uniform fixed-size subsets of {0, ..., pool_size-1} by partial
/// Fisher-Yates over a persistent index pool. Swaps are undone after each
/// draw so a draw costs O(size) regardless of pool_size.
class SubsetSampler {
 public:
  explicit SubsetSampler(std::uint32_t pool_size);

  /// Sorted uniform subset of the given size; size must be <= pool_size.
  std::vector<std::uint32_t> draw(std::uint32_t size, Engine& rng);

  std::uint32_t pool_size() const noexcept { return static_cast<std::uint32_t>(pool_.size()); }

 private:
  std::vector<std::uint32_t> pool_;
  std::vector<std::uint32_t> swaps_;
};

}  // namespace qcomp
