#include "qcomp/random.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qcomp {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t w : words) h = splitmix64(h ^ splitmix64(w));
  return h;
}

Engine make_engine(const Seed& seed, Stream stream) {
  const std::uint64_t s = mix_seed({seed.master_seed, seed.trial_index, static_cast<std::uint64_t>(stream)});
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s) >> 32)};
  return Engine(seq);
}

std::uint64_t uniform_below(Engine& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

SubsetSampler::SubsetSampler(std::uint32_t pool_size) : pool_(pool_size) {
  std::iota(pool_.begin(), pool_.end(), 0u);
}

std::vector<std::uint32_t> SubsetSampler::draw(std::uint32_t size, Engine& rng) {
  if (size > pool_.size()) throw std::invalid_argument("SubsetSampler: subset larger than pool");
  const std::uint32_t n = pool_size();
  swaps_.clear();
  std::vector<std::uint32_t> out(size);
  for (std::uint32_t i = 0; i < size; ++i) {
    const auto j = i + static_cast<std::uint32_t>(uniform_below(rng, n - i));
    std::swap(pool_[i], pool_[j]);
    swaps_.push_back(j);
    out[i] = pool_[i];
  }
  // undo in reverse so the pool is back to the identity permutation
  for (std::uint32_t i = size; i-- > 0;) std::swap(pool_[i], pool_[swaps_[i]]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qcomp
