#include "fso/random.hpp"

#include <atomic>

namespace fso {

namespace {
std::atomic<std::uint64_t> g_engines{0};
}

std::mt19937_64 batch_engine(std::uint64_t seed, std::uint64_t batch) {
  g_engines.fetch_add(1, std::memory_order_relaxed);
  const std::uint64_t key = splitmix64(splitmix64(seed) ^ splitmix64(batch + 0x632BE59BD9B4E019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  return std::mt19937_64(seq);
}

std::uint64_t engines_constructed() noexcept { return g_engines.load(std::memory_order_relaxed); }

}  // namespace fso
