#pragma once

#include <cstdint>
#include <random>

namespace fso {

/// SplitMix64 finalizer; used to derive independent per-batch seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Engine for batch `batch` of a stream keyed by `seed`. The batch layout,
/// not the thread that runs it, fixes the random sequence.
std::mt19937_64 batch_engine(std::uint64_t seed, std::uint64_t batch);

/// Number of engines handed out by batch_engine since process start.
std::uint64_t engines_constructed() noexcept;

/// Trials (or samples) per independently seeded batch.
inline constexpr std::uint64_t kBatchSize = 1ULL << 16;

}  // namespace fso
