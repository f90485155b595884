#pragma once

#include <cstdint>
#include <optional>

#include "fso/channel.hpp"

namespace fso {

/// Two-sided 99% normal quantile used for all Monte Carlo intervals.
inline constexpr double kZ99 = 2.5758293035489004;

struct Interval {
  double low;
  double high;
};

/// Wilson score interval for `errors` successes in `trials` Bernoulli trials.
Interval wilson_interval(std::uint64_t errors, std::uint64_t trials, double z = kZ99);

struct McEstimate {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double ber = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t seed = 0;
  bool low_confidence = false;  // no errors observed; only the upper bound is informative
};

struct McOptions {
  unsigned threads = 0;                 // 0: hardware concurrency
  std::optional<double> pinned_gain;    // bypasses the channel sampler when set
};

inline constexpr std::uint64_t kMinMcTrials = 10'000;

/// Simulates OOK over the fading channel with perfect channel knowledge:
/// x in {0, 2P}, y = eta h x + n, decide 2P iff y > eta P h. The result depends
/// only on (seed, trials), never on the thread count.
McEstimate mc_ber(double p_watts, const DerivedParams& d, const LinkParams& link,
                  std::uint64_t trials, std::uint64_t seed, const McOptions& options = {});

}  // namespace fso
