#include "fso/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fso/parallel.hpp"
#include "fso/random.hpp"

namespace fso {

Interval wilson_interval(std::uint64_t errors, std::uint64_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: no trials");
  if (errors > trials) throw std::invalid_argument("wilson_interval: errors > trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // Clamp rounding so the interval always contains the point estimate.
  return {std::min(p, std::max(0.0, center - half)), std::max(p, std::min(1.0, center + half))};
}

McEstimate mc_ber(double p_watts, const DerivedParams& d, const LinkParams& link,
                  std::uint64_t trials, std::uint64_t seed, const McOptions& options) {
  if (!(p_watts > 0.0)) throw std::invalid_argument("transmit power must be positive");
  if (trials < kMinMcTrials) throw std::invalid_argument("mc_ber needs at least 1e4 trials");

  const double eta_p = link.responsivity_a_per_w * p_watts;
  const double sigma_n = link.noise_std;
  const std::uint64_t batches = (trials + kBatchSize - 1) / kBatchSize;
  std::vector<std::uint64_t> errors(batches, 0);

  parallel_for(batches, options.threads, [&](std::size_t b) {
    auto engine = batch_engine(seed, b);
    GainSampler sampler(d);
    std::normal_distribution<double> noise(0.0, sigma_n);
    std::bernoulli_distribution bit(0.5);
    const std::uint64_t count = std::min(kBatchSize, trials - b * kBatchSize);
    std::uint64_t local = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      const double h = options.pinned_gain ? *options.pinned_gain : sampler(engine).total;
      const bool one = bit(engine);
      const double received = (one ? 2.0 * eta_p * h : 0.0) + noise(engine);
      const bool decided_one = received > eta_p * h;
      local += decided_one != one;
    }
    errors[b] = local;
  });

  McEstimate est;
  est.trials = trials;
  est.seed = seed;
  for (auto e : errors) est.errors += e;
  est.ber = static_cast<double>(est.errors) / static_cast<double>(trials);
  const Interval ci = wilson_interval(est.errors, trials);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  est.low_confidence = est.errors == 0;
  return est;
}

}  // namespace fso
