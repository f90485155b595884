#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fso/ber.hpp"
#include "fso/channel.hpp"

namespace fso {

/// Hard-decision FEC threshold for a rate-0.937 code.
inline constexpr double kHdFecThreshold = 3.84e-3;

struct SweepRange {
  double lo_dbm = -4.0;
  double hi_dbm = 16.0;
  double step_dbm = 0.5;

  /// lo, lo + step, ... up to hi (inclusive when hi lies on the grid).
  std::vector<double> grid() const;
};

struct BerPoint {
  double p_dbm = 0.0;
  double ber = 0.0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::optional<std::uint64_t> trials;
};

struct BerCurve {
  BerMethod method;
  std::vector<BerPoint> points;
};

struct McConfig {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
};

struct SweepOptions {
  AnalyticOptions analytic{};
  McConfig mc{};
  unsigned threads = 0;
};

/// Error at a specific power point of a sweep.
class SweepError : public std::runtime_error {
 public:
  SweepError(BerMethod method, double p_dbm, const std::string& cause);
  BerMethod method() const noexcept { return method_; }
  double p_dbm() const noexcept { return p_dbm_; }

 private:
  BerMethod method_;
  double p_dbm_;
};

/// One curve per requested method, in the order given. Grid points are
/// independent and evaluated concurrently; the result does not depend on the
/// thread count.
std::vector<BerCurve> sweep(const std::vector<BerMethod>& methods, const SweepRange& range,
                            const DerivedParams& d, const LinkParams& link,
                            const SweepOptions& options = {});

struct CrossingReport {
  BerMethod method;
  double threshold;
  double p_cross_dbm;
  std::pair<double, double> bracket;  // ber(first) > threshold > ber(second)
};

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// BER was observed to increase with power during bisection.
class MonotonicityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CrossingOptions {
  AnalyticOptions analytic{};
  double resolution_db = 1e-3;
  double search_lo_dbm = -40.0;
  double search_hi_dbm = 40.0;
};

/// Power at which an analytic BER curve crosses `threshold`, by bisection on
/// P in dBm until the bracket is narrower than `resolution_db`.
CrossingReport fec_crossing(BerMethod method, const DerivedParams& d, const LinkParams& link,
                            double threshold = kHdFecThreshold,
                            const CrossingOptions& options = {});

/// p_cross(b) - p_cross(a) in dB; positive when b needs more power.
double delta(BerMethod a, BerMethod b, double threshold, const DerivedParams& d,
             const LinkParams& link, const CrossingOptions& options = {});

/// Crossing of a tabulated curve by log-BER linear interpolation between the
/// first pair of grid points that straddle the threshold.
std::optional<double> interpolate_crossing(const BerCurve& curve, double threshold);

}  // namespace fso
