#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fso/analysis.hpp"
#include "fso/ber.hpp"
#include "fso/channel.hpp"

namespace fso {

struct RunConfig {
  LinkParams link{};
  SweepRange sweep{};
  std::vector<BerMethod> methods{BerMethod::Exact, BerMethod::ApproxNew, BerMethod::ApproxPrev};
  std::uint64_t mc_trials = 1'000'000;
  std::uint64_t seed = 1;
  double fec_threshold = kHdFecThreshold;
  std::string output_path = "out";
  unsigned threads = 0;
  double prev_v_min = kDefaultPrevVMin;
  std::string source = "defaults";  // preset name or config path, for the report
};

/// Carries every problem found, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// case1 / case2 / case3: shared link values with (pointing std, Rytov
/// variance) = (0.35 m, 0.1), (0.25 m, 0.5), (0.2 m, 0.9).
RunConfig preset(std::string_view name);
const std::vector<std::string>& preset_names();

/// Parses "key = value" lines ('#' starts a comment). Keys are the RunConfig
/// and LinkParams field names plus `preset`, `sweep` (lo:hi:step) and
/// `methods` (comma list). A preset, if present, is applied before the other
/// keys regardless of position.
RunConfig parse_config(std::string_view text, std::string_view origin = "<config>");
RunConfig load_config(const std::filesystem::path& path);

SweepRange parse_sweep(std::string_view text);
/// Non-negative integer; integral scientific notation such as 1e7 is accepted.
std::optional<std::uint64_t> parse_count(std::string_view text);
std::vector<BerMethod> parse_methods(std::string_view text);

/// All violated constraints; empty when the configuration can run.
std::vector<std::string> validate(const RunConfig& config);

struct CrossingRow {
  BerMethod method;
  std::optional<double> p_cross_dbm;  // empty if the curve never crossed
  bool interpolated = false;          // MC crossings come from the sweep table
};

struct DeltaRow {
  BerMethod a;
  BerMethod b;
  double delta_db;
};

struct RunResult {
  DerivedParams derived;
  std::vector<BerCurve> curves;
  std::vector<CrossingRow> crossings;
  std::vector<DeltaRow> deltas;
};

/// Computes everything `run` writes, without touching the filesystem.
RunResult evaluate(const RunConfig& config);

inline constexpr std::string_view kCsvHeader =
    "p_dbm,ber_exact,ber_approx_new,ber_approx_prev,ber_mc,mc_ci_low,mc_ci_high,mc_trials";

std::string format_csv(const std::vector<BerCurve>& curves);
std::string format_report(const RunConfig& config, const RunResult& result);

struct RunArtifacts {
  std::filesystem::path csv;
  std::filesystem::path report;
};

/// Writes curves.csv and report.txt under config.output_path. Each file is
/// written to a temporary name and renamed; nothing is left behind on error.
RunArtifacts run(const RunConfig& config);

}  // namespace fso
