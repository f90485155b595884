#include "fso/analysis.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "fso/montecarlo.hpp"
#include "fso/parallel.hpp"

namespace fso {

namespace {

std::string describe(BerMethod m, double p_dbm, const std::string& cause) {
  std::ostringstream out;
  out << method_name(m) << " at P = " << p_dbm << " dBm: " << cause;
  return out.str();
}

}  // namespace

SweepError::SweepError(BerMethod method, double p_dbm, const std::string& cause)
    : std::runtime_error(describe(method, p_dbm, cause)), method_(method), p_dbm_(p_dbm) {}

std::vector<double> SweepRange::grid() const {
  if (!(lo_dbm < hi_dbm) || !(step_dbm > 0.0)) {
    throw std::invalid_argument("sweep needs lo < hi and step > 0");
  }
  const auto steps = static_cast<std::size_t>(std::floor((hi_dbm - lo_dbm) / step_dbm + 1e-9));
  std::vector<double> out;
  out.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) out.push_back(lo_dbm + static_cast<double>(i) * step_dbm);
  return out;
}

std::vector<BerCurve> sweep(const std::vector<BerMethod>& methods, const SweepRange& range,
                            const DerivedParams& d, const LinkParams& link,
                            const SweepOptions& options) {
  if (methods.empty()) return {};
  const auto grid = range.grid();
  std::vector<BerCurve> curves;
  for (BerMethod m : methods) curves.push_back({m, std::vector<BerPoint>(grid.size())});

  // MC parallelizes internally over batches; analytic points parallelize here.
  for (auto& curve : curves) {
    if (curve.method == BerMethod::MonteCarlo) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
          McOptions mc_options;
          mc_options.threads = options.threads;
          const McEstimate est = mc_ber(dbm_to_watts(grid[i]), d, link, options.mc.trials,
                                        options.mc.seed, mc_options);
          curve.points[i] = {grid[i], est.ber, est.ci_low, est.ci_high, est.trials};
        } catch (const std::exception& e) {
          throw SweepError(curve.method, grid[i], e.what());
        }
      }
      continue;
    }
    parallel_for(grid.size(), options.threads, [&](std::size_t i) {
      try {
        BerPoint& pt = curve.points[i];
        pt.p_dbm = grid[i];
        pt.ber = analytic_ber(curve.method, dbm_to_watts(grid[i]), d, link, options.analytic);
      } catch (const std::exception& e) {
        throw SweepError(curve.method, grid[i], e.what());
      }
    });
  }
  return curves;
}

CrossingReport fec_crossing(BerMethod method, const DerivedParams& d, const LinkParams& link,
                            double threshold, const CrossingOptions& options) {
  if (!(threshold > 0.0 && threshold < 0.5)) {
    throw std::invalid_argument("threshold must lie in (0, 0.5)");
  }
  if (!is_analytic(method)) {
    throw std::invalid_argument("fec_crossing needs an analytic method; interpolate MC sweeps");
  }
  const auto ber_at = [&](double p_dbm) {
    return analytic_ber(method, dbm_to_watts(p_dbm), d, link, options.analytic);
  };

  // Expand outwards from the middle of the search window in 10 dB steps.
  const double mid = 0.5 * (options.search_lo_dbm + options.search_hi_dbm);
  double lo = std::max(options.search_lo_dbm, mid - 10.0);
  double hi = std::min(options.search_hi_dbm, mid + 10.0);
  double ber_lo = ber_at(lo);
  double ber_hi = ber_at(hi);
  while (ber_lo <= threshold && lo > options.search_lo_dbm) {
    hi = lo;
    ber_hi = ber_lo;
    lo = std::max(options.search_lo_dbm, lo - 10.0);
    ber_lo = ber_at(lo);
  }
  while (ber_hi >= threshold && hi < options.search_hi_dbm) {
    lo = hi;
    ber_lo = ber_hi;
    hi = std::min(options.search_hi_dbm, hi + 10.0);
    ber_hi = ber_at(hi);
  }
  if (!(ber_lo > threshold && threshold > ber_hi)) {
    std::ostringstream out;
    out << method_name(method) << ": BER does not cross " << threshold << " within ["
        << options.search_lo_dbm << ", " << options.search_hi_dbm << "] dBm";
    throw BracketError(out.str());
  }

  while (hi - lo > options.resolution_db) {
    const double p = 0.5 * (lo + hi);
    const double b = ber_at(p);
    if (b > ber_lo || b < ber_hi) {
      std::ostringstream out;
      out << method_name(method) << ": BER not monotone in power near " << p << " dBm";
      throw MonotonicityError(out.str());
    }
    if (b > threshold) {
      lo = p;
      ber_lo = b;
    } else {
      hi = p;
      ber_hi = b;
    }
  }
  // log-BER is close to linear across a sub-resolution bracket.
  const double w = (std::log(ber_lo) - std::log(threshold)) / (std::log(ber_lo) - std::log(ber_hi));
  return {method, threshold, lo + w * (hi - lo), {lo, hi}};
}

double delta(BerMethod a, BerMethod b, double threshold, const DerivedParams& d,
             const LinkParams& link, const CrossingOptions& options) {
  if (a == b) return 0.0;
  return fec_crossing(b, d, link, threshold, options).p_cross_dbm -
         fec_crossing(a, d, link, threshold, options).p_cross_dbm;
}

std::optional<double> interpolate_crossing(const BerCurve& curve, double threshold) {
  const auto& pts = curve.points;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double b0 = pts[i].ber;
    const double b1 = pts[i + 1].ber;
    if (b0 >= threshold && b1 < threshold) {
      if (b1 <= 0.0) return pts[i + 1].p_dbm;
      const double w = (std::log(b0) - std::log(threshold)) / (std::log(b0) - std::log(b1));
      return pts[i].p_dbm + w * (pts[i + 1].p_dbm - pts[i].p_dbm);
    }
  }
  return std::nullopt;
}

}  // namespace fso
