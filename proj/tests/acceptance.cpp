// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fso/analysis.hpp"
#include "fso/ber.hpp"
#include "fso/channel.hpp"
#include "fso/cli.hpp"
#include "fso/montecarlo.hpp"
#include "fso/quadrature.hpp"
#include "fso/special_fn.hpp"
#include "test_support.hpp"

namespace {

using fso::BerMethod;

constexpr const char* kCases[] = {"case1", "case2", "case3"};

// Targets and tolerances, in case order.
constexpr double kDeltaNew[] = {0.21, 0.1, 0.08};
constexpr double kDeltaNewTol = 0.05;
constexpr double kDeltaPrev[] = {0.94, 0.4, 0.7};
constexpr double kDeltaPrevTol = 0.1;
constexpr double kNormTol = 1e-8;
constexpr double kMcTargets[] = {1e-2, 3.84e-3, 1e-4};
constexpr std::uint64_t kMcTrials = 10'000'000;
constexpr std::uint64_t kMcSeed = 20240607;
constexpr std::size_t kKsSamples = 100'000;
constexpr std::uint64_t kKsSeed = 314159;
constexpr double kKsMinP = 0.01;
constexpr double kSlopeLimit = 0.05;
constexpr unsigned kWideThreads = 8;

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

void delta_reproduction(int id, BerMethod other, const double* target, double tol) {
  bool pass = true;
  std::ostringstream out;
  for (int i = 0; i < 3; ++i) {
    const auto link = fso::preset(kCases[i]).link;
    const auto d = fso::derive(link);
    const double delta = std::abs(fso::delta(BerMethod::Exact, other, fso::kHdFecThreshold, d, link));
    const bool ok = std::abs(delta - target[i]) <= tol;
    pass = pass && ok;
    out << kCases[i] << " " << fmt("%.4f", delta) << " dB (target " << target[i] << " +/- " << tol
        << (ok ? ")" : ", off)") << (i < 2 ? "; " : "");
  }
  report(id, pass, "|delta(exact, " + std::string(fso::method_name(other)) + ")|: " + out.str());
}

void normalization() {
  bool pass = true;
  std::ostringstream out;
  fso::Tolerance tol;
  tol.rel_tol = 1e-12;
  tol.abs_tol = 0.0;
  for (const char* name : kCases) {
    const auto d = fso::derive(fso::preset(name).link);
    const double mode = d.gain_scale() * std::exp(-2.0 * d.sigma_x_sq);
    const double bp[] = {d.h_hat, mode};
    const auto r = fso::integrate([&](double h) { return fso::pdf_h(h, d); }, 0.0,
                                  fso::truncation_bound(d), tol, bp);
    const double err = std::abs(r.value - 1.0);
    pass = pass && r.converged && err <= kNormTol;
    out << name << " |int - 1| = " << fmt("%.2e", err) << " ";
  }
  report(3, pass, out.str() + "(limit 1e-8)");
}

void monte_carlo() {
  bool pass = true;
  std::ostringstream out;
  for (const char* name : kCases) {
    const auto link = fso::preset(name).link;
    const auto d = fso::derive(link);
    for (double target : kMcTargets) {
      const double p_dbm = fso::fec_crossing(BerMethod::Exact, d, link, target).p_cross_dbm;
      const double p = fso::dbm_to_watts(p_dbm);
      const double exact = fso::ber_exact(p, d, link);
      const auto est = fso::mc_ber(p, d, link, kMcTrials, kMcSeed);
      const bool ok = est.ci_low <= exact && exact <= est.ci_high;
      pass = pass && ok;
      if (!ok) {
        out << name << " at " << fmt("%.3f", p_dbm) << " dBm: exact " << fmt("%.4e", exact)
            << " outside [" << fmt("%.4e", est.ci_low) << ", " << fmt("%.4e", est.ci_high) << "]; ";
      }
    }
  }
  report(4, pass, pass ? "99% Wilson intervals (1e7 trials) contain the exact BER at 9/9 points"
                       : out.str());
}

void sampler_fidelity() {
  bool pass = true;
  std::ostringstream out;
  for (const char* name : kCases) {
    const auto d = fso::derive(fso::preset(name).link);
    auto h = fso::sample_h(d, kKsSamples, kKsSeed);
    std::sort(h.begin(), h.end());
    const auto cdf = fso::testing::cdf_by_quadrature(h, [&](double x) { return fso::pdf_h(x, d); });
    double stat = 0.0;
    const double n = static_cast<double>(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
      stat = std::max({stat, (i + 1) / n - cdf[i], cdf[i] - i / n});
    }
    const double pv = fso::testing::ks_pvalue(stat, h.size());
    pass = pass && pv > kKsMinP;
    out << name << " p = " << fmt("%.3f", pv) << " ";
  }
  report(5, pass, "KS of 1e5 gains vs quadrature CDF: " + out.str() + "(need > 0.01)");
}

void erfc_branches() {
  std::vector<std::string> bad;
  double worst_upper = 0.0;
  double worst_tail_approx = 0.0;
  double worst_tail_exact = 0.0;
  for (int i = -10000; i <= 10000; ++i) {
    const double z = i * 1e-3;
    const double a = fso::erfc_approx(z);
    const double e = fso::erfc(z);
    if (z >= 0.0) worst_upper = std::max(worst_upper, e - a);
    if (z <= -4.5) {
      worst_tail_approx = std::max(worst_tail_approx, std::abs(a - 2.0));
      worst_tail_exact = std::max(worst_tail_exact, std::abs(e - 2.0));
    }
  }
  if (worst_upper > 0.0) bad.push_back("erfc_approx < erfc for some z >= 0");
  if (fso::erfc_approx(0.0) != 1.0 || fso::logistic_branch(0.0) != 1.0) bad.push_back("branch value at 0");
  double worst_rel = 0.0;
  for (double z = 40.0; z <= 200.0; z += 0.25) {
    worst_rel = std::max(worst_rel, std::abs(std::expm1(fso::log_erfc_approx(z) - fso::log_erfc(z))));
  }
  if (worst_rel > 1e-3) bad.push_back("relative error above 1e-3 for z >= 40");
  if (worst_tail_exact > 1e-9) bad.push_back("erfc not within 1e-9 of 2 for z <= -4.5");
  if (worst_tail_approx > 1e-9) {
    bad.push_back("erfc_approx not within 1e-9 of 2 for z <= -4.5 (max gap " +
                  fmt("%.3e", worst_tail_approx) + ")");
  }
  std::string detail = "upper bound, unit value at 0, rel err " + fmt("%.2e", worst_rel) +
                       " for z >= 40, tail |erfc - 2| " + fmt("%.1e", worst_tail_exact);
  for (const auto& b : bad) detail += "; " + b;
  report(6, bad.empty(), detail);
}

void slope_fidelity() {
  const auto link = fso::preset("case1").link;
  const auto d = fso::derive(link);
  const double lo = fso::fec_crossing(BerMethod::Exact, d, link, 1e-2).p_cross_dbm;
  const double hi = fso::fec_crossing(BerMethod::Exact, d, link, 1e-5).p_cross_dbm;
  constexpr double kStep = 0.05;
  constexpr double kHalf = 0.01;
  const auto slope = [&](BerMethod m, double p_dbm) {
    const auto ber = [&](double x) { return fso::analytic_ber(m, fso::dbm_to_watts(x), d, link); };
    return (std::log10(ber(p_dbm + kHalf)) - std::log10(ber(p_dbm - kHalf))) / (2.0 * kHalf);
  };
  double dev_new = 0.0;
  double dev_prev = 0.0;
  for (double p = lo; p <= hi + 1e-12; p += kStep) {
    const double ref = slope(BerMethod::Exact, p);
    dev_new = std::max(dev_new, std::abs(slope(BerMethod::ApproxNew, p) / ref - 1.0));
    dev_prev = std::max(dev_prev, std::abs(slope(BerMethod::ApproxPrev, p) / ref - 1.0));
  }
  const bool pass = dev_new < dev_prev && dev_new <= kSlopeLimit;
  report(7, pass,
         "case1 max log-slope deviation over [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) +
             "] dBm: approx-new " + fmt("%.4f", dev_new) + ", approx-prev " + fmt("%.4f", dev_prev) +
             " (need new < prev and new <= 0.05)");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism() {
  const auto root = std::filesystem::temp_directory_path() / "fso_acceptance_determinism";
  std::filesystem::remove_all(root);
  auto config = fso::preset("case1");
  config.methods = {BerMethod::Exact, BerMethod::ApproxNew, BerMethod::ApproxPrev, BerMethod::MonteCarlo};
  config.mc_trials = 200'000;
  config.seed = 7;

  std::vector<std::string> csvs;
  for (unsigned threads : {1u, 1u, kWideThreads}) {
    config.threads = threads;
    config.output_path = (root / ("run" + std::to_string(csvs.size()))).string();
    csvs.push_back(slurp(fso::run(config).csv));
  }
  std::filesystem::remove_all(root);
  const bool pass = !csvs[0].empty() && csvs[0] == csvs[1] && csvs[0] == csvs[2];
  report(8, pass, "curves.csv byte-identical across reruns and thread counts 1 / " +
                      std::to_string(kWideThreads));
}

void guarded(int id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("error: ") + e.what());
  }
}

}  // namespace

int main() {
  guarded(1, [] { delta_reproduction(1, BerMethod::ApproxNew, kDeltaNew, kDeltaNewTol); });
  guarded(2, [] { delta_reproduction(2, BerMethod::ApproxPrev, kDeltaPrev, kDeltaPrevTol); });
  guarded(3, normalization);
  guarded(4, monte_carlo);
  guarded(5, sampler_fidelity);
  guarded(6, erfc_branches);
  guarded(7, slope_fidelity);
  guarded(8, determinism);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
