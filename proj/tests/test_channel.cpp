#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fso/channel.hpp"
#include "fso/quadrature.hpp"
#include "test_support.hpp"

using fso::testing::preset_link;

namespace {

double normalization(const fso::DerivedParams& d) {
  fso::Tolerance tol;
  tol.rel_tol = 1e-12;
  tol.abs_tol = 0.0;
  const double mode = d.gain_scale() * std::exp(-2.0 * d.sigma_x_sq);
  const double bp[] = {d.h_hat, mode};
  const auto r = fso::integrate([&](double h) { return fso::pdf_h(h, d); }, 0.0,
                                fso::truncation_bound(d), tol, bp);
  REQUIRE(r.converged);
  return r.value;
}

}  // namespace

TEST_CASE("derive reproduces the independently computed case-1 chain") {
  // Frozen from a scipy evaluation of the same closed-form geometry.
  const auto d = fso::derive(preset_link("case1"));
  CHECK(d.h_l == doctest::Approx(0.8585389442329879).epsilon(1e-14));
  CHECK(d.v == doctest::Approx(0.031649).epsilon(1e-5));
  CHECK(d.A0 == doctest::Approx(0.001274528778445659).epsilon(1e-12));
  CHECK(d.omega_z_eq_m == doctest::Approx(1.9806612641076013).epsilon(1e-12));
  CHECK(d.gamma == doctest::Approx(2.8295).epsilon(1e-4));
  CHECK(d.gamma_sq == doctest::Approx(8.006161312523107).epsilon(1e-12));
  CHECK(d.sigma_x_sq == 0.025);
  CHECK(d.mu == doctest::Approx(0.8506161312523107).epsilon(1e-12));
  CHECK(d.h_hat == doctest::Approx(0.00046740327827524174).epsilon(1e-12));

  CHECK(d.mu == 2.0 * d.sigma_x_sq * (1.0 + 2.0 * d.gamma_sq));
  CHECK(d.h_hat == d.A0 * d.h_l * std::exp(-d.mu));
  CHECK(d.A0 == std::erf(d.v) * std::erf(d.v));
  CHECK(d.h_hat > 0.0);
  CHECK(d.h_hat < d.A0 * d.h_l);
}

TEST_CASE("derive for cases 2 and 3") {
  const auto d2 = fso::derive(preset_link("case2"));
  CHECK(d2.gamma_sq == doctest::Approx(15.692076172545285).epsilon(1e-12));
  CHECK(d2.mu == doctest::Approx(8.096038086272642).epsilon(1e-12));
  const auto d3 = fso::derive(preset_link("case3"));
  CHECK(d3.gamma_sq == doctest::Approx(24.518869019602004).epsilon(1e-12));
  CHECK(d3.mu == doctest::Approx(22.516982117641803).epsilon(1e-12));
}

TEST_CASE("jitter angle converts with the link length") {
  fso::LinkParams link = preset_link("case1");
  link.pointing_std_m.reset();
  link.jitter_angle_mrad = 0.116;
  CHECK(link.pointing_std() == doctest::Approx(0.348));
  CHECK(fso::derive(link).pointing_std_m == doctest::Approx(0.348));
  link.jitter_angle_mrad = 0.067;
  CHECK(link.pointing_std() == doctest::Approx(0.201));
}

TEST_CASE("derive rejects invalid links") {
  fso::LinkParams link = preset_link("case1");
  link.rytov_variance = 1.5;
  CHECK_THROWS_AS(fso::derive(link), fso::RegimeError);
  try {
    fso::derive(link);
  } catch (const fso::RegimeError& e) {
    CHECK(std::string(e.what()).find("weak-turbulence") != std::string::npos);
  }

  link = preset_link("case1");
  link.aperture_radius_m = 2.0;
  CHECK_THROWS_AS(fso::derive(link), fso::GeometryError);

  link = preset_link("case1");
  link.jitter_angle_mrad = 0.1;
  CHECK_THROWS_AS(fso::derive(link), std::invalid_argument);
  CHECK_FALSE(link.validation_errors().empty());

  link = preset_link("case1");
  link.noise_std = -1.0;
  link.responsivity_a_per_w = 0.0;
  CHECK(link.validation_errors().size() == 2);
}

TEST_CASE("derive is scale-consistent in the aperture/beam ratio") {
  fso::LinkParams link = preset_link("case2");
  const auto base = fso::derive(link);
  link.aperture_radius_m *= 2.0;
  link.beam_waist_m *= 2.0;
  const auto scaled = fso::derive(link);
  CHECK(scaled.A0 == doctest::Approx(base.A0).epsilon(1e-14));
  CHECK(scaled.v == doctest::Approx(base.v).epsilon(1e-14));
  CHECK(scaled.omega_z_eq_m == doctest::Approx(2.0 * base.omega_z_eq_m).epsilon(1e-14));
}

TEST_CASE("pdf_h basics") {
  const auto d = fso::derive(preset_link("case1"));
  CHECK(fso::pdf_h(-1.0, d) == 0.0);
  CHECK(fso::pdf_h(0.0, d) == 0.0);
  // erfc argument vanishes at h_hat.
  const double g2 = d.gamma_sq;
  const double at_hat = g2 / (2.0 * std::pow(d.A0 * d.h_l, g2)) * std::pow(d.h_hat, g2 - 1.0) *
                        std::exp(2.0 * d.sigma_x_sq * g2 * (1.0 + g2));
  CHECK(fso::pdf_h(d.h_hat, d) == doctest::Approx(at_hat).epsilon(1e-12));
}

TEST_CASE("pdf integrates to one for all presets") {
  for (const char* name : {"case1", "case2", "case3"}) {
    const auto d = fso::derive(preset_link(name));
    CAPTURE(name);
    CHECK(std::abs(normalization(d) - 1.0) < 1e-8);
  }
}

TEST_CASE("pdf is nonnegative on a wide grid") {
  for (const char* name : {"case1", "case2", "case3"}) {
    const auto d = fso::derive(preset_link(name));
    for (double t = -60.0; t < 10.0; t += 0.05) {
      REQUIRE(fso::pdf_h(d.gain_scale() * std::exp(t), d) >= 0.0);
    }
  }
}

TEST_CASE("degenerate channel collapses to A0 h_l") {
  fso::DerivedParams d;
  d.A0 = 1e-3;
  d.h_l = 0.8;
  d.omega_z_eq_m = 2.0;
  d.sigma_x_sq = 0.0;
  d.pointing_std_m = 0.0;
  for (double h : fso::sample_h(d, 1000, 3)) CHECK(h == doctest::Approx(8e-4).epsilon(1e-15));
}

TEST_CASE("turbulence samples have unit mean; pointing never exceeds A0") {
  const auto d = fso::derive(preset_link("case3"));
  const auto draws = fso::sample_components(d, 1'000'000, 11);
  double sum = 0.0;
  for (const auto& g : draws) {
    sum += g.turbulence;
    REQUIRE(g.pointing <= d.A0);
    REQUIRE(g.total == g.turbulence * g.pointing * d.h_l);
  }
  CHECK(std::abs(sum / 1e6 - 1.0) < 0.01);
}

TEST_CASE("pointing samples follow (h_p / A0)^gamma^2") {
  const auto d = fso::derive(preset_link("case1"));
  const auto draws = fso::sample_components(d, 100'000, 5);
  std::vector<double> hp;
  for (const auto& g : draws) hp.push_back(g.pointing);
  const double stat = fso::testing::ks_statistic(
      hp, [&](double x) { return std::pow(x / d.A0, d.gamma_sq); });
  CHECK(fso::testing::ks_pvalue(stat, hp.size()) > 0.01);
}

TEST_CASE("gain samples follow the composite pdf") {
  const auto d = fso::derive(preset_link("case2"));
  auto h = fso::sample_h(d, 100'000, 9);
  std::sort(h.begin(), h.end());
  const auto cdf = fso::testing::cdf_by_quadrature(h, [&](double x) { return fso::pdf_h(x, d); });
  double stat = 0.0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    stat = std::max({stat, (i + 1) / n - cdf[i], cdf[i] - i / n});
  }
  CHECK(fso::testing::ks_pvalue(stat, h.size()) > 0.01);
}

TEST_CASE("sampling is reproducible and independent of thread count") {
  const auto d = fso::derive(preset_link("case1"));
  const auto serial = fso::sample_h(d, 300'001, 42, 1);
  CHECK(serial == fso::sample_h(d, 300'001, 42, 4));
  CHECK(serial == fso::sample_h(d, 300'001, 42, 1));
  CHECK(serial != fso::sample_h(d, 300'001, 43, 1));
  CHECK_THROWS_AS(fso::sample_h(d, 0, 1), std::invalid_argument);
}
