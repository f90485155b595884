#include "fso/channel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fso/parallel.hpp"
#include "fso/random.hpp"
#include "fso/special_fn.hpp"

namespace fso {

namespace {

void check_positive(std::vector<std::string>& errors, const char* name, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream out;
    out << name << " must be a positive finite number (got " << value << ")";
    errors.push_back(out.str());
  }
}

}  // namespace

double LinkParams::pointing_std() const {
  if (pointing_std_m) return *pointing_std_m;
  if (jitter_angle_mrad) return *jitter_angle_mrad * 1e-3 * link_length_km * 1e3;
  throw std::invalid_argument("one of pointing_std_m / jitter_angle_mrad is required");
}

std::vector<std::string> LinkParams::validation_errors() const {
  std::vector<std::string> errors;
  check_positive(errors, "wavelength_nm", wavelength_nm);
  check_positive(errors, "link_length_km", link_length_km);
  check_positive(errors, "aperture_radius_m", aperture_radius_m);
  check_positive(errors, "beam_waist_m", beam_waist_m);
  check_positive(errors, "responsivity_a_per_w", responsivity_a_per_w);
  check_positive(errors, "noise_std", noise_std);
  if (!(attenuation_db_per_km >= 0.0) || !std::isfinite(attenuation_db_per_km)) {
    errors.push_back("attenuation_db_per_km must be >= 0");
  }
  if (!(rytov_variance > 0.0)) {
    errors.push_back("rytov_variance must be > 0");
  } else if (!(rytov_variance <= 1.0)) {
    std::ostringstream out;
    out << "rytov_variance = " << rytov_variance
        << " is outside the weak-turbulence regime (must be <= 1)";
    errors.push_back(out.str());
  }
  if (pointing_std_m.has_value() == jitter_angle_mrad.has_value()) {
    errors.push_back("exactly one of pointing_std_m / jitter_angle_mrad must be given");
  } else if (pointing_std_m) {
    check_positive(errors, "pointing_std_m", *pointing_std_m);
  } else {
    check_positive(errors, "jitter_angle_mrad", *jitter_angle_mrad);
  }
  if (aperture_radius_m > 0.0 && beam_waist_m > 0.0 && aperture_radius_m >= beam_waist_m) {
    errors.push_back("aperture_radius_m must be smaller than beam_waist_m");
  }
  return errors;
}

double DerivedParams::v_of_log_gain(double tau) const {
  return (tau + mu) / std::sqrt(8.0 * sigma_x_sq);
}

DerivedParams derive(const LinkParams& p) {
  if (p.rytov_variance > 1.0) {
    std::ostringstream out;
    out << "rytov_variance = " << p.rytov_variance
        << " exceeds the weak-turbulence bound of 1";
    throw RegimeError(out.str());
  }
  if (p.aperture_radius_m >= p.beam_waist_m) {
    throw GeometryError("aperture radius must be smaller than the beam waist");
  }
  if (const auto errors = p.validation_errors(); !errors.empty()) {
    std::string joined;
    for (const auto& e : errors) joined += (joined.empty() ? "" : "; ") + e;
    throw std::invalid_argument(joined);
  }

  DerivedParams d;
  d.h_l = std::pow(10.0, -p.attenuation_db_per_km * p.link_length_km / 10.0);
  d.v = std::sqrt(std::numbers::pi / 2.0) * p.aperture_radius_m / p.beam_waist_m;
  const double erf_v = std::erf(d.v);
  d.A0 = erf_v * erf_v;
  const double w = p.beam_waist_m;
  d.omega_z_eq_m =
      std::sqrt(w * w * std::sqrt(std::numbers::pi) * erf_v / (2.0 * d.v * std::exp(-d.v * d.v)));
  d.pointing_std_m = p.pointing_std();
  d.gamma = d.omega_z_eq_m / (2.0 * d.pointing_std_m);
  d.gamma_sq = d.gamma * d.gamma;
  d.sigma_x_sq = p.rytov_variance / 4.0;
  d.mu = 2.0 * d.sigma_x_sq * (1.0 + 2.0 * d.gamma_sq);
  d.h_hat = d.A0 * d.h_l * std::exp(-d.mu);
  return d;
}

double pdf_log_gain(double tau, const DerivedParams& d) {
  const double g2 = d.gamma_sq;
  return std::exp(std::log(0.5 * g2) + g2 * tau + d.log_normalizer() +
                  log_erfc(d.v_of_log_gain(tau)));
}

double pdf_h(double h, const DerivedParams& d) {
  if (!(h > 0.0)) return 0.0;
  const double g2 = d.gamma_sq;
  const double scale = d.gain_scale();
  const double log_density = std::log(0.5 * g2) + (g2 - 1.0) * std::log(h) -
                             g2 * std::log(scale) + d.log_normalizer() +
                             log_erfc(d.v_of_log_gain(std::log(h / scale)));
  return std::exp(log_density);
}

GainSampler::GainSampler(const DerivedParams& d)
    : sigma_x_sq_(d.sigma_x_sq),
      sigma_x_(std::sqrt(d.sigma_x_sq)),
      pointing_std_(d.pointing_std_m),
      inv_omega_sq_(d.omega_z_eq_m > 0.0 ? 1.0 / (d.omega_z_eq_m * d.omega_z_eq_m) : 0.0),
      A0_(d.A0),
      h_l_(d.h_l) {}

std::vector<GainDraw> sample_components(const DerivedParams& d, std::size_t n,
                                        std::uint64_t seed, unsigned threads) {
  if (n == 0) throw std::invalid_argument("sample count must be >= 1");
  std::vector<GainDraw> out(n);
  const std::size_t batches = (n + kBatchSize - 1) / kBatchSize;
  parallel_for(batches, threads, [&](std::size_t b) {
    auto engine = batch_engine(seed, b);
    GainSampler sampler(d);
    const std::size_t end = std::min(n, (b + 1) * kBatchSize);
    for (std::size_t i = b * kBatchSize; i < end; ++i) out[i] = sampler(engine);
  });
  return out;
}

std::vector<double> sample_h(const DerivedParams& d, std::size_t n, std::uint64_t seed,
                             unsigned threads) {
  const auto draws = sample_components(d, n, seed, threads);
  std::vector<double> out;
  out.reserve(n);
  for (const auto& g : draws) out.push_back(g.total);
  return out;
}

}  // namespace fso
