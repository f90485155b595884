#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fso {

/// Raw physical link description. Defaults are the shared Table-of-record
/// values used by the presets; turbulence strength and pointing jitter have
/// no sensible default and must be set.
struct LinkParams {
  double wavelength_nm = 1550.0;  // stored only; no formula depends on it
  double link_length_km = 3.0;
  double aperture_radius_m = 0.05;
  double beam_waist_m = 1.98;
  double attenuation_db_per_km = 0.2208;
  double responsivity_a_per_w = 0.5;
  double noise_std = 1e-7;  // total noise standard deviation [A]
  double rytov_variance = 0.0;
  std::optional<double> pointing_std_m;
  std::optional<double> jitter_angle_mrad;

  /// Pointing displacement standard deviation at the receiver [m]; a jitter
  /// angle is converted with the link length as the propagation distance.
  double pointing_std() const;

  /// Every violated constraint, one message each. Empty when valid.
  std::vector<std::string> validation_errors() const;
};

class RegimeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every symbol the channel PDF and the BER expressions need.
struct DerivedParams {
  double h_l = 1.0;            // deterministic path loss
  double v = 0.0;              // sqrt(pi/2) a / w_z
  double A0 = 0.0;             // collected fraction with no pointing error
  double omega_z_eq_m = 0.0;   // equivalent beam width
  double gamma = 0.0;
  double gamma_sq = 0.0;
  double sigma_x_sq = 0.0;     // log-amplitude variance
  double mu = 0.0;             // 2 sigma_x^2 (1 + 2 gamma^2)
  double h_hat = 0.0;          // A0 h_l exp(-mu)
  double pointing_std_m = 0.0;

  /// A0 h_l, the gain of a centered beam in unit-mean turbulence.
  double gain_scale() const { return A0 * h_l; }
  /// log of exp(2 sigma_x^2 gamma^2 (1 + gamma^2)).
  double log_normalizer() const { return 2.0 * sigma_x_sq * gamma_sq * (1.0 + gamma_sq); }
  /// Normalized erfc argument (ln(h / (A0 h_l)) + mu) / sqrt(8 sigma_x^2) at
  /// log-gain tau = ln(h / (A0 h_l)).
  double v_of_log_gain(double tau) const;
};

/// Throws RegimeError when the Rytov variance leaves the weak-turbulence
/// regime, GeometryError when the aperture is not smaller than the beam, and
/// std::invalid_argument for any other invalid field.
DerivedParams derive(const LinkParams& params);

/// Composite channel gain density; zero for h <= 0.
double pdf_h(double h, const DerivedParams& d);

/// Density of tau = ln(h / (A0 h_l)).
double pdf_log_gain(double tau, const DerivedParams& d);

struct GainDraw {
  double turbulence;  // h_a
  double pointing;    // h_p
  double total;       // h_a h_p h_l
};

/// Draws lognormal turbulence (unit mean) and Rayleigh-displacement pointing
/// loss independently.
class GainSampler {
 public:
  explicit GainSampler(const DerivedParams& d);

  template <class Engine>
  GainDraw operator()(Engine& engine) {
    const double x = normal_(engine);
    const double turbulence = std::exp(2.0 * (-sigma_x_sq_ + sigma_x_ * x));
    const double dx = pointing_std_ * normal_(engine);
    const double dy = pointing_std_ * normal_(engine);
    const double pointing = A0_ * std::exp(-2.0 * (dx * dx + dy * dy) * inv_omega_sq_);
    return {turbulence, pointing, turbulence * pointing * h_l_};
  }

 private:
  double sigma_x_sq_;
  double sigma_x_;
  double pointing_std_;
  double inv_omega_sq_;
  double A0_;
  double h_l_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// n gains, reproducible for a given (seed, n) at any thread count.
std::vector<double> sample_h(const DerivedParams& d, std::size_t n, std::uint64_t seed,
                             unsigned threads = 1);
std::vector<GainDraw> sample_components(const DerivedParams& d, std::size_t n,
                                        std::uint64_t seed, unsigned threads = 1);

}  // namespace fso
