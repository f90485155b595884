#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "fso/channel.hpp"
#include "fso/quadrature.hpp"

namespace fso {

enum class BerMethod { Exact, ApproxNew, ApproxPrev, MonteCarlo };

inline constexpr std::array<BerMethod, 4> kAllMethods = {
    BerMethod::Exact, BerMethod::ApproxNew, BerMethod::ApproxPrev, BerMethod::MonteCarlo};

/// CLI spelling: exact, approx-new, approx-prev, mc.
std::string_view method_name(BerMethod method);
std::optional<BerMethod> parse_method(std::string_view name);
constexpr bool is_analytic(BerMethod m) { return m != BerMethod::MonteCarlo; }

double dbm_to_watts(double p_dbm);
double watts_to_dbm(double p_watts);

struct UVArgs {
  double u;  // eta P h / sqrt(2 sigma_n^2)
  double v;  // (ln(h / (A0 h_l)) + mu) / sqrt(8 sigma_x^2)
};

UVArgs uv_args(double h, double p_watts, const DerivedParams& d, const LinkParams& link);

/// Error probability of one OOK decision at gain h: erfc(u) / 2.
double ber_conditional(double h, double p_watts, const DerivedParams& d, const LinkParams& link);

/// Which erfc the average-BER integral uses for both of its factors.
enum class ErfcModel { Exact, Approx };

/// Average of ber_conditional over the channel PDF, with every erfc taken
/// from `model`. ErfcModel::Approx is an independent route to the proposed
/// approximation, used to cross-check ber_approx_new.
double ber_average(double p_watts, const DerivedParams& d, const LinkParams& link,
                   ErfcModel model, const Tolerance& tol = {});

/// Exact average BER.
double ber_exact(double p_watts, const DerivedParams& d, const LinkParams& link,
                 const Tolerance& tol = {});

/// Two-integral approximation split at h_hat: logistic erfc branch below,
/// bound kernel above.
double ber_approx_new(double p_watts, const DerivedParams& d, const LinkParams& link,
                      const Tolerance& tol = {});

/// Lower cutoff on the normalized argument v for ber_approx_prev. The
/// integrand behaves like 1/v at h_hat, so the integral only exists with a
/// cutoff; its value depends logarithmically on this choice.
inline constexpr double kDefaultPrevVMin = 1e-3;

/// Single-integral approximation built from the one-sided asymptotic erfc.
double ber_approx_prev(double p_watts, const DerivedParams& d, const LinkParams& link,
                       const Tolerance& tol = {}, double v_min = kDefaultPrevVMin);

struct AnalyticOptions {
  Tolerance tol{};
  double prev_v_min = kDefaultPrevVMin;
};

/// Dispatch for the three analytic methods. Throws std::invalid_argument for
/// BerMethod::MonteCarlo.
double analytic_ber(BerMethod method, double p_watts, const DerivedParams& d,
                    const LinkParams& link, const AnalyticOptions& options = {});

}  // namespace fso
