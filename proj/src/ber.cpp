#include "fso/ber.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "fso/special_fn.hpp"

namespace fso {

namespace {

constexpr double kLn2 = std::numbers::ln2;
const double kLogSqrtPi = 0.5 * std::log(std::numbers::pi);

using LogIntegrand = std::function<double(double)>;

void require_power(double p_watts) {
  if (!(p_watts > 0.0) || !std::isfinite(p_watts)) {
    throw std::invalid_argument("transmit power must be positive and finite");
  }
}

// u per unit normalized gain x = h / (A0 h_l).
double u_scale(double p_watts, const DerivedParams& d, const LinkParams& link) {
  return link.responsivity_a_per_w * p_watts * d.gain_scale() /
         (std::numbers::sqrt2 * link.noise_std);
}

double log_upper_gain(const DerivedParams& d) { return std::log(truncation_bound(d) / d.gain_scale()); }

// Golden-section search for the maximum of a unimodal function.
double argmax(const LogIntegrand& f, double a, double b) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 120 && (b - a) > 1e-12 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

// Integrates exp(log_f) over [a, b]. The integrand is rescaled by its peak
// and the partition is seeded around the peak at multiples of the local width,
// so narrow bumps inside long intervals are not stepped over.
double integrate_exp(const LogIntegrand& log_f, double a, double b, const Tolerance& tol,
                     const char* what) {
  const double peak = argmax(log_f, a, b);
  const double log_peak = log_f(peak);
  if (!std::isfinite(log_peak)) {
    if (log_peak == -std::numeric_limits<double>::infinity()) return 0.0;
    throw EvaluationError(peak);
  }

  const double span = b - a;
  const double step = 1e-4 * span;
  double width = span / 64.0;
  if (peak - step > a && peak + step < b) {
    const double curvature =
        (log_f(peak + step) - 2.0 * log_peak + log_f(peak - step)) / (step * step);
    if (curvature < 0.0 && std::isfinite(curvature)) {
      width = std::min(width, 1.0 / std::sqrt(-curvature));
    }
  }
  std::vector<double> breaks{peak};
  for (double k : {1.0, 3.0, 9.0, 27.0}) {
    breaks.push_back(peak - k * width);
    breaks.push_back(peak + k * width);
  }

  const auto scaled = [&](double t) { return std::exp(log_f(t) - log_peak); };
  const QuadratureResult r = integrate(scaled, a, b, tol, breaks);
  if (!r.converged) {
    std::ostringstream out;
    out << what << ": quadrature did not converge (value " << r.value << ", error "
        << r.error_estimate << ", " << r.evaluations << " evaluations)";
    throw ConvergenceError(out.str());
  }
  return r.value * std::exp(log_peak);
}

// Shared skeleton of the average-BER integrals over gain. `lower` and `upper`
// return the log of the integrand with the h^(gamma^2-1) C weight factored
// out; they are evaluated at (x, tau = ln x) with x = h / (A0 h_l).
//   result = int_0^xhat x^(g2-1) C e^{lower} dx + int_{-mu}^{tau_max} x^{g2} C e^{upper} dtau
struct GainSplit {
  std::function<double(double x, double tau)> lower;
  std::function<double(double x, double tau)> upper;
};

double integrate_split(const GainSplit& parts, const DerivedParams& d, const Tolerance& tol,
                       const char* what) {
  const double g2 = d.gamma_sq;
  const double log_c = d.log_normalizer();
  const double tau_hat = -d.mu;
  const double x_hat = std::exp(tau_hat);

  double lower = 0.0;
  if (g2 < 2.0) {
    // x = x_hat s^(1/g2) turns x^(g2-1) dx into (x_hat^g2 / g2) ds.
    const auto log_f = [&](double s) {
      const double tau = tau_hat + std::log(s) / g2;
      return parts.lower(std::exp(tau), tau);
    };
    lower = std::exp(log_c + g2 * tau_hat - std::log(g2)) * integrate_exp(log_f, 0.0, 1.0, tol, what);
  } else {
    const auto log_f = [&](double x) {
      const double tau = std::log(x);
      return (g2 - 1.0) * tau + log_c + parts.lower(x, tau);
    };
    lower = integrate_exp(log_f, 0.0, x_hat, tol, what);
  }

  const auto log_g = [&](double tau) { return g2 * tau + log_c + parts.upper(std::exp(tau), tau); };
  const double upper = integrate_exp(log_g, tau_hat, log_upper_gain(d), tol, what);
  return lower + upper;
}

}  // namespace

std::string_view method_name(BerMethod method) {
  switch (method) {
    case BerMethod::Exact:
      return "exact";
    case BerMethod::ApproxNew:
      return "approx-new";
    case BerMethod::ApproxPrev:
      return "approx-prev";
    case BerMethod::MonteCarlo:
      return "mc";
  }
  return "unknown";
}

std::optional<BerMethod> parse_method(std::string_view name) {
  for (BerMethod m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

double dbm_to_watts(double p_dbm) { return std::pow(10.0, (p_dbm - 30.0) / 10.0); }
double watts_to_dbm(double p_watts) { return 10.0 * std::log10(p_watts) + 30.0; }

UVArgs uv_args(double h, double p_watts, const DerivedParams& d, const LinkParams& link) {
  const double u = link.responsivity_a_per_w * p_watts * h / (std::numbers::sqrt2 * link.noise_std);
  const double v = h > 0.0 ? d.v_of_log_gain(std::log(h / d.gain_scale()))
                           : -std::numeric_limits<double>::infinity();
  return {u, v};
}

double ber_conditional(double h, double p_watts, const DerivedParams& d, const LinkParams& link) {
  if (!(h >= 0.0)) throw std::invalid_argument("gain must be >= 0");
  require_power(p_watts);
  if (std::isinf(h)) return 0.0;
  return 0.5 * erfc(uv_args(h, p_watts, d, link).u);
}

double ber_average(double p_watts, const DerivedParams& d, const LinkParams& link,
                   ErfcModel model, const Tolerance& tol) {
  require_power(p_watts);
  const double c = u_scale(p_watts, d, link);
  const double log_half_g2 = std::log(0.5 * d.gamma_sq);

  const auto log_erfc_model = [model](double z) {
    return model == ErfcModel::Exact ? log_erfc(z) : log_erfc_approx(z);
  };
  // f_H(h) dh = (g2/2) x^(g2-1) C erfc(v) dx, times erfc(u)/2.
  const auto log_part = [&](double x, double tau) {
    return log_half_g2 + log_erfc_model(d.v_of_log_gain(tau)) + log_erfc_model(c * x) - kLn2;
  };
  return integrate_split({log_part, log_part}, d, tol, "ber_average");
}

double ber_exact(double p_watts, const DerivedParams& d, const LinkParams& link,
                 const Tolerance& tol) {
  return ber_average(p_watts, d, link, ErfcModel::Exact, tol);
}

double ber_approx_new(double p_watts, const DerivedParams& d, const LinkParams& link,
                      const Tolerance& tol) {
  require_power(p_watts);
  const double c = u_scale(p_watts, d, link);
  // gamma^2 / (2 sqrt(pi)) in front; the (A0 h_l)^gamma^2 factor cancels
  // against the change of variable h = A0 h_l x.
  const double prefactor = d.gamma_sq / (2.0 * std::sqrt(std::numbers::pi));
  const double log_two_over_sqrt_pi = std::log(2.0) - kLogSqrtPi;

  const GainSplit parts{
      [&](double x, double tau) {
        return std::log(logistic_branch(d.v_of_log_gain(tau))) + log_bound_kernel(c * x);
      },
      [&](double x, double tau) {
        return log_two_over_sqrt_pi + log_bound_kernel(d.v_of_log_gain(tau)) +
               log_bound_kernel(c * x);
      }};
  return prefactor * integrate_split(parts, d, tol, "ber_approx_new");
}

double ber_approx_prev(double p_watts, const DerivedParams& d, const LinkParams& link,
                       const Tolerance& tol, double v_min) {
  require_power(p_watts);
  if (!(v_min > 0.0)) throw std::invalid_argument("v_min must be > 0");
  const double c = u_scale(p_watts, d, link);
  const double g2 = d.gamma_sq;
  const double sigma_x = std::sqrt(d.sigma_x_sq);
  const double log_c = d.log_normalizer();
  // gamma^2 sigma_X sigma_n / (eta P pi (A0 h_l)^gamma^2) after h = A0 h_l x;
  // sigma_n / (eta P A0 h_l) = 1 / (sqrt 2 c).
  const double prefactor = g2 * sigma_x / (std::numbers::sqrt2 * std::numbers::pi * c);

  // h^(g2-2) dh / (ln x + mu) = x^(g2-1) dtau / (tau + mu), up to the prefactor.
  const auto log_f = [&](double tau) {
    const double x = std::exp(tau);
    const double v = d.v_of_log_gain(tau);
    return (g2 - 1.0) * tau + log_c - c * c * x * x - v * v - std::log(tau + d.mu);
  };
  const double tau_lo = -d.mu + v_min * std::sqrt(8.0 * d.sigma_x_sq);
  const double tau_hi = log_upper_gain(d);
  if (!(tau_lo < tau_hi)) return 0.0;
  // The 1/(tau + mu) factor can put the global maximum at the cutoff, away
  // from the bulk; split at the peak of the remaining log-concave part.
  const auto log_smooth = [&](double tau) { return log_f(tau) + std::log(tau + d.mu); };
  const double bulk = argmax(log_smooth, tau_lo, tau_hi);
  double integral = 0.0;
  if (bulk > tau_lo && bulk < tau_hi) {
    integral = integrate_exp(log_f, tau_lo, bulk, tol, "ber_approx_prev") +
               integrate_exp(log_f, bulk, tau_hi, tol, "ber_approx_prev");
  } else {
    integral = integrate_exp(log_f, tau_lo, tau_hi, tol, "ber_approx_prev");
  }
  return prefactor * integral;
}

double analytic_ber(BerMethod method, double p_watts, const DerivedParams& d,
                    const LinkParams& link, const AnalyticOptions& options) {
  switch (method) {
    case BerMethod::Exact:
      return ber_exact(p_watts, d, link, options.tol);
    case BerMethod::ApproxNew:
      return ber_approx_new(p_watts, d, link, options.tol);
    case BerMethod::ApproxPrev:
      return ber_approx_prev(p_watts, d, link, options.tol, options.prev_v_min);
    case BerMethod::MonteCarlo:
      break;
  }
  throw std::invalid_argument("Monte Carlo is not an analytic method");
}

}  // namespace fso
