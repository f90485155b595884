#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace fso {

struct DerivedParams;

struct Tolerance {
  double rel_tol = 1e-9;
  double abs_tol = 1e-15;
  std::size_t max_evaluations = 200'000;

  /// Throws std::invalid_argument if rel_tol < 1e-14, abs_tol < 0 or the
  /// evaluation budget cannot fit a single rule application.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Raised when the integrand returns NaN; carries the offending abscissa.
class EvaluationError : public std::runtime_error {
 public:
  explicit EvaluationError(double abscissa);
  double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

/// Raised by callers that require a converged integral.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Endpoints are never evaluated, so integrable endpoint singularities are
/// allowed. Interior breakpoints (sorted or not, outside values ignored)
/// seed the initial partition.
QuadratureResult integrate(const Integrand& f, double a, double b, const Tolerance& tol = {},
                           std::span<const double> breakpoints = {});

/// Upper gain limit standing in for infinity in the average-BER integrals.
/// ln(h / (A0 h_l)) is a Gaussian with mean -2 sigma_X^2 and standard
/// deviation 2 sigma_X plus a non-positive pointing term, so the mass above
/// the returned bound is below Q(kTruncationSigmas) ~ 7.6e-24.
double truncation_bound(const DerivedParams& derived);

inline constexpr double kTruncationSigmas = 10.0;

}  // namespace fso
