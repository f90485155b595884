#include "fso/special_fn.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fso {

namespace {

constexpr double kFourOverPi = 4.0 / std::numbers::pi;
// pi / sqrt(6)
constexpr double kLogisticSlope = std::numbers::pi / 2.449489742783178098197284;

void require_finite(double z, const char* what) {
  if (!std::isfinite(z)) {
    throw std::domain_error(std::string(what) + ": argument must be finite");
  }
}

}  // namespace

ErfcBranch erfc_branch(double z) noexcept {
  return z >= 0.0 ? ErfcBranch::NonNegative : ErfcBranch::Negative;
}

double erfc(double z) {
  require_finite(z, "erfc");
  return std::erfc(z);
}

double log_erfc(double z) {
  require_finite(z, "log_erfc");
  if (z < 25.0) return std::log(std::erfc(z));
  // erfc(z) ~ exp(-z^2)/(z sqrt(pi)) * (1 - 1/(2z^2) + 3/(4z^4) - 15/(8z^6) + 105/(16z^8))
  const double w = 1.0 / (2.0 * z * z);
  const double series = 1.0 - w * (1.0 - 3.0 * w * (1.0 - 5.0 * w * (1.0 - 7.0 * w)));
  return -z * z - std::log(z * std::sqrt(std::numbers::pi)) + std::log(series);
}

double bound_kernel(double z) {
  return std::exp(-z * z) / (z + std::sqrt(z * z + kFourOverPi));
}

double log_bound_kernel(double z) {
  return -z * z - std::log(z + std::sqrt(z * z + kFourOverPi));
}

double logistic_branch(double z) { return 1.0 + std::tanh(-kLogisticSlope * z); }

double erfc_approx(double z) {
  require_finite(z, "erfc_approx");
  if (erfc_branch(z) == ErfcBranch::NonNegative) {
    return 2.0 / std::sqrt(std::numbers::pi) * bound_kernel(z);
  }
  return logistic_branch(z);
}

double log_erfc_approx(double z) {
  require_finite(z, "log_erfc_approx");
  if (z >= 0.0) return std::log(2.0 / std::sqrt(std::numbers::pi)) + log_bound_kernel(z);
  return std::log(logistic_branch(z));
}

}  // namespace fso
