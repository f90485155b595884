#pragma once

namespace fso {

/// Which side of the piecewise erfc approximation an argument falls on.
enum class ErfcBranch { NonNegative, Negative };

ErfcBranch erfc_branch(double z) noexcept;

/// Complementary error function. Throws std::domain_error for non-finite z.
double erfc(double z);

/// log(erfc(z)), finite for all finite z (no underflow in the far tail).
double log_erfc(double z);

/// Two-sided erfc approximation: for z >= 0 the asymptotically tight
/// upper bound (2/sqrt(pi)) exp(-z^2) / (z + sqrt(z^2 + 4/pi)); for z < 0 the
/// logistic form 1 + (e^(-2 pi z/sqrt 6) - 1)/(e^(-2 pi z/sqrt 6) + 1),
/// evaluated as 1 + tanh(-pi z / sqrt 6).
double erfc_approx(double z);

/// log(erfc_approx(z)); stays finite where erfc_approx underflows.
double log_erfc_approx(double z);

/// exp(-z^2) / (z + sqrt(z^2 + 4/pi)), the z >= 0 kernel shared by both
/// average-BER approximations. Requires z >= 0.
double bound_kernel(double z);
double log_bound_kernel(double z);

/// 1 + tanh(-pi z / sqrt 6), the negative-branch erfc approximation.
double logistic_branch(double z);

}  // namespace fso
