#include "fso/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "fso/channel.hpp"

namespace fso {

namespace {

// Kronrod 15-point abscissae; odd indices are the embedded Gauss 7-point nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

double checked_eval(const Integrand& f, double x) {
  const double y = f(x);
  if (std::isnan(y)) throw EvaluationError(x);
  return y;
}

// One application of the 15-point rule, with the QUADPACK error heuristic.
Segment gauss_kronrod(const Integrand& f, double a, double b) {
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr double kTiny = std::numeric_limits<double>::min();

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = checked_eval(f, center);

  double result_gauss = f_center * kWg[3];
  double result_kronrod = f_center * kWgk[7];
  double result_abs = std::abs(result_kronrod);
  std::array<double, 7> f_left{};
  std::array<double, 7> f_right{};

  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f_left[j] = checked_eval(f, center - dx);
    f_right[j] = checked_eval(f, center + dx);
    const double sum = f_left[j] + f_right[j];
    result_kronrod += kWgk[j] * sum;
    result_abs += kWgk[j] * (std::abs(f_left[j]) + std::abs(f_right[j]));
    if (j % 2 == 1) result_gauss += kWg[j / 2] * sum;
  }

  const double mean = 0.5 * result_kronrod;
  double result_asc = kWgk[7] * std::abs(f_center - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    result_asc += kWgk[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
  }

  const double abs_half = std::abs(half);
  result_asc *= abs_half;
  result_abs *= abs_half;
  double error = std::abs((result_kronrod - result_gauss) * half);
  if (result_asc != 0.0 && error != 0.0) {
    error = result_asc * std::min(1.0, std::pow(200.0 * error / result_asc, 1.5));
  }
  if (result_abs > kTiny / (50.0 * kEps)) {
    error = std::max(50.0 * kEps * result_abs, error);
  }
  return {a, b, result_kronrod * half, error};
}

constexpr std::size_t kRuleEvaluations = 15;

}  // namespace

void Tolerance::validate() const {
  if (!(rel_tol >= 1e-14)) throw std::invalid_argument("rel_tol must be >= 1e-14");
  if (!(abs_tol >= 0.0)) throw std::invalid_argument("abs_tol must be >= 0");
  if (max_evaluations < kRuleEvaluations) {
    throw std::invalid_argument("max_evaluations must allow at least one 15-point rule");
  }
}

EvaluationError::EvaluationError(double abscissa)
    : std::runtime_error("integrand returned NaN at x = " + std::to_string(abscissa)),
      abscissa_(abscissa) {}

QuadratureResult integrate(const Integrand& f, double a, double b, const Tolerance& tol,
                           std::span<const double> breakpoints) {
  tol.validate();
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw std::invalid_argument("integrate: need finite a < b");
  }

  std::vector<double> edges{a};
  for (double p : breakpoints) {
    if (p > a && p < b) edges.push_back(p);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<Segment> heap;
  QuadratureResult result;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Segment s = gauss_kronrod(f, edges[i], edges[i + 1]);
    result.evaluations += kRuleEvaluations;
    result.value += s.value;
    result.error_estimate += s.error;
    heap.push(s);
  }

  auto target = [&] { return std::max(tol.rel_tol * std::abs(result.value), tol.abs_tol); };

  while (result.error_estimate > target()) {
    if (result.evaluations + 2 * kRuleEvaluations > tol.max_evaluations) break;
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    // Interval too small to split further in double precision.
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    result.evaluations += 2 * kRuleEvaluations;
    result.value += left.value + right.value - worst.value;
    result.error_estimate += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed accumulated cancellation from the incremental updates.
  double value = 0.0;
  double error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  result.value = value;
  result.error_estimate = error;
  result.converged = result.error_estimate <= target();
  return result;
}

double truncation_bound(const DerivedParams& d) {
  const double sigma_x = std::sqrt(d.sigma_x_sq);
  return d.A0 * d.h_l * std::exp(-2.0 * d.sigma_x_sq + kTruncationSigmas * 2.0 * sigma_x);
}

}  // namespace fso
