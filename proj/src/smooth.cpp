#include "primerace/smooth.hpp"

#include <algorithm>
#include <cmath>

namespace primerace {

namespace {

constexpr double kE = 2.718281828459045235360287;
// theta on the left edge of the patch; the infimum of theta over
// [-1, infinity) branches, used for the certified ratio constants.
constexpr double kThetaLeft = 15.0 / 74.0;  // theta(-1) = e^{-1}/m0

// The quartic patch f(x) = (7 - 4x^2 + x^4)/(4e) for |x| < 1 and its
// derivatives. Matches e^{-|x|} to second order at x = +-1.
double patch_f(double x) {
  const double x2 = x * x;
  return (7.0 - 4.0 * x2 + x2 * x2) / (4.0 * kE);
}
double patch_f1(double x) { return (x * x * x - 2.0 * x) / kE; }
double patch_f2(double x) { return (3.0 * x * x - 2.0) / kE; }

// Antiderivative of the patch normalized by m0, continuous with the
// left ray: theta(x) = theta(-1) + (1/(4e m0)) * (7x - 4x^3/3 + x^5/5
// + 88/15) for |x| <= 1.
double patch_theta(double x) {
  const double x2 = x * x;
  const double poly = x * (7.0 - x2 * (4.0 / 3.0) + x2 * x2 * 0.2) + 88.0 / 15.0;
  return (1.0 / kE + 0.25 / kE * poly) / kThetaMass;
}

}  // namespace

double theta(double x) {
  if (x <= -1.0) return std::exp(x) / kThetaMass;
  if (x >= 1.0) return 1.0 - std::exp(-x) / kThetaMass;
  return patch_theta(x);
}

double log_theta(double x) {
  if (x <= -1.0) return x - std::log(kThetaMass);
  // theta >= 15/74 here; direct log is well conditioned.
  return std::log(theta(x));
}

double theta_derivative(double x, int m) {
  if (m == 0) return theta(x);
  if (m < 0 || m > 3) throw ConfigError("theta derivatives cover m <= 3");
  if (x <= -1.0) {
    return std::exp(x) / kThetaMass;  // every derivative equals theta
  }
  if (x >= 1.0) {
    const double v = std::exp(-x) / kThetaMass;
    return (m % 2 == 1) ? v : -v;
  }
  switch (m) {
    case 1:
      return patch_f(x) / kThetaMass;
    case 2:
      return patch_f1(x) / kThetaMass;
    default:
      return patch_f2(x) / kThetaMass;
  }
}

std::array<double, 3> derivative_ratio_constants() {
  std::array<double, 3> kappa{};
  for (int m = 1; m <= 3; ++m) {
    // Left ray: |theta^(m)| = theta exactly, ratio 1.
    double best = 1.0;
    // Right ray: |theta^(m)| / theta = e^{-x} / (m0 - e^{-x}), decreasing,
    // so the x = 1 endpoint dominates.
    best = std::max(best, (1.0 / kE) / (kThetaMass - 1.0 / kE));
    // Patch: sup |theta^(m)| over [-1,1] divided by inf theta = theta(-1).
    // The numerator extrema are polynomial critical points; a dense scan
    // brackets them beyond the accuracy needed here.
    double sup = 0.0;
    const int grid = 2000000;
    for (int i = 0; i <= grid; ++i) {
      const double x = -1.0 + 2.0 * i / grid;
      sup = std::max(sup, std::abs(theta_derivative(x, m)));
    }
    best = std::max(best, sup / kThetaLeft);
    kappa[m - 1] = best;
  }
  return kappa;
}

}  // namespace primerace
