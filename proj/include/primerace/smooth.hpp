#pragma once

#include <array>
#include <cmath>

#include "primerace/ordering.hpp"

namespace primerace {

// Mass of the mollifier f: integral of e^{-|x|} outside [-1,1] plus the
// quartic patch inside; equals 74/(15 e).
inline constexpr double kThetaMass = 74.0 / (15.0 * 2.718281828459045235360287);

// Smoothed step theta(x) = (1/m0) * integral of f up to x, where
// f(x) = e^{-|x|} for |x| >= 1 and (7 - 4x^2 + x^4)/(4e) inside. Strictly
// increasing from 0 to 1 with theta(0) = 1/2.
double theta(double x);
// log theta(x), exact on the deep-left ray where theta underflows.
double log_theta(double x);
// m-th derivative of theta for m in {0,1,2,3}; m = 1 is the mollifier
// f/m0 itself.
double theta_derivative(double x, int m);

// Pointwise-certified constants kappa_m with |theta^(m)(x)| <= kappa_m
// theta(x) everywhere: per branch (left ray, patch, right ray) we take
// sup |theta^(m)| / inf theta, so each branch bound holds pointwise.
// kappa_1 = 7/4 and kappa_3 = 2 exactly; kappa_2 ~ 1.0887.
std::array<double, 3> derivative_ratio_constants();

struct SmoothTestParams {
  double delta = 0.0;
  OrderingSpec spec;
  int sign = +1;  // +1 for the outer surrogate h+, -1 for the inner h-
};

inline SmoothTestParams make_smooth_params(OrderingSpec spec, double delta,
                                           int sign) {
  if (!(delta > 0)) throw ConfigError("smoothing width must be positive");
  if (sign != 1 && sign != -1) throw ConfigError("sign must be +1 or -1");
  validate_ordering(spec);
  return SmoothTestParams{delta, std::move(spec), sign};
}

// log h^{sign}_{S,delta}(x): sum of log_theta over the pairs; immune to
// underflow of individual factors.
template <typename VecLike>
double h_eval_log(const SmoothTestParams& p, const VecLike& x) {
  const double root = std::sqrt(p.delta) * p.sign;
  double logsum = 0.0;
  for (const auto& [i, j] : p.spec.pairs)
    logsum += log_theta((x[i - 1] - x[j - 1] + root) / p.delta);
  return logsum;
}

// h^{sign}_{S,delta}(x) = prod over (i,j) in S of
// theta((x_i - x_j + sign*sqrt(delta)) / delta). Products dipping below
// the 1e-300 guard are recomputed in log space so a single underflowed
// factor cannot zero out a value the log path still resolves.
template <typename VecLike>
double h_eval(const SmoothTestParams& p, const VecLike& x) {
  const double root = std::sqrt(p.delta) * p.sign;
  double prod = 1.0;
  for (const auto& [i, j] : p.spec.pairs)
    prod *= theta((x[i - 1] - x[j - 1] + root) / p.delta);
  if (prod >= 1e-300) return prod;
  return std::exp(h_eval_log(p, x));
}

// Width hypothesis of the sandwich guarantees: e^{-1/sqrt(delta)} <= 1/n^2.
inline HypothesisCheck sandwich_width_check(double delta, int n) {
  const double val = std::exp(-1.0 / std::sqrt(delta));
  const double bound = 1.0 / (double(n) * n);
  return HypothesisCheck{"exp(-1/sqrt(delta)) <= 1/n^2", val <= bound, val,
                         bound};
}

}  // namespace primerace
