#include "primerace/rng.hpp"

namespace primerace {

namespace {

// Beasley-Springer/Moro rational approximation to the normal quantile,
// accurate to ~4e-4. Only used as the seed for Halley refinement below.
double icdf_guess(double u) {
  const double p = (u < 0.5) ? u : 1.0 - u;
  const double t = std::sqrt(-2.0 * std::log(p));
  const double num = 2.515517 + t * (0.802853 + t * 0.010328);
  const double den = 1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308));
  const double x = t - num / den;
  return (u < 0.5) ? -x : x;
}

}  // namespace

double normal_icdf(double u) {
  double x = icdf_guess(u);
  // Halley iteration on Phi(x) - u = 0; each step cubes the error, so two
  // steps take 4e-4 to full double precision.
  for (int it = 0; it < 2; ++it) {
    const double e = normal_cdf(x) - u;
    const double d = normal_pdf(x);
    const double r = e / d;
    x -= r / (1.0 + 0.5 * x * r);
  }
  return x;
}

}  // namespace primerace
