#pragma once

#include <cmath>
#include <cstdint>

namespace primerace {

// Counter-based random streams built from the SplitMix64 avalanche function.
// Every draw is a pure function of (stream seed, counter), so Monte Carlo
// runs shard across threads with no sequencing state: worker count cannot
// change any drawn value. out(k) = mix64(seed + (k+1)*kGolden) reproduces the
// classic SplitMix64 sequence seeded at `seed`.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Independent stream seed for a tagged sub-experiment of a master seed.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t tag) {
  return mix64(master ^ mix64(tag));
}

// Uniform in the open interval (0,1): 53 high bits, offset half a lattice
// step so 0 and 1 are unreachable (safe through log / inverse-Phi).
constexpr double to_unit(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

struct Stream {
  std::uint64_t seed = 0;

  constexpr std::uint64_t bits(std::uint64_t counter) const {
    return mix64(seed + (counter + 1) * kGolden);
  }
  constexpr double uniform(std::uint64_t counter) const {
    return to_unit(bits(counter));
  }
};

namespace detail {

// Taylor coefficients of cos(2*pi*t) and sin(2*pi*t)/t on |t| <= 1/2.
// Degree 24/23 keeps the truncation error below 2e-13 at the interval edge.
struct TrigTables {
  double c[13];
  double s[12];
};

constexpr TrigTables make_trig_tables() {
  TrigTables tt{};
  // (2*pi)^(2k) / (2k)! with alternating sign, built by recurrence.
  const double two_pi_sq = 4.0 * 9.869604401089358;  // (2*pi)^2, exact enough
  double term = 1.0;
  for (int k = 0; k < 13; ++k) {
    tt.c[k] = (k % 2 == 0) ? term : -term;
    term *= two_pi_sq / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
  }
  double two_pi = 6.283185307179586476925286766559;
  term = two_pi;
  for (int k = 0; k < 12; ++k) {
    tt.s[k] = (k % 2 == 0) ? term : -term;
    term *= two_pi_sq / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
  }
  return tt;
}

inline constexpr TrigTables kTrig = make_trig_tables();

}  // namespace detail

// cos(2*pi*u) and sin(2*pi*u) for u in [0,1), branch-free: shift to
// t = u - 1/2 in [-1/2,1/2) and use cos(2*pi*t + pi) = -cos(2*pi*t).
// Polynomial-only so the compiler can vectorize whole batches.
inline void cossin2pi(double u, double& c, double& s) {
  const double t = u - 0.5;
  const double v = t * t;
  const auto& T = detail::kTrig;
  double pc = T.c[12];
  for (int k = 11; k >= 0; --k) pc = pc * v + T.c[k];
  double ps = T.s[11];
  for (int k = 10; k >= 0; --k) ps = ps * v + T.s[k];
  c = -pc;
  s = -(t * ps);
}

inline double cos2pi(double u) {
  const double t = u - 0.5;
  const double v = t * t;
  const auto& T = detail::kTrig;
  double pc = T.c[12];
  for (int k = 11; k >= 0; --k) pc = pc * v + T.c[k];
  return -pc;
}

// Inverse standard normal CDF. Rational first guess refined by two Halley
// steps against erfc-based Phi, giving full double accuracy for u in (0,1).
double normal_icdf(double u);

// Standard normal CDF and density.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }
inline double normal_pdf(double x) { return 0.39894228040143267794 * std::exp(-0.5 * x * x); }

// Box-Muller pair from two uniforms in (0,1). Fast path for bulk Gaussian
// sampling; the inverse-CDF path is reserved for common-random-number
// couplings where the uniform must map monotonically to the normal.
inline void normal_pair(double u1, double u2, double& z1, double& z2) {
  const double r = std::sqrt(-2.0 * std::log(u1));
  double c, s;
  cossin2pi(u2, c, s);
  z1 = r * c;
  z2 = r * s;
}

}  // namespace primerace
