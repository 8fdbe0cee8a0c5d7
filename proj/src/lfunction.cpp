#include "primerace/lfunction.hpp"

#include <cmath>
#include <vector>

#include "primerace/rng.hpp"
#include "primerace/types.hpp"

namespace primerace {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// Spouge/Lanczos coefficients for g = 7, nine terms; relative error below
// 1e-13 on Re z >= 1/2.
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7,
};

std::complex<double> log_gamma_right(std::complex<double> z) {
  std::complex<double> acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + double(i - 1));
  const std::complex<double> t = z + 6.5;
  return kLogSqrt2Pi + (z - 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace

std::complex<double> log_gamma(std::complex<double> z) {
  if (z.real() >= 0.5) return log_gamma_right(z);
  // Reflection: log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z).
  // Adequate away from the poles; every internal caller stays right of 1/2.
  const std::complex<double> s = std::sin(kPi * z);
  if (std::abs(s) == 0.0) throw ConfigError("log_gamma: pole at nonpositive integer");
  return std::log(kPi / s) - log_gamma_right(1.0 - z);
}

double bernoulli_over_factorial(int l) {
  static const std::vector<double> table = [] {
    std::vector<double> v(17, 0.0);
    // Exact rationals B_2 .. B_14 over (2l)!.
    v[1] = 1.0 / 6.0 / 2.0;
    v[2] = -1.0 / 30.0 / 24.0;
    v[3] = 1.0 / 42.0 / 720.0;
    v[4] = -1.0 / 30.0 / 40320.0;
    v[5] = 5.0 / 66.0 / 3628800.0;
    v[6] = -691.0 / 2730.0 / 479001600.0;
    v[7] = 7.0 / 6.0 / 87178291200.0;
    // B_{2l}/(2l)! = 2 (-1)^{l+1} zeta(2l) / (2 pi)^{2l}; the direct sum
    // for zeta(2l) converges to full precision instantly at l >= 8.
    for (int l2 = 8; l2 <= 16; ++l2) {
      double zeta = 0.0;
      for (int n = 64; n >= 1; --n) zeta += std::pow(double(n), -2.0 * l2);
      const double sign = (l2 % 2 == 0) ? -1.0 : 1.0;
      v[l2] = sign * 2.0 * zeta * std::pow(2.0 * kPi, -2.0 * l2);
    }
    return v;
  }();
  if (l < 1 || l > 16) throw ConfigError("bernoulli_over_factorial: need 1 <= l <= 16");
  return table[l];
}

namespace {

// zeta(s, x) minus its polar term x^{1-s}/(s-1); entire in s, so the
// character sum can cancel the poles exactly at s = 1.
std::complex<double> em_series_part(std::complex<double> s, double x) {
  const std::complex<double> xms = std::exp(-s * std::log(x));
  std::complex<double> total = 0.5 * xms;
  std::complex<double> rising = s;  // (s)_{2l-1} for the current l
  double xpow = 1.0 / x;            // x^{-(2l-1)}
  const double x2 = 1.0 / (x * x);
  for (int l = 1; l <= 16; ++l) {
    total += bernoulli_over_factorial(l) * rising * xpow * xms;
    rising *= (s + double(2 * l - 1)) * (s + double(2 * l));
    xpow *= x2;
  }
  return total;
}

}  // namespace

std::complex<double> em_tail(std::complex<double> s, double x) {
  if (!(x > 0.0)) throw ConfigError("em_tail: need x > 0");
  return std::exp((1.0 - s) * std::log(x)) / (s - 1.0) + em_series_part(s, x);
}

int head_multiplier(double t, std::uint64_t f) {
  const double by_height = std::ceil(0.3 * std::abs(t) + 6.0);
  const double by_terms = std::ceil(24.0 / double(f));
  return int(std::max(by_height, by_terms));
}

std::complex<double> l_reference(const DirichletCharacter& chi,
                                 std::complex<double> s) {
  const std::uint64_t f = chi.modulus();
  const int m = head_multiplier(s.imag(), f);
  const auto& table = chi.table();

  std::complex<double> head = 0.0;
  for (std::uint64_t n = 1; n <= f * std::uint64_t(m); ++n) {
    const std::complex<double> c = table[n % f];
    if (c == 0.0) continue;
    head += c * std::exp(-s * std::log(double(n)));
  }

  // The per-residue tails each carry a pole x^{1-s}/(s-1); it cancels in
  // the character sum (sum chi(r) = 0 off the principal character), so the
  // polar piece is accumulated separately and given its removable value at
  // s = 1 rather than evaluated term by term.
  const bool at_one = s == std::complex<double>(1.0, 0.0);
  std::complex<double> tail = 0.0;
  std::complex<double> pole = 0.0;
  std::complex<double> char_sum = 0.0;
  for (std::uint64_t r = 1; r <= f; ++r) {
    const std::complex<double> c = table[r % f];
    if (c == 0.0) continue;
    const double x = double(m) + double(r) / double(f);
    tail += c * em_series_part(s, x);
    char_sum += c;
    if (at_one) {
      pole += -c * std::log(x);  // lim_{s->1} sum c x^{1-s}/(s-1)
    } else {
      pole += c * std::exp((1.0 - s) * std::log(x)) / (s - 1.0);
    }
  }
  if (at_one && std::abs(char_sum) > 1e-9)
    throw ConfigError("l_reference: pole at s = 1 for the principal character");
  return head + std::exp(-s * std::log(double(f))) * (tail + pole);
}

std::complex<double> gauss_sum(const DirichletCharacter& chi) {
  const std::uint64_t f = chi.modulus();
  const auto& table = chi.table();
  std::complex<double> tau = 0.0;
  for (std::uint64_t n = 1; n <= f; ++n) {
    const std::complex<double> c = table[n % f];
    if (c == 0.0) continue;
    double cs, sn;
    cossin2pi(double(n) / double(f), cs, sn);
    tau += c * std::complex<double>(cs, sn);
  }
  return tau;
}

std::complex<double> root_number(const DirichletCharacter& chi) {
  const std::uint64_t f = chi.modulus();
  const std::complex<double> tau = gauss_sum(chi);
  const double sf = std::sqrt(double(f));
  if (std::abs(std::abs(tau) - sf) > 1e-8 * sf)
    throw DataError("root_number: |tau| != sqrt(f); character not primitive?");
  std::complex<double> eps = tau / sf;
  if (chi.parity() < 0) eps /= std::complex<double>(0.0, 1.0);
  return eps;
}

double hardy_theta(const DirichletCharacter& chi, double t) {
  const int a = chi.parity() > 0 ? 0 : 1;
  const std::complex<double> z(0.25 + 0.5 * a, 0.5 * t);
  return log_gamma(z).imag() +
         0.5 * t * std::log(double(chi.modulus()) / kPi);
}

double hardy_z_reference(const DirichletCharacter& chi, double t) {
  const std::complex<double> eps = root_number(chi);
  const std::complex<double> omega =
      std::exp(std::complex<double>(0.0, -0.5 * std::arg(eps)));
  const double theta = hardy_theta(chi, t);
  const std::complex<double> rot =
      omega * std::complex<double>(std::cos(theta), std::sin(theta));
  const std::complex<double> l = l_reference(chi, {0.5, t});
  return (rot * l).real();
}

double zero_count_main_term(std::uint64_t f, double T) {
  const double x = double(f) * T / (2.0 * kPi);
  return T / (2.0 * kPi) * (std::log(x) - 1.0);
}

}  // namespace primerace
