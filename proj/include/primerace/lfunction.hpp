#pragma once

#include <complex>
#include <cstdint>

#include "primerace/characters.hpp"

namespace primerace {

// Principal-branch log Gamma via a 9-term rational approximation; the
// imaginary part is continuous on the closed right half plane, which the
// critical-line phase below relies on.
std::complex<double> log_gamma(std::complex<double> z);

// B_{2l} / (2l)! for 1 <= l <= 16: exact rationals through l = 7, the
// even-zeta closed form beyond.
double bernoulli_over_factorial(int l);

// Asymptotic expansion of zeta(s, x) = sum_{j>=0} (x+j)^{-s}:
// x^{1-s}/(s-1) + x^{-s}/2 + sum B_{2l}/(2l)! (s)_{2l-1} x^{-s-2l+1}.
// Accurate to ~1e-11 once x >= 0.3|Im s| + 6 (first omitted term).
std::complex<double> em_tail(std::complex<double> s, double x);

// Head length rule: the Dirichlet series is summed for n <= f*M before
// switching to em_tail, with M large enough that the asymptotic series
// converges at height t and the head covers at least ~24 terms.
int head_multiplier(double t, std::uint64_t f);

// Direct evaluation of L(s, chi) = sum chi(n) n^{-s} continued by the
// Euler-Maclaurin tail; reference-grade (one complex exp per term).
std::complex<double> l_reference(const DirichletCharacter& chi,
                                 std::complex<double> s);

// tau(chi) = sum_n chi(n) e^{2 pi i n / f}.
std::complex<double> gauss_sum(const DirichletCharacter& chi);

// epsilon(chi) = tau(chi) / (i^a sqrt(f)), |epsilon| = 1 for primitive
// chi; a = 0/1 for even/odd. Throws DataError if |tau| deviates from
// sqrt(f), which flags a non-primitive argument.
std::complex<double> root_number(const DirichletCharacter& chi);

// Critical-line phase theta(t) = Im log Gamma((1/2 + a + it)/2)
// + (t/2) log(f/pi); continuous in t.
double hardy_theta(const DirichletCharacter& chi, double t);

// Z(t) = Re[ epsilon^{-1/2} e^{i theta(t)} L(1/2 + it, chi) ]: real on
// the critical line for primitive chi, with |Z| = |L| and sign changes
// exactly at the zeros.
double hardy_z_reference(const DirichletCharacter& chi, double t);

// Average count of zeros with 0 < gamma <= T for a primitive character
// of conductor f: (T / 2 pi) log(f T / (2 pi e)).
double zero_count_main_term(std::uint64_t f, double T);

}  // namespace primerace
