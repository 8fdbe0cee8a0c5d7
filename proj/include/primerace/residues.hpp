#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "primerace/types.hpp"

namespace primerace {

// Modular-arithmetic substrate: factorizations, Euler phi, square-root
// counting, and the biased race-tuple construction.

struct Modulus {
  std::uint64_t q = 0;
  // Prime-power factorization, primes ascending; product equals q.
  std::vector<std::pair<std::uint64_t, unsigned>> factors;
  std::uint64_t phi = 0;
};

Modulus make_modulus(std::uint64_t q);

std::uint64_t euler_phi(std::uint64_t q);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

// Modular helpers on 64-bit values small enough that products fit (desk
// scale: q <= ~3e9; all callers stay far below that).
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m);  // gcd(a,m)=1

// C_q(a) = -1 + #{b mod q : b^2 = a mod q}. The mean shift of the race
// component for residue a: negative exactly off the squares.
int c_shift(const Modulus& mod, std::uint64_t a);

// Signed representative of a in (-q/2, q/2].
std::int64_t signed_view(std::uint64_t q, std::uint64_t a);

// Ordered race contestants (reduced residues mod q). The first 2k entries
// are paired as (b, q-b) blocks; the rest are unpaired primes.
struct RaceTuple {
  Modulus mod;
  std::vector<std::uint64_t> contestants;
  unsigned k = 0;
  // Size hypothesis n < q/(20 log^2 q); recorded, not enforced.
  bool precondition_ok = true;
};

// Validates distinctness, reducedness, and the (b, -b) pairing layout of the
// first 2k entries. Throws Inadmissible on violation.
RaceTuple make_race_tuple(const Modulus& mod,
                          std::vector<std::uint64_t> contestants, unsigned k);

// Builds (b_1, -b_1, ..., b_k, -b_k, b_{k+1}, ..., b_{n-k}) from the n-k
// smallest usable primes: p in (5 n ln^2 q, 10 n ln^2 q], p <= floor(q/2),
// p not dividing q. Throws InsufficientPrimes when the window is too thin
// (q too small for the requested n), which the upper-window/q-half clamp
// makes deterministic.
RaceTuple build_race_tuple(const Modulus& mod, unsigned n, unsigned k);

inline RaceTuple make_race_tuple(std::uint64_t q,
                                 std::vector<std::uint64_t> contestants,
                                 unsigned k) {
  return make_race_tuple(make_modulus(q), std::move(contestants), k);
}

inline RaceTuple build_race_tuple(std::uint64_t q, unsigned n, unsigned k) {
  return build_race_tuple(make_modulus(q), n, k);
}

// All primes in (lo, hi], ascending. Plain sieve; desk-scale bounds only.
std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi);

}  // namespace primerace
