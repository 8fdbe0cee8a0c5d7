#include <cmath>
#include <cstdint>
#include <set>

#include "doctest.h"
#include "primerace/residues.hpp"
#include "primerace/types.hpp"

using namespace primerace;

TEST_CASE("factorization and totient") {
  const Modulus m24 = make_modulus(24);
  REQUIRE(m24.factors.size() == 2);
  CHECK(m24.factors[0].first == 2);
  CHECK(m24.factors[0].second == 3);
  CHECK(m24.factors[1].first == 3);
  CHECK(m24.factors[1].second == 1);
  CHECK(m24.phi == 8);

  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(2) == 1);
  CHECK(euler_phi(163) == 162);
  CHECK(euler_phi(10007) == 10006);  // prime
  CHECK(euler_phi(1000003) == 1000002);

  // Brute-force cross check on a range.
  for (std::uint64_t q = 1; q <= 200; ++q) {
    std::uint64_t count = 0;
    for (std::uint64_t a = 1; a <= q; ++a)
      if (gcd_u64(a, q) == 1) ++count;
    CHECK(euler_phi(q) == count);
  }
}

TEST_CASE("modular helpers") {
  CHECK(mul_mod(1000002, 1000002, 1000003) == 1);
  CHECK(pow_mod(2, 10, 1000) == 24);
  CHECK(inv_mod(3, 7) == 5);
  CHECK_THROWS_AS(inv_mod(6, 9), ConfigError);
  CHECK(signed_view(7, 5) == -2);
  CHECK(signed_view(7, 3) == 3);
  CHECK(signed_view(8, 4) == 4);  // boundary maps to +q/2
}

TEST_CASE("square-count shift") {
  // q=7: squares are {1,2,4}.
  const Modulus m7 = make_modulus(7);
  CHECK(c_shift(m7, 2) == 1);
  CHECK(c_shift(m7, 3) == -1);
  CHECK(c_shift(m7, 1) == 1);
  // q=8: 1 has four square roots (1,3,5,7).
  const Modulus m8 = make_modulus(8);
  CHECK(c_shift(m8, 1) == 3);
  CHECK(c_shift(m8, 3) == -1);
  // Sum over reduced residues of (c+1) equals phi(q): each unit b
  // contributes its square exactly once.
  for (std::uint64_t q : {3ull, 4ull, 7ull, 8ull, 9ull, 24ull, 163ull}) {
    const Modulus m = make_modulus(q);
    std::int64_t total = 0;
    for (std::uint64_t a = 1; a <= q; ++a)
      if (gcd_u64(a, q) == 1) total += c_shift(m, a) + 1;
    CHECK(total == static_cast<std::int64_t>(m.phi));
  }
  CHECK_THROWS_AS(c_shift(m7, 14), ConfigError);
}

TEST_CASE("race tuple validation") {
  // Leading 2k entries must pair as (b, q-b).
  const RaceTuple t = make_race_tuple(163, {2, 161, 5}, 1);
  CHECK(t.k == 1);
  CHECK(t.contestants.size() == 3);
  CHECK_THROWS_AS(make_race_tuple(163, {2, 160, 5}, 1), ConfigError);
  CHECK_THROWS_AS(make_race_tuple(163, {2, 161, 5}, 2), ConfigError);
  CHECK_THROWS_AS(make_race_tuple(24, {5, 19, 5}, 1), ConfigError);  // repeat
  CHECK_THROWS_AS(make_race_tuple(24, {6, 18}, 1), ConfigError);     // not reduced

  // Size precondition is a flag, not an error.
  CHECK(make_race_tuple(24, {5, 19}, 1).precondition_ok == false);
  const double thr = 1000003.0 / (20.0 * std::pow(std::log(1000003.0), 2));
  CHECK(4.0 < thr);
  CHECK(make_race_tuple(1000003, {3, 1000000, 7, 11}, 1).precondition_ok == true);
}

TEST_CASE("prime window enumeration") {
  const auto ps = primes_in(10, 30);
  const std::vector<std::uint64_t> want{11, 13, 17, 19, 23, 29};
  CHECK(ps == want);
  CHECK(primes_in(24, 28).empty());
}

TEST_CASE("constructed race tuples use the smallest admissible primes") {
  // q = 1000003, n = 4, k = 1: window opens just above 5*4*ln(q)^2 ~ 3817.4.
  const RaceTuple t = build_race_tuple(1000003, 4, 1);
  REQUIRE(t.contestants.size() == 4);
  CHECK(t.contestants[0] == 3821);
  CHECK(t.contestants[1] == 996182);
  CHECK(t.contestants[2] == 3823);
  CHECK(t.contestants[3] == 3833);
  CHECK(t.k == 1);
  CHECK(t.precondition_ok == true);

  // q = 10007, n = 6, k = 2: 5*6*ln(q)^2 ~ 2544.4.
  const RaceTuple u = build_race_tuple(10007, 6, 2);
  REQUIRE(u.contestants.size() == 6);
  CHECK(u.contestants[0] == 2549);
  CHECK(u.contestants[1] == 10007 - 2549);
  CHECK(u.contestants[2] == 2551);
  CHECK(u.contestants[3] == 10007 - 2551);
  CHECK(u.contestants[4] == 2557);
  CHECK(u.contestants[5] == 2579);
  CHECK(u.precondition_ok == false);  // 6 exceeds q/(20 ln^2 q) ~ 5.9

  // All entries reduced and distinct, plus the two-to-one size band
  // for the unpaired block relative to the window base.
  std::set<std::uint64_t> seen;
  for (std::uint64_t a : u.contestants) {
    CHECK(gcd_u64(a, 10007) == 1);
    seen.insert(a);
  }
  CHECK(seen.size() == 6);

  // Window exceeding q/2 leaves no primes to pick.
  CHECK_THROWS_AS(build_race_tuple(101, 50, 1), InsufficientPrimes);
}
