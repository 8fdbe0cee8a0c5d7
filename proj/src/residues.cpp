#include "primerace/residues.hpp"

#include <algorithm>
#include <cmath>

namespace primerace {

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    const std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Modulus make_modulus(std::uint64_t q) {
  if (q == 0) throw ConfigError("modulus must be positive");
  Modulus m;
  m.q = q;
  std::uint64_t rest = q;
  std::uint64_t phi = 1;
  for (std::uint64_t p = 2; p * p <= rest; p += (p == 2 ? 1 : 2)) {
    if (rest % p != 0) continue;
    unsigned e = 0;
    std::uint64_t pe = 1;
    while (rest % p == 0) {
      rest /= p;
      ++e;
      pe *= p;
    }
    m.factors.emplace_back(p, e);
    phi *= pe / p * (p - 1);
  }
  if (rest > 1) {
    m.factors.emplace_back(rest, 1u);
    phi *= rest - 1;
  }
  m.phi = phi;
  return m;
}

std::uint64_t euler_phi(std::uint64_t q) { return make_modulus(q).phi; }

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e != 0) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  // Extended Euclid on (a, m); caller guarantees gcd(a, m) = 1.
  std::int64_t t = 0, nt = 1;
  std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
  while (nr != 0) {
    const std::int64_t qq = r / nr;
    std::int64_t tmp = t - qq * nt;
    t = nt;
    nt = tmp;
    tmp = r - qq * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw ConfigError("inv_mod: arguments not coprime");
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t);
}

int c_shift(const Modulus& mod, std::uint64_t a) {
  const std::uint64_t q = mod.q;
  a %= q;
  if (gcd_u64(a, q) != 1) throw ConfigError("c_shift: residue not reduced");
  int roots = 0;
  for (std::uint64_t b = 1; b <= q; ++b) {
    if (mul_mod(b, b, q) == a % q) ++roots;
  }
  return roots - 1;
}

std::int64_t signed_view(std::uint64_t q, std::uint64_t a) {
  a %= q;
  if (a * 2 <= q) return static_cast<std::int64_t>(a);
  return static_cast<std::int64_t>(a) - static_cast<std::int64_t>(q);
}

RaceTuple make_race_tuple(const Modulus& mod,
                          std::vector<std::uint64_t> contestants, unsigned k) {
  const std::uint64_t q = mod.q;
  const unsigned n = static_cast<unsigned>(contestants.size());
  if (n == 0) throw Inadmissible("race tuple must be nonempty");
  if (2 * k > n) throw Inadmissible("race tuple: k exceeds n/2");
  for (auto& a : contestants) {
    a %= q;
    if (a == 0 || gcd_u64(a, q) != 1)
      throw Inadmissible("race tuple: contestant not a reduced residue");
  }
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j)
      if (contestants[i] == contestants[j])
        throw Inadmissible("race tuple: contestants must be distinct");
  for (unsigned j = 0; j < k; ++j) {
    if ((contestants[2 * j] + contestants[2 * j + 1]) % q != 0)
      throw Inadmissible("race tuple: leading block is not a (b, -b) pair");
  }
  RaceTuple rt;
  rt.mod = mod;
  rt.contestants = std::move(contestants);
  rt.k = k;
  const double lq = std::log(static_cast<double>(q));
  rt.precondition_ok = static_cast<double>(rt.contestants.size()) <
                       static_cast<double>(q) / (20.0 * lq * lq);
  return rt;
}

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (hi < 2 || hi <= lo) return out;
  std::vector<bool> composite(hi + 1, false);
  for (std::uint64_t p = 2; p * p <= hi; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t m = p * p; m <= hi; m += p) composite[m] = true;
  }
  for (std::uint64_t p = std::max<std::uint64_t>(2, lo + 1); p <= hi; ++p)
    if (!composite[p]) out.push_back(p);
  return out;
}

RaceTuple build_race_tuple(const Modulus& mod, unsigned n, unsigned k) {
  if (n < 2 || k < 1 || 2 * k > n)
    throw Inadmissible("build_race_tuple: need n >= 2 and 1 <= k <= n/2");
  const std::uint64_t q = mod.q;
  const double lq = std::log(static_cast<double>(q));
  const double lo_d = 5.0 * n * lq * lq;
  const double hi_d = 10.0 * n * lq * lq;
  // Usable primes must also be honest residues below q/2 (so that b and q-b
  // are distinct and the signed views stay in (-q/2, q/2]).
  const std::uint64_t lo = static_cast<std::uint64_t>(std::floor(lo_d));
  const std::uint64_t hi = std::min<std::uint64_t>(
      static_cast<std::uint64_t>(std::floor(hi_d)), q / 2);

  std::vector<std::uint64_t> picked;
  const unsigned need = n - k;
  if (hi > lo) {
    for (std::uint64_t p : primes_in(lo, hi)) {
      if (static_cast<double>(p) <= lo_d) continue;  // strict lower endpoint
      if (q % p == 0) continue;
      picked.push_back(p);
      if (picked.size() == need) break;
    }
  }
  if (picked.size() < need)
    throw InsufficientPrimes(
        "build_race_tuple: prime window (5n ln^2 q, 10n ln^2 q] capped at q/2 "
        "holds fewer than n-k usable primes");

  std::vector<std::uint64_t> contestants;
  contestants.reserve(n);
  for (unsigned j = 0; j < k; ++j) {
    contestants.push_back(picked[j]);
    contestants.push_back(q - picked[j]);
  }
  for (unsigned j = k; j < need; ++j) contestants.push_back(picked[j]);
  return make_race_tuple(mod, std::move(contestants), k);
}

}  // namespace primerace
