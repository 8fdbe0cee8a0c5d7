#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "primerace/residues.hpp"

namespace primerace {

// One cyclic coordinate of (Z/q)*. Odd prime powers contribute one
// coordinate; 2^e (e >= 3) contributes two: <-1> of order 2 and <5> of
// order 2^(e-2). Coordinates of order 1 are dropped.
struct CyclicFactor {
  std::uint64_t pe = 0;     // the prime power whose residue is read
  std::uint64_t prime = 0;  // underlying prime
  std::uint64_t gen = 0;    // residue mod pe generating this coordinate
  std::uint64_t order = 0;  // cyclic order d_i
  // dlog[a % pe] = digit of a on this coordinate; 0 when gcd(a, pe) > 1
  // (evaluation masks those out via the coprimality check).
  std::vector<std::uint32_t> dlog;
};

// Immutable character-group structure mod q: CRT coordinates, shared
// root-of-unity table of the group exponent, digit weights. Concurrent
// reads are safe after construction.
class CharacterGroup {
 public:
  explicit CharacterGroup(Modulus mod);

  const Modulus& modulus() const { return mod_; }
  std::uint64_t q() const { return mod_.q; }
  std::uint64_t size() const { return mod_.phi; }
  const std::vector<CyclicFactor>& coords() const { return coords_; }
  // Group exponent m = lcm of coordinate orders; character values are
  // m-th roots of unity.
  std::uint64_t exponent() const { return m_; }
  std::uint64_t weight(std::size_t i) const { return weight_[i]; }
  std::complex<double> root(std::uint64_t j) const { return roots_[j]; }

  bool is_unit(std::uint64_t a) const { return gcd_u64(a % mod_.q, mod_.q) == 1; }
  // Digit vector of a reduced residue (exact discrete logarithm).
  std::vector<std::uint32_t> digits(std::uint64_t a) const;
  // Exponent e(a) with chi(a) = root(e(a)) for the character whose
  // digits are t: e(a) = sum_i t_i * w_i * x_i(a) mod m.
  std::uint64_t phase_index(const std::vector<std::uint32_t>& t,
                            std::uint64_t a) const;

 private:
  Modulus mod_;
  std::vector<CyclicFactor> coords_;
  std::uint64_t m_ = 1;
  std::vector<std::uint64_t> weight_;
  std::vector<std::complex<double>> roots_;
};

using GroupPtr = std::shared_ptr<const CharacterGroup>;

// Memoized group construction; repeated calls for the same q share one
// immutable instance.
GroupPtr character_group_cache(std::uint64_t q);

// Lightweight character handle: shared group plus digit vector. Dense
// value tables are materialized on demand (per character, not for the
// whole group, so moduli near 10^4 stay cheap).
class DirichletCharacter {
 public:
  DirichletCharacter(GroupPtr group, std::vector<std::uint32_t> t);

  std::uint64_t modulus() const { return group_->q(); }
  const std::vector<std::uint32_t>& exponents() const { return t_; }
  // Canonical label: little-endian mixed radix over coordinate digits;
  // the principal character is index 0.
  std::uint64_t index() const { return index_; }
  bool is_principal() const { return principal_; }
  std::uint64_t order() const { return order_; }
  std::uint64_t conductor() const { return conductor_; }
  bool is_primitive() const { return conductor_ == group_->q(); }
  // chi(-1) = +1 (even) or -1 (odd).
  int parity() const;

  std::complex<double> operator()(std::uint64_t a) const;
  DirichletCharacter conjugate() const;
  // Dense table chi(a) for a in [0, q); built on first use and cached.
  const std::vector<std::complex<double>>& table() const;

  const CharacterGroup& group() const { return *group_; }
  GroupPtr group_ptr() const { return group_; }

 private:
  GroupPtr group_;
  std::vector<std::uint32_t> t_;
  std::uint64_t index_ = 0;
  std::uint64_t order_ = 1;
  std::uint64_t conductor_ = 1;
  bool principal_ = true;
  mutable std::shared_ptr<const std::vector<std::complex<double>>> table_;
};

// All phi(q) characters mod q in canonical index order (index 0 is the
// principal character).
std::vector<DirichletCharacter> character_group(std::uint64_t q);
std::vector<DirichletCharacter> character_group(const Modulus& mod);

// Character by canonical label within the (memoized) group mod q.
DirichletCharacter character_by_index(std::uint64_t q, std::uint64_t index);

// The primitive character mod conductor(chi) inducing chi; chi itself
// when already primitive. Digits are solved exactly on the coordinate
// generators of the smaller group.
DirichletCharacter primitive_inducer(const DirichletCharacter& chi);

// Stable 64-bit label of a primitive character for file formats and
// phase streams: (conductor << 32) | canonical index mod conductor.
std::uint64_t primitive_label(const DirichletCharacter& primitive_chi);

// Exact orthogonality certificate, no floating point: both summation
// directions are reduced to integer fiber counts over root-of-unity
// classes, which vanish identically iff counts are balanced on a
// nontrivial subgroup.
struct OrthogonalityReport {
  std::uint64_t q = 0;
  bool character_sums_ok = false;  // sum_a chi(a) = phi(q)*[chi principal]
  bool residue_sums_ok = false;    // sum_chi chi(c) = phi(q)*[c = 1]
  std::uint64_t characters_checked = 0;
  std::uint64_t residues_checked = 0;
  bool ok() const { return character_sums_ok && residue_sums_ok; }
};

OrthogonalityReport verify_orthogonality_exact(const CharacterGroup& g);

}  // namespace primerace
