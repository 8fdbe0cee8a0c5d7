#include "primerace/characters.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "primerace/types.hpp"

namespace primerace {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Smallest primitive root of an odd prime p.
std::uint64_t primitive_root(std::uint64_t p) {
  std::uint64_t n = p - 1;
  std::vector<std::uint64_t> rad;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      rad.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) rad.push_back(n);
  for (std::uint64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (std::uint64_t r : rad)
      if (pow_mod(g, (p - 1) / r, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw DataError("no primitive root found (non-prime modulus?)");
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
  return a / gcd_u64(a, b) * b;
}

CyclicFactor make_cyclic(std::uint64_t pe, std::uint64_t prime,
                         std::uint64_t gen, std::uint64_t order) {
  CyclicFactor f;
  f.pe = pe;
  f.prime = prime;
  f.gen = gen;
  f.order = order;
  f.dlog.assign(pe, 0);
  std::uint64_t v = 1;
  for (std::uint64_t j = 0; j < order; ++j) {
    f.dlog[v] = static_cast<std::uint32_t>(j);
    v = mul_mod(v, gen, pe);
  }
  if (v != 1) throw DataError("generator order mismatch");
  return f;
}

std::uint64_t val_p(std::uint64_t t, std::uint64_t p) {
  std::uint64_t v = 0;
  while (t && t % p == 0) {
    t /= p;
    ++v;
  }
  return v;
}

// The p-power block of a factored modulus.
std::uint64_t pe_of(const Modulus& m, std::uint64_t p) {
  for (const auto& [pp, e] : m.factors)
    if (pp == p) {
      std::uint64_t pe = 1;
      for (unsigned i = 0; i < e; ++i) pe *= pp;
      return pe;
    }
  throw DataError("prime does not divide the modulus");
}

}  // namespace

CharacterGroup::CharacterGroup(Modulus mod) : mod_(std::move(mod)) {
  for (const auto& [p, e] : mod_.factors) {
    std::uint64_t pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    if (p == 2) {
      if (e == 2) {
        coords_.push_back(make_cyclic(4, 2, 3, 2));
      } else if (e >= 3) {
        // <-1> x <5>; the sign coordinate needs both cosets filled in.
        CyclicFactor sgn;
        sgn.pe = pe;
        sgn.prime = 2;
        sgn.gen = pe - 1;
        sgn.order = 2;
        sgn.dlog.assign(pe, 0);
        CyclicFactor pow5;
        pow5.pe = pe;
        pow5.prime = 2;
        pow5.gen = 5;
        pow5.order = pe / 4;
        pow5.dlog.assign(pe, 0);
        std::uint64_t v = 1;
        for (std::uint64_t j = 0; j < pow5.order; ++j) {
          sgn.dlog[v] = 0;
          pow5.dlog[v] = static_cast<std::uint32_t>(j);
          sgn.dlog[pe - v] = 1;
          pow5.dlog[pe - v] = static_cast<std::uint32_t>(j);
          v = mul_mod(v, 5, pe);
        }
        if (v != 1) throw DataError("2-part generator order mismatch");
        coords_.push_back(std::move(sgn));
        coords_.push_back(std::move(pow5));
      }
      // e == 1 contributes nothing: (Z/2)* is trivial.
    } else {
      std::uint64_t g = primitive_root(p);
      if (e >= 2 && pow_mod(g, p - 1, p * p) == 1) g += p;
      std::uint64_t order = pe / p * (p - 1);
      coords_.push_back(make_cyclic(pe, p, g % pe, order));
    }
  }
  m_ = 1;
  for (const auto& c : coords_) m_ = lcm_u64(m_, c.order);
  weight_.resize(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i)
    weight_[i] = m_ / coords_[i].order;
  roots_.resize(m_);
  for (std::uint64_t j = 0; j < m_; ++j) {
    const double a = kTwoPi * (static_cast<double>(j) / static_cast<double>(m_));
    roots_[j] = {std::cos(a), std::sin(a)};
  }
}

std::vector<std::uint32_t> CharacterGroup::digits(std::uint64_t a) const {
  std::vector<std::uint32_t> d(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i)
    d[i] = coords_[i].dlog[a % coords_[i].pe];
  return d;
}

std::uint64_t CharacterGroup::phase_index(const std::vector<std::uint32_t>& t,
                                          std::uint64_t a) const {
  std::uint64_t e = 0;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const std::uint64_t x = coords_[i].dlog[a % coords_[i].pe];
    e = (e + (t[i] * weight_[i]) % m_ * x) % m_;
  }
  return e;
}

GroupPtr character_group_cache(std::uint64_t q) {
  static std::mutex mu;
  static std::map<std::uint64_t, GroupPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;
  auto g = std::make_shared<const CharacterGroup>(make_modulus(q));
  cache.emplace(q, g);
  return g;
}

DirichletCharacter::DirichletCharacter(GroupPtr group,
                                       std::vector<std::uint32_t> t)
    : group_(std::move(group)), t_(std::move(t)) {
  const auto& coords = group_->coords();
  if (t_.size() != coords.size())
    throw ConfigError("character digit vector has wrong length");
  const std::uint64_t m = group_->exponent();
  std::uint64_t radix = 1, phase_gcd = 0;
  principal_ = true;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (t_[i] >= coords[i].order)
      throw ConfigError("character digit out of range");
    index_ += radix * t_[i];
    radix *= coords[i].order;
    phase_gcd = gcd_u64(phase_gcd, t_[i] * group_->weight(i));
    if (t_[i] != 0) principal_ = false;
  }
  order_ = m / gcd_u64(m, phase_gcd);

  // Conductor: product over primes of the local conductor. For odd p^e a
  // digit t != 0 contributes p^(e - v_p(t)); the 2-part combines its sign
  // and 5-power digits.
  conductor_ = 1;
  std::size_t i = 0;
  while (i < coords.size()) {
    const auto& c = coords[i];
    if (c.prime == 2 && i + 1 < coords.size() && coords[i + 1].prime == 2) {
      const std::uint64_t s = t_[i], tt = t_[i + 1];
      if (tt != 0) {
        std::uint64_t local = c.pe;
        for (std::uint64_t v = val_p(tt, 2); v > 0; --v) local /= 2;
        conductor_ *= local;
      } else if (s != 0) {
        conductor_ *= 4;
      }
      i += 2;
    } else {
      if (t_[i] != 0) {
        std::uint64_t local = c.pe;
        for (std::uint64_t v = val_p(t_[i], c.prime); v > 0; --v)
          local /= c.prime;
        conductor_ *= local;
      }
      i += 1;
    }
  }
}

int DirichletCharacter::parity() const {
  const std::uint64_t q = group_->q();
  if (q <= 2) return 1;
  return group_->phase_index(t_, q - 1) == 0 ? 1 : -1;
}

std::complex<double> DirichletCharacter::operator()(std::uint64_t a) const {
  if (!group_->is_unit(a)) return {0.0, 0.0};
  return group_->root(group_->phase_index(t_, a % group_->q()));
}

DirichletCharacter DirichletCharacter::conjugate() const {
  std::vector<std::uint32_t> u(t_.size());
  const auto& coords = group_->coords();
  for (std::size_t i = 0; i < t_.size(); ++i)
    u[i] = t_[i] == 0 ? 0
                      : static_cast<std::uint32_t>(coords[i].order - t_[i]);
  return DirichletCharacter(group_, std::move(u));
}

const std::vector<std::complex<double>>& DirichletCharacter::table() const {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (!table_) {
    auto tab = std::make_shared<std::vector<std::complex<double>>>();
    const std::uint64_t q = group_->q();
    tab->resize(q == 1 ? 1 : q);
    for (std::uint64_t a = 0; a < tab->size(); ++a)
      (*tab)[a] = (*this)(a);
    table_ = std::move(tab);
  }
  return *table_;
}

std::vector<DirichletCharacter> character_group(const Modulus& mod) {
  GroupPtr g = character_group_cache(mod.q);
  std::vector<DirichletCharacter> out;
  out.reserve(g->size());
  std::vector<std::uint32_t> t(g->coords().size(), 0);
  for (;;) {
    out.emplace_back(g, t);
    // Odometer increment, least-significant coordinate first, so the
    // canonical index is just the emission order.
    std::size_t i = 0;
    while (i < t.size()) {
      if (++t[i] < g->coords()[i].order) break;
      t[i] = 0;
      ++i;
    }
    if (i == t.size()) break;
  }
  if (out.size() != g->size())
    throw DataError("character enumeration does not match phi(q)");
  return out;
}

std::vector<DirichletCharacter> character_group(std::uint64_t q) {
  return character_group(make_modulus(q));
}

DirichletCharacter character_by_index(std::uint64_t q, std::uint64_t index) {
  GroupPtr g = character_group_cache(q);
  std::vector<std::uint32_t> t(g->coords().size());
  std::uint64_t rem = index;
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = static_cast<std::uint32_t>(rem % g->coords()[i].order);
    rem /= g->coords()[i].order;
  }
  if (rem != 0) throw ConfigError("character index out of range");
  return DirichletCharacter(g, std::move(t));
}

DirichletCharacter primitive_inducer(const DirichletCharacter& chi) {
  const std::uint64_t f = chi.conductor();
  const CharacterGroup& G = chi.group();
  if (f == G.q()) return chi;
  GroupPtr Gs = character_group_cache(f);
  const std::uint64_t m = G.exponent(), ms = Gs->exponent();

  const Modulus& qm = G.modulus();
  const Modulus& fm = Gs->modulus();
  std::vector<std::uint32_t> ts(Gs->coords().size());
  for (std::size_t j = 0; j < Gs->coords().size(); ++j) {
    // c_j: the unit mod f that is this coordinate's generator and 1 on
    // every other prime-power block of f.
    std::uint64_t cj = 0, step = 1;
    {
      // CRT assembly over the factors of f.
      std::uint64_t x = 0, mprod = 1;
      for (const auto& [p, e] : fm.factors) {
        std::uint64_t pe = 1;
        for (unsigned i = 0; i < e; ++i) pe *= p;
        const std::uint64_t want =
            (p == Gs->coords()[j].prime) ? Gs->coords()[j].gen % pe : 1;
        // Solve x = prev (mod mprod), x = want (mod pe).
        const std::uint64_t inv = inv_mod(mprod % pe, pe);
        const std::uint64_t diff = (want + pe - x % pe) % pe;
        x = x + mprod * mul_mod(inv, diff, pe);
        mprod *= pe;
      }
      cj = x % fm.q;
      step = mprod;
    }
    (void)step;
    // Lift to a unit mod q congruent to c_j mod f.
    std::uint64_t a = 0, mprod = 1;
    for (const auto& [p, e] : qm.factors) {
      std::uint64_t pe = 1;
      for (unsigned i = 0; i < e; ++i) pe *= p;
      const std::uint64_t want = (f % p == 0) ? cj % pe_of(fm, p) : 1;
      const std::uint64_t inv = inv_mod(mprod % pe, pe);
      const std::uint64_t diff = (want + pe - a % pe) % pe;
      a = a + mprod * mul_mod(inv, diff, pe);
      mprod *= pe;
    }
    a %= qm.q;

    const std::uint64_t e = G.phase_index(chi.exponents(), a);
    if ((e * ms) % m != 0)
      throw DataError("inducer phase is not a root of unity of the subgroup");
    const std::uint64_t es = (e * ms / m) % ms;
    const std::uint64_t w = Gs->weight(j);
    if (es % w != 0) throw DataError("inducer digit not integral");
    ts[j] = static_cast<std::uint32_t>((es / w) % Gs->coords()[j].order);
  }
  DirichletCharacter star(Gs, std::move(ts));
  if (star.conductor() != f)
    throw DataError("inducer is not primitive at the conductor");
  return star;
}

std::uint64_t primitive_label(const DirichletCharacter& chi) {
  if (!chi.is_primitive())
    throw ConfigError("labels are defined for primitive characters only");
  if (chi.modulus() >> 32)
    throw ConfigError("conductor too large for packed label");
  return (chi.modulus() << 32) | chi.index();
}

OrthogonalityReport verify_orthogonality_exact(const CharacterGroup& g) {
  OrthogonalityReport rep;
  rep.q = g.q();
  const std::uint64_t m = g.exponent();
  const std::uint64_t q = g.q();

  // Units once; for q = 1 the single residue 0 stands for the trivial
  // class.
  std::vector<std::uint64_t> units;
  for (std::uint64_t a = 0; a < std::max<std::uint64_t>(q, 1); ++a)
    if (g.is_unit(a)) units.push_back(a);

  // Direction 1: sum_a chi(a) over units, for every chi. The phase map
  // a -> e(a) is a homomorphism onto the subgroup g'Z/m; the sum is a
  // balanced sum of distinct (m/g')-th roots of unity, which vanishes
  // identically iff every fiber has equal integer count and m/g' > 1.
  // Products chi * conj(chi') are again group members (digitwise
  // subtraction), so this covers all pairwise relations.
  bool dir1 = true;
  std::vector<std::uint32_t> t(g.coords().size(), 0);
  std::vector<std::uint64_t> hist(m);
  for (;;) {
    std::uint64_t phase_gcd = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
      phase_gcd = gcd_u64(phase_gcd, t[i] * g.weight(i));
    const std::uint64_t gp = gcd_u64(m, phase_gcd);  // m when principal
    std::fill(hist.begin(), hist.end(), 0);
    for (std::uint64_t a : units) ++hist[g.phase_index(t, a)];
    if (gp == m) {
      // Principal: all phases must be 0 and the total must be phi(q).
      if (hist[0] != units.size() || units.size() != g.size()) dir1 = false;
    } else {
      const std::uint64_t classes = m / gp;
      const std::uint64_t expect = g.size() / classes;
      if (g.size() % classes != 0) dir1 = false;
      for (std::uint64_t j = 0; j < m; ++j) {
        const std::uint64_t want = (j % gp == 0) ? expect : 0;
        if (hist[j] != want) {
          dir1 = false;
          break;
        }
      }
    }
    ++rep.characters_checked;
    std::size_t i = 0;
    while (i < t.size()) {
      if (++t[i] < g.coords()[i].order) break;
      t[i] = 0;
      ++i;
    }
    if (i == t.size()) break;
  }
  rep.character_sums_ok = dir1;

  // Direction 2: sum_chi chi(c) factors as prod_i (d_i * [x_i(c) = 0]),
  // an exact integer identity, so it vanishes for every unit c with a
  // nonzero digit and equals phi(q) only at c = 1. It suffices that the
  // digit map sends exactly c = 1 to the zero vector. Pairs reduce to
  // this via c = a * b^{-1}.
  bool dir2 = true;
  for (std::uint64_t c : units) {
    const auto d = g.digits(c);
    const bool allzero =
        std::all_of(d.begin(), d.end(), [](std::uint32_t x) { return x == 0; });
    const bool is_one = (q == 1) || (c == 1);
    if (allzero != is_one) {
      dir2 = false;
      break;
    }
    ++rep.residues_checked;
  }
  rep.residue_sums_ok = dir2;
  return rep;
}

}  // namespace primerace
