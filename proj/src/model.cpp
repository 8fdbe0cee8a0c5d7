#include "primerace/model.hpp"

#include <cmath>
#include <cstring>

#include "primerace/characters.hpp"
#include "primerace/parallel.hpp"

namespace primerace {

namespace {

// Lane types for the float phase kernel: 8 x u64 counters feed two
// 24-bit fields each, giving 16 float phases per mix batch. Element-wise
// semantics keep the SIMD and fallback forms bit-identical; lane sums go
// through pinned fold trees only.
#if defined(__GNUC__) || defined(__clang__)
typedef std::uint64_t v8u64 __attribute__((vector_size(64), aligned(8), may_alias));
typedef std::uint32_t v8u32 __attribute__((vector_size(32), aligned(4), may_alias));
typedef float v8f __attribute__((vector_size(32), aligned(4), may_alias));

inline v8f v8f_broadcast(float x) { return v8f{x, x, x, x, x, x, x, x}; }
inline v8f v8f_load(const float* p) { return *reinterpret_cast<const v8f*>(p); }
inline v8u32 narrow_u64(const v8u64& x) {
  return __builtin_convertvector(x, v8u32);
}
inline v8f to_float(const v8u32& x) { return __builtin_convertvector(x, v8f); }
#else
struct v8u64 {
  std::uint64_t e[8];
  std::uint64_t operator[](int i) const { return e[i]; }
  std::uint64_t& operator[](int i) { return e[i]; }
};
struct v8u32 {
  std::uint32_t e[8];
};
struct v8f {
  float e[8];
  float operator[](int i) const { return e[i]; }
  float& operator[](int i) { return e[i]; }
};
inline v8u64 operator>>(v8u64 a, int s) { for (auto& x : a.e) x >>= s; return a; }
inline v8u64 operator&(v8u64 a, std::uint64_t m) { for (auto& x : a.e) x &= m; return a; }
inline v8u64 operator^(v8u64 a, const v8u64& b) { for (int i = 0; i < 8; ++i) a.e[i] ^= b.e[i]; return a; }
inline v8u64& operator^=(v8u64& a, const v8u64& b) { a = a ^ b; return a; }
inline v8u64 operator*(v8u64 a, std::uint64_t m) { for (auto& x : a.e) x *= m; return a; }
inline v8u64 operator+(v8u64 a, std::uint64_t m) { for (auto& x : a.e) x += m; return a; }
inline v8u64& operator+=(v8u64& a, const v8u64& b) { for (int i = 0; i < 8; ++i) a.e[i] += b.e[i]; return a; }
inline v8f operator+(v8f a, const v8f& b) { for (int i = 0; i < 8; ++i) a.e[i] += b.e[i]; return a; }
inline v8f operator-(v8f a, const v8f& b) { for (int i = 0; i < 8; ++i) a.e[i] -= b.e[i]; return a; }
inline v8f operator*(v8f a, const v8f& b) { for (int i = 0; i < 8; ++i) a.e[i] *= b.e[i]; return a; }
inline v8f& operator+=(v8f& a, const v8f& b) { a = a + b; return a; }
inline v8f& operator-=(v8f& a, const v8f& b) { a = a - b; return a; }
inline v8f v8f_broadcast(float x) { v8f r; for (auto& f : r.e) f = x; return r; }
inline v8f v8f_load(const float* p) { v8f r; for (int i = 0; i < 8; ++i) r.e[i] = p[i]; return r; }
inline v8u32 narrow_u64(const v8u64& x) { v8u32 r; for (int i = 0; i < 8; ++i) r.e[i] = std::uint32_t(x.e[i]); return r; }
inline v8f to_float(const v8u32& x) { v8f r; for (int i = 0; i < 8; ++i) r.e[i] = float(x.e[i]); return r; }
#endif

inline v8u64 mix8(v8u64 z) {
  z ^= z >> 30;
  z = z * 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z = z * 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline v8u64 lane_keys(std::uint64_t base) {
  v8u64 k;
  for (int l = 0; l < 8; ++l) k[l] = base + kGolden * std::uint64_t(l + 1);
  return k;
}

inline v8u64 key_step() {
  v8u64 s;
  for (int l = 0; l < 8; ++l) s[l] = kGolden * 8;
  return s;
}

inline double fold8f(const v8f& a) {
  const double s01 = double(a[0]) + double(a[1]);
  const double s23 = double(a[2]) + double(a[3]);
  const double s45 = double(a[4]) + double(a[5]);
  const double s67 = double(a[6]) + double(a[7]);
  return (s01 + s23) + (s45 + s67);
}

// Float copies of the double trig tables; degree 10/9 in t^2 keeps the
// truncation edge near 4e-9, below the float roundoff already present.
struct TrigF {
  float c[11];
  float s[10];
};
inline TrigF make_trigf() {
  TrigF t{};
  for (int k = 0; k < 11; ++k) t.c[k] = float(detail::kTrig.c[k]);
  for (int k = 0; k < 10; ++k) t.s[k] = float(detail::kTrig.s[k]);
  return t;
}
const TrigF kTrigF = make_trigf();

inline v8f poly_cos(const v8f& z) {
  v8f p = v8f_broadcast(kTrigF.c[10]);
  for (int k = 9; k >= 0; --k) p = p * z + v8f_broadcast(kTrigF.c[k]);
  return p;  // equals cos(2 pi t); caller subtracts (phase shift by pi)
}
inline v8f poly_sin(const v8f& z) {
  v8f p = v8f_broadcast(kTrigF.s[9]);
  for (int k = 8; k >= 0; --k) p = p * z + v8f_broadcast(kTrigF.s[k]);
  return p;  // sin(2 pi t) / t; caller multiplies by t and subtracts
}

// Weighted cosine sum over one member's padded float weights. Ordinates
// 16i..16i+7 take the top field of lanes 0..7, 16i+8..16i+15 the middle
// field; u = field * 2^-24, phase = 2 pi u.
double kernel_cos(const float* w, std::uint64_t blocks, std::uint64_t base) {
  v8u64 keys = lane_keys(base);
  const v8u64 step = key_step();
  v8f acc0 = v8f_broadcast(0.0f), acc1 = v8f_broadcast(0.0f);
  const v8f half = v8f_broadcast(0.5f), scale = v8f_broadcast(0x1.0p-24f);
  for (std::uint64_t i = 0; i < blocks; ++i) {
    const v8u64 h = mix8(keys);
    keys += step;
    const v8f te = to_float(narrow_u64(h >> 40)) * scale - half;
    const v8f to = to_float(narrow_u64((h >> 16) & 0xFFFFFF)) * scale - half;
    acc0 -= v8f_load(w + 16 * i) * poly_cos(te * te);
    acc1 -= v8f_load(w + 16 * i + 8) * poly_cos(to * to);
  }
  return fold8f(acc0) + fold8f(acc1);
}

void kernel_cossin(const float* w, std::uint64_t blocks, std::uint64_t base,
                   double* sc, double* ss) {
  v8u64 keys = lane_keys(base);
  const v8u64 step = key_step();
  v8f ac0 = v8f_broadcast(0.0f), ac1 = v8f_broadcast(0.0f);
  v8f as0 = v8f_broadcast(0.0f), as1 = v8f_broadcast(0.0f);
  const v8f half = v8f_broadcast(0.5f), scale = v8f_broadcast(0x1.0p-24f);
  for (std::uint64_t i = 0; i < blocks; ++i) {
    const v8u64 h = mix8(keys);
    keys += step;
    const v8f te = to_float(narrow_u64(h >> 40)) * scale - half;
    const v8f to = to_float(narrow_u64((h >> 16) & 0xFFFFFF)) * scale - half;
    const v8f ze = te * te, zo = to * to;
    const v8f w0 = v8f_load(w + 16 * i), w1 = v8f_load(w + 16 * i + 8);
    ac0 -= w0 * poly_cos(ze);
    ac1 -= w1 * poly_cos(zo);
    as0 -= w0 * (te * poly_sin(ze));
    as1 -= w1 * (to * poly_sin(zo));
  }
  *sc = fold8f(ac0) + fold8f(ac1);
  *ss = fold8f(as0) + fold8f(as1);
}

}  // namespace

MCEstimate make_mc_estimate(std::uint64_t hits, std::uint64_t samples,
                            std::uint64_t seed, std::uint64_t stream) {
  if (samples < 1) throw ConfigError("estimate needs at least one sample");
  MCEstimate e;
  e.samples = samples;
  e.estimate = double(hits) / double(samples);
  e.std_error =
      std::sqrt(e.estimate * (1.0 - e.estimate) / double(samples));
  e.seed = seed;
  e.stream = stream;
  return e;
}

XSampler::XSampler(const RaceTuple& race, const ZeroRepository& repo,
                   bool include_shifts)
    : race_(race), n_(int(race.contestants.size())) {
  const std::uint64_t q = race_.mod.q;
  const auto chars = character_group(q);
  const VarianceBreakdown vb = variance_breakdown(q, repo);
  if (!(vb.head > 0.0))
    throw NotPositiveDefinite(
        "sampler: variance vanishes; zero data too shallow");
  variance_ = vb.head;
  variance_tail_ = vb.tail;
  norm_ = 1.0 / std::sqrt(variance_);

  shifts_.assign(std::size_t(n_), 0.0);
  if (include_shifts)
    for (int i = 0; i < n_; ++i)
      shifts_[std::size_t(i)] =
          -double(c_shift(race_.mod, race_.contestants[std::size_t(i)]));

  for (const auto& chi : chars) {
    if (chi.is_principal()) continue;
    const ZeroSet& zs = repo.for_character(chi);
    Member m;
    m.label = zs.label();
    m.weights.reserve(zs.gammas.size());
    for (const double g : zs.gammas)
      m.weights.push_back(1.0 / std::sqrt(0.25 + g * g));
    const std::size_t padded = (zs.gammas.size() + 15) / 16 * 16;
    m.weights_f.assign(padded, 0.0f);
    for (std::size_t j = 0; j < m.weights.size(); ++j)
      m.weights_f[j] = float(m.weights[j]);
    m.re_coef.resize(std::size_t(n_));
    m.im_coef.resize(std::size_t(n_));
    for (int i = 0; i < n_; ++i) {
      const std::complex<double> v = chi(race_.contestants[std::size_t(i)]);
      m.re_coef[std::size_t(i)] = 2.0 * v.real();
      m.im_coef[std::size_t(i)] = -2.0 * v.imag();
    }
    zero_count_ += m.weights.size();
    members_.push_back(std::move(m));
  }
}

void XSampler::sample(const Stream& rng, std::uint64_t draw_index,
                      double* out) const {
  // One code path with sample_with keeps the replay guarantee exact; two
  // hand-written accumulation loops can contract differently.
  sample_with(draw_phases(rng, draw_index), out);
}

Vec XSampler::sample(const Stream& rng, std::uint64_t draw_index) const {
  Vec x(n_);
  sample(rng, draw_index, x.data());
  return x;
}

void XSampler::sample_with(const PhaseAssignment& u, double* out) const {
  for (int i = 0; i < n_; ++i) out[i] = shifts_[std::size_t(i)];
  for (const Member& m : members_) {
    const auto it = u.phases.find(m.label);
    if (it == u.phases.end())
      throw ConfigError("phase assignment misses a character member");
    if (it->second.size() != m.weights.size())
      throw ConfigError("phase assignment ordinate count mismatch");
    double sc = 0.0, ss = 0.0;
    for (std::size_t j = 0; j < m.weights.size(); ++j) {
      const std::complex<double> ph = it->second[j];
      if (std::abs(std::norm(ph) - 1.0) > 1e-9)
        throw ConfigError("phase assignment entry leaves the unit circle");
      sc += m.weights[j] * ph.real();
      ss += m.weights[j] * ph.imag();
    }
    for (int i = 0; i < n_; ++i)
      out[i] += m.re_coef[std::size_t(i)] * sc + m.im_coef[std::size_t(i)] * ss;
  }
  for (int i = 0; i < n_; ++i) out[i] *= norm_;
}

Vec XSampler::sample_with(const PhaseAssignment& u) const {
  Vec x(n_);
  sample_with(u, x.data());
  return x;
}

PhaseAssignment XSampler::draw_phases(const Stream& rng,
                                      std::uint64_t draw_index) const {
  PhaseAssignment pa;
  for (const Member& m : members_) {
    const Stream ms{stream_seed(rng.seed, m.label)};
    const std::uint64_t off = draw_index * m.weights.size();
    std::vector<std::complex<double>> ph;
    ph.reserve(m.weights.size());
    for (std::size_t j = 0; j < m.weights.size(); ++j) {
      double c, s;
      cossin2pi(ms.uniform(off + j), c, s);
      ph.emplace_back(c, s);
    }
    pa.phases.emplace(m.label, std::move(ph));
  }
  return pa;
}

PhaseAssignment XSampler::constant_phases(std::complex<double> u) const {
  if (std::abs(std::norm(u) - 1.0) > 1e-9)
    throw ConfigError("constant phase must lie on the unit circle");
  PhaseAssignment pa;
  for (const Member& m : members_)
    pa.phases.emplace(m.label,
                      std::vector<std::complex<double>>(m.weights.size(), u));
  return pa;
}

ZSampler::ZSampler(CovarianceModel model) : model_(std::move(model)) {}

void ZSampler::sample(const Stream& rng, std::uint64_t draw_index,
                      double* out) const {
  const int n = int(model_.n);
  const std::uint64_t per_draw = 2 * std::uint64_t((n + 1) / 2);
  const std::uint64_t off = draw_index * per_draw;
  double z[2];
  for (int i = 0; i < n; ++i) out[i] = 0.0;
  for (int j = 0; j < n; j += 2) {
    normal_pair(rng.uniform(off + std::uint64_t(j)),
                rng.uniform(off + std::uint64_t(j) + 1), z[0], z[1]);
    const int take = (j + 1 < n) ? 2 : 1;
    for (int t = 0; t < take; ++t) {
      const double zj = z[t];
      const int col = j + t;
      // Lower-triangular accumulate: out += L.col(col) * z_col.
      for (int i = col; i < n; ++i) out[i] += model_.L(i, col) * zj;
    }
  }
}

Vec ZSampler::sample(const Stream& rng, std::uint64_t draw_index) const {
  Vec x(n());
  sample(rng, draw_index, x.data());
  return x;
}

Vec sample_X(const RaceTuple& race, const ZeroRepository& repo,
             const Stream& rng, std::uint64_t draw_index) {
  return XSampler(race, repo).sample(rng, draw_index);
}

Vec sample_Z(const CovarianceModel& model, const Stream& rng,
             std::uint64_t draw_index) {
  return ZSampler(model).sample(rng, draw_index);
}

namespace {

// Per-member plan for the float kernel: which trig sums a given ordering
// spec can feel through this member. A member whose coefficients agree on
// every compared pair shifts both sides of each comparison equally.
struct MemberPlan {
  const XSampler::Member* m = nullptr;
  std::uint64_t char_seed = 0;
  std::uint64_t blocks = 0;
  bool use_cos = false;
  bool use_sin = false;
};

std::vector<MemberPlan> plan_members(const XSampler& sampler,
                                     const OrderingSpec* spec,
                                     std::uint64_t est_seed) {
  std::vector<MemberPlan> plans;
  for (const auto& m : sampler.members()) {
    MemberPlan p;
    p.m = &m;
    p.char_seed = stream_seed(est_seed, m.label);
    p.blocks = m.weights_f.size() / 16;
    if (spec == nullptr) {
      for (double v : m.re_coef) p.use_cos |= (v != 0.0);
      for (double v : m.im_coef) p.use_sin |= (v != 0.0);
    } else {
      for (const auto& [i, j] : spec->pairs) {
        p.use_cos |= m.re_coef[std::size_t(i - 1)] !=
                     m.re_coef[std::size_t(j - 1)];
        p.use_sin |= m.im_coef[std::size_t(i - 1)] !=
                     m.im_coef[std::size_t(j - 1)];
      }
    }
    if (p.use_cos || p.use_sin) plans.push_back(p);
  }
  return plans;
}

// One draw's components from the float kernel, unnormalized, shifts in.
inline void kernel_components(const std::vector<MemberPlan>& plans,
                              const std::vector<double>& shifts,
                              std::uint64_t s, double* comps, int n) {
  for (int i = 0; i < n; ++i) comps[i] = shifts[std::size_t(i)];
  for (const MemberPlan& p : plans) {
    const std::uint64_t base = Stream{p.char_seed}.bits(s);
    double sc = 0.0, ss = 0.0;
    if (p.use_sin)
      kernel_cossin(p.m->weights_f.data(), p.blocks, base, &sc, &ss);
    else
      sc = kernel_cos(p.m->weights_f.data(), p.blocks, base);
    for (int i = 0; i < n; ++i)
      comps[i] += p.m->re_coef[std::size_t(i)] * sc +
                  p.m->im_coef[std::size_t(i)] * ss;
  }
}

constexpr std::uint64_t kXChunk = 1024;
constexpr std::uint64_t kZChunk = 65536;

}  // namespace

MCEstimate estimate_ordering(const XSampler& sampler, const OrderingSpec& spec,
                             std::uint64_t N, std::uint64_t seed, int threads,
                             std::uint64_t stream) {
  if (N < 1) throw ConfigError("estimate needs at least one sample");
  if (spec.n != sampler.n())
    throw ConfigError("ordering dimension does not match the race");
  const std::uint64_t est_seed = stream_seed(seed, stream);
  const auto plans = plan_members(sampler, &spec, est_seed);
  const int n = sampler.n();

  const std::uint64_t hits = chunked_reduce<std::uint64_t>(
      N, kXChunk, threads,
      [&](std::uint64_t, std::uint64_t b, std::uint64_t e) {
        std::vector<double> comps(std::size_t(n), 0.0);
        std::uint64_t local = 0;
        for (std::uint64_t s = b; s < e; ++s) {
          kernel_components(plans, sampler.shifts(), s, comps.data(), n);
          local += in_region(spec, comps.data());
        }
        return local;
      },
      std::uint64_t(0),
      [](std::uint64_t a, std::uint64_t b) { return a + b; });
  return make_mc_estimate(hits, N, seed, stream);
}

MCEstimate estimate_ordering(const ZSampler& sampler, const OrderingSpec& spec,
                             std::uint64_t N, std::uint64_t seed, int threads,
                             std::uint64_t stream) {
  if (N < 1) throw ConfigError("estimate needs at least one sample");
  if (spec.n != sampler.n())
    throw ConfigError("ordering dimension does not match the model");
  const Stream est{stream_seed(seed, stream)};
  const int n = sampler.n();

  const std::uint64_t hits = chunked_reduce<std::uint64_t>(
      N, kZChunk, threads,
      [&](std::uint64_t, std::uint64_t b, std::uint64_t e) {
        std::vector<double> x(std::size_t(n), 0.0);
        std::uint64_t local = 0;
        for (std::uint64_t s = b; s < e; ++s) {
          sampler.sample(est, s, x.data());
          local += in_region(spec, x.data());
        }
        return local;
      },
      std::uint64_t(0),
      [](std::uint64_t a, std::uint64_t b) { return a + b; });
  return make_mc_estimate(hits, N, seed, stream);
}

namespace {

struct MomentPartial {
  Vec s1;
  Mat s2, t3, t4;
  void init(int n) {
    s1 = Vec::Zero(n);
    s2 = Mat::Zero(n, n);
    t3 = Mat::Zero(n, n);
    t4 = Mat::Zero(n, n);
  }
};

}  // namespace

XCovarianceEstimate estimate_x_covariance(const XSampler& sampler,
                                          std::uint64_t N, std::uint64_t seed,
                                          int threads) {
  if (N < 2) throw ConfigError("covariance estimate needs at least 2 samples");
  const std::uint64_t est_seed = stream_seed(seed, 0);
  const auto plans = plan_members(sampler, nullptr, est_seed);
  const int n = sampler.n();
  const double norm = 1.0 / std::sqrt(sampler.variance());

  MomentPartial acc;
  acc.init(n);
  acc = chunked_reduce<MomentPartial>(
      N, kXChunk, threads,
      [&](std::uint64_t, std::uint64_t b, std::uint64_t e) {
        MomentPartial part;
        part.init(n);
        std::vector<double> comps(std::size_t(n), 0.0);
        for (std::uint64_t s = b; s < e; ++s) {
          kernel_components(plans, sampler.shifts(), s, comps.data(), n);
          for (int i = 0; i < n; ++i) comps[std::size_t(i)] *= norm;
          for (int i = 0; i < n; ++i) {
            const double xi = comps[std::size_t(i)];
            part.s1(i) += xi;
            for (int j = 0; j < n; ++j) {
              const double xj = comps[std::size_t(j)];
              part.s2(i, j) += xi * xj;
              part.t3(i, j) += xi * xi * xj;
              part.t4(i, j) += xi * xi * xj * xj;
            }
          }
        }
        return part;
      },
      std::move(acc),
      [](MomentPartial a, const MomentPartial& p) {
        a.s1 += p.s1;
        a.s2 += p.s2;
        a.t3 += p.t3;
        a.t4 += p.t4;
        return a;
      });

  const double dn = double(N);
  XCovarianceEstimate out;
  out.samples = N;
  out.seed = seed;
  out.tail_fraction = sampler.variance_tail() / sampler.variance();
  out.mean = acc.s1 / dn;
  out.cov = Mat(n, n);
  out.std_error = Mat(n, n);
  // Upper triangle computed once and mirrored: the finalize algebra is not
  // symmetric at the last bit under an i <-> j swap.
  for (int i = 0; i < n; ++i) {
    const double mi = out.mean(i);
    for (int j = i; j < n; ++j) {
      const double mj = out.mean(j);
      const double m2 = acc.s2(i, j) - dn * mi * mj;
      // Centered fourth cross-moment from raw sums.
      const double m22 = acc.t4(i, j) - 2.0 * mj * acc.t3(i, j) -
                         2.0 * mi * acc.t3(j, i) + mj * mj * acc.s2(i, i) +
                         mi * mi * acc.s2(j, j) + 4.0 * mi * mj * acc.s2(i, j) -
                         2.0 * mi * mj * mj * acc.s1(i) -
                         2.0 * mi * mi * mj * acc.s1(j) + dn * mi * mi * mj * mj;
      out.cov(i, j) = m2 / (dn - 1.0);
      out.cov(j, i) = out.cov(i, j);
      const double var_cov = (m22 / dn - (m2 / dn) * (m2 / dn)) / dn;
      out.std_error(i, j) = std::sqrt(std::max(0.0, var_cov));
      out.std_error(j, i) = out.std_error(i, j);
    }
  }
  return out;
}

}  // namespace primerace
