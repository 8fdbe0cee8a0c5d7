#include "primerace/zeros.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "primerace/lfunction.hpp"
#include "primerace/rng.hpp"
#include "primerace/types.hpp"

namespace primerace {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

using cplx = std::complex<double>;

std::uint64_t pack_label(std::uint64_t conductor, std::uint64_t index) {
  return (conductor << 32) | index;
}

double frac(double x) { return x - std::floor(x); }

// Classic Brent root bracketing; assumes fa*fb <= 0 on entry.
template <typename Fn>
double brent_root(Fn&& fn, double a, double b, double fa, double fb, double tol) {
  double c = b, fc = fb, d = b - a, e = d;
  for (int iter = 0; iter < 120; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      e = d = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = fn(b);
  }
  return b;
}

// Eight-lane value type for the hot loops. All lane arithmetic is
// element-wise IEEE, so results are bit-identical whether the compiler
// lowers it to one SIMD register or to scalar code; sums over lanes go
// through fold8, which pins the reduction tree.
#if defined(__GNUC__) || defined(__clang__)
typedef double v8d __attribute__((vector_size(64), aligned(8), may_alias));
inline v8d v8broadcast(double x) { return v8d{x, x, x, x, x, x, x, x}; }
inline v8d v8load(const double* p) { return *reinterpret_cast<const v8d*>(p); }
inline void v8store(double* p, const v8d& x) { *reinterpret_cast<v8d*>(p) = x; }
#else
struct v8d {
  double e[8];
  double operator[](int i) const { return e[i]; }
  double& operator[](int i) { return e[i]; }
};
inline v8d operator+(v8d a, const v8d& b) { for (int i = 0; i < 8; ++i) a.e[i] += b.e[i]; return a; }
inline v8d operator-(v8d a, const v8d& b) { for (int i = 0; i < 8; ++i) a.e[i] -= b.e[i]; return a; }
inline v8d operator*(v8d a, const v8d& b) { for (int i = 0; i < 8; ++i) a.e[i] *= b.e[i]; return a; }
inline v8d operator-(v8d a) { for (int i = 0; i < 8; ++i) a.e[i] = -a.e[i]; return a; }
inline v8d& operator+=(v8d& a, const v8d& b) { a = a + b; return a; }
inline v8d v8broadcast(double x) { return v8d{{x, x, x, x, x, x, x, x}}; }
inline v8d v8load(const double* p) {
  v8d r;
  for (int i = 0; i < 8; ++i) r.e[i] = p[i];
  return r;
}
inline void v8store(double* p, const v8d& x) {
  for (int i = 0; i < 8; ++i) p[i] = x.e[i];
}
#endif

inline v8d v8zero() { return v8broadcast(0.0); }

inline double fold8(const v8d& x) {
  const double s01 = x[0] + x[1], s23 = x[2] + x[3];
  const double s45 = x[4] + x[5], s67 = x[6] + x[7];
  return (s01 + s23) + (s45 + s67);
}

// Scan state for one primitive character: the boundary function
// Z(t) = Re[omega e^{i theta(t)} L(1/2 + it)] walked along a uniform grid.
// Head terms chi(n) n^{-1/2-it} live in SoA arrays and advance by one
// per-term rotator multiply per step; the Euler-Maclaurin tail is evaluated
// every step from incrementally rotated x^{-s} factors. Rotators come from
// libm (phase-exact per step); full phases are refreshed from the
// polynomial cos/sin every RESYNC steps, so amplitude drift never
// accumulates past ~1e-13.
struct Scanner {
  std::uint64_t f = 0;
  int a = 0;  // parity exponent: 0 even, 1 odd
  cplx omega{1.0, 0.0};
  double lnf = 0.0;
  double inv_sqrt_f = 1.0;
  std::vector<cplx> chi_table;

  // head term slots, ascending n
  std::vector<double> vre, vim;  // current chi(n) n^{-1/2} e^{-it ln n}
  std::vector<double> rre, rim;  // e^{-ih ln n}
  std::vector<double> cre, cim;  // chi(n) n^{-1/2}
  std::vector<double> lnn, l2p;  // ln n, ln n / 2 pi
  std::vector<std::uint64_t> nval;
  int m_have = 0;

  // tail state per reduced residue, SoA
  std::vector<double> tcre, tcim;    // chi(r)
  std::vector<double> rfrac;         // r / f
  std::vector<double> tx;            // current x = m + r/f
  std::vector<double> ture, tuim;    // x^{-1/2 - it}
  std::vector<double> tsre, tsim;    // e^{-ih ln x}
  std::vector<double> temre, temim;  // scratch: per-residue tail series value
  int m_tail = 0;

  double h = 0.0;

  static constexpr int kWindow = 64;    // steps assembled per pass
  static constexpr int kResync = 512;   // steps between phase refreshes
  static constexpr std::size_t kBlock = 512;  // slots kept L1-hot

  explicit Scanner(const DirichletCharacter& chi)
      : f(chi.modulus()), a(chi.parity() > 0 ? 0 : 1), chi_table(chi.table()) {
    const cplx eps = root_number(chi);
    omega = std::exp(cplx(0.0, -0.5 * std::arg(eps)));
    lnf = std::log(double(f));
    inv_sqrt_f = 1.0 / std::sqrt(double(f));
    for (std::uint64_t r = 1; r <= f; ++r) {
      const cplx c = chi_table[r % f];
      if (c == 0.0) continue;
      tcre.push_back(c.real());
      tcim.push_back(c.imag());
      rfrac.push_back(double(r) / double(f));
    }
    const std::size_t n = rfrac.size();
    tx.resize(n);
    ture.resize(n);
    tuim.resize(n);
    tsre.resize(n);
    tsim.resize(n);
    temre.resize(n);
    temim.resize(n);
  }

  double theta(double t) const {
    const cplx z(0.25 + 0.5 * a, 0.5 * t);
    return log_gamma(z).imag() + 0.5 * t * (lnf - std::log(kPi));
  }

  // Append slots for n in (f*m_have, f*m], phases exact at time t.
  void ensure_terms(int m, double t) {
    for (std::uint64_t n = std::uint64_t(m_have) * f + 1; n <= std::uint64_t(m) * f; ++n) {
      const cplx c = chi_table[n % f];
      if (c == 0.0) continue;
      const double ln = std::log(double(n));
      const double amp = 1.0 / std::sqrt(double(n));
      nval.push_back(n);
      lnn.push_back(ln);
      l2p.push_back(ln / kTwoPi);
      cre.push_back(c.real() * amp);
      cim.push_back(c.imag() * amp);
      const double phi = t * ln;
      const double pc = std::cos(phi), ps = std::sin(phi);
      vre.push_back(cre.back() * pc + cim.back() * ps);
      vim.push_back(cim.back() * pc - cre.back() * ps);
      const double sp = h * ln;
      rre.push_back(std::cos(sp));
      rim.push_back(-std::sin(sp));
    }
    m_have = m;
  }

  // Refresh every slot's phase at time t from the polynomial tables
  // (absolute error ~2e-13, not cumulative).
  void resync_terms(double t) {
    const std::size_t n = vre.size();
    for (std::size_t k = 0; k < n; ++k) {
      double pc, ps;
      cossin2pi(frac(t * l2p[k]), pc, ps);
      vre[k] = cre[k] * pc + cim[k] * ps;
      vim[k] = cim[k] * pc - cre[k] * ps;
    }
  }

  void setup_tail(int m, double t) {
    const std::size_t n = rfrac.size();
    for (std::size_t k = 0; k < n; ++k) {
      const double x = double(m) + rfrac[k];
      const double lnx = std::log(x);
      tx[k] = x;
      const double amp = 1.0 / std::sqrt(x);
      const double phi = t * lnx;
      ture[k] = amp * std::cos(phi);
      tuim[k] = -amp * std::sin(phi);
      const double sp = h * lnx;
      tsre[k] = std::cos(sp);
      tsim[k] = -std::sin(sp);
    }
    m_tail = m;
  }

  // Shared s-dependent Euler-Maclaurin coefficients c_l = B_{2l}/(2l)! (s)_{2l-1}.
  static void em_coeffs(cplx s, cplx* cl) {
    cplx rising = s;
    for (int l = 1; l <= 16; ++l) {
      cl[l] = bernoulli_over_factorial(l) * rising;
      rising *= (s + double(2 * l - 1)) * (s + double(2 * l));
    }
  }

  // Tail value at t from the current rotator state, then advance one step.
  cplx tail_eval_advance(double t) {
    const cplx s(0.5, t);
    const cplx inv_sm1 = 1.0 / (s - 1.0);
    cplx cl[17];
    em_coeffs(s, cl);
    const std::size_t n = rfrac.size();
    double* __restrict emr = temre.data();
    double* __restrict emi = temim.data();
    double* __restrict ur = ture.data();
    double* __restrict ui = tuim.data();
    const double* __restrict sr = tsre.data();
    const double* __restrict si = tsim.data();
    const double* __restrict xs = tx.data();
    const double c1r = inv_sm1.real(), c1i = inv_sm1.imag();
    for (std::size_t k = 0; k < n; ++k) {
      const double x = xs[k];
      const double y = 1.0 / (x * x);
      // Horner gives sum_l c_l y^{l-1}; the series wants x^{1-2l} = y^{l-1}/x.
      double pr = cl[16].real(), pi = cl[16].imag();
      for (int l = 15; l >= 1; --l) {
        pr = pr * y + cl[l].real();
        pi = pi * y + cl[l].imag();
      }
      const double br = x * c1r + 0.5 + pr / x;  // bracket = x/(s-1) + 1/2 + P/x
      const double bi = x * c1i + pi / x;
      const double u0 = ur[k], u1 = ui[k];
      emr[k] = u0 * br - u1 * bi;
      emi[k] = u0 * bi + u1 * br;
      ur[k] = u0 * sr[k] - u1 * si[k];
      ui[k] = u0 * si[k] + u1 * sr[k];
    }
    // Character-weighted fold, fixed scalar order.
    double accr = 0.0, acci = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      accr += tcre[k] * emr[k] - tcim[k] * emi[k];
      acci += tcre[k] * emi[k] + tcim[k] * emr[k];
    }
    double pc, ps;
    cossin2pi(frac(t * lnf / kTwoPi), pc, ps);
    return (inv_sqrt_f * cplx(pc, -ps)) * cplx(accr, acci);
  }

  // Z on the grid i*h for i in [0, nsteps].
  std::vector<double> scan(double step, std::int64_t nsteps) {
    h = step;
    m_have = 0;
    m_tail = 0;
    vre.clear(); vim.clear(); rre.clear(); rim.clear();
    cre.clear(); cim.clear(); lnn.clear(); l2p.clear(); nval.clear();

    std::vector<double> z(std::size_t(nsteps) + 1);
    double hre[kWindow], him[kWindow];

    for (std::int64_t i0 = 0; i0 <= nsteps; i0 += kWindow) {
      const std::int64_t i1 = std::min<std::int64_t>(i0 + kWindow - 1, nsteps);
      const int nw = int(i1 - i0 + 1);
      const double t0 = double(i0) * h;
      const int mw = head_multiplier(double(i1) * h, f);
      if (mw > m_have) {
        ensure_terms(mw, t0);
      } else if (i0 > 0 && i0 % kResync == 0) {
        resync_terms(t0);
      }
      if (mw > m_tail || (i0 > 0 && i0 % kResync == 0)) setup_tail(mw, t0);

      for (int j = 0; j < nw; ++j) hre[j] = him[j] = 0.0;

      const std::size_t nslots = vre.size();
      double* __restrict vr = vre.data();
      double* __restrict vi = vim.data();
      const double* __restrict rr = rre.data();
      const double* __restrict ri = rim.data();
      for (std::size_t b = 0; b < nslots; b += kBlock) {
        const std::size_t e = std::min(b + kBlock, nslots);
        const std::size_t efull = b + ((e - b) & ~std::size_t(7));
        for (int j = 0; j < nw; ++j) {
          v8d sre = v8zero(), sim = v8zero();
          for (std::size_t k0 = b; k0 < efull; k0 += 8) {
            const v8d ar = v8load(vr + k0);
            const v8d ai = v8load(vi + k0);
            const v8d wr = v8load(rr + k0);
            const v8d wi = v8load(ri + k0);
            sre += ar;
            sim += ai;
            v8store(vr + k0, ar * wr - ai * wi);
            v8store(vi + k0, ar * wi + ai * wr);
          }
          for (std::size_t k = efull; k < e; ++k) {
            const double ar = vr[k], ai = vi[k];
            sre[int(k - efull)] += ar;
            sim[int(k - efull)] += ai;
            vr[k] = ar * rr[k] - ai * ri[k];
            vi[k] = ar * ri[k] + ai * rr[k];
          }
          hre[j] += fold8(sre);
          him[j] += fold8(sim);
        }
      }

      for (int j = 0; j < nw; ++j) {
        const double t = double(i0 + j) * h;
        const cplx l = cplx(hre[j], him[j]) + tail_eval_advance(t);
        const double th = theta(t);
        double pc, ps;
        cossin2pi(frac(th / kTwoPi), pc, ps);
        z[std::size_t(i0) + j] = ((omega * cplx(pc, ps)) * l).real();
      }
    }
    return z;
  }

  // Taylor model of the head around t0 (radius ~2h), built fresh from the
  // polynomial cos/sin so refinement accuracy is independent of scan drift.
  // Carries per-residue tail abscissas so each query pays only one shared
  // coefficient setup plus a short vector pass.
  struct Local {
    static constexpr int kOrder = 12;
    double t0 = 0.0;
    int m = 0;
    cplx cj[kOrder + 1];
    std::vector<double> xq, lxq, axq;  // x = m + r/f, ln(x)/2pi, x^{-1/2}
  };

  Local build_local(double t0, double thi) const {
    Local loc;
    loc.t0 = t0;
    loc.m = head_multiplier(thi + h, f);
    const std::size_t nres = rfrac.size();
    loc.xq.resize(nres);
    loc.lxq.resize(nres);
    loc.axq.resize(nres);
    for (std::size_t k = 0; k < nres; ++k) {
      const double x = double(loc.m) + rfrac[k];
      loc.xq[k] = x;
      loc.lxq[k] = std::log(x) / kTwoPi;
      loc.axq[k] = 1.0 / std::sqrt(x);
    }

    for (auto& c : loc.cj) c = 0.0;
    const std::uint64_t nmax = std::uint64_t(loc.m) * f;
    std::size_t nact = 0;
    while (nact < nval.size() && nval[nact] <= nmax) ++nact;

    constexpr std::size_t kTile = 2048;
    double pre[kTile], pim[kTile];
    for (std::size_t b = 0; b < nact; b += kTile) {
      const std::size_t nt = std::min(b + kTile, nact) - b;
      const double* __restrict cr = cre.data() + b;
      const double* __restrict ci = cim.data() + b;
      const double* __restrict lp = l2p.data() + b;
      const double* __restrict ln = lnn.data() + b;
      for (std::size_t k = 0; k < nt; ++k) {
        double pc, ps;
        cossin2pi(frac(t0 * lp[k]), pc, ps);
        pre[k] = cr[k] * pc + ci[k] * ps;
        pim[k] = ci[k] * pc - cr[k] * ps;
      }
      const std::size_t ntfull = nt & ~std::size_t(7);
      for (int j = 0; j <= Local::kOrder; ++j) {
        v8d sre = v8zero(), sim = v8zero();
        const double inv = 1.0 / double(j + 1);
        const v8d vinv = v8broadcast(inv);
        for (std::size_t k0 = 0; k0 < ntfull; k0 += 8) {
          const v8d ar = v8load(pre + k0);
          const v8d ai = v8load(pim + k0);
          sre += ar;
          sim += ai;
          // p *= -i ln(n)/(j+1)
          const v8d sc = v8load(ln + k0) * vinv;
          v8store(pre + k0, ai * sc);
          v8store(pim + k0, -(ar * sc));
        }
        for (std::size_t k = ntfull; k < nt; ++k) {
          const double ar = pre[k], ai = pim[k];
          sre[int(k - ntfull)] += ar;
          sim[int(k - ntfull)] += ai;
          const double sc = ln[k] * inv;
          pre[k] = ai * sc;
          pim[k] = -(ar * sc);
        }
        loc.cj[j] += cplx(fold8(sre), fold8(sim));
      }
    }
    return loc;
  }

  double eval_local(const Local& loc, double t) const {
    const double d = t - loc.t0;
    cplx head = loc.cj[Local::kOrder];
    for (int j = Local::kOrder - 1; j >= 0; --j) head = head * d + loc.cj[j];

    const cplx s(0.5, t);
    const cplx inv_sm1 = 1.0 / (s - 1.0);
    cplx cl[17];
    em_coeffs(s, cl);
    const double c1r = inv_sm1.real(), c1i = inv_sm1.imag();
    double accr = 0.0, acci = 0.0;
    const std::size_t nres = loc.xq.size();
    for (std::size_t k = 0; k < nres; ++k) {
      const double x = loc.xq[k];
      const double y = 1.0 / (x * x);
      double pr = cl[16].real(), pi = cl[16].imag();
      for (int l = 15; l >= 1; --l) {
        pr = pr * y + cl[l].real();
        pi = pi * y + cl[l].imag();
      }
      const double br = x * c1r + 0.5 + pr / x;
      const double bi = x * c1i + pi / x;
      double pc, ps;
      cossin2pi(frac(t * loc.lxq[k]), pc, ps);
      const double ur = loc.axq[k] * pc, ui = -loc.axq[k] * ps;
      const double er = ur * br - ui * bi;
      const double ei = ur * bi + ui * br;
      accr += tcre[k] * er - tcim[k] * ei;
      acci += tcre[k] * ei + tcim[k] * er;
    }
    double fc, fs;
    cossin2pi(frac(t * lnf / kTwoPi), fc, fs);
    const cplx l = head + (inv_sqrt_f * cplx(fc, -fs)) * cplx(accr, acci);
    const double th = theta(t);
    double pc, ps;
    cossin2pi(frac(th / kTwoPi), pc, ps);
    return ((omega * cplx(pc, ps)) * l).real();
  }

  // Refine a sign change inside [tlo, thi]; NaN when the exact evaluator
  // does not confirm a bracket even after one widening.
  double refine(double tlo, double thi, double tol) const {
    Local loc = build_local(0.5 * (tlo + thi), thi);
    auto zf = [&](double t) { return eval_local(loc, t); };
    double fa = zf(tlo), fb = zf(thi);
    if (fa * fb > 0.0) {
      tlo = std::max(0.0, tlo - 0.5 * h);
      thi += 0.5 * h;
      fa = zf(tlo);
      fb = zf(thi);
      if (fa * fb > 0.0) return std::numeric_limits<double>::quiet_NaN();
    }
    return brent_root(zf, tlo, thi, fa, fb, tol);
  }
};

}  // namespace

std::uint64_t ZeroSet::label() const { return pack_label(conductor, character_index); }

WeightedZeroSum weighted_zero_sum(const ZeroSet& zs, double density_constant) {
  WeightedZeroSum w;
  for (const double g : zs.gammas) w.head += 1.0 / (0.25 + g * g);
  const double f = double(std::max<std::uint64_t>(zs.conductor, 1));
  const double t = std::max(zs.height, kTwoPi / f);
  w.tail = density_constant * (std::log(f * t / kTwoPi) + 1.0) / (kTwoPi * t);
  return w;
}

ZeroSet compute_zeros(const DirichletCharacter& chi, double height,
                      const ScanConfig& config) {
  if (!(height > 0.0)) throw ConfigError("compute_zeros: height must be positive");
  if (!(config.grid_step > 0.0)) throw ConfigError("compute_zeros: grid step must be positive");
  if (chi.is_principal())
    throw ConfigError("compute_zeros: principal characters are outside the model");
  if (!chi.is_primitive())
    throw ConfigError("compute_zeros: needs a primitive character (use its inducer)");

  const std::uint64_t f = chi.modulus();
  Scanner sc(chi);

  const double expected = zero_count_main_term(f, height);
  const double slack = config.count_slack >= 0.0
                           ? config.count_slack
                           : std::max(2.0, std::log(double(f) * height));

  double h = config.grid_step;
  std::size_t found = 0;
  for (int attempt = 0; attempt <= config.max_grid_retries; ++attempt, h *= 0.5) {
    const auto nsteps = std::int64_t(std::ceil(height / h));
    const std::vector<double> z = sc.scan(h, nsteps);

    std::vector<double> gammas;
    for (std::int64_t i = 0; i < nsteps; ++i) {
      if ((z[i] < 0.0) == (z[i + 1] < 0.0)) continue;
      const double g = sc.refine(double(i) * h, double(i + 1) * h, config.refine_tol);
      if (std::isfinite(g) && g > 0.0 && g <= height) gammas.push_back(g);
    }
    std::sort(gammas.begin(), gammas.end());
    const double dup_eps = std::max(config.refine_tol, 1e-9);
    gammas.erase(std::unique(gammas.begin(), gammas.end(),
                             [&](double x, double y) { return y - x < dup_eps; }),
                 gammas.end());

    found = gammas.size();
    if (std::abs(double(found) - expected) <= slack) {
      ZeroSet zs;
      zs.conductor = f;
      zs.character_index = unsigned(chi.index());
      zs.height = height;
      zs.gammas = std::move(gammas);
      zs.tail_estimate = weighted_zero_sum(zs).tail;
      return zs;
    }
  }
  std::ostringstream msg;
  msg << "compute_zeros: located " << found << " ordinates for conductor " << f
      << " index " << chi.index() << " up to " << height
      << " but the average count is " << expected << " (slack " << slack << ")";
  throw ZeroCountMismatch(msg.str());
}

ZeroRepository compute_repository(std::uint64_t q, double height,
                                  const ScanConfig& config, unsigned threads) {
  // Primitive inducer labels of all non-principal characters mod q. Both
  // members of a conjugate pair appear: their positive ordinates differ.
  std::vector<std::uint64_t> labels;
  if (q >= 3) {
    const auto chars = character_group(q);
    for (const auto& chi : chars) {
      if (chi.is_principal()) continue;
      const auto ind = primitive_inducer(chi);
      labels.push_back(pack_label(ind.modulus(), ind.index()));
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  }

  std::vector<ZeroSet> results(labels.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= labels.size()) return;
      try {
        const std::uint64_t f = labels[i] >> 32;
        const std::uint64_t idx = labels[i] & 0xffffffffu;
        results[i] = compute_zeros(character_by_index(f, idx), height, config);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const unsigned navail = unsigned(std::max<std::size_t>(1, labels.size()));
  const unsigned nthreads = std::max(1u, std::min(threads, navail));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  ZeroRepository repo;
  repo.set_provenance(ZeroProvenance::computed);
  for (auto& zs : results) repo.insert(std::move(zs));
  return repo;
}

void ZeroRepository::insert(ZeroSet zs) {
  const std::uint64_t key = zs.label();
  sets_[key] = std::move(zs);
}

bool ZeroRepository::contains(std::uint64_t conductor, unsigned index) const {
  return sets_.count(pack_label(conductor, index)) != 0;
}

const ZeroSet& ZeroRepository::find(std::uint64_t conductor, unsigned index) const {
  auto it = sets_.find(pack_label(conductor, index));
  if (it != sets_.end()) return it->second;
  std::ostringstream msg;
  msg << "no zero data for conductor " << conductor << " index " << index;
  throw MissingCharacter(msg.str());
}

const ZeroSet& ZeroRepository::for_character(const DirichletCharacter& chi) const {
  if (chi.is_principal())
    throw ConfigError("zero lookup: principal characters are outside the model");
  const auto ind = primitive_inducer(chi);
  return find(ind.modulus(), unsigned(ind.index()));
}

ZeroRepository load_zeros(std::istream& in) {
  std::map<std::uint64_t, ZeroSet> building;
  std::string line;
  std::size_t lineno = 0;

  auto fail = [&](const std::string& what) {
    std::ostringstream msg;
    msg << "zero data line " << lineno << ": " << what;
    throw ParseError(msg.str());
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;

    const char* p = line.c_str() + pos;
    char* end = nullptr;
    const unsigned long long cond = std::strtoull(p, &end, 10);
    if (end == p) fail("expected a conductor");
    p = end;
    const unsigned long long idx = std::strtoull(p, &end, 10);
    if (end == p) fail("expected a character index");
    p = end;
    const double gamma = std::strtod(p, &end);
    if (end == p) fail("expected an ordinate");
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    if (*end != '\0') fail("trailing content after the three fields");

    if (cond == 0 || cond >= (1ull << 32)) fail("conductor out of range");
    if (!std::isfinite(gamma) || gamma <= 0.0) fail("ordinates must be positive");

    const std::uint64_t key = pack_label(cond, idx);
    auto it = building.find(key);
    if (it == building.end()) {
      DirichletCharacter chi = [&] {
        try {
          return character_by_index(cond, idx);
        } catch (const ConfigError& e) {
          fail(e.what());
          throw;  // unreachable
        }
      }();
      if (chi.is_principal()) fail("principal characters carry no zeros");
      if (!chi.is_primitive()) fail("character labels must be primitive");
      ZeroSet zs;
      zs.conductor = cond;
      zs.character_index = unsigned(idx);
      it = building.emplace(key, std::move(zs)).first;
    }
    auto& gs = it->second.gammas;
    if (!gs.empty()) {
      if (gamma < gs.back()) {
        std::ostringstream msg;
        msg << "zero data line " << lineno << ": ordinates for conductor " << cond
            << " index " << idx << " must ascend";
        throw OrderError(msg.str());
      }
      if (gamma == gs.back()) continue;  // deduplicate
    }
    gs.push_back(gamma);
  }

  ZeroRepository repo;
  repo.set_provenance(ZeroProvenance::file);
  for (auto& [key, zs] : building) {
    (void)key;
    zs.height = zs.gammas.back();
    zs.tail_estimate = weighted_zero_sum(zs).tail;
    repo.insert(std::move(zs));
  }
  return repo;
}

ZeroRepository load_zeros(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open zero data file: " + path);
  return load_zeros(in);
}

void save_zeros(const ZeroRepository& repo, std::ostream& out) {
  out << "# conductor index gamma\n";
  char buf[80];
  for (const auto& [key, zs] : repo.sets()) {
    (void)key;
    for (const double g : zs.gammas) {
      std::snprintf(buf, sizeof(buf), "%llu %u %.17g\n",
                    (unsigned long long)zs.conductor, zs.character_index, g);
      out << buf;
    }
  }
}

void save_zeros(const ZeroRepository& repo, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open zero data file for writing: " + path);
  save_zeros(repo, out);
  if (!out) throw DataError("failed writing zero data file: " + path);
}

}  // namespace primerace
