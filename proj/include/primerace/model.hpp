#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "primerace/covariance.hpp"
#include "primerace/ordering.hpp"
#include "primerace/residues.hpp"
#include "primerace/rng.hpp"
#include "primerace/types.hpp"
#include "primerace/zeros.hpp"

namespace primerace {

// Monte Carlo estimate of one ordering probability.
struct MCEstimate {
  double estimate = 0.0;       // hit fraction in [0,1]
  std::uint64_t samples = 0;   // N >= 1
  double std_error = 0.0;      // sqrt(p(1-p)/N)
  std::uint64_t seed = 0;      // master seed of the run
  std::uint64_t stream = 0;    // sub-experiment tag under the seed
};

MCEstimate make_mc_estimate(std::uint64_t hits, std::uint64_t samples,
                            std::uint64_t seed, std::uint64_t stream);

// One unit phase per positive ordinate per primitive character member,
// keyed by the packed (conductor << 32) | index label. A single
// assignment is shared by every contestant of one draw; that sharing is
// what carries the (a, -a) anti-correlation.
struct PhaseAssignment {
  std::map<std::uint64_t, std::vector<std::complex<double>>> phases;
};

// Exact race-vector sampler. One draw produces
//   X_a = (-C_q(a) + sum over non-principal chi of Re(2 chi(a) S_chi))
//         / sqrt(Var(q))
// with S_chi = sum over that member's positive ordinates of
// U(gamma) / sqrt(1/4 + gamma^2) and U fresh iid uniform unit phases.
// Var(q) is the head variance of the repository, so components are
// unit-variance up to the reported truncation tail.
//
// Every drawn value is a pure function of (stream seed, member label,
// draw index): member phases come from the derived stream
// Stream{stream_seed(seed, label)} at counters draw * count + j. Worker
// count can never change a draw.
class XSampler {
 public:
  XSampler(const RaceTuple& race, const ZeroRepository& repo,
           bool include_shifts = true);

  int n() const { return n_; }
  double variance() const { return variance_; }
  double variance_tail() const { return variance_tail_; }
  std::uint64_t zero_count() const { return zero_count_; }
  const RaceTuple& race() const { return race_; }

  // One draw into out[0..n). Reference double-precision path.
  void sample(const Stream& rng, std::uint64_t draw_index, double* out) const;
  Vec sample(const Stream& rng, std::uint64_t draw_index) const;

  // Same evaluation from an explicit assignment (test hook). Throws
  // ConfigError when a member is missing, an ordinate count differs, or
  // an entry leaves the unit circle by more than 1e-9.
  void sample_with(const PhaseAssignment& u, double* out) const;
  Vec sample_with(const PhaseAssignment& u) const;

  // The assignment sample(rng, draw_index) consumes, materialized.
  PhaseAssignment draw_phases(const Stream& rng,
                              std::uint64_t draw_index) const;
  // All phases pinned to one value on the unit circle (|u| = 1 checked).
  PhaseAssignment constant_phases(std::complex<double> u) const;

  struct Member {
    std::uint64_t label = 0;        // packed primitive (conductor, index)
    std::vector<double> weights;    // 1/sqrt(1/4 + gamma^2), ascending gamma
    std::vector<float> weights_f;   // float copy padded to a 16 multiple
    std::vector<double> re_coef;    // per contestant: 2 Re chi(a_i)
    std::vector<double> im_coef;    // per contestant: -2 Im chi(a_i)
  };
  const std::vector<Member>& members() const { return members_; }
  const std::vector<double>& shifts() const { return shifts_; }

 private:
  RaceTuple race_;
  std::vector<Member> members_;
  std::vector<double> shifts_;  // -C_q(a_i), or zeros when shifts are off
  double variance_ = 0.0;
  double variance_tail_ = 0.0;
  double norm_ = 1.0;  // 1 / sqrt(variance_)
  std::uint64_t zero_count_ = 0;
  int n_ = 0;
};

// Gaussian comparison sampler: out = L z with z iid standard normal, so
// out is mean zero with covariance model.C. Normals are Box-Muller pairs
// on counters draw * 2 ceil(n/2) + {0,1,...}; same determinism contract
// as XSampler.
class ZSampler {
 public:
  explicit ZSampler(CovarianceModel model);

  int n() const { return int(model_.n); }
  const CovarianceModel& model() const { return model_; }

  void sample(const Stream& rng, std::uint64_t draw_index, double* out) const;
  Vec sample(const Stream& rng, std::uint64_t draw_index) const;

 private:
  CovarianceModel model_;
};

// Single-draw conveniences; bulk work should construct a sampler once.
Vec sample_X(const RaceTuple& race, const ZeroRepository& repo,
             const Stream& rng, std::uint64_t draw_index = 0);
Vec sample_Z(const CovarianceModel& model, const Stream& rng,
             std::uint64_t draw_index = 0);

// P(sample in R(spec)) by indicator Monte Carlo over N draws keyed by
// global draw index. Deterministic for fixed (seed, stream, N, spec)
// across runs and thread counts.
//
// The X estimator runs a float-phase kernel (24-bit lattice phases,
// vectorized polynomial trig): the phase lattice preserves the first two
// trigonometric moments exactly, and per-draw noise ~1e-5 is far below
// any Monte Carlo standard error at feasible N. Members whose character
// values agree on every compared pair shift both sides equally and are
// dropped; this is distribution-exact for ordering events.
MCEstimate estimate_ordering(const XSampler& sampler, const OrderingSpec& spec,
                             std::uint64_t N, std::uint64_t seed,
                             int threads = 1, std::uint64_t stream = 0);
MCEstimate estimate_ordering(const ZSampler& sampler, const OrderingSpec& spec,
                             std::uint64_t N, std::uint64_t seed,
                             int threads = 1, std::uint64_t stream = 0);

// Empirical mean/covariance of normalized X samples with entrywise
// standard errors (delta-method from fourth moments). Same float kernel
// and determinism contract as estimate_ordering, no member pruning.
struct XCovarianceEstimate {
  Vec mean;
  Mat cov;        // unbiased, (N-1) divisor
  Mat std_error;  // entrywise standard error of cov
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double tail_fraction = 0.0;  // variance_tail / variance of the sampler
};

XCovarianceEstimate estimate_x_covariance(const XSampler& sampler,
                                          std::uint64_t N, std::uint64_t seed,
                                          int threads = 1);

}  // namespace primerace
