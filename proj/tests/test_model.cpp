#include <cmath>
#include <complex>

#include "doctest.h"
#include "primerace/covariance.hpp"
#include "primerace/model.hpp"
#include "primerace/ordering.hpp"
#include "primerace/residues.hpp"
#include "primerace/zeros.hpp"

namespace {

using namespace primerace;

const ZeroRepository& repo_q4() {
  static const ZeroRepository r = compute_repository(4, 100.0);
  return r;
}

const ZeroRepository& repo_q11() {
  static const ZeroRepository r = compute_repository(11, 60.0);
  return r;
}

const ZeroRepository& repo_q24() {
  static const ZeroRepository r = compute_repository(24, 60.0);
  return r;
}

}  // namespace

TEST_CASE("mc estimate carries the binomial standard error") {
  const MCEstimate e = make_mc_estimate(250, 1000, 7, 3);
  CHECK(e.estimate == 0.25);
  CHECK(e.std_error == std::sqrt(0.25 * 0.75 / 1000.0));
  CHECK(e.samples == 1000);
  CHECK(e.seed == 7);
  CHECK(e.stream == 3);
  CHECK(make_mc_estimate(0, 10, 0, 0).std_error == 0.0);
  CHECK_THROWS_AS(make_mc_estimate(0, 0, 0, 0), ConfigError);
}

TEST_CASE("forced unit phases reproduce the closed-form sample") {
  const auto race = make_race_tuple(11, {2, 6, 7, 8}, 0);
  const XSampler sampler(race, repo_q11());
  const Vec x = sampler.sample_with(sampler.constant_phases({1.0, 0.0}));

  // Mirror the accumulation order: shifts, then member contributions with
  // cos = 1 and sin = 0, then head normalization.
  const int n = sampler.n();
  std::vector<double> expected(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i) expected[std::size_t(i)] = sampler.shifts()[std::size_t(i)];
  for (const auto& m : sampler.members()) {
    double sc = 0.0, ss = 0.0;
    for (const double w : m.weights) {
      sc += w * 1.0;
      ss += w * 0.0;
    }
    for (int i = 0; i < n; ++i)
      expected[std::size_t(i)] +=
          m.re_coef[std::size_t(i)] * sc + m.im_coef[std::size_t(i)] * ss;
  }
  for (int i = 0; i < n; ++i) {
    expected[std::size_t(i)] *= 1.0 / std::sqrt(sampler.variance());
    CHECK(x(i) == expected[std::size_t(i)]);
  }
}

TEST_CASE("drawn phases replay bit-exactly through sample_with") {
  const auto race = make_race_tuple(11, {1, 3, 9}, 0);
  const XSampler sampler(race, repo_q11());
  const Stream rng{123456789};
  for (const std::uint64_t s : {0ull, 1ull, 17ull}) {
    const Vec a = sampler.sample(rng, s);
    const Vec b = sampler.sample_with(sampler.draw_phases(rng, s));
    CHECK((a.array() == b.array()).all());
  }
}

TEST_CASE("empirical moments of the race sampler match the analytic covariance") {
  const auto race = make_race_tuple(11, {1, 3, 7}, 0);
  const XSampler sampler(race, repo_q11());
  const std::uint64_t N = 200000;
  const auto est = estimate_x_covariance(sampler, N, 42);
  CHECK(est.samples == N);
  CHECK(est.tail_fraction < 0.05);

  const double inv_sd = 1.0 / std::sqrt(sampler.variance());
  const double mean_se = 1.0 / std::sqrt(double(N));
  for (int i = 0; i < 3; ++i) {
    const double want = sampler.shifts()[std::size_t(i)] * inv_sd;
    CHECK(std::abs(est.mean(i) - want) < 3.5 * mean_se);
    // Head normalization makes the model diagonal exactly 1.
    CHECK(std::abs(est.cov(i, i) - 1.0) < 3.5 * est.std_error(i, i) + 1e-4);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double want = b_correlation(race.mod, race.contestants[std::size_t(i)],
                                        race.contestants[std::size_t(j)],
                                        repo_q11()) /
                          sampler.variance();
      CHECK(std::abs(est.cov(i, j) - want) < 3.5 * est.std_error(i, j) + 1e-4);
      CHECK(est.cov(i, j) == est.cov(j, i));
    }
}

TEST_CASE("ordering estimates agree between the phase kernel and the direct sampler") {
  const auto race = make_race_tuple(24, {5, 1}, 0);
  const XSampler sampler(race, repo_q24());
  const auto spec = make_ordering(OrderingKind::full_chain, 2, 0);
  const std::uint64_t N = 100000;

  const MCEstimate est = estimate_ordering(sampler, spec, N, 99);
  CHECK(est.samples == N);

  const Stream rng{777};
  std::uint64_t hits = 0;
  Vec x(2);
  for (std::uint64_t s = 0; s < N; ++s) {
    sampler.sample(rng, s, x.data());
    hits += in_region(spec, x.data());
  }
  const double direct = double(hits) / double(N);
  const double se = std::hypot(est.std_error,
                               std::sqrt(direct * (1.0 - direct) / double(N)));
  CHECK(std::abs(est.estimate - direct) < 3.5 * se + 1e-9);
  // 1 is a square mod 24 and 5 is not, so the lead probability is extreme.
  CHECK(est.estimate > 0.9);
}

TEST_CASE("thread count leaves estimates bit-identical") {
  const auto race = make_race_tuple(11, {3, 7}, 0);
  const XSampler sampler(race, repo_q11());
  const auto spec = make_ordering(OrderingKind::full_chain, 2, 0);
  const std::uint64_t N = 50000;

  const MCEstimate a = estimate_ordering(sampler, spec, N, 5, 1);
  const MCEstimate b = estimate_ordering(sampler, spec, N, 5, 3);
  CHECK(a.estimate == b.estimate);

  const auto ca = estimate_x_covariance(sampler, N, 5, 1);
  const auto cb = estimate_x_covariance(sampler, N, 5, 3);
  CHECK((ca.mean.array() == cb.mean.array()).all());
  CHECK((ca.cov.array() == cb.cov.array()).all());
  CHECK((ca.std_error.array() == cb.std_error.array()).all());
}

TEST_CASE("relabeling the contestants permutes the estimate exactly") {
  const auto spec_a = make_custom_ordering(2, {{1, 2}});
  const auto spec_b = make_custom_ordering(2, {{2, 1}});
  const XSampler sa(make_race_tuple(11, {3, 7}, 0), repo_q11());
  const XSampler sb(make_race_tuple(11, {7, 3}, 0), repo_q11());
  const MCEstimate a = estimate_ordering(sa, spec_a, 40000, 11);
  const MCEstimate b = estimate_ordering(sb, spec_b, 40000, 11);
  CHECK(a.estimate == b.estimate);
}

TEST_CASE("the race sampler produces no exact ties") {
  const auto race = make_race_tuple(4, {3, 1}, 0);
  const XSampler sampler(race, repo_q4());
  const Stream rng{2026};
  Vec x(2);
  std::uint64_t ties = 0;
  for (std::uint64_t s = 0; s < 100000; ++s) {
    sampler.sample(rng, s, x.data());
    ties += (x(0) == x(1));
  }
  CHECK(ties == 0);
}

TEST_CASE("gaussian sampler reproduces identity chain probabilities") {
  const Stream noise{1};
  SUBCASE("full chain at n = 3") {
    const ZSampler z(covariance_model_synthetic(3, 0, 0.0, 0.0, noise));
    const auto spec = make_ordering(OrderingKind::full_chain, 3, 0);
    const std::uint64_t N = 300000;
    const MCEstimate e = estimate_ordering(z, spec, N, 17);
    const double want = 1.0 / 6.0;
    CHECK(std::abs(e.estimate - want) <
          3.0 * std::sqrt(want * (1.0 - want) / double(N)));
  }
  SUBCASE("leading block of 2 out of 5") {
    const ZSampler z(covariance_model_synthetic(5, 0, 0.0, 0.0, noise));
    const auto spec = make_ordering(OrderingKind::top_chain_k, 5, 2);
    const std::uint64_t N = 300000;
    const MCEstimate e = estimate_ordering(z, spec, N, 17);
    const double want = 1.0 / 20.0;
    CHECK(std::abs(e.estimate - want) <
          3.0 * std::sqrt(want * (1.0 - want) / double(N)));
  }
}

TEST_CASE("gaussian sampler realizes the block anti-correlation") {
  const auto model = covariance_model_synthetic(2, 1, -0.5, 0.0, Stream{1});
  const ZSampler z(model);
  const Stream rng{31337};
  const std::uint64_t N = 200000;
  double sum01 = 0.0, sum0 = 0.0, sum1 = 0.0, sq0 = 0.0, sq1 = 0.0;
  Vec x(2);
  for (std::uint64_t s = 0; s < N; ++s) {
    z.sample(rng, s, x.data());
    sum0 += x(0);
    sum1 += x(1);
    sq0 += x(0) * x(0);
    sq1 += x(1) * x(1);
    sum01 += x(0) * x(1);
  }
  const double dn = double(N);
  CHECK(std::abs(sum0 / dn) < 0.01);
  CHECK(std::abs(sum1 / dn) < 0.01);
  CHECK(std::abs(sq0 / dn - 1.0) < 0.02);
  CHECK(std::abs(sq1 / dn - 1.0) < 0.02);
  CHECK(std::abs(sum01 / dn - (-0.5)) < 0.01);

  // Exchangeability keeps the pairwise lead probability at one half.
  const auto spec = make_custom_ordering(2, {{1, 2}});
  const MCEstimate e = estimate_ordering(z, spec, N, 4);
  CHECK(std::abs(e.estimate - 0.5) < 3.0 * e.std_error + 1e-6);
}

TEST_CASE("estimate inputs are validated") {
  const auto race = make_race_tuple(11, {3, 7}, 0);
  const XSampler sampler(race, repo_q11());
  const auto spec3 = make_ordering(OrderingKind::full_chain, 3, 0);
  CHECK_THROWS_AS(estimate_ordering(sampler, spec3, 100, 1), ConfigError);
  const auto spec2 = make_ordering(OrderingKind::full_chain, 2, 0);
  CHECK_THROWS_AS(estimate_ordering(sampler, spec2, 0, 1), ConfigError);

  const ZSampler z(covariance_model_synthetic(2, 0, 0.0, 0.0, Stream{1}));
  CHECK_THROWS_AS(estimate_ordering(z, spec3, 100, 1), ConfigError);
  CHECK_THROWS_AS(estimate_ordering(z, spec2, 0, 1), ConfigError);

  CHECK_THROWS_AS(estimate_x_covariance(sampler, 1, 1), ConfigError);
}

TEST_CASE("phase assignments are validated") {
  const auto race = make_race_tuple(11, {3, 7}, 0);
  const XSampler sampler(race, repo_q11());
  const Stream rng{5};

  CHECK_THROWS_AS(sampler.constant_phases({2.0, 0.0}), ConfigError);

  PhaseAssignment missing = sampler.draw_phases(rng, 0);
  missing.phases.erase(missing.phases.begin());
  CHECK_THROWS_AS(sampler.sample_with(missing), ConfigError);

  PhaseAssignment short_one = sampler.draw_phases(rng, 0);
  short_one.phases.begin()->second.pop_back();
  CHECK_THROWS_AS(sampler.sample_with(short_one), ConfigError);

  PhaseAssignment off_circle = sampler.draw_phases(rng, 0);
  off_circle.phases.begin()->second.front() = {2.0, 0.0};
  CHECK_THROWS_AS(sampler.sample_with(off_circle), ConfigError);
}

TEST_CASE("sampler rejects a repository with no usable ordinates") {
  ZeroRepository empty;
  ZeroSet zs;
  zs.conductor = 4;
  zs.character_index = 1;
  zs.height = 1.0;
  empty.insert(zs);
  const auto race = make_race_tuple(4, {3, 1}, 0);
  CHECK_THROWS_AS(XSampler(race, empty), NotPositiveDefinite);
}

TEST_CASE("sampler accounting matches the repository") {
  const auto race = make_race_tuple(11, {1, 10}, 1);
  const XSampler sampler(race, repo_q11());
  CHECK(sampler.n() == 2);
  CHECK(sampler.members().size() == 9);
  std::size_t zeros = 0;
  for (const auto& m : sampler.members()) {
    zeros += m.weights.size();
    CHECK(m.weights_f.size() % 16 == 0);
    CHECK(m.weights_f.size() >= m.weights.size());
    for (std::size_t j = m.weights.size(); j < m.weights_f.size(); ++j)
      CHECK(m.weights_f[j] == 0.0f);
  }
  CHECK(sampler.zero_count() == zeros);
  const auto vb = variance_breakdown(11, repo_q11());
  CHECK(sampler.variance() == vb.head);
  CHECK(sampler.variance_tail() == vb.tail);

  const XSampler bare(race, repo_q11(), false);
  CHECK(bare.shifts()[0] == 0.0);
  CHECK(bare.shifts()[1] == 0.0);
  // With shifts on, the square residue 1 carries C_11(1) = 1.
  CHECK(sampler.shifts()[0] == -1.0);
  CHECK(sampler.shifts()[1] == 1.0);
}
