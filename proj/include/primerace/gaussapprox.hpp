#pragma once

#include <cstdint>
#include <vector>

#include "primerace/covariance.hpp"
#include "primerace/model.hpp"
#include "primerace/smooth.hpp"
#include "primerace/zeros.hpp"

namespace primerace {

// Derivative constants of the smoothed region indicator, from the product
// rule over the pair factors with D = max pair degree and the certified
// single-factor ratios kappa_m:
//   C1 = kappa_1 D / delta
//   C3 = (kappa_3 D + 3 kappa_2 kappa_1 D^2 + kappa_1^3 D^3) / delta^3.
// C3 covers every index pattern of a third mixed partial (one factor never
// depends on three distinct coordinates, so the D^3 term dominates anyway).
struct TestFunctionConstants {
  double C1 = 0.0;
  double C3 = 0.0;
};
TestFunctionConstants smooth_test_constants(const SmoothTestParams& p);

// Families of m iid mean-zero summand vectors with iid coordinates of
// variance 1/m each, so the summed vector has identity covariance.
//   uniform:     coordinates uniform on [-sqrt(3/m), sqrt(3/m)]
//   three_point: +-1/sqrt(spike_mass m) with total mass spike_mass, else 0;
//                small spike_mass gives a large fourth cumulant, making the
//                Gaussian discrepancy visible at modest sample sizes
//   gaussian:    coordinates N(0, 1/m); the comparison's exact fixed point
enum class SummandKind { uniform, three_point, gaussian };

struct SummandFamily {
  SummandKind kind = SummandKind::uniform;
  int n = 0;
  int m = 0;
  double spike_mass = 0.04;
};

SummandFamily make_summand_family(SummandKind kind, int n, int m,
                                  double spike_mass = 0.04);

// One summand-replacement comparison: Monte Carlo E h(sum X^(j)) against
// E h(sum Z^(j)) with the per-summand Gaussian twins, the cubic bound
// 12 m C3 eps^3 on log of the admissible ratio, and both error budgets of
// the replacement display (empirical X-side tail mass, closed-form Z side).
struct LindebergReport {
  int n = 0;
  int m = 0;
  double epsilon = 0.0;
  double C1 = 0.0;
  double C3 = 0.0;
  double delta_bound = 0.0;  // 12 m C3 eps^3
  double eh_x = 0.0, se_x = 0.0;
  double eh_z = 0.0, se_z = 0.0;
  double ratio = 0.0, ratio_se = 0.0;
  double budget_empirical = 0.0;  // C3 sum_{j,i} E 1_{|X|>eps/n}(eps^3+n^2|X|^3)
  double budget_gaussian = 0.0;   // C3 sum_{j,i} (eps^3+n^2 r^{3/2}) e^{-eps^2/(2n^2 r)}
  bool coupled = true;
  bool within = false;  // ratio in [e^-D, e^D] widened by 3 se + budgets/eh_z
  HypothesisCheck eps_ok;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Couple = true drives both sides through the same uniforms (X by the
// family's quantile, Z by the normal quantile), the comonotone coupling
// that minimizes the variance of the ratio estimate. Gaussian summands
// under coupling reproduce ratio = 1 exactly.
LindebergReport lindeberg_compare(const SummandFamily& family,
                                  const SmoothTestParams& h, double epsilon,
                                  std::uint64_t N, std::uint64_t seed,
                                  int threads = 1, bool couple = true,
                                  double c_budget = 1.0);

// Unspecified absolute constants of the race sandwich, echoed in reports.
struct ApproxConstants {
  double c_band = 1.0;   // the 1 + O(1/log q) multiplier half-width
  double c_abs = 1.0;    // scale of the additive exponential budgets
  double c_theta = 1.0;  // scale inside the Theta(...) exponent
};

// CRN estimates of E h-(Z) and E h+(Z) for one covariance model: the same
// Gaussian draws feed both surrogates, so lower <= upper pointwise.
struct SandwichExpectations {
  MCEstimate lower;  // E h^-_{S,delta}(Z)
  MCEstimate upper;  // E h^+_{S,delta}(Z)
};
SandwichExpectations sandwich_expectations(const CovarianceModel& model,
                                           const OrderingSpec& spec,
                                           double delta, std::uint64_t N,
                                           std::uint64_t seed, int threads = 1);

// The assembled race pipeline: P(X in R(S)) is bracketed by
//   (1 +- c_band/log q) E h^{-+}_{S,delta}(Z) -+ absolute budgets,
// where Z carries the exact correlation model of the race, the shifts
// C_q(a_i)/sqrt(Var q) having been absorbed by the delta/4 -> delta
// widening (their admissibility |D_i| <= sqrt(delta)/4 is reported).
struct SandwichBounds {
  SandwichExpectations expectations;
  double band = 0.0;       // c_band / log q
  double abs_lower = 0.0;  // c_abs (e^{-2/sqrt(delta)} + n e^{-c_theta T})
  double abs_upper = 0.0;  // c_abs (n^2 e^{-2/sqrt(delta)} + n e^{-c_theta T})
  double adjusted_lower = 0.0;
  double adjusted_upper = 0.0;
  double theta_exponent = 0.0;  // T = delta^2 phi^{1/3} / (n^4 log^{2/3} q)
  std::vector<double> shifts;   // D_i = C_q(a_i)/sqrt(Var q)
  double shift_max = 0.0;
  std::vector<HypothesisCheck> checks;
};
SandwichBounds ordering_probability_bounds(const RaceTuple& race,
                                           const ZeroRepository& repo,
                                           const OrderingSpec& spec,
                                           double delta, std::uint64_t N,
                                           std::uint64_t seed, int threads = 1,
                                           const ApproxConstants& consts = {});

}  // namespace primerace
