#pragma once

#include <cstdint>
#include <vector>

#include "primerace/residues.hpp"
#include "primerace/rng.hpp"
#include "primerace/types.hpp"
#include "primerace/zeros.hpp"

namespace primerace {

enum class CovarianceProvenance { exact_from_zeros, synthetic };

// Normalized covariance of the race vector: C = A + E, where A is the
// identity outside k leading 2x2 blocks [[1, xi], [xi, 1]] coupling each
// (a, -a) pair, and E collects everything the block model does not capture.
// Everything downstream works on this unit-diagonal scale -- components are
// understood as divided by sqrt(Var(q)).
struct CovarianceModel {
  int n = 0;
  int k = 0;           // number of coupled leading pairs
  double xi = 0.0;     // block anti-correlation
  double eps = 0.0;    // measured max |C - A| over off-diagonal entries
  Mat C;               // symmetric, unit diagonal, positive definite
  Mat L;               // lower triangular factor, C = L L^T
  CovarianceProvenance provenance = CovarianceProvenance::synthetic;
  double variance = 0.0;       // Var(q) head for exact models, 0 synthetic
  double variance_tail = 0.0;  // summed tail estimates on the same scale

  Mat a_structure() const;       // the block matrix A
  Mat a_inverse() const;         // closed-form A^{-1}
  double a_determinant() const;  // (1 - xi^2)^k
};

// Var(q) = 2 sum over non-principal characters of sum_gamma 1/(1/4+gamma^2),
// split into the stored-ordinate head and the per-character tail estimates.
struct VarianceBreakdown {
  double head = 0.0;
  double tail = 0.0;
};

VarianceBreakdown variance_breakdown(std::uint64_t q, const ZeroRepository& repo);

// The head value of the breakdown; the normalization used everywhere.
double variance_q(std::uint64_t q, const ZeroRepository& repo);

// B_q(a,b) = sum_{chi != chi0} sum_gamma (chi(b/a) + chi(a/b))/(1/4+gamma^2).
// Real by conjugate pairing and symmetric in (a, b).
double b_correlation(const Modulus& mod, std::uint64_t a, std::uint64_t b,
                     const ZeroRepository& repo);

// xi = -phi(q) log 2 / Var(q), the normalized (a, -a) anti-correlation.
double xi_q(std::uint64_t q, const ZeroRepository& repo);

// Exact model: C_ij = B_q(a_i, a_j)/Var(q) off the unit diagonal, factorized.
CovarianceModel covariance_model_exact(const RaceTuple& race,
                                       const ZeroRepository& repo);

// Synthetic model: the A-structure plus symmetric uniform noise drawn from
// [-eps_noise, eps_noise] on the off-structure entries.
CovarianceModel covariance_model_synthetic(int n, int k, double xi,
                                           double eps_noise, const Stream& rng);

// Determinant and inverse perturbation diagnostics of C against A, with the
// hypothesis checks |xi| <= 1/2 and eps <= 1/(4n) reported as warnings.
struct PerturbationReport {
  double det_ratio_dev = 0.0;   // det C / det A - 1
  double det_bound = 0.0;       // c1 * eps * n
  bool det_ok = true;
  double max_inverse_dev = 0.0;  // max |(C^{-1} - A^{-1})_ij|
  double inverse_bound = 0.0;    // 8 * eps
  bool inverse_ok = true;
  std::vector<HypothesisCheck> hypotheses;
};

PerturbationReport perturbation_check(const CovarianceModel& model,
                                      double c1 = 1.0);

}  // namespace primerace
