#include "primerace/covariance.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "primerace/characters.hpp"

namespace primerace {

namespace {

constexpr double kLog2 = 0.69314718055994531;

// Per-character data needed by the correlation sums: the character handle
// (values are evaluated per residue, only a few residues are ever needed)
// and its ordinate sum.
struct CharTerm {
  const DirichletCharacter* chi;
  double head;
};

std::vector<CharTerm> collect_terms(const ZeroRepository& repo,
                                    const std::vector<DirichletCharacter>& chars,
                                    double* tail_out) {
  std::vector<CharTerm> terms;
  terms.reserve(chars.size());
  double tail = 0.0;
  for (const auto& chi : chars) {
    if (chi.is_principal()) continue;
    const ZeroSet& zs = repo.for_character(chi);
    terms.push_back({&chi, weighted_zero_sum(zs).head});
    tail += zs.tail_estimate;
  }
  if (tail_out) *tail_out = tail;
  return terms;
}

// Plain left-looking Cholesky; the failing minor order makes the error
// actionable (it pinpoints how deep the inconsistency sits).
Mat cholesky_lower(const Mat& C) {
  const int n = int(C.rows());
  Mat L = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double d = C(j, j);
    for (int t = 0; t < j; ++t) d -= L(j, t) * L(j, t);
    if (!(d > 0.0))
      throw NotPositiveDefinite("covariance factorization: leading minor of order " +
                                std::to_string(j + 1) + " is not positive");
    L(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = C(i, j);
      for (int t = 0; t < j; ++t) s -= L(i, t) * L(j, t);
      L(i, j) = s / L(j, j);
    }
  }
  return L;
}

Mat block_structure(int n, int k, double xi) {
  Mat A = Mat::Identity(n, n);
  for (int i = 0; i < k; ++i) {
    A(2 * i, 2 * i + 1) = xi;
    A(2 * i + 1, 2 * i) = xi;
  }
  return A;
}

}  // namespace

Mat CovarianceModel::a_structure() const { return block_structure(n, k, xi); }

Mat CovarianceModel::a_inverse() const {
  Mat Ai = Mat::Identity(n, n);
  const double d = 1.0 - xi * xi;
  for (int i = 0; i < k; ++i) {
    Ai(2 * i, 2 * i) = 1.0 / d;
    Ai(2 * i + 1, 2 * i + 1) = 1.0 / d;
    Ai(2 * i, 2 * i + 1) = -xi / d;
    Ai(2 * i + 1, 2 * i) = -xi / d;
  }
  return Ai;
}

double CovarianceModel::a_determinant() const {
  return std::pow(1.0 - xi * xi, k);
}

VarianceBreakdown variance_breakdown(std::uint64_t q, const ZeroRepository& repo) {
  if (q < 3)
    throw ConfigError("variance_q: no non-principal characters mod " +
                      std::to_string(q));
  VarianceBreakdown vb;
  for (const auto& chi : character_group(q)) {
    if (chi.is_principal()) continue;
    const ZeroSet& zs = repo.for_character(chi);
    vb.head += 2.0 * weighted_zero_sum(zs).head;
    vb.tail += 2.0 * zs.tail_estimate;
  }
  return vb;
}

double variance_q(std::uint64_t q, const ZeroRepository& repo) {
  return variance_breakdown(q, repo).head;
}

double b_correlation(const Modulus& mod, std::uint64_t a, std::uint64_t b,
                     const ZeroRepository& repo) {
  const std::uint64_t q = mod.q;
  if (q < 3) throw ConfigError("b_correlation: modulus too small");
  a %= q;
  b %= q;
  if (a == b) throw ConfigError("b_correlation: needs two distinct residues");
  if (gcd_u64(a, q) != 1 || gcd_u64(b, q) != 1)
    throw ConfigError("b_correlation: residues must be reduced mod q");
  const std::uint64_t r = mul_mod(b, inv_mod(a, q), q);
  double tail = 0.0;
  const auto chars = character_group(q);  // keeps CharTerm handles alive
  const auto terms = collect_terms(repo, chars, &tail);
  // chi(b/a) + chi(a/b) = 2 Re chi(r) for every character.
  double sum = 0.0;
  for (const auto& t : terms) sum += 2.0 * (*t.chi)(r).real() * t.head;
  return sum;
}

double xi_q(std::uint64_t q, const ZeroRepository& repo) {
  const double var = variance_q(q, repo);
  if (!(var > 0.0))
    throw NotPositiveDefinite("xi_q: variance vanishes; zero data too shallow");
  return -double(euler_phi(q)) * kLog2 / var;
}

CovarianceModel covariance_model_exact(const RaceTuple& race,
                                       const ZeroRepository& repo) {
  const std::uint64_t q = race.mod.q;
  const int n = int(race.contestants.size());
  CovarianceModel m;
  m.n = n;
  m.k = int(race.k);
  m.provenance = CovarianceProvenance::exact_from_zeros;

  const VarianceBreakdown vb = variance_breakdown(q, repo);
  if (!(vb.head > 0.0))
    throw NotPositiveDefinite(
        "covariance_model_exact: variance vanishes; zero data too shallow");
  m.variance = vb.head;
  m.variance_tail = vb.tail;
  m.xi = -double(race.mod.phi) * kLog2 / vb.head;

  const auto chars = character_group(q);  // keeps CharTerm handles alive
  const auto terms = collect_terms(repo, chars, nullptr);
  m.C = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t ai_inv = inv_mod(race.contestants[std::size_t(i)], q);
    for (int j = i + 1; j < n; ++j) {
      const std::uint64_t r =
          mul_mod(race.contestants[std::size_t(j)], ai_inv, q);
      double sum = 0.0;
      for (const auto& t : terms) sum += 2.0 * (*t.chi)(r).real() * t.head;
      m.C(i, j) = m.C(j, i) = sum / vb.head;
    }
  }

  const Mat A = block_structure(n, m.k, m.xi);
  m.eps = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) m.eps = std::max(m.eps, std::abs(m.C(i, j) - A(i, j)));

  m.L = cholesky_lower(m.C);
  return m;
}

CovarianceModel covariance_model_synthetic(int n, int k, double xi,
                                           double eps_noise, const Stream& rng) {
  if (n < 1) throw ConfigError("covariance_model_synthetic: n must be positive");
  if (k < 0 || 2 * k > n)
    throw ConfigError("covariance_model_synthetic: needs 0 <= 2k <= n");
  if (!(std::abs(xi) < 1.0))
    throw ConfigError("covariance_model_synthetic: |xi| must be below 1");
  if (!(eps_noise >= 0.0))
    throw ConfigError("covariance_model_synthetic: eps_noise must be >= 0");

  CovarianceModel m;
  m.n = n;
  m.k = k;
  m.xi = xi;
  m.provenance = CovarianceProvenance::synthetic;
  m.C = block_structure(n, k, xi);

  std::uint64_t counter = 0;
  m.eps = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool coupled = (j == i + 1) && (i % 2 == 0) && (i / 2 < k);
      if (coupled) continue;
      if (eps_noise > 0.0) {
        const double u = rng.uniform(counter++);
        const double e = eps_noise * (2.0 * u - 1.0);
        m.C(i, j) = m.C(j, i) += e;
        m.eps = std::max(m.eps, std::abs(e));
      }
    }
  }

  m.L = cholesky_lower(m.C);
  return m;
}

PerturbationReport perturbation_check(const CovarianceModel& model, double c1) {
  const int n = model.n;
  PerturbationReport r;

  // Determinants from the stored factor and the closed block form.
  double log_det_c = 0.0;
  for (int i = 0; i < n; ++i) log_det_c += std::log(model.L(i, i));
  const double det_c = std::exp(2.0 * log_det_c);
  const double det_a = model.a_determinant();
  r.det_ratio_dev = det_c / det_a - 1.0;
  r.det_bound = c1 * model.eps * double(n);

  const Mat I = Mat::Identity(n, n);
  const Mat Cinv = model.L.transpose().triangularView<Eigen::Upper>().solve(
      model.L.triangularView<Eigen::Lower>().solve(I));
  const Mat F = Cinv - model.a_inverse();
  r.max_inverse_dev = F.cwiseAbs().maxCoeff();
  r.inverse_bound = 8.0 * model.eps;

  // A small absolute floor keeps the eps = 0 case from failing on the
  // rounding noise of the factorization round trip.
  const double floor = 1e-12;
  r.det_ok = std::abs(r.det_ratio_dev) <= r.det_bound + floor;
  r.inverse_ok = r.max_inverse_dev <= r.inverse_bound + floor;

  r.hypotheses.push_back({"abs_xi_at_most_half", std::abs(model.xi) <= 0.5,
                          std::abs(model.xi), 0.5});
  const double eps_cap = 1.0 / (4.0 * double(n));
  r.hypotheses.push_back(
      {"eps_at_most_quarter_over_n", model.eps <= eps_cap, model.eps, eps_cap});
  return r;
}

}  // namespace primerace
