#include <cmath>
#include <complex>

#include "doctest.h"
#include "primerace/characters.hpp"
#include "primerace/lfunction.hpp"
#include "primerace/types.hpp"

using namespace primerace;

namespace {
constexpr double kPi = 3.14159265358979323846;
using cplx = std::complex<double>;
}  // namespace

TEST_CASE("log_gamma matches classical values") {
  CHECK(std::abs(log_gamma({1.0, 0.0})) < 1e-13);
  CHECK(log_gamma({0.5, 0.0}).real() == doctest::Approx(0.5 * std::log(kPi)).epsilon(1e-13));
  CHECK(log_gamma({5.0, 0.0}).real() == doctest::Approx(std::log(24.0)).epsilon(1e-13));
  // Gamma(1/4) through the reflection branch.
  CHECK(log_gamma({0.25, 0.0}).real() ==
        doctest::Approx(std::log(3.6256099082219083119)).epsilon(1e-12));
}

TEST_CASE("log_gamma recurrence and modulus identity") {
  // exp(logGamma(z+1) - logGamma(z)) = z, insensitive to branch choices.
  for (const cplx z : {cplx{2.5, 1.5}, cplx{0.75, -4.0}, cplx{1.0, 30.0}}) {
    const cplx ratio = std::exp(log_gamma(z + 1.0) - log_gamma(z));
    CHECK(std::abs(ratio - z) < 1e-12 * std::abs(z));
  }
  // |Gamma(1+it)|^2 = pi t / sinh(pi t).
  for (const double t : {0.5, 3.0, 12.0}) {
    const double lhs = 2.0 * log_gamma({1.0, t}).real();
    const double rhs = std::log(kPi * t / std::sinh(kPi * t));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("Bernoulli over factorial table") {
  CHECK(bernoulli_over_factorial(1) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(bernoulli_over_factorial(2) == doctest::Approx(-1.0 / 720.0).epsilon(1e-15));
  CHECK(bernoulli_over_factorial(7) ==
        doctest::Approx(7.0 / 6.0 / 87178291200.0).epsilon(1e-14));
  // First zeta-route entry against the exact rational B_16 = -3617/510.
  CHECK(bernoulli_over_factorial(8) ==
        doctest::Approx(-3617.0 / 510.0 / 20922789888000.0).epsilon(1e-12));
  // Alternating signs all the way out.
  for (int l = 1; l <= 16; ++l) {
    CHECK(bernoulli_over_factorial(l) * (l % 2 == 1 ? 1.0 : -1.0) > 0.0);
  }
  CHECK_THROWS_AS(bernoulli_over_factorial(0), ConfigError);
  CHECK_THROWS_AS(bernoulli_over_factorial(17), ConfigError);
}

TEST_CASE("em_tail reproduces Hurwitz zeta") {
  // zeta(2,5) = pi^2/6 - 1 - 1/4 - 1/9 - 1/16.
  const double z25 = kPi * kPi / 6.0 - 1.0 - 0.25 - 1.0 / 9.0 - 1.0 / 16.0;
  CHECK(em_tail({2.0, 0.0}, 5.0).real() == doctest::Approx(z25).epsilon(1e-13));
  CHECK(std::abs(em_tail({2.0, 0.0}, 5.0).imag()) < 1e-15);

  // Shift identity zeta(s,x) = sum_{j<10} (x+j)^{-s} + zeta(s,x+10) at a
  // critical-line point, both evaluations inside the convergence region.
  const cplx s{0.5, 30.0};
  const double x = 15.0;
  cplx head = 0.0;
  for (int j = 0; j < 10; ++j) head += std::exp(-s * std::log(x + j));
  const cplx lhs = em_tail(s, x);
  const cplx rhs = head + em_tail(s, x + 10.0);
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));

  CHECK_THROWS_AS(em_tail({2.0, 0.0}, 0.0), ConfigError);
}

TEST_CASE("head multiplier rule") {
  CHECK(head_multiplier(0.0, 163) == 6);
  CHECK(head_multiplier(0.0, 1) == 24);
  CHECK(head_multiplier(0.0, 3) == 8);
  CHECK(head_multiplier(1000.0, 163) == 306);
  CHECK(head_multiplier(-1000.0, 163) == 306);  // symmetric in t
}

TEST_CASE("l_reference hits closed forms") {
  const auto zeta_char = character_by_index(1, 0);
  CHECK(l_reference(zeta_char, {2.0, 0.0}).real() ==
        doctest::Approx(kPi * kPi / 6.0).epsilon(1e-12));
  CHECK_THROWS_AS(l_reference(zeta_char, {1.0, 0.0}), ConfigError);

  const auto chi4 = character_by_index(4, 1);
  CHECK(l_reference(chi4, {1.0, 0.0}).real() == doctest::Approx(kPi / 4.0).epsilon(1e-12));
  CHECK(l_reference(chi4, {2.0, 0.0}).real() ==
        doctest::Approx(0.91596559417721901505).epsilon(1e-12));  // Catalan
  CHECK(l_reference(chi4, {3.0, 0.0}).real() ==
        doctest::Approx(kPi * kPi * kPi / 32.0).epsilon(1e-12));

  const auto chi3 = character_by_index(3, 1);
  CHECK(l_reference(chi3, {1.0, 0.0}).real() ==
        doctest::Approx(kPi / (3.0 * std::sqrt(3.0))).epsilon(1e-12));

  // Complex character mod 5 at s=2 against a long direct partial sum.
  const auto chi5 = character_by_index(5, 1);
  cplx direct = 0.0;
  for (int n = 1; n <= 200000; ++n)
    direct += chi5(n) / double(n) / double(n);
  CHECK(std::abs(l_reference(chi5, {2.0, 0.0}) - direct) < 1e-9);
}

TEST_CASE("Gauss sums and root numbers") {
  const auto chi4 = character_by_index(4, 1);
  const cplx tau4 = gauss_sum(chi4);
  CHECK(std::abs(tau4 - cplx{0.0, 2.0}) < 1e-12);

  const auto chi3 = character_by_index(3, 1);
  CHECK(std::abs(gauss_sum(chi3) - cplx{0.0, std::sqrt(3.0)}) < 1e-12);

  // |tau| = sqrt(f) for every primitive character mod 7.
  for (unsigned idx = 1; idx < 6; ++idx) {
    const auto chi = character_by_index(7, idx);
    REQUIRE(chi.is_primitive());
    CHECK(std::abs(gauss_sum(chi)) == doctest::Approx(std::sqrt(7.0)).epsilon(1e-12));
    CHECK(std::abs(std::abs(root_number(chi)) - 1.0) < 1e-12);
  }

  // Real primitive characters carry root number exactly 1.
  CHECK(std::abs(root_number(chi4) - cplx{1.0, 0.0}) < 1e-12);
  CHECK(std::abs(root_number(chi3) - cplx{1.0, 0.0}) < 1e-12);

  // Induced (non-primitive) character mod 6: |tau| = sqrt(3) != sqrt(6).
  const auto chi6 = character_by_index(6, 1);
  REQUIRE(!chi6.is_primitive());
  CHECK_THROWS_AS(root_number(chi6), DataError);
}

TEST_CASE("critical-line phase is continuous") {
  const auto chi4 = character_by_index(4, 1);
  double prev = hardy_theta(chi4, 0.0);
  for (int i = 1; i <= 1200; ++i) {
    const double cur = hardy_theta(chi4, 0.05 * i);
    CHECK(std::abs(cur - prev) < 1.0);  // a 2*pi branch jump would trip this
    prev = cur;
  }
}

TEST_CASE("rotated boundary values are real on the critical line") {
  for (const auto& [q, idx] : {std::pair<std::uint64_t, unsigned>{4, 1},
                               {3, 1},
                               {5, 1},
                               {7, 2}}) {
    const auto chi = character_by_index(q, idx);
    const cplx eps = root_number(chi);
    const cplx omega = std::exp(cplx{0.0, -0.5 * std::arg(eps)});
    for (const double t : {0.7, 5.3, 14.1}) {
      const double theta = hardy_theta(chi, t);
      const cplx val = omega * std::exp(cplx{0.0, theta}) *
                       l_reference(chi, {0.5, t});
      CHECK(std::abs(val.imag()) <= 1e-9 * std::max(1.0, std::abs(val)));
      CHECK(hardy_z_reference(chi, t) == doctest::Approx(val.real()).epsilon(1e-12));
    }
  }
}

TEST_CASE("reference Z locates the first zero of the mod-4 character") {
  const auto chi4 = character_by_index(4, 1);
  // gamma_1 = 6.0209489..., so Z changes sign across it.
  CHECK(hardy_z_reference(chi4, 6.00) * hardy_z_reference(chi4, 6.05) < 0.0);
  // And is sign-stable just outside.
  CHECK(hardy_z_reference(chi4, 5.5) * hardy_z_reference(chi4, 5.9) > 0.0);
}

TEST_CASE("sign-change census to height 60 matches the average count") {
  const auto chi4 = character_by_index(4, 1);
  int changes = 0;
  double prev = hardy_z_reference(chi4, 0.0);
  for (int i = 1; i <= 1200; ++i) {
    const double cur = hardy_z_reference(chi4, 0.05 * i);
    if (prev * cur < 0.0) ++changes;
    prev = cur;
  }
  const double nbar = zero_count_main_term(4, 60.0);
  CHECK(std::abs(changes - nbar) <= 2.0);
}

TEST_CASE("zero count main term closed form") {
  const double T = 60.0;
  const double expect = T / (2.0 * kPi) * (std::log(4.0 * T / (2.0 * kPi)) - 1.0);
  CHECK(zero_count_main_term(4, T) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(zero_count_main_term(4, T) == doctest::Approx(25.238).epsilon(1e-3));
}
