#include <cmath>
#include <sstream>

#include "doctest.h"
#include "primerace/characters.hpp"
#include "primerace/lfunction.hpp"
#include "primerace/types.hpp"
#include "primerace/zeros.hpp"

using namespace primerace;

TEST_CASE("lowest ordinate of the mod-4 character") {
  const auto chi4 = character_by_index(4, 1);
  const ZeroSet zs = compute_zeros(chi4, 10.0);
  REQUIRE(zs.count() == 1);
  CHECK(std::abs(zs.gammas[0] - 6.0209489) < 1e-6);
  CHECK(zs.conductor == 4);
  CHECK(zs.character_index == 1);
  CHECK(zs.height == 10.0);
}

TEST_CASE("height below the first ordinate gives an empty set") {
  const auto chi4 = character_by_index(4, 1);
  const ZeroSet zs = compute_zeros(chi4, 5.0);
  CHECK(zs.count() == 0);
  CHECK(zs.tail_estimate > 0.0);
}

TEST_CASE("mod-4 census to height 60: count, ordering, residual") {
  const auto chi4 = character_by_index(4, 1);
  const ZeroSet zs = compute_zeros(chi4, 60.0);
  const double expected = zero_count_main_term(4, 60.0);
  CHECK(std::abs(double(zs.count()) - expected) <= 2.0);
  for (std::size_t i = 0; i < zs.count(); ++i) {
    const double g = zs.gammas[i];
    CHECK(g > 0.0);
    CHECK(g <= 60.0);
    if (i) CHECK(g > zs.gammas[i - 1]);
    // Independent evaluator vanishes at every located ordinate.
    CHECK(std::abs(hardy_z_reference(chi4, g)) < 1e-6);
  }
}

TEST_CASE("grid halving relocates the same ordinates") {
  const auto chi4 = character_by_index(4, 1);
  ScanConfig coarse, fine;
  fine.grid_step = 0.025;
  const ZeroSet a = compute_zeros(chi4, 30.0, coarse);
  const ZeroSet b = compute_zeros(chi4, 30.0, fine);
  REQUIRE(a.count() == b.count());
  for (std::size_t i = 0; i < a.count(); ++i)
    CHECK(std::abs(a.gammas[i] - b.gammas[i]) < 1e-7);
}

TEST_CASE("mod-3 character: located zero confirmed by sign change") {
  const auto chi3 = character_by_index(3, 1);
  const ZeroSet zs = compute_zeros(chi3, 10.0);
  REQUIRE(zs.count() == 1);
  const double g = zs.gammas[0];
  CHECK(std::abs(g - 8.0397372) < 1e-5);
  CHECK(hardy_z_reference(chi3, g - 1e-4) * hardy_z_reference(chi3, g + 1e-4) < 0.0);
}

TEST_CASE("conjugate members carry distinct ordinate lists") {
  // The conjugate's positive ordinates mirror the negative-side zeros of
  // the original, so the two lists must differ while their union is the
  // full zero set of either L-function.
  const auto chi = character_by_index(5, 1);
  const auto bar = chi.conjugate();
  REQUIRE(bar.index() == 3);
  const ZeroSet a = compute_zeros(chi, 20.0);
  const ZeroSet b = compute_zeros(bar, 20.0);
  CHECK(a.character_index == 1);
  CHECK(b.character_index == 3);
  CHECK(a.count() >= 4);  // average count is 5.6 here
  CHECK(b.count() >= 4);
  bool identical = a.count() == b.count();
  if (identical)
    for (std::size_t i = 0; i < a.count(); ++i)
      if (std::abs(a.gammas[i] - b.gammas[i]) > 1e-6) identical = false;
  CHECK_FALSE(identical);
  // Every located ordinate belongs to its own member's boundary function.
  for (const double g : a.gammas)
    CHECK(std::abs(hardy_z_reference(chi, g)) < 1e-6);
  for (const double g : b.gammas)
    CHECK(std::abs(hardy_z_reference(bar, g)) < 1e-6);
}

TEST_CASE("compute_zeros input validation") {
  CHECK_THROWS_AS(compute_zeros(character_by_index(4, 0), 10.0), ConfigError);
  CHECK_THROWS_AS(compute_zeros(character_by_index(6, 1), 10.0), ConfigError);
  CHECK_THROWS_AS(compute_zeros(character_by_index(4, 1), -1.0), ConfigError);
}

TEST_CASE("zero slack forces a count mismatch") {
  ScanConfig cfg;
  cfg.count_slack = 0.0;  // average count is never integral
  cfg.max_grid_retries = 0;
  CHECK_THROWS_AS(compute_zeros(character_by_index(4, 1), 60.0, cfg),
                  ZeroCountMismatch);
}

TEST_CASE("weighted zero sums") {
  ZeroSet empty;
  empty.conductor = 4;
  empty.height = 100.0;
  const auto we = weighted_zero_sum(empty);
  CHECK(we.head == 0.0);
  CHECK(we.tail > 0.0);

  ZeroSet one = empty;
  one.gammas = {6.0209489};
  const auto w1 = weighted_zero_sum(one);
  CHECK(w1.head == doctest::Approx(1.0 / (0.25 + 6.0209489 * 6.0209489)).epsilon(1e-15));
  CHECK(w1.head == doctest::Approx(0.0273959).epsilon(1e-4));

  // Tail shrinks as the truncation height grows.
  ZeroSet higher = one;
  higher.height = 1000.0;
  CHECK(weighted_zero_sum(higher).tail < w1.tail);

  // Below the clamp point the estimate saturates instead of going negative.
  ZeroSet tiny = one;
  tiny.height = 0.01;
  CHECK(weighted_zero_sum(tiny).tail > 0.0);
  ZeroSet at_clamp = one;
  at_clamp.height = 1.5707963267948966;  // 2 pi / f at f = 4
  CHECK(weighted_zero_sum(tiny).tail ==
        doctest::Approx(weighted_zero_sum(at_clamp).tail).epsilon(1e-12));

  // Larger density constant scales the tail linearly.
  CHECK(weighted_zero_sum(one, 2.0).tail ==
        doctest::Approx(w1.tail * 2.0 / 0.31830988618379067154).epsilon(1e-12));
}

TEST_CASE("repository resolves every character mod 24 through its inducer") {
  const ZeroRepository repo = compute_repository(24, 40.0);
  CHECK(repo.provenance() == ZeroProvenance::computed);
  CHECK(repo.size() == 7);  // all eight characters mod 24 are real
  for (const auto& chi : character_group(24)) {
    if (chi.is_principal()) continue;
    const auto ind = primitive_inducer(chi);
    const ZeroSet& zs = repo.for_character(chi);
    CHECK(zs.conductor == ind.modulus());
    // Same inducer, same stored object.
    CHECK(&zs == &repo.find(unsigned(ind.modulus()), unsigned(ind.index())));
  }
  // Characters mod 24 inducing the mod-3 character share one entry.
  const auto chars = character_group(24);
  const ZeroSet* shared = nullptr;
  for (const auto& chi : chars) {
    if (chi.is_principal()) continue;
    if (primitive_inducer(chi).modulus() != 3) continue;
    const ZeroSet* zp = &repo.for_character(chi);
    if (shared) CHECK(zp == shared);
    shared = zp;
  }
  CHECK(shared != nullptr);
}

TEST_CASE("repository covers every member and rejects missing lookups") {
  const ZeroRepository repo = compute_repository(5, 20.0);
  CHECK(repo.size() == 3);  // indices 1, 2, 3 each get their own set
  CHECK(repo.contains(5, 1));
  CHECK(repo.contains(5, 2));
  CHECK(repo.contains(5, 3));
  CHECK(&repo.find(5, 3) != &repo.find(5, 1));
  CHECK_THROWS_AS(repo.find(7, 1), MissingCharacter);

  const ZeroRepository empty = compute_repository(2, 20.0);
  CHECK(empty.size() == 0);
}

TEST_CASE("thread count does not change repository contents") {
  const ZeroRepository one = compute_repository(5, 20.0, {}, 1);
  const ZeroRepository four = compute_repository(5, 20.0, {}, 4);
  REQUIRE(one.size() == four.size());
  auto it1 = one.sets().begin();
  auto it4 = four.sets().begin();
  for (; it1 != one.sets().end(); ++it1, ++it4) {
    CHECK(it1->first == it4->first);
    REQUIRE(it1->second.gammas.size() == it4->second.gammas.size());
    for (std::size_t i = 0; i < it1->second.gammas.size(); ++i)
      CHECK(it1->second.gammas[i] == it4->second.gammas[i]);
  }
}

TEST_CASE("zero file round-trips byte-exactly") {
  const ZeroRepository repo = compute_repository(5, 20.0);
  std::ostringstream first;
  save_zeros(repo, first);

  std::istringstream in(first.str());
  const ZeroRepository loaded = load_zeros(in);
  CHECK(loaded.provenance() == ZeroProvenance::file);
  REQUIRE(loaded.size() == repo.size());

  std::ostringstream second;
  save_zeros(loaded, second);
  CHECK(first.str() == second.str());

  // Doubles survive the %.17g round-trip exactly.
  for (const auto& [key, zs] : repo.sets()) {
    const ZeroSet& back = loaded.find(zs.conductor, zs.character_index);
    REQUIRE(back.gammas.size() == zs.gammas.size());
    for (std::size_t i = 0; i < zs.gammas.size(); ++i)
      CHECK(back.gammas[i] == zs.gammas[i]);
  }
}

TEST_CASE("single-line file from the format's documentation") {
  std::istringstream in("4 1 6.0209489\n");
  const ZeroRepository repo = load_zeros(in);
  REQUIRE(repo.size() == 1);
  const ZeroSet& zs = repo.find(4, 1);
  REQUIRE(zs.count() == 1);
  CHECK(zs.gammas[0] == 6.0209489);
  CHECK(zs.height == 6.0209489);
}

TEST_CASE("loader accepts comments, blanks, and interleaved blocks") {
  std::istringstream in(
      "# ordinates below\n"
      "\n"
      "4 1 6.0209489\n"
      "3 1 8.0397372\n"
      "   # indented comment\n"
      "4 1 10.2437703\n"
      "4 1 10.2437703\n");  // duplicate collapses
  const ZeroRepository repo = load_zeros(in);
  REQUIRE(repo.size() == 2);
  CHECK(repo.find(4, 1).count() == 2);
  CHECK(repo.find(3, 1).count() == 1);
}

TEST_CASE("loader rejects malformed and inconsistent input") {
  auto load_str = [](const char* text) {
    std::istringstream in(text);
    return load_zeros(in);
  };
  CHECK_THROWS_AS(load_str("4 1 abc\n"), ParseError);
  CHECK_THROWS_AS(load_str("4\n"), ParseError);
  CHECK_THROWS_AS(load_str("4 1 6.1 extra\n"), ParseError);
  CHECK_THROWS_AS(load_str("4 1 -6.1\n"), ParseError);
  CHECK_THROWS_AS(load_str("4 1 0\n"), ParseError);
  CHECK_THROWS_AS(load_str("4 9 6.1\n"), ParseError);   // no such index mod 4
  CHECK_THROWS_AS(load_str("6 1 6.1\n"), ParseError);   // not primitive
  CHECK_THROWS_AS(load_str("4 0 6.1\n"), ParseError);   // principal
  CHECK_THROWS_AS(load_str("4 1 6.1\n4 1 5.9\n"), OrderError);

  const ZeroRepository empty = load_str("");
  CHECK(empty.size() == 0);
  CHECK_THROWS_AS(empty.find(4, 1), MissingCharacter);
}
