#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "primerace/characters.hpp"

namespace primerace {

// Positive critical-line ordinates for one primitive character, truncated
// at `height`. A complex character and its conjugate have distinct sets:
// the conjugate's positive ordinates are the mirrored negative-side zeros,
// which do not coincide with the positive-side ones.
struct ZeroSet {
  std::uint64_t conductor = 0;
  unsigned character_index = 0;
  double height = 0.0;
  std::vector<double> gammas;  // strictly ascending, all in (0, height]
  double tail_estimate = 0.0;  // default-convention sum_{gamma > height} weight

  std::uint64_t label() const;  // packed (conductor << 32) | index
  std::size_t count() const { return gammas.size(); }
};

// head = sum over stored ordinates of 1/(1/4 + gamma^2), accumulated in
// stored (ascending) order; tail = integral of the average zero density
// c log(f t / 2 pi) / (2 pi) against 1/t^2 from the truncation height,
// i.e. c (log(f T / 2 pi) + 1) / (2 pi T), with T clamped to >= 2 pi / f
// so the logarithm stays nonnegative. c defaults to 1/pi.
struct WeightedZeroSum {
  double head = 0.0;
  double tail = 0.0;
};
WeightedZeroSum weighted_zero_sum(const ZeroSet& zs,
                                  double density_constant = 0.31830988618379067154);

struct ScanConfig {
  double grid_step = 0.05;
  // Allowed |found - average count|; negative means max(2, log(f T)).
  double count_slack = -1.0;
  int max_grid_retries = 3;   // grid halvings before ZeroCountMismatch
  double refine_tol = 1e-10;  // bracket width at which refinement stops
};

enum class ZeroProvenance { computed, file };

// Immutable-after-build map from packed primitive-character label to its
// ZeroSet.
class ZeroRepository {
 public:
  void insert(ZeroSet zs);

  bool contains(std::uint64_t conductor, unsigned index) const;
  const ZeroSet& find(std::uint64_t conductor, unsigned index) const;

  // Resolves any non-principal character through its primitive inducer.
  const ZeroSet& for_character(const DirichletCharacter& chi) const;

  const std::map<std::uint64_t, ZeroSet>& sets() const { return sets_; }
  std::size_t size() const { return sets_.size(); }

  ZeroProvenance provenance() const { return provenance_; }
  void set_provenance(ZeroProvenance p) { provenance_ = p; }

 private:
  std::map<std::uint64_t, ZeroSet> sets_;
  ZeroProvenance provenance_ = ZeroProvenance::computed;
};

// All ordinates in (0, height] of L(s, chi) for a primitive non-principal
// character, located by sign-change scanning of the rotated boundary
// function on a uniform grid and per-bracket refinement to ~1e-10, far
// inside the 1e-8 contract. Throws ZeroCountMismatch when the located
// count disagrees with the average-count main term by more than the slack
// after the configured number of grid halvings.
ZeroSet compute_zeros(const DirichletCharacter& chi, double height,
                      const ScanConfig& config = {});

// One ZeroSet per primitive inducer of the non-principal characters mod q
// (each member of a conjugate pair scanned separately). Characters may be
// scanned concurrently; results are independent of the thread count.
ZeroRepository compute_repository(std::uint64_t q, double height,
                                  const ScanConfig& config = {},
                                  unsigned threads = 1);

// Text format: one zero per line, `<conductor> <index> <gamma>`, gammas
// ascending within each (conductor, index) block; '#' starts a comment
// line. Ordinates are written as %.17g so write -> load -> write is
// byte-identical. Loaded sets take height = largest stored ordinate.
ZeroRepository load_zeros(std::istream& in);
ZeroRepository load_zeros(const std::string& path);
void save_zeros(const ZeroRepository& repo, std::ostream& out);
void save_zeros(const ZeroRepository& repo, const std::string& path);

}  // namespace primerace
