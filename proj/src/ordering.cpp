#include "primerace/ordering.hpp"

#include <cstdint>
#include <vector>

namespace primerace {

namespace {

double falling_ratio(int n, int drop) {
  // (n - drop)! / n! as a product of reciprocals.
  double r = 1.0;
  for (int i = n; i > n - drop; --i) r /= i;
  return r;
}

}  // namespace

double independence_baseline(const OrderingSpec& s) {
  switch (s.kind) {
    case OrderingKind::full_chain:
      return falling_ratio(s.n, s.n);  // 1/n!
    case OrderingKind::top_chain_k:
      return falling_ratio(s.n, s.k);
    case OrderingKind::S_2k:
    case OrderingKind::S_2k_sharp:
      return falling_ratio(s.n, 2 * s.k);
    case OrderingKind::custom:
      break;
  }
  // Linear-extension count by bitmask DP: states are downward-closed
  // subsets already placed (largest first); a coordinate may be placed
  // next when everything required to exceed it is already placed.
  const int n = s.n;
  if (n > 20) throw DimensionTooLarge("baseline DP supports n <= 20");
  std::vector<std::uint32_t> need(n, 0);  // bit j on: j must precede i
  for (const auto& [i, j] : s.pairs) need[j - 1] |= 1u << (i - 1);
  std::vector<double> ways(std::size_t(1) << n, 0.0);
  ways[0] = 1.0;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    if (ways[m] == 0.0) continue;
    for (int i = 0; i < n; ++i)
      if (!(m & (1u << i)) && (need[i] & m) == need[i])
        ways[m | (1u << i)] += ways[m];
  }
  double total = ways[(std::size_t(1) << n) - 1];
  for (int i = 2; i <= n; ++i) total /= i;
  return total;
}

}  // namespace primerace
