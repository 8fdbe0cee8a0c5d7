#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "primerace/types.hpp"

namespace primerace {

enum class OrderingKind { full_chain, top_chain_k, S_2k, S_2k_sharp, custom };

// A strict-ordering region R(S) = {x : x_i > x_j for all (i,j) in S}.
// Pair indices are 1-based to match the usual display conventions.
struct OrderingSpec {
  OrderingKind kind = OrderingKind::custom;
  int n = 0;
  int k = 0;  // block parameter for the structured kinds; 0 otherwise
  std::vector<std::pair<int, int>> pairs;
};

namespace detail {

inline bool acyclic(int n, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<std::vector<int>> adj(n + 1);
  for (const auto& [i, j] : pairs) adj[i].push_back(j);
  // 0 unvisited, 1 on stack, 2 done; iterative DFS.
  std::vector<int> state(n + 1, 0);
  std::vector<std::pair<int, std::size_t>> stack;
  for (int s = 1; s <= n; ++s) {
    if (state[s] != 0) continue;
    stack.emplace_back(s, 0);
    state[s] = 1;
    while (!stack.empty()) {
      auto& [v, idx] = stack.back();
      if (idx < adj[v].size()) {
        const int w = adj[v][idx++];
        if (state[w] == 1) return false;
        if (state[w] == 0) {
          state[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        state[v] = 2;
        stack.pop_back();
      }
    }
  }
  return true;
}

}  // namespace detail

inline void validate_ordering(const OrderingSpec& s) {
  if (s.n < 1) throw Inadmissible("ordering needs at least one coordinate");
  for (const auto& [i, j] : s.pairs) {
    if (i < 1 || i > s.n || j < 1 || j > s.n)
      throw Inadmissible("pair index out of range");
    if (i == j) throw Inadmissible("diagonal pair (i,i) is empty");
  }
  if (!detail::acyclic(s.n, s.pairs))
    throw Inadmissible("pair set contains a cycle; R(S) is empty");
}

inline OrderingSpec make_custom_ordering(
    int n, std::vector<std::pair<int, int>> pairs) {
  OrderingSpec s;
  s.kind = OrderingKind::custom;
  s.n = n;
  s.pairs = std::move(pairs);
  validate_ordering(s);
  return s;
}

// The structured pair sets. full_chain: x_1 > ... > x_n. top_chain_k:
// x_1 > ... > x_k > max(rest). S_2k chains the leading 2k coordinates
// and puts the rest below the 2k-th. S_2k_sharp interleaves: odd
// coordinates descend, evens ascend underneath, the free block sits
// between x_{2k-1} and x_{2k}.
inline OrderingSpec make_ordering(OrderingKind kind, int n, int k = 0) {
  OrderingSpec s;
  s.kind = kind;
  s.n = n;
  s.k = k;
  switch (kind) {
    case OrderingKind::full_chain:
      for (int i = 1; i < n; ++i) s.pairs.emplace_back(i, i + 1);
      break;
    case OrderingKind::top_chain_k:
      if (k < 1 || k > n) throw Inadmissible("top_chain_k needs 1 <= k <= n");
      for (int i = 1; i < k; ++i) s.pairs.emplace_back(i, i + 1);
      for (int j = k + 1; j <= n; ++j) s.pairs.emplace_back(k, j);
      break;
    case OrderingKind::S_2k:
      if (k < 1 || 2 * k > n) throw Inadmissible("S_2k needs 1 <= 2k <= n");
      for (int i = 1; i <= 2 * k - 1; ++i) s.pairs.emplace_back(i, i + 1);
      for (int j = 2 * k + 1; j <= n; ++j) s.pairs.emplace_back(2 * k, j);
      break;
    case OrderingKind::S_2k_sharp:
      if (k < 1 || 2 * k > n)
        throw Inadmissible("S_2k_sharp needs 1 <= 2k <= n");
      for (int i = 1; i <= k - 1; ++i) s.pairs.emplace_back(2 * i - 1, 2 * i + 1);
      for (int i = 1; i <= k - 1; ++i) s.pairs.emplace_back(2 * i + 2, 2 * i);
      for (int j = 2 * k; j <= n; ++j) s.pairs.emplace_back(2 * k - 1, j);
      for (int i = 2 * k + 1; i <= n; ++i) s.pairs.emplace_back(i, 2 * k);
      break;
    case OrderingKind::custom:
      throw Inadmissible("custom orderings take an explicit pair list");
  }
  validate_ordering(s);
  return s;
}

// Number of pairs containing coordinate i (1-based); the per-coordinate
// smoothness degree deg_i(S).
inline int pair_degree(const OrderingSpec& s, int i) {
  int d = 0;
  for (const auto& [a, b] : s.pairs) d += (a == i) + (b == i);
  return d;
}

inline int max_pair_degree(const OrderingSpec& s) {
  int d = 0;
  for (int i = 1; i <= s.n; ++i) d = std::max(d, pair_degree(s, i));
  return d;
}

template <typename VecLike>
inline bool in_region(const OrderingSpec& s, const VecLike& x) {
  for (const auto& [i, j] : s.pairs)
    if (!(x[i - 1] > x[j - 1])) return false;
  return true;
}

// P(x in R(S)) for exchangeable continuous coordinates: the fraction of
// the n! orderings compatible with S (linear extensions / n!).
double independence_baseline(const OrderingSpec& s);

}  // namespace primerace
