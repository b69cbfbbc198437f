// Shared test helpers: hand-built trees and brute-force oracles that do not
// go through the library's own search, build or verify paths.
#ifndef DYNKD_TESTS_FIXTURES_HPP
#define DYNKD_TESTS_FIXTURES_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "dynkd/dynkd.hpp"

namespace fixtures {

using dynkd::KTuple;
using dynkd::make_node;
using dynkd::NodePtr;

/// Rotated-sequence comparison written independently of compare_superkey.
inline int brute_compare(const KTuple& a, const KTuple& b, std::size_t level) {
  const std::size_t k = a.k();
  std::vector<std::int64_t> ra, rb;
  for (std::size_t i = 0; i < k; ++i) {
    ra.push_back(a[(level + i) % k]);
    rb.push_back(b[(level + i) % k]);
  }
  if (ra < rb) return -1;
  if (rb < ra) return 1;
  return 0;
}

// A 3-node chain that needs rebuilding sits at level 2 (z:x:y) under
//   root (10,5,5) [x:y:z] -> less (5,4,4) [y:z:x] -> less (8,1,5) [z:x:y]
// with filler nodes chosen so every other node is AVL(1)-balanced.
// The 11 tuples before (9,2,1) is inserted:
inline NodePtr chain_tree_before_insert() {
  auto chain = make_node({8, 1, 5}, make_node({8, 3, 2}));
  auto a = make_node({5, 4, 4}, std::move(chain), make_node({6, 6, 6}, make_node({7, 7, 3})));
  auto c = make_node({20, 20, 20}, make_node({15, 10, 10}, nullptr, make_node({16, 5, 12})),
                     make_node({25, 30, 30}, make_node({26, 40, 1})));
  return make_node({10, 5, 5}, std::move(a), std::move(c));
}

/// The same tree with (9,2,1) hung under (8,3,2) and no rebalancing.
inline NodePtr chain_tree_unbalanced() {
  auto chain = make_node({8, 1, 5}, make_node({8, 3, 2}, nullptr, make_node({9, 2, 1})));
  auto a = make_node({5, 4, 4}, std::move(chain), make_node({6, 6, 6}, make_node({7, 7, 3})));
  auto c = make_node({20, 20, 20}, make_node({15, 10, 10}, nullptr, make_node({16, 5, 12})),
                     make_node({25, 30, 30}, make_node({26, 40, 1})));
  return make_node({10, 5, 5}, std::move(a), std::move(c));
}

/// The chain once rebuilt around its median.
inline NodePtr chain_rebuilt() { return make_node({8, 3, 2}, make_node({9, 2, 1}), make_node({8, 1, 5})); }

inline std::vector<KTuple> chain_tuples() { return {{8, 1, 5}, {8, 3, 2}, {9, 2, 1}}; }

inline KTuple random_tuple(std::mt19937_64& rng, std::size_t k, std::int64_t lo, std::int64_t hi) {
  std::uniform_int_distribution<std::int64_t> dist(lo, hi);
  std::vector<std::int64_t> c(k);
  for (auto& x : c) x = dist(rng);
  return KTuple(std::move(c));
}

inline std::vector<KTuple> random_distinct(std::mt19937_64& rng, std::size_t n, std::size_t k, std::int64_t lo,
                                           std::int64_t hi) {
  std::set<KTuple> seen;
  std::vector<KTuple> out;
  while (out.size() < n) {
    auto t = random_tuple(rng, k, lo, hi);
    if (seen.insert(t).second) out.push_back(std::move(t));
  }
  return out;
}

inline void gather(const dynkd::Node* n, std::vector<KTuple>& out) {
  if (!n) return;
  out.push_back(n->tuple);
  gather(n->less.get(), out);
  gather(n->greater.get(), out);
}

/// Quadratic ordering check: every descendant against every ancestor.
inline bool brute_ordered(const dynkd::Node* n, std::size_t level = 0) {
  if (!n) return true;
  std::vector<KTuple> lt, gt;
  gather(n->less.get(), lt);
  gather(n->greater.get(), gt);
  for (const auto& t : lt) {
    if (brute_compare(t, n->tuple, level) >= 0) return false;
  }
  for (const auto& t : gt) {
    if (brute_compare(t, n->tuple, level) <= 0) return false;
  }
  return brute_ordered(n->less.get(), level + 1) && brute_ordered(n->greater.get(), level + 1);
}

inline std::size_t true_height(const dynkd::Node* n) {
  return n ? 1 + std::max(true_height(n->less.get()), true_height(n->greater.get())) : 0;
}

/// Child heights differ by at most one everywhere.
inline bool perfectly_balanced(const dynkd::Node* n) {
  if (!n) return true;
  const auto hl = true_height(n->less.get());
  const auto hr = true_height(n->greater.get());
  return (hl > hr ? hl - hr : hr - hl) <= 1 && perfectly_balanced(n->less.get()) &&
         perfectly_balanced(n->greater.get());
}

/// Reference builder: full sort by the level's super key, lower median as
/// root, recurse. Deliberately naive.
inline NodePtr reference_build(std::vector<KTuple> ts, std::size_t level) {
  if (ts.empty()) return nullptr;
  std::sort(ts.begin(), ts.end(),
            [&](const KTuple& a, const KTuple& b) { return brute_compare(a, b, level) < 0; });
  const std::size_t mid = (ts.size() - 1) / 2;
  std::vector<KTuple> lo(ts.begin(), ts.begin() + static_cast<std::ptrdiff_t>(mid));
  std::vector<KTuple> hi(ts.begin() + static_cast<std::ptrdiff_t>(mid) + 1, ts.end());
  return make_node(ts[mid], reference_build(std::move(lo), level + 1), reference_build(std::move(hi), level + 1));
}

inline std::multiset<KTuple> contents(const dynkd::Node* n) {
  std::vector<KTuple> v;
  gather(n, v);
  return {v.begin(), v.end()};
}

inline std::vector<dynkd::BalancePolicy> all_policies() {
  return {dynkd::BalancePolicy::avl(1), dynkd::BalancePolicy::avl(2), dynkd::BalancePolicy::avl(3),
          dynkd::BalancePolicy::avl(4), dynkd::BalancePolicy::red_black()};
}

inline std::vector<dynkd::ReplacementStrategy> all_strategies() {
  return {dynkd::ReplacementStrategy::HigherSubtree, dynkd::ReplacementStrategy::AlwaysSuccessor};
}

}  // namespace fixtures

#endif  // DYNKD_TESTS_FIXTURES_HPP
