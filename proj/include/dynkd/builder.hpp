#ifndef DYNKD_BUILDER_HPP
#define DYNKD_BUILDER_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <future>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dynkd/node.hpp"
#include "dynkd/superkey.hpp"

namespace dynkd {

/// Raised by the builders when two input tuples are identical.
class DuplicateDatum : public std::runtime_error {
public:
  explicit DuplicateDatum(KTuple t)
      : std::runtime_error("duplicate tuple " + t.to_string()), tuple_(std::move(t)) {}
  const KTuple& tuple() const noexcept { return tuple_; }

private:
  KTuple tuple_;
};

enum class BuildAlgorithm {
  /// k presorted reference orderings, stably re-partitioned at every level.
  KnLogN,
  /// One presort for the root key, then median selection at each level.
  NLogN,
};

inline constexpr std::size_t kDefaultParallelThreshold = 65536;

/// In-order (less, node, greater) copy of the subtree's tuples.
inline void collect_subtree(const Node* root, std::vector<KTuple>& out) {
  if (!root) return;
  collect_subtree(root->less.get(), out);
  out.push_back(root->tuple);
  collect_subtree(root->greater.get(), out);
}

inline std::vector<KTuple> collect_subtree(const Node* root) {
  std::vector<KTuple> out;
  collect_subtree(root, out);
  return out;
}

/// Like collect_subtree but consumes the subtree, moving tuples out.
inline void drain_subtree(NodePtr root, std::vector<KTuple>& out) {
  if (!root) return;
  drain_subtree(std::move(root->less), out);
  out.push_back(std::move(root->tuple));
  drain_subtree(std::move(root->greater), out);
}

/// Builds a subtree of at most three tuples with at most three super-key
/// comparisons. The lower median becomes the root.
template <class Compare = SuperKeyCompare>
NodePtr rebuild_small(std::vector<KTuple> tuples, std::size_t level, Compare cmp = {}) {
  switch (tuples.size()) {
    case 0:
      return nullptr;
    case 1:
      return make_node(std::move(tuples[0]));
    case 2: {
      auto c = cmp(tuples[0], tuples[1], level);
      if (c == 0) throw DuplicateDatum(tuples[0]);
      if (c < 0) return make_node(std::move(tuples[0]), nullptr, make_node(std::move(tuples[1])));
      return make_node(std::move(tuples[1]), nullptr, make_node(std::move(tuples[0])));
    }
    case 3: {
      std::array<std::size_t, 3> order{0, 1, 2};
      auto less_than = [&](std::size_t a, std::size_t b) {
        auto c = cmp(tuples[a], tuples[b], level);
        if (c == 0) throw DuplicateDatum(tuples[a]);
        return c < 0;
      };
      // Three-element sorting network.
      if (less_than(order[1], order[0])) std::swap(order[0], order[1]);
      if (less_than(order[2], order[1])) {
        std::swap(order[1], order[2]);
        if (less_than(order[1], order[0])) std::swap(order[0], order[1]);
      }
      return make_node(std::move(tuples[order[1]]), make_node(std::move(tuples[order[0]])),
                       make_node(std::move(tuples[order[2]])));
    }
    default:
      throw ContractViolation("rebuild_small: expected at most 3 tuples, got " +
                              std::to_string(tuples.size()));
  }
}

namespace detail {

inline std::size_t check_dimensions(const std::vector<KTuple>& tuples) {
  if (tuples.empty()) return 0;
  const std::size_t k = tuples.front().k();
  if (k == 0) throw ContractViolation("build: tuples must have k >= 1");
  for (const auto& t : tuples) {
    if (t.k() != k) throw ContractViolation("build: mixed tuple dimensions");
  }
  return k;
}

inline std::size_t lower_median(std::size_t lo, std::size_t hi) noexcept { return lo + (hi - lo - 1) / 2; }

/// The median-split recursion shared by both algorithms. Sub-problems larger
/// than `threshold` are split across the worker budget; the resulting
/// structure never depends on the budget.
class BalancedBuilder {
public:
  BalancedBuilder(std::vector<KTuple>& tuples, std::size_t k, BuildAlgorithm algo, std::size_t threshold)
      : tuples_(tuples), k_(k), algo_(algo), threshold_(threshold) {}

  NodePtr build(std::size_t level, std::size_t workers) {
    const std::size_t n = tuples_.size();
    if (n == 0) return nullptr;
    if (algo_ == BuildAlgorithm::NLogN) {
      switch (k_) {
        case 1: return build_records<1>(level, workers);
        case 2: return build_records<2>(level, workers);
        case 3: return build_records<3>(level, workers);
        case 4: return build_records<4>(level, workers);
        case 5: return build_records<5>(level, workers);
        case 6: return build_records<6>(level, workers);
        case 7: return build_records<7>(level, workers);
        case 8: return build_records<8>(level, workers);
        default: break;
      }
    }
    // Comparisons read a contiguous copy of the coordinates rather than
    // chasing each tuple's heap storage.
    keys_.resize(n * k_);
    for (std::size_t i = 0; i < n; ++i) {
      std::copy(tuples_[i].coords().begin(), tuples_[i].coords().end(),
                keys_.begin() + static_cast<std::ptrdiff_t>(i * k_));
    }
    if (algo_ == BuildAlgorithm::KnLogN) {
      refs_.assign(k_, std::vector<std::size_t>(n));
      for (std::size_t d = 0; d < k_; ++d) {
        presort(refs_[d], d);
      }
      scratch_.resize(n);
      return build_knlogn(0, n, level, workers);
    }
    std::vector<std::size_t> index(n);
    std::iota(index.begin(), index.end(), std::size_t{0});
    auto less = [this](std::size_t a, std::size_t b, std::size_t p) { return key_less(a, b, p); };
    auto index_of = [](std::size_t i) { return i; };
    return select_root(index, level, workers, less, index_of);
  }

private:
  // p is a dimension index, already reduced mod k.
  bool key_less(std::size_t a, std::size_t b, std::size_t p) const noexcept {
    const Coord* ka = keys_.data() + a * k_;
    const Coord* kb = keys_.data() + b * k_;
    for (std::size_t i = 0; i < k_; ++i) {
      std::size_t d = p + i;
      if (d >= k_) d -= k_;
      if (ka[d] != kb[d]) return ka[d] < kb[d];
    }
    return false;
  }

  bool key_equal(std::size_t a, std::size_t b) const noexcept {
    return std::equal(keys_.begin() + static_cast<std::ptrdiff_t>(a * k_),
                      keys_.begin() + static_cast<std::ptrdiff_t>((a + 1) * k_),
                      keys_.begin() + static_cast<std::ptrdiff_t>(b * k_));
  }

  // Adjacent equal super keys under a total order mean identical tuples.
  void presort(std::vector<std::size_t>& refs, std::size_t level) const {
    std::iota(refs.begin(), refs.end(), std::size_t{0});
    const std::size_t p = level % k_;
    std::sort(refs.begin(), refs.end(), [&](std::size_t a, std::size_t b) { return key_less(a, b, p); });
    for (std::size_t i = 1; i < refs.size(); ++i) {
      if (key_equal(refs[i - 1], refs[i])) throw DuplicateDatum(tuples_[refs[i]]);
    }
  }

  template <class LessFn, class GreaterFn>
  std::pair<NodePtr, NodePtr> children(std::size_t size, std::size_t workers, LessFn&& less_fn,
                                       GreaterFn&& greater_fn) {
    if (workers > 1 && size > threshold_) {
      const std::size_t half = workers / 2;
      auto fut = std::async(std::launch::async, [&] { return less_fn(half); });
      NodePtr gt = greater_fn(workers - half);
      return {fut.get(), std::move(gt)};
    }
    NodePtr lt = less_fn(1);
    NodePtr gt = greater_fn(1);
    return {std::move(lt), std::move(gt)};
  }

  NodePtr build_knlogn(std::size_t lo, std::size_t hi, std::size_t level, std::size_t workers) {
    if (lo == hi) return nullptr;
    const std::size_t p = level % k_;
    const std::size_t mid = lower_median(lo, hi);
    const std::size_t median = refs_[p][mid];

    // refs_[p] is already split by its own order; stably split the others
    // around the median so each half stays sorted by its super key.
    for (std::size_t q = 0; q < k_; ++q) {
      if (q == p) continue;
      auto& r = refs_[q];
      std::size_t left = lo;
      std::size_t right = mid + 1;
      for (std::size_t i = lo; i < hi; ++i) {
        const std::size_t ref = r[i];
        if (ref == median) continue;
        if (key_less(ref, median, p)) {
          scratch_[left++] = ref;
        } else {
          scratch_[right++] = ref;
        }
      }
      std::copy(scratch_.begin() + static_cast<std::ptrdiff_t>(lo), scratch_.begin() + static_cast<std::ptrdiff_t>(mid),
                r.begin() + static_cast<std::ptrdiff_t>(lo));
      std::copy(scratch_.begin() + static_cast<std::ptrdiff_t>(mid + 1),
                scratch_.begin() + static_cast<std::ptrdiff_t>(hi), r.begin() + static_cast<std::ptrdiff_t>(mid + 1));
    }

    auto node = std::make_unique<Node>(std::move(tuples_[median]));
    auto [lt, gt] = children(
        hi - lo, workers, [&](std::size_t w) { return build_knlogn(lo, mid, level + 1, w); },
        [&](std::size_t w) { return build_knlogn(mid + 1, hi, level + 1, w); });
    node->less = std::move(lt);
    node->greater = std::move(gt);
    update_height(*node);
    return node;
  }

  // Selection path: elements carry their key inline for k <= 8 so the
  // median searches stream through contiguous memory.
  template <std::size_t K>
  struct KeyRecord {
    std::array<Coord, K> key;
    std::size_t index;
  };

  template <std::size_t K>
  NodePtr build_records(std::size_t level, std::size_t workers) {
    std::vector<KeyRecord<K>> recs(tuples_.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
      std::copy_n(tuples_[i].coords().begin(), K, recs[i].key.begin());
      recs[i].index = i;
    }
    auto less = [](const KeyRecord<K>& a, const KeyRecord<K>& b, std::size_t p) {
      for (std::size_t i = 0; i < K; ++i) {
        std::size_t d = p + i;
        if (d >= K) d -= K;
        if (a.key[d] != b.key[d]) return a.key[d] < b.key[d];
      }
      return false;
    };
    auto index_of = [](const KeyRecord<K>& r) { return r.index; };
    return select_root(recs, level, workers, less, index_of);
  }

  template <class Elem, class Less, class IndexOf>
  NodePtr select_root(std::vector<Elem>& elems, std::size_t level, std::size_t workers, const Less& less,
                      const IndexOf& index_of) {
    const std::size_t p = level % k_;
    std::sort(elems.begin(), elems.end(), [&](const Elem& a, const Elem& b) { return less(a, b, p); });
    for (std::size_t i = 1; i < elems.size(); ++i) {
      if (!less(elems[i - 1], elems[i], p)) throw DuplicateDatum(tuples_[index_of(elems[i])]);
    }
    return build_nlogn(elems, 0, elems.size(), level, workers, true, less, index_of);
  }

  template <class Elem, class Less, class IndexOf>
  NodePtr build_nlogn(std::vector<Elem>& elems, std::size_t lo, std::size_t hi, std::size_t level,
                      std::size_t workers, bool sorted, const Less& less, const IndexOf& index_of) {
    if (lo == hi) return nullptr;
    const std::size_t mid = lower_median(lo, hi);
    auto first = elems.begin() + static_cast<std::ptrdiff_t>(lo);
    auto nth = elems.begin() + static_cast<std::ptrdiff_t>(mid);
    auto last = elems.begin() + static_cast<std::ptrdiff_t>(hi);
    if (!sorted) {
      const std::size_t p = level % k_;
      std::nth_element(first, nth, last, [&](const Elem& a, const Elem& b) { return less(a, b, p); });
    }

    auto node = std::make_unique<Node>(std::move(tuples_[index_of(*nth)]));
    auto [lt, gt] = children(
        hi - lo, workers,
        [&](std::size_t w) { return build_nlogn(elems, lo, mid, level + 1, w, false, less, index_of); },
        [&](std::size_t w) { return build_nlogn(elems, mid + 1, hi, level + 1, w, false, less, index_of); });
    node->less = std::move(lt);
    node->greater = std::move(gt);
    update_height(*node);
    return node;
  }

  std::vector<KTuple>& tuples_;
  std::vector<Coord> keys_;
  std::size_t k_;
  BuildAlgorithm algo_;
  std::size_t threshold_;
  std::vector<std::vector<std::size_t>> refs_;
  std::vector<std::size_t> scratch_;
};

}  // namespace detail

/// Builds a median-split subtree whose root discriminates at `level`.
/// Every node's child heights differ by at most one. Throws DuplicateDatum
/// if two tuples are identical.
inline NodePtr build_balanced(std::vector<KTuple> tuples, std::size_t level,
                              BuildAlgorithm algo = BuildAlgorithm::NLogN) {
  const std::size_t k = detail::check_dimensions(tuples);
  return detail::BalancedBuilder(tuples, k, algo, kDefaultParallelThreshold).build(level, 1);
}

/// build_balanced with the two halves of any sub-problem larger than
/// `threshold` built concurrently, up to `workers` threads in total. The
/// output is structurally identical to build_balanced for every worker count.
inline NodePtr build_parallel(std::vector<KTuple> tuples, std::size_t level, std::size_t workers,
                              std::size_t threshold = kDefaultParallelThreshold,
                              BuildAlgorithm algo = BuildAlgorithm::NLogN) {
  if (workers == 0) throw ContractViolation("build_parallel: workers must be positive");
  const std::size_t k = detail::check_dimensions(tuples);
  return detail::BalancedBuilder(tuples, k, algo, threshold).build(level, workers);
}

}  // namespace dynkd

#endif  // DYNKD_BUILDER_HPP
