#ifndef DYNKD_TREE_HPP
#define DYNKD_TREE_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dynkd/balance.hpp"
#include "dynkd/builder.hpp"
#include "dynkd/node.hpp"
#include "dynkd/superkey.hpp"

namespace dynkd {

/// Which neighbour replaces a deleted node that has two children.
enum class ReplacementStrategy {
  /// Take the replacement from the taller child subtree; ties go to the successor.
  HigherSubtree,
  AlwaysSuccessor,
};

inline std::string_view label(ReplacementStrategy s) noexcept {
  return s == ReplacementStrategy::HigherSubtree ? "higher" : "successor";
}

inline std::optional<ReplacementStrategy> parse_strategy(std::string_view s) {
  if (s == "higher") return ReplacementStrategy::HigherSubtree;
  if (s == "successor") return ReplacementStrategy::AlwaysSuccessor;
  return std::nullopt;
}

enum class Extreme { Min, Max };

namespace detail {

inline const Node* find_extreme(const Node* n, std::size_t level, std::size_t dim, Extreme dir,
                                std::size_t k) noexcept {
  if (level % k == dim) {
    // This node's own discriminant prunes one side.
    const Node* next = dir == Extreme::Min ? n->less.get() : n->greater.get();
    return next ? find_extreme(next, level + 1, dim, dir, k) : n;
  }
  const Node* best = n;
  for (const Node* child : {n->less.get(), n->greater.get()}) {
    if (!child) continue;
    const Node* cand = find_extreme(child, level + 1, dim, dir, k);
    auto c = compare_superkey_unchecked(cand->tuple, best->tuple, dim);
    if (dir == Extreme::Min ? c < 0 : c > 0) best = cand;
  }
  return best;
}

}  // namespace detail

/// Node holding the smallest (Min) or largest (Max) super key that starts at
/// coordinate `dim`, within the subtree whose root discriminates at `level`.
/// Only nodes discriminating on `dim` prune; all others search both children.
inline const Node* find_extreme(const Node* subtree, std::size_t level, std::size_t dim, Extreme dir) {
  if (!subtree) throw ContractViolation("find_extreme: empty subtree");
  const std::size_t k = subtree->tuple.k();
  if (dim >= k) throw ContractViolation("find_extreme: dim " + std::to_string(dim) + " >= k " + std::to_string(k));
  return detail::find_extreme(subtree, level, dim, dir, k);
}

struct TreeOptions {
  std::size_t k = 3;
  BalancePolicy policy = BalancePolicy::red_black();
  ReplacementStrategy strategy = ReplacementStrategy::HigherSubtree;
  /// Threads available to a single rebuild.
  std::size_t workers = 1;
  /// Rebuild sub-problems above this many tuples may be split across workers.
  std::size_t parallel_threshold = kDefaultParallelThreshold;
  BuildAlgorithm algorithm = BuildAlgorithm::NLogN;
};

/// Sizes of subtrees rebuilt since construction or the last reset.
struct RebuildStats {
  std::size_t largest = 0;
  std::size_t count = 0;
};

/// A dynamic k-d tree of distinct tuples that rebuilds any subtree found
/// unbalanced on the way back up from an insertion or deletion.
///
/// Not internally synchronized: one writer, or any number of readers.
class KdTree {
public:
  explicit KdTree(TreeOptions opts = {}) : opts_(std::move(opts)) { validate(); }

  /// Adopts an existing subtree (e.g. a static tree from build_balanced) as
  /// the root. The subtree is not checked; run verify() if it is untrusted.
  KdTree(TreeOptions opts, NodePtr root) : opts_(std::move(opts)), root_(std::move(root)) {
    validate();
    size_ = count_nodes(root_.get());
  }

  /// Static, balanced tree over `tuples`; throws DuplicateDatum on repeats.
  static KdTree build(TreeOptions opts, std::vector<KTuple> tuples) {
    for (const auto& t : tuples) {
      if (t.k() != opts.k) throw ContractViolation("KdTree::build: tuple " + t.to_string() + " has wrong k");
    }
    const std::size_t workers = opts.workers;
    const std::size_t threshold = opts.parallel_threshold;
    const auto algo = opts.algorithm;
    return KdTree(std::move(opts), build_parallel(std::move(tuples), 0, workers, threshold, algo));
  }

  KdTree(KdTree&&) noexcept = default;
  KdTree& operator=(KdTree&&) noexcept = default;

  /// Adds t as a new leaf. Returns false, leaving the tree untouched, if an
  /// identical tuple is already present.
  bool insert(const KTuple& t) {
    check_k(t, "insert");
    const bool inserted = insert_at(root_, t, 0);
    if (inserted) ++size_;
    return inserted;
  }

  bool contains(const KTuple& t) const {
    check_k(t, "contains");
    const Node* n = root_.get();
    for (std::size_t level = 0; n; ++level) {
      auto c = compare_superkey_unchecked(t, n->tuple, level);
      if (c == 0) return true;
      n = c < 0 ? n->less.get() : n->greater.get();
    }
    return false;
  }

  /// Removes t. Returns false if it is not present.
  bool erase(const KTuple& t) {
    check_k(t, "erase");
    const bool removed = erase_at(root_, t, 0);
    if (removed) --size_;
    return removed;
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  std::size_t k() const noexcept { return opts_.k; }
  std::size_t height() const noexcept { return node_height(root_); }
  const Node* root() const noexcept { return root_.get(); }
  const TreeOptions& options() const noexcept { return opts_; }

  const RebuildStats& rebuild_stats() const noexcept { return stats_; }
  void reset_rebuild_stats() noexcept { stats_ = {}; }

  /// Tuples in in-order sequence, i.e. ascending by the root's super key.
  std::vector<KTuple> sorted_tuples() const {
    std::vector<KTuple> out;
    out.reserve(size_);
    collect_subtree(root_.get(), out);
    return out;
  }

  NodePtr release() noexcept {
    size_ = 0;
    return std::move(root_);
  }

private:
  void validate() const {
    if (opts_.k == 0) throw ContractViolation("KdTree: k must be >= 1");
    if (opts_.workers == 0) throw ContractViolation("KdTree: workers must be >= 1");
    if (opts_.parallel_threshold == 0) throw ContractViolation("KdTree: parallel_threshold must be >= 1");
  }

  void check_k(const KTuple& t, const char* op) const {
    if (t.k() != opts_.k) {
      throw ContractViolation(std::string(op) + ": tuple " + t.to_string() + " has k=" + std::to_string(t.k()) +
                              ", tree has k=" + std::to_string(opts_.k));
    }
  }

  bool insert_at(NodePtr& link, const KTuple& t, std::size_t level) {
    if (!link) {
      link = make_node(t);
      return true;
    }
    auto c = compare_superkey_unchecked(t, link->tuple, level);
    if (c == 0) return false;
    if (!insert_at(c < 0 ? link->less : link->greater, t, level + 1)) return false;
    rebalance(link, level);
    return true;
  }

  bool erase_at(NodePtr& link, const KTuple& t, std::size_t level) {
    if (!link) return false;
    auto c = compare_superkey_unchecked(t, link->tuple, level);
    if (c == 0) {
      remove_node(link, level);
      return true;
    }
    if (!erase_at(c < 0 ? link->less : link->greater, t, level + 1)) return false;
    rebalance(link, level);
    return true;
  }

  void remove_node(NodePtr& link, std::size_t level) {
    Node& n = *link;
    if (n.is_leaf()) {
      link.reset();
      return;
    }
    if (n.height <= 2) {
      // At most two leaf children remain; rebuild them in place instead of
      // recursing into a replacement.
      std::vector<KTuple> rest;
      if (n.less) rest.push_back(std::move(n.less->tuple));
      if (n.greater) rest.push_back(std::move(n.greater->tuple));
      note_rebuild(rest.size());
      link = rebuild_small(std::move(rest), level);
      return;
    }

    bool use_predecessor;
    if (!n.greater) {
      use_predecessor = true;
    } else if (!n.less) {
      use_predecessor = false;
    } else {
      use_predecessor = opts_.strategy == ReplacementStrategy::HigherSubtree &&
                        node_height(n.less) > node_height(n.greater);
    }

    const std::size_t dim = level % opts_.k;
    NodePtr& side = use_predecessor ? n.less : n.greater;
    const Node* replacement = detail::find_extreme(side.get(), level + 1, dim,
                                                   use_predecessor ? Extreme::Max : Extreme::Min, opts_.k);
    n.tuple = replacement->tuple;
    erase_at(side, n.tuple, level + 1);
    rebalance(link, level);
  }

  void rebalance(NodePtr& link, std::size_t level) {
    update_height(*link);
    if (!is_balanced(opts_.policy, node_height(link->less), node_height(link->greater))) rebuild(link, level);
  }

  void rebuild(NodePtr& link, std::size_t level) {
    std::vector<KTuple> tuples;
    drain_subtree(std::move(link), tuples);
    note_rebuild(tuples.size());
    if (tuples.size() <= 3) {
      link = rebuild_small(std::move(tuples), level);
    } else if (opts_.workers > 1 && tuples.size() > opts_.parallel_threshold) {
      link = build_parallel(std::move(tuples), level, opts_.workers, opts_.parallel_threshold, opts_.algorithm);
    } else {
      link = build_balanced(std::move(tuples), level, opts_.algorithm);
    }
  }

  void note_rebuild(std::size_t nodes) noexcept {
    stats_.largest = std::max(stats_.largest, nodes);
    ++stats_.count;
  }

  TreeOptions opts_;
  NodePtr root_;
  std::size_t size_ = 0;
  RebuildStats stats_;
};

}  // namespace dynkd

#endif  // DYNKD_TREE_HPP
