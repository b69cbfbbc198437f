#ifndef DYNKD_NODE_HPP
#define DYNKD_NODE_HPP

#include <algorithm>
#include <cstddef>
#include <memory>
#include <utility>

#include "dynkd/superkey.hpp"

namespace dynkd {

struct Node;
using NodePtr = std::unique_ptr<Node>;

/// One tree node. height counts nodes on the longest downward path, so a
/// leaf has height 1.
struct Node {
  KTuple tuple;
  NodePtr less;
  NodePtr greater;
  std::size_t height = 1;

  explicit Node(KTuple t) : tuple(std::move(t)) {}
  Node(KTuple t, NodePtr lt, NodePtr gt);

  bool is_leaf() const noexcept { return !less && !greater; }
};

inline std::size_t node_height(const Node* n) noexcept { return n ? n->height : 0; }
inline std::size_t node_height(const NodePtr& n) noexcept { return node_height(n.get()); }

inline void update_height(Node& n) noexcept {
  n.height = 1 + std::max(node_height(n.less), node_height(n.greater));
}

inline Node::Node(KTuple t, NodePtr lt, NodePtr gt)
    : tuple(std::move(t)), less(std::move(lt)), greater(std::move(gt)) {
  update_height(*this);
}

/// Convenience for hand-assembled trees in tests and fixtures.
inline NodePtr make_node(KTuple t, NodePtr less = nullptr, NodePtr greater = nullptr) {
  return std::make_unique<Node>(std::move(t), std::move(less), std::move(greater));
}

inline std::size_t count_nodes(const Node* n) noexcept {
  return n ? 1 + count_nodes(n->less.get()) + count_nodes(n->greater.get()) : 0;
}

/// Structural equality: same tuples in the same positions with the same
/// cached heights.
inline bool same_structure(const Node* a, const Node* b) noexcept {
  if (!a || !b) return a == b;
  return a->tuple == b->tuple && a->height == b->height &&
         same_structure(a->less.get(), b->less.get()) &&
         same_structure(a->greater.get(), b->greater.get());
}

}  // namespace dynkd

#endif  // DYNKD_NODE_HPP
