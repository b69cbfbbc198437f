#ifndef DYNKD_VERIFY_HPP
#define DYNKD_VERIFY_HPP

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dynkd/balance.hpp"
#include "dynkd/node.hpp"
#include "dynkd/superkey.hpp"
#include "dynkd/tree.hpp"

namespace dynkd {

enum class ViolationKind { Ordering, Height, Balance };

inline std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::Ordering:
      return "ordering";
    case ViolationKind::Height:
      return "height";
    case ViolationKind::Balance:
      return "balance";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  /// "root" followed by one ".L" or ".G" per step down.
  std::string path;
  KTuple tuple;
  std::string detail;
};

struct VerifyReport {
  std::size_t node_count = 0;
  std::size_t tree_height = 0;
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

namespace detail {

class Verifier {
public:
  Verifier(std::size_t k, const BalancePolicy& policy)
      : k_(k), policy_(policy), lower_(k, nullptr), upper_(k, nullptr) {}

  // Returns the recomputed height of the subtree at n.
  std::size_t visit(const Node* n, std::size_t level) {
    if (!n) return 0;
    ++report_.node_count;
    const std::size_t p = level % k_;

    if (n->tuple.k() != k_) {
      add(ViolationKind::Ordering, n, "tuple has k=" + std::to_string(n->tuple.k()));
      return n->height;
    }
    // Each ancestor bounds its descendants' super key at the ancestor's own
    // discriminant; only the tightest bound per discriminant matters.
    for (std::size_t d = 0; d < k_; ++d) {
      if (lower_[d] && compare_superkey_unchecked(n->tuple, *lower_[d], d) <= 0) {
        add(ViolationKind::Ordering, n, "not greater than ancestor " + lower_[d]->to_string() + " at dim " +
                                            std::to_string(d));
      }
      if (upper_[d] && compare_superkey_unchecked(n->tuple, *upper_[d], d) >= 0) {
        add(ViolationKind::Ordering, n, "not less than ancestor " + upper_[d]->to_string() + " at dim " +
                                            std::to_string(d));
      }
    }

    const KTuple* saved = upper_[p];
    upper_[p] = &n->tuple;
    path_ += ".L";
    const std::size_t hl = visit(n->less.get(), level + 1);
    path_.resize(path_.size() - 2);
    upper_[p] = saved;

    saved = lower_[p];
    lower_[p] = &n->tuple;
    path_ += ".G";
    const std::size_t hr = visit(n->greater.get(), level + 1);
    path_.resize(path_.size() - 2);
    lower_[p] = saved;

    const std::size_t h = 1 + std::max(hl, hr);
    if (n->height != h) {
      add(ViolationKind::Height, n, "cached " + std::to_string(n->height) + ", actual " + std::to_string(h));
    }
    if (!is_balanced(policy_, hl, hr)) {
      add(ViolationKind::Balance, n,
          "child heights " + std::to_string(hl) + " and " + std::to_string(hr) + " under " + policy_.label());
    }
    return h;
  }

  VerifyReport take() && { return std::move(report_); }
  VerifyReport& report() { return report_; }

private:
  void add(ViolationKind kind, const Node* n, std::string detail) {
    report_.violations.push_back({kind, path_, n->tuple, std::move(detail)});
  }

  std::size_t k_;
  BalancePolicy policy_;
  std::vector<const KTuple*> lower_;
  std::vector<const KTuple*> upper_;
  std::string path_ = "root";
  VerifyReport report_;
};

}  // namespace detail

/// Checks ordering, cached heights and balance under `policy` at every node
/// of the subtree rooted at `root` (taken to be at level 0). Read-only.
inline VerifyReport verify(const Node* root, const BalancePolicy& policy) {
  if (!root) return {};
  detail::Verifier v(root->tuple.k(), policy);
  v.report().tree_height = v.visit(root, 0);
  return std::move(v).take();
}

inline VerifyReport verify(const KdTree& tree, const BalancePolicy& policy) { return verify(tree.root(), policy); }

inline VerifyReport verify(const KdTree& tree) { return verify(tree.root(), tree.options().policy); }

inline std::ostream& dump(std::ostream& os, const VerifyReport& report) {
  os << "nodes=" << report.node_count << " height=" << report.tree_height
     << " violations=" << report.violations.size() << '\n';
  for (const auto& v : report.violations) {
    os << "  " << to_string(v.kind) << " at " << v.path << ' ' << v.tuple << ": " << v.detail << '\n';
  }
  return os;
}

}  // namespace dynkd

#endif  // DYNKD_VERIFY_HPP
