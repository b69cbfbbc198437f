#ifndef DYNKD_BALANCE_HPP
#define DYNKD_BALANCE_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "dynkd/superkey.hpp"

namespace dynkd {

enum class BalanceKind { AVL, RedBlackFactor };

/// Balance criterion applied to the two child heights of every node.
class BalancePolicy {
public:
  static BalancePolicy avl(int max_diff = 1) { return BalancePolicy(BalanceKind::AVL, max_diff); }
  static BalancePolicy red_black() { return BalancePolicy(BalanceKind::RedBlackFactor, 1); }

  BalanceKind kind() const noexcept { return kind_; }
  int max_diff() const noexcept { return max_diff_; }

  /// "avl1".."avl4" or "redblack"; the CLI and CSV spelling.
  std::string label() const {
    return kind_ == BalanceKind::AVL ? "avl" + std::to_string(max_diff_) : "redblack";
  }

  static std::optional<BalancePolicy> parse(std::string_view s) {
    if (s == "redblack") return red_black();
    if (s.size() == 4 && s.substr(0, 3) == "avl" && s[3] >= '1' && s[3] <= '4') return avl(s[3] - '0');
    return std::nullopt;
  }

  friend bool operator==(const BalancePolicy&, const BalancePolicy&) = default;

private:
  BalancePolicy(BalanceKind kind, int max_diff) : kind_(kind), max_diff_(max_diff) {
    if (max_diff < 1 || max_diff > 4) {
      throw ContractViolation("BalancePolicy: AVL difference must be in [1,4], got " + std::to_string(max_diff));
    }
  }

  BalanceKind kind_;
  int max_diff_;
};

/// True when child heights hl and hr satisfy the policy. The red-black
/// factor test cannot hold against an absent child, so that case reverts
/// to AVL with difference 1.
inline bool is_balanced(const BalancePolicy& policy, std::size_t hl, std::size_t hr) noexcept {
  const std::size_t lo = std::min(hl, hr);
  const std::size_t hi = std::max(hl, hr);
  if (policy.kind() == BalanceKind::AVL) return hi - lo <= static_cast<std::size_t>(policy.max_diff());
  if (lo == 0) return hi <= 1;
  return hi <= 2 * lo;
}

}  // namespace dynkd

#endif  // DYNKD_BALANCE_HPP
