#ifndef DYNKD_SUPERKEY_HPP
#define DYNKD_SUPERKEY_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dynkd {

using Coord = std::int64_t;

/// Raised when a caller breaks an operation's precondition (dimension
/// mismatch, oversized small rebuild, empty subtree search, ...).
class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A k-dimensional tuple of signed 64-bit coordinates.
///
/// The default ordering is lexicographic over (x, y, z, ...), which is the
/// super key at level 0. Use compare_superkey for any other level.
class KTuple {
public:
  /// Tuples up to this many coordinates live inside the object itself, so
  /// a tree node and its key share one allocation.
  static constexpr std::size_t kInline = 3;

  KTuple() noexcept : inline_{} {}
  KTuple(std::initializer_list<Coord> coords) : KTuple(coords.begin(), coords.size()) {}
  explicit KTuple(const std::vector<Coord>& coords) : KTuple(coords.data(), coords.size()) {}
  explicit KTuple(std::span<const Coord> coords) : KTuple(coords.data(), coords.size()) {}

  KTuple(const KTuple& o) : KTuple(o.data(), o.k_) {}
  KTuple(KTuple&& o) noexcept : k_(o.k_) {
    if (o.on_heap()) {
      heap_ = o.heap_;
      o.k_ = 0;
      o.inline_[0] = 0;
    } else {
      std::copy_n(o.inline_, kInline, inline_);
    }
  }
  KTuple& operator=(const KTuple& o) {
    if (this != &o) {
      KTuple tmp(o);
      swap(tmp);
    }
    return *this;
  }
  KTuple& operator=(KTuple&& o) noexcept {
    KTuple tmp(std::move(o));
    swap(tmp);
    return *this;
  }
  ~KTuple() {
    if (on_heap()) delete[] heap_;
  }

  void swap(KTuple& o) noexcept {
    // union members are trivially copyable
    std::swap(k_, o.k_);
    Coord tmp[kInline];
    std::memcpy(tmp, inline_, sizeof tmp);
    std::memcpy(inline_, o.inline_, sizeof tmp);
    std::memcpy(o.inline_, tmp, sizeof tmp);
  }

  std::size_t k() const noexcept { return k_; }
  Coord operator[](std::size_t i) const noexcept { return data()[i]; }
  Coord& operator[](std::size_t i) noexcept { return data()[i]; }
  const Coord* data() const noexcept { return on_heap() ? heap_ : inline_; }
  Coord* data() noexcept { return on_heap() ? heap_ : inline_; }
  std::span<const Coord> coords() const noexcept { return {data(), k_}; }

  friend bool operator==(const KTuple& a, const KTuple& b) noexcept {
    return a.k_ == b.k_ && std::equal(a.data(), a.data() + a.k_, b.data());
  }
  friend std::strong_ordering operator<=>(const KTuple& a, const KTuple& b) noexcept {
    return std::lexicographical_compare_three_way(a.data(), a.data() + a.k_, b.data(), b.data() + b.k_);
  }

  friend std::ostream& operator<<(std::ostream& os, const KTuple& t) {
    os << '(';
    for (std::size_t i = 0; i < t.k(); ++i) {
      if (i != 0) os << ',';
      os << t[i];
    }
    return os << ')';
  }

  std::string to_string() const {
    std::ostringstream os;
    os << *this;
    return os.str();
  }

private:
  KTuple(const Coord* src, std::size_t k) : k_(k) {
    if (on_heap()) heap_ = new Coord[k];
    std::copy_n(src, k, data());
  }

  bool on_heap() const noexcept { return k_ > kInline; }

  std::size_t k_ = 0;
  union {
    Coord inline_[kInline];
    Coord* heap_;
  };
};

/// Compares the super keys of a and b whose most significant coordinate is
/// level mod k: (a[p], a[p+1], ..., a[p+k-1]) with indices taken mod k.
/// Equal only when every coordinate matches.
///
/// No dimension check; callers on hot paths validate the tuple once on entry.
inline std::strong_ordering compare_superkey_unchecked(const KTuple& a, const KTuple& b,
                                                       std::size_t level) noexcept {
  const std::size_t k = a.k();
  const std::size_t p = level % k;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t d = p + i;
    if (d >= k) d -= k;
    if (a[d] != b[d]) return a[d] < b[d] ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

inline std::strong_ordering compare_superkey(const KTuple& a, const KTuple& b, std::size_t level) {
  if (a.k() != b.k() || a.k() == 0) {
    throw ContractViolation("compare_superkey: dimension mismatch (" + std::to_string(a.k()) +
                            " vs " + std::to_string(b.k()) + ")");
  }
  return compare_superkey_unchecked(a, b, level);
}

/// Function object form of compare_superkey; builders are templated on this
/// so tests can substitute a counting comparator.
struct SuperKeyCompare {
  std::strong_ordering operator()(const KTuple& a, const KTuple& b, std::size_t level) const noexcept {
    return compare_superkey_unchecked(a, b, level);
  }
};

}  // namespace dynkd

#endif  // DYNKD_SUPERKEY_HPP
