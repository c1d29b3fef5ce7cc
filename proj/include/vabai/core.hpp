#pragma once

// Shared vocabulary: error type, arm-index sets, extended-real helpers.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace vabai {

enum class ErrorKind {
  invalid_argument,
  moment_infeasible,
  degenerate_best_arm,
  domain_error,
  insufficient_samples,
  missing_subg_proxy,
  no_feasible_arm,
  scale_undefined,
  invariant_violation,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

using ArmIndex = std::size_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// 1/x under the conventions 1/0 = +inf and 1/(+inf) = 0.
inline double ext_inverse(double x) {
  if (x == 0.0) return kInf;
  if (x == kInf) return 0.0;
  return 1.0 / x;
}

/// x^{-2} under the same conventions.
inline double ext_inverse_sq(double x) {
  if (x == 0.0) return kInf;
  if (x == kInf) return 0.0;
  return 1.0 / (x * x);
}

/// Set of arm indices in [0, 64), stored as a bitmask. Iteration is in
/// increasing index order, which makes "first hit wins" the smallest-index
/// tie-break everywhere.
class ArmSet {
 public:
  static constexpr std::size_t kMaxArms = 64;

  constexpr ArmSet() = default;

  static constexpr ArmSet all(std::size_t n) {
    ArmSet s;
    s.bits_ = n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    return s;
  }
  static constexpr ArmSet single(ArmIndex i) {
    ArmSet s;
    s.insert(i);
    return s;
  }

  constexpr void insert(ArmIndex i) { bits_ |= std::uint64_t{1} << i; }
  constexpr void erase(ArmIndex i) { bits_ &= ~(std::uint64_t{1} << i); }
  constexpr bool contains(ArmIndex i) const { return (bits_ >> i) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr std::uint64_t bits() const { return bits_; }

  /// Smallest member; undefined on an empty set.
  constexpr ArmIndex front() const { return static_cast<ArmIndex>(std::countr_zero(bits_)); }

  /// The k-th smallest member (0-based); k < size().
  constexpr ArmIndex nth(std::size_t k) const {
    std::uint64_t b = bits_;
    for (std::size_t n = 0; n < k; ++n) b &= b - 1;
    return static_cast<ArmIndex>(std::countr_zero(b));
  }

  friend constexpr ArmSet operator&(ArmSet a, ArmSet b) { return from_bits(a.bits_ & b.bits_); }
  friend constexpr ArmSet operator|(ArmSet a, ArmSet b) { return from_bits(a.bits_ | b.bits_); }
  /// Set difference a \ b.
  friend constexpr ArmSet operator-(ArmSet a, ArmSet b) { return from_bits(a.bits_ & ~b.bits_); }
  friend constexpr bool operator==(ArmSet, ArmSet) = default;

  constexpr bool is_subset_of(ArmSet other) const { return (bits_ & ~other.bits_) == 0; }

  class iterator {
   public:
    using value_type = ArmIndex;
    using difference_type = std::ptrdiff_t;
    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t b) : b_(b) {}
    constexpr ArmIndex operator*() const { return static_cast<ArmIndex>(std::countr_zero(b_)); }
    constexpr iterator& operator++() {
      b_ &= b_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator tmp = *this;
      ++*this;
      return tmp;
    }
    friend constexpr bool operator==(iterator, iterator) = default;

   private:
    std::uint64_t b_ = 0;
  };

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  std::vector<ArmIndex> to_vector() const { return {begin(), end()}; }

  static constexpr ArmSet from_bits(std::uint64_t b) {
    ArmSet s;
    s.bits_ = b;
    return s;
  }

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace vabai
