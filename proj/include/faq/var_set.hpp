#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace faq {

/// Variables are identified by their position in the query's variable
/// sequence (free variables first). That position is also the global sort
/// order of factor columns.
using VarId = std::uint32_t;

inline constexpr std::size_t kMaxVariables = 64;

/// A set of at most 64 variables, iterated in ascending id order.
class VarSet {
 public:
  constexpr VarSet() = default;
  constexpr VarSet(std::initializer_list<VarId> vars) {
    for (VarId v : vars) insert(v);
  }
  static constexpr VarSet from_bits(std::uint64_t bits) {
    VarSet s;
    s.bits_ = bits;
    return s;
  }
  template <typename Range>
  static VarSet of(const Range& vars) {
    VarSet s;
    for (VarId v : vars) s.insert(v);
    return s;
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(VarId v) const { return (bits_ >> v) & 1U; }
  constexpr void insert(VarId v) { bits_ |= std::uint64_t{1} << v; }
  constexpr void erase(VarId v) { bits_ &= ~(std::uint64_t{1} << v); }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool subset_of(VarSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool intersects(VarSet o) const { return (bits_ & o.bits_) != 0; }

  constexpr VarSet operator|(VarSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr VarSet operator&(VarSet o) const { return from_bits(bits_ & o.bits_); }
  constexpr VarSet operator-(VarSet o) const { return from_bits(bits_ & ~o.bits_); }
  constexpr VarSet& operator|=(VarSet o) { bits_ |= o.bits_; return *this; }
  constexpr VarSet& operator&=(VarSet o) { bits_ &= o.bits_; return *this; }
  constexpr VarSet& operator-=(VarSet o) { bits_ &= ~o.bits_; return *this; }
  constexpr bool operator==(const VarSet&) const = default;
  /// Orders by bit pattern, for use as a map key.
  constexpr auto operator<=>(const VarSet& o) const { return bits_ <=> o.bits_; }

  class iterator {
   public:
    using value_type = VarId;
    using difference_type = std::ptrdiff_t;
    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr VarId operator*() const { return static_cast<VarId>(std::countr_zero(rest_)); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      auto copy = *this;
      ++*this;
      return copy;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  std::vector<VarId> to_vector() const { return {begin(), end()}; }

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace faq
