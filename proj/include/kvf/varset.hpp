#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>

namespace kvf {

inline constexpr std::size_t kMaxVars = 64;

struct Var {
  std::uint32_t index = 0;
  friend constexpr auto operator<=>(Var, Var) = default;
};

struct PropId {
  std::uint32_t index = 0;
  friend constexpr auto operator<=>(PropId, PropId) = default;
};

/// Zero-based agent index. The concrete syntax writes agents one-based (`Kv_1`).
struct AgentId {
  std::uint32_t index = 0;
  friend constexpr auto operator<=>(AgentId, AgentId) = default;
};

/// Finite set of variables as a bitmask over signature indices. Iteration
/// yields variables in index order, which is the fixed enumeration order used
/// for joint values.
class VarSet {
 public:
  constexpr VarSet() = default;
  constexpr explicit VarSet(std::uint64_t bits) : bits_(bits) {}
  VarSet(std::initializer_list<Var> vars) {
    for (Var v : vars) insert(v);
  }

  static constexpr VarSet first_n(std::size_t n) {
    return VarSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }

  constexpr bool contains(Var v) const { return (bits_ >> v.index) & 1U; }
  constexpr void insert(Var v) { bits_ |= std::uint64_t{1} << v.index; }
  constexpr void erase(Var v) { bits_ &= ~(std::uint64_t{1} << v.index); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool subset_of(VarSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr std::uint64_t bits() const { return bits_; }

  friend constexpr VarSet operator|(VarSet a, VarSet b) { return VarSet(a.bits_ | b.bits_); }
  friend constexpr VarSet operator&(VarSet a, VarSet b) { return VarSet(a.bits_ & b.bits_); }
  friend constexpr VarSet operator-(VarSet a, VarSet b) { return VarSet(a.bits_ & ~b.bits_); }
  friend constexpr auto operator<=>(VarSet, VarSet) = default;

  class iterator {
   public:
    using value_type = Var;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::forward_iterator_tag;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr Var operator*() const { return Var{static_cast<std::uint32_t>(std::countr_zero(rest_))}; }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    friend constexpr bool operator==(iterator, iterator) = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace kvf
