#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kvf/varset.hpp"

namespace kvf {

/// Lattice of closed variable sets of a finitary closure operator on a finite
/// variable universe. Elements form a Moore family (closed under intersection
/// and containing the universe), so the closure of any set is the least
/// element above it and join(C, D) = cl(C u D).
class DependencyLattice {
 public:
  DependencyLattice() = default;
  /// Throws ValidationError unless `elements` is a Moore family over `universe`.
  DependencyLattice(VarSet universe, std::vector<VarSet> elements);

  VarSet universe() const { return universe_; }
  /// Sorted by (size, bits); ids are indices into this vector.
  const std::vector<VarSet>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }

  VarSet closure(VarSet set) const;
  VarSet bottom() const { return elements_.front(); }
  VarSet join(VarSet a, VarSet b) const { return closure(a | b); }
  VarSet meet(VarSet a, VarSet b) const { return a & b; }
  static bool leq(VarSet a, VarSet b) { return a.subset_of(b); }

  std::optional<std::size_t> index_of(VarSet element) const;
  bool is_element(VarSet set) const { return index_of(set).has_value(); }

  friend bool operator==(const DependencyLattice&, const DependencyLattice&) = default;

 private:
  VarSet universe_{};
  std::vector<VarSet> elements_;
};

}  // namespace kvf
