#include "kvf/lattice.hpp"

#include <algorithm>

#include "kvf/errors.hpp"

namespace kvf {

DependencyLattice::DependencyLattice(VarSet universe, std::vector<VarSet> elements)
    : universe_(universe), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end(), [](VarSet a, VarSet b) {
    return a.size() != b.size() ? a.size() < b.size() : a.bits() < b.bits();
  });
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  if (!is_element(universe_)) throw ValidationError("lattice must contain the full variable set");
  for (VarSet e : elements_) {
    if (!e.subset_of(universe_)) throw ValidationError("lattice element outside the variable universe");
  }
  for (VarSet a : elements_) {
    for (VarSet b : elements_) {
      if (!is_element(a & b)) throw ValidationError("lattice elements are not closed under intersection");
    }
  }
}

VarSet DependencyLattice::closure(VarSet set) const {
  VarSet out = universe_;
  for (VarSet e : elements_) {
    if (set.subset_of(e)) out = out & e;
  }
  return out;
}

std::optional<std::size_t> DependencyLattice::index_of(VarSet element) const {
  auto it = std::find(elements_.begin(), elements_.end(), element);
  if (it == elements_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

}  // namespace kvf
