#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kvf/lattice.hpp"
#include "kvf/signature.hpp"
#include "kvf/value.hpp"

namespace kvf {

// ---------------------------------------------------------------------------
// Function domains

struct ExplicitTable {
  std::size_t arity = 0;
  std::map<JointValue, Value> rows;
  friend bool operator==(const ExplicitTable&, const ExplicitTable&) = default;
};

struct ExplicitDomain {
  std::vector<ExplicitTable> tables;
  friend bool operator==(const ExplicitDomain&, const ExplicitDomain&) = default;
};

/// Every function on G, of every arity.
struct FullDomain {
  friend bool operator==(const FullDomain&, const FullDomain&) = default;
};

/// Only the projections id_{i,n}, n >= 1.
struct ProjectionDomain {
  friend bool operator==(const ProjectionDomain&, const ProjectionDomain&) = default;
};

/// Functions whose output bit never exceeds the max of the input bits, per
/// dimension. Values must be bit vectors; missing dimensions read as 0.
struct MonotoneDomain {
  std::vector<std::string> dims;
  friend bool operator==(const MonotoneDomain&, const MonotoneDomain&) = default;
};

/// Functions f with hat(f(x1..xn)) <= hat(x1) v ... v hat(xn) in a dependency
/// lattice; the empty join is the bottom element.
struct LatticeDomain {
  DependencyLattice lattice;
  std::map<Value, std::size_t> hat;  // value -> element id
  friend bool operator==(const LatticeDomain&, const LatticeDomain&) = default;
};

using FunctionDomain = std::variant<ExplicitDomain, FullDomain, ProjectionDomain, MonotoneDomain, LatticeDomain>;
using DomainPtr = std::shared_ptr<const FunctionDomain>;

DomainPtr make_domain(FunctionDomain d);
std::string domain_kind_name(const FunctionDomain& d);

// ---------------------------------------------------------------------------
// Models

using WorldIdx = std::uint32_t;
using ValueIdx = std::uint32_t;

/// Finite multiagent model <W, ~_i, U, V, F_i>. Values are interned in a pool
/// so equality of valuation entries is index equality. Build with ModelBuilder;
/// instances are immutable.
class Model {
 public:
  const Signature& sig() const { return sig_; }
  std::size_t world_count() const { return world_names_.size(); }
  const std::string& world_name(WorldIdx w) const { return world_names_.at(w); }
  std::optional<WorldIdx> find_world(const std::string& name) const;

  /// Worlds of the ~_agent class containing w, in increasing order.
  const std::vector<WorldIdx>& cell(AgentId agent, WorldIdx w) const {
    return classes_[agent.index][class_of_[agent.index][w]];
  }
  const std::vector<std::vector<WorldIdx>>& partition(AgentId agent) const { return classes_[agent.index]; }

  bool prop_value(WorldIdx w, PropId p) const { return propval_[w][p.index]; }
  ValueIdx value_index(WorldIdx w, Var v) const { return varval_[w][v.index]; }
  const Value& value(WorldIdx w, Var v) const { return pool_[varval_[w][v.index]]; }
  const std::vector<Value>& value_pool() const { return pool_; }

  const FunctionDomain& domain(AgentId agent, WorldIdx w) const { return *domains_[agent.index][w]; }
  const DomainPtr& domain_ptr(AgentId agent, WorldIdx w) const { return domains_[agent.index][w]; }

 private:
  friend class ModelBuilder;

  Signature sig_;
  std::vector<std::string> world_names_;
  std::vector<std::vector<std::uint32_t>> class_of_;               // [agent][world]
  std::vector<std::vector<std::vector<WorldIdx>>> classes_;        // [agent][class]
  std::vector<std::vector<bool>> propval_;                         // [world][prop]
  std::vector<Value> pool_;
  std::vector<std::vector<ValueIdx>> varval_;                      // [world][var]
  std::vector<std::vector<DomainPtr>> domains_;                    // [agent][world]
};

/// Assembles a Model and checks its well-formedness on build(): partitions
/// cover every world exactly once, valuations are total, value kinds are
/// uniform, and each agent's domain is constant on its equivalence classes.
class ModelBuilder {
 public:
  explicit ModelBuilder(Signature sig);

  WorldIdx add_world(std::string name);
  /// Defaults to one class per agent when never called.
  void set_partition(AgentId agent, std::vector<std::vector<WorldIdx>> classes);
  void set_prop(WorldIdx w, PropId p, bool value);
  void set_value(WorldIdx w, Var v, Value value);
  void set_domain(AgentId agent, WorldIdx w, DomainPtr domain);
  void set_domain_everywhere(DomainPtr domain);

  /// Throws ValidationError.
  Model build() &&;

 private:
  Model m_;
  std::vector<std::vector<std::optional<Value>>> values_;
  std::vector<bool> partition_set_;
};

// ---------------------------------------------------------------------------
// Operations

JointValue joint_value(const Model& m, WorldIdx w, VarSet args);

struct Admission {
  bool admitted = false;
  /// Which function witnesses the admission, or why none exists.
  std::string witness;
};

using ObservedPair = std::pair<JointValue, Value>;

/// Whether some f in the domain satisfies f(x) = y for every observed pair.
/// Symbolic domains are decided by characterization; explicit ones by
/// scanning their tables. Throws MixedArity.
Admission domain_admits(const FunctionDomain& dom, std::span<const ObservedPair> pairs);

/// Same decision over pool-interned values; this is the path used by the
/// model checker.
struct IndexedPair {
  std::vector<ValueIdx> inputs;
  ValueIdx output;
};
Admission domain_admits_indexed(const FunctionDomain& dom, const std::vector<Value>& pool,
                                std::span<const IndexedPair> pairs);

struct SoundnessReport {
  bool pass = true;
  std::string failure;
};

inline constexpr std::size_t kDefaultArityBound = 4;

/// Checks that the domain contains the projections and is closed under
/// composition, restricted to `reachable` and arities up to `max_arity`.
/// Symbolic domains pass analytically. Throws ArityOverflow.
SoundnessReport check_soundness_condition(const FunctionDomain& dom, const std::vector<Value>& reachable,
                                          std::size_t max_arity, std::size_t arity_bound = kDefaultArityBound);

inline constexpr std::size_t kDefaultEnumerationBudget = 1'000'000;

/// Materializes every total function values^arity -> values that the symbolic
/// domain contains. Meant as a ground-truth oracle; throws BudgetExceeded when
/// |values|^(|values|^arity) exceeds the budget.
std::vector<ExplicitTable> enumerate_domain_bruteforce(const FunctionDomain& kind, const std::vector<Value>& values,
                                                       std::size_t arity,
                                                       std::size_t budget = kDefaultEnumerationBudget);

/// Explicit domain of the unary clone generated by a monoid of unary maps on
/// `values` (each map is given by its output indices): all x -> m(x_i) for
/// arities 1..max_arity plus the zero-ary constants of the monoid. Sound by
/// construction whenever `monoid` contains the identity and is closed under
/// composition.
ExplicitDomain unary_clone_domain(const std::vector<Value>& values,
                                  const std::vector<std::vector<std::size_t>>& monoid, std::size_t max_arity);

}  // namespace kvf
