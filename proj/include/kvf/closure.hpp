#pragma once

#include <map>
#include <optional>
#include <vector>

#include "kvf/knowledge_base.hpp"
#include "kvf/lattice.hpp"

namespace kvf {

/// from -> to, remembering the kb atom it stems from.
struct ClosureRule {
  VarSet from;
  Var to;
  KfAtom source;
  bool reversed = false;  // unary atom read backwards
};

/// Why a variable entered a closure.
struct ClosureReason {
  enum class Kind { Given, Seed, Rule };
  Kind kind = Kind::Given;
  std::size_t rule = 0;  // index into rules() for Kind::Rule
};

/// Least fixpoint of a finite rule set, optionally seeded.
class ClosureEngine {
 public:
  ClosureEngine() = default;
  ClosureEngine(VarSet seeds, std::vector<ClosureRule> rules) : seeds_(seeds), rules_(std::move(rules)) {}

  VarSet seeds() const { return seeds_; }
  const std::vector<ClosureRule>& rules() const { return rules_; }
  void add_rule(ClosureRule r) { rules_.push_back(r); }

  VarSet closure(VarSet set) const;
  /// Variables of closure(set) in order of entry, with their reasons.
  std::vector<std::pair<Var, ClosureReason>> trace(VarSet set) const;

 private:
  VarSet seeds_{};
  std::vector<ClosureRule> rules_;
};

/// Engine of the agent's positive Kf atoms under the kb's regime: full seeds
/// with kv_pos, minimal also reads unary atoms backwards.
ClosureEngine closure_engine(const KnowledgeBase& kb, AgentId agent);

VarSet armstrong_closure(const KnowledgeBase& kb, AgentId agent, VarSet set);

inline constexpr std::size_t kDefaultClosureVarBound = 12;

struct ClosedSetFamily {
  std::map<VarSet, VarSet> closures;  // generator -> closed set
  std::vector<VarSet> members;        // sorted by (size, bits)
  std::optional<VarSet> kv_member;    // intermediate regime only
};

/// Closures of all subsets of the variables. Throws BudgetExceeded past the bound.
ClosedSetFamily closed_set_family(const KnowledgeBase& kb, AgentId agent,
                                  std::size_t var_bound = kDefaultClosureVarBound);

struct AgentLattice {
  DependencyLattice lattice;
  std::vector<std::size_t> hat;  // var index -> element id of closure({var})
};

AgentLattice build_lattice(const KnowledgeBase& kb, AgentId agent, std::size_t var_bound = kDefaultClosureVarBound);

/// Keeps the bits of variables in kv_pos and flips all others. `ones` is the
/// set of variables assigned 1.
VarSet value_move(const KnowledgeBase& kb, AgentId agent, VarSet ones);

}  // namespace kvf
