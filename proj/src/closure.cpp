#include "kvf/closure.hpp"

#include <algorithm>

#include "kvf/errors.hpp"

namespace kvf {

VarSet ClosureEngine::closure(VarSet set) const {
  VarSet cur = set | seeds_;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : rules_) {
      if (!cur.contains(r.to) && r.from.subset_of(cur)) {
        cur.insert(r.to);
        changed = true;
      }
    }
  }
  return cur;
}

std::vector<std::pair<Var, ClosureReason>> ClosureEngine::trace(VarSet set) const {
  std::vector<std::pair<Var, ClosureReason>> out;
  for (Var v : set) out.push_back({v, {ClosureReason::Kind::Given, 0}});
  VarSet cur = set;
  for (Var v : seeds_ - set) {
    out.push_back({v, {ClosureReason::Kind::Seed, 0}});
    cur.insert(v);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      const auto& r = rules_[i];
      if (!cur.contains(r.to) && r.from.subset_of(cur)) {
        cur.insert(r.to);
        out.push_back({r.to, {ClosureReason::Kind::Rule, i}});
        changed = true;
      }
    }
  }
  return out;
}

ClosureEngine closure_engine(const KnowledgeBase& kb, AgentId agent) {
  const auto& al = kb.at(agent);
  std::vector<ClosureRule> rules;
  for (const auto& k : al.kf_pos) rules.push_back({k.args, k.target, k, false});
  if (kb.regime == Regime::Minimal) {
    for (const auto& k : al.kf_pos) {
      if (k.args.size() == 1) rules.push_back({VarSet{k.target}, *k.args.begin(), k, true});
    }
  }
  return ClosureEngine(kb.regime == Regime::Full ? al.kv_pos : VarSet{}, std::move(rules));
}

VarSet armstrong_closure(const KnowledgeBase& kb, AgentId agent, VarSet set) {
  return closure_engine(kb, agent).closure(set);
}

namespace {

void sort_members(std::vector<VarSet>& v) {
  std::sort(v.begin(), v.end(), [](VarSet a, VarSet b) {
    return a.size() != b.size() ? a.size() < b.size() : a.bits() < b.bits();
  });
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

ClosedSetFamily closed_set_family(const KnowledgeBase& kb, AgentId agent, std::size_t var_bound) {
  const std::size_t q = kb.sig.var_count();
  if (q > var_bound) {
    throw BudgetExceeded("closed-set family over " + std::to_string(q) + " variables exceeds the bound of " +
                             std::to_string(var_bound),
                         0);
  }
  auto engine = closure_engine(kb, agent);
  ClosedSetFamily fam;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << q); ++s) {
    VarSet c = engine.closure(VarSet(s));
    fam.closures.emplace(VarSet(s), c);
    fam.members.push_back(c);
  }
  if (kb.regime == Regime::Intermediate) {
    fam.kv_member = kb.at(agent).kv_pos;
    fam.members.push_back(kb.at(agent).kv_pos);
  }
  sort_members(fam.members);
  return fam;
}

AgentLattice build_lattice(const KnowledgeBase& kb, AgentId agent, std::size_t var_bound) {
  auto fam = closed_set_family(kb, agent, var_bound);
  std::vector<VarSet> elems;
  for (const auto& [gen, c] : fam.closures) elems.push_back(c);
  sort_members(elems);
  AgentLattice out{DependencyLattice(kb.sig.all_vars(), elems), {}};
  for (std::uint32_t v = 0; v < kb.sig.var_count(); ++v) {
    out.hat.push_back(*out.lattice.index_of(fam.closures.at(VarSet{Var{v}})));
  }
  return out;
}

VarSet value_move(const KnowledgeBase& kb, AgentId agent, VarSet ones) {
  VarSet flip = kb.sig.all_vars() - kb.at(agent).kv_pos;
  return VarSet((ones.bits() ^ flip.bits()) & kb.sig.all_vars().bits());
}

}  // namespace kvf
