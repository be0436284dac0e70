#include "support.hpp"

#include <algorithm>
#include <map>

namespace kvf::testing {

using F = Formula;

Signature make_sig(std::size_t vars, std::size_t agents, std::size_t props) {
  static const char* const kVars[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
  static const char* const kProps[] = {"p", "q", "r"};
  std::vector<std::string> v(kVars, kVars + vars), p(kProps, kProps + props);
  return Signature::with_agent_count(p, v, agents);
}

VarSet random_subset(Rng& rng, VarSet universe, double p) {
  VarSet out;
  for (Var v : universe) {
    if (coin(rng, p)) out.insert(v);
  }
  return out;
}

Formula random_formula(const Signature& sig, Rng& rng, int depth) {
  const AgentId agent{static_cast<std::uint32_t>(pick(rng, sig.agent_count()))};
  const std::size_t leaf_kinds = sig.var_count() == 0 ? 2 : 4;
  if (depth <= 0 || coin(rng, 0.25)) {
    switch (pick(rng, leaf_kinds)) {
      case 0: return F::top();
      case 1:
        if (sig.prop_count() == 0) return F::top();
        return F::prop(PropId{static_cast<std::uint32_t>(pick(rng, sig.prop_count()))});
      case 2: return F::kv(agent, Var{static_cast<std::uint32_t>(pick(rng, sig.var_count()))});
      default:
        return F::kf(agent, random_subset(rng, sig.all_vars(), 0.4),
                     Var{static_cast<std::uint32_t>(pick(rng, sig.var_count()))});
    }
  }
  switch (pick(rng, 3)) {
    case 0: return F::negate(random_formula(sig, rng, depth - 1));
    case 1: return F::conj(random_formula(sig, rng, depth - 1), random_formula(sig, rng, depth - 1));
    default: return F::know(agent, random_formula(sig, rng, depth - 1));
  }
}

namespace {

std::vector<std::vector<WorldIdx>> random_partition(Rng& rng, std::size_t n) {
  std::vector<std::vector<WorldIdx>> classes;
  for (WorldIdx w = 0; w < n; ++w) {
    std::size_t c = pick(rng, classes.size() + 1);
    if (c == classes.size()) classes.emplace_back();
    classes[c].push_back(w);
  }
  return classes;
}

DependencyLattice random_moore_family(Rng& rng, VarSet universe) {
  std::vector<VarSet> elems{universe};
  std::size_t extra = pick(rng, 5);
  for (std::size_t i = 0; i < extra; ++i) elems.push_back(random_subset(rng, universe));
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (std::size_t j = 0; j < elems.size(); ++j) {
        VarSet m = elems[i] & elems[j];
        if (std::find(elems.begin(), elems.end(), m) == elems.end()) {
          elems.push_back(m);
          changed = true;
        }
      }
    }
  }
  return DependencyLattice(universe, elems);
}

}  // namespace

Model random_model(const Signature& sig, DomainRegime regime, Rng& rng, ModelShape shape) {
  const std::size_t n = 1 + pick(rng, shape.max_worlds);
  ModelBuilder b(sig);
  for (std::size_t w = 0; w < n; ++w) b.add_world("w" + std::to_string(w + 1));
  std::vector<std::vector<std::vector<WorldIdx>>> parts;
  for (std::uint32_t a = 0; a < sig.agent_count(); ++a) {
    parts.push_back(random_partition(rng, n));
    b.set_partition(AgentId{a}, parts.back());
  }
  for (WorldIdx w = 0; w < n; ++w) {
    for (std::uint32_t p = 0; p < sig.prop_count(); ++p) b.set_prop(w, PropId{p}, coin(rng));
  }

  std::vector<Value> alphabet;
  std::vector<std::string> dims;
  const std::size_t k = 1 + pick(rng, shape.max_values);
  switch (regime) {
    case DomainRegime::Monotone: {
      const std::size_t nd = 1 + pick(rng, 2);
      for (std::size_t i = 0; i < nd; ++i) dims.push_back("D" + std::to_string(i + 1));
      for (std::size_t x = 0; x < (std::size_t{1} << nd); ++x) {
        BitVec v{dims, {}};
        for (std::size_t i = 0; i < nd; ++i) v.bits.push_back(static_cast<std::uint8_t>(x >> i & 1U));
        alphabet.emplace_back(std::move(v));
      }
      break;
    }
    case DomainRegime::Lattice:
      for (const auto& name : sig.vars()) {
        alphabet.push_back(Value::tagged(name, 0));
        alphabet.push_back(Value::tagged(name, 1));
      }
      break;
    default:
      for (std::size_t i = 0; i < k; ++i) alphabet.push_back(Value::atom(std::to_string(i)));
  }

  std::set<Value> used;
  for (WorldIdx w = 0; w < n; ++w) {
    for (std::uint32_t v = 0; v < sig.var_count(); ++v) {
      Value val = alphabet[pick(rng, alphabet.size())];
      used.insert(val);
      b.set_value(w, Var{v}, val);
    }
  }

  for (std::uint32_t a = 0; a < sig.agent_count(); ++a) {
    for (const auto& cls : parts[a]) {
      DomainPtr dom;
      switch (regime) {
        case DomainRegime::Full: dom = make_domain(FullDomain{}); break;
        case DomainRegime::Projections: dom = make_domain(ProjectionDomain{}); break;
        case DomainRegime::Monotone: dom = make_domain(MonotoneDomain{dims}); break;
        case DomainRegime::Lattice: {
          LatticeDomain ld{random_moore_family(rng, sig.all_vars()), {}};
          for (const Value& v : used) ld.hat.emplace(v, pick(rng, ld.lattice.size()));
          dom = make_domain(std::move(ld));
          break;
        }
        case DomainRegime::Explicit: {
          auto menu = unary_monoid_menu(alphabet.size());
          dom = make_domain(unary_clone_domain(alphabet, menu[pick(rng, menu.size())],
                                               std::max<std::size_t>(sig.var_count(), 1)));
          break;
        }
      }
      for (WorldIdx w : cls) b.set_domain(AgentId{a}, w, dom);
    }
  }
  return std::move(b).build();
}

Model with_domain(const Model& m, DomainPtr domain) {
  const Signature& sig = m.sig();
  ModelBuilder b(sig);
  for (WorldIdx w = 0; w < m.world_count(); ++w) b.add_world(m.world_name(w));
  for (std::uint32_t a = 0; a < sig.agent_count(); ++a) b.set_partition(AgentId{a}, m.partition(AgentId{a}));
  for (WorldIdx w = 0; w < m.world_count(); ++w) {
    for (std::uint32_t v = 0; v < sig.var_count(); ++v) b.set_value(w, Var{v}, m.value(w, Var{v}));
    for (std::uint32_t p = 0; p < sig.prop_count(); ++p) b.set_prop(w, PropId{p}, m.prop_value(w, PropId{p}));
  }
  b.set_domain_everywhere(std::move(domain));
  return std::move(b).build();
}

std::vector<Literal> all_atoms(const Signature& sig, AgentId agent) {
  std::vector<Literal> out;
  for (Var v : sig.all_vars()) out.push_back(Literal::kv(agent, v));
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << sig.var_count()); ++bits) {
    for (Var v : sig.all_vars()) out.push_back(Literal::kf(agent, VarSet(bits), v));
  }
  return out;
}

KnowledgeBase random_kb(const Signature& sig, Regime regime, Rng& rng, std::size_t max_literals) {
  KnowledgeBase kb(sig, regime);
  for (std::uint32_t a = 0; a < sig.agent_count(); ++a) {
    auto atoms = all_atoms(sig, AgentId{a});
    auto& al = kb.at(AgentId{a});
    std::size_t count = pick(rng, max_literals + 1);
    for (std::size_t i = 0; i < count; ++i) {
      const Literal& l = atoms[pick(rng, atoms.size())];
      bool pos = coin(rng);
      if (l.kind == Literal::Kind::Kv) {
        if (al.kv_pos.contains(l.target) || al.kv_neg.contains(l.target)) continue;
        (pos ? al.kv_pos : al.kv_neg).insert(l.target);
      } else {
        KfAtom k{l.args, l.target};
        if (al.kf_pos.count(k) || al.kf_neg.count(k)) continue;
        (pos ? al.kf_pos : al.kf_neg).insert(k);
      }
    }
  }
  return kb;
}

std::optional<std::string> violated_literal(const Model& m, const KnowledgeBase& kb) {
  for (const Literal& l : kb_literals(kb)) {
    auto truth = eval_all(m, l.atom().formula());
    for (WorldIdx w = 0; w < m.world_count(); ++w) {
      if (truth[w] != l.positive) return l.text(kb.sig) + " fails at " + m.world_name(w);
    }
  }
  return std::nullopt;
}

VarSet naive_closure(const KnowledgeBase& kb, AgentId agent, VarSet set) {
  const auto& al = kb.at(agent);
  std::vector<std::pair<VarSet, Var>> rules;
  for (const auto& k : al.kf_pos) {
    rules.emplace_back(k.args, k.target);
    if (kb.regime == Regime::Minimal && k.args.size() == 1) rules.emplace_back(VarSet{k.target}, *k.args.begin());
  }
  VarSet cur = set;
  if (kb.regime == Regime::Full) cur = cur | al.kv_pos;
  for (;;) {
    VarSet next = cur;
    for (const auto& [body, head] : rules) {
      if (body.subset_of(cur)) next.insert(head);
    }
    if (next == cur) return cur;
    cur = next;
  }
}

Formula random_axiom(const std::string& name, const Signature& sig, AgentId agent, Rng& rng) {
  Substitution s;
  s.agent = agent;
  auto rvar = [&] { return Var{static_cast<std::uint32_t>(pick(rng, sig.var_count()))}; };
  s.formulas.emplace("phi", random_formula(sig, rng, 2));
  s.formulas.emplace("psi", random_formula(sig, rng, 2));
  s.sets.emplace("C", random_subset(rng, sig.all_vars(), 0.4));
  s.sets.emplace("D", random_subset(rng, sig.all_vars(), 0.4));
  s.vars.emplace("c", rvar());
  s.vars.emplace("d", rvar());
  s.vars.emplace("e", rvar());
  if (name == "PROJ") {
    VarSet c = s.sets["C"];
    c.insert(s.vars["c"]);
    s.sets["C"] = c;
  }
  return axiom_instance(name, s);
}

const std::vector<std::function<Formula(const Formula&, const Formula&, const Formula&)>>& taut_schemata() {
  using Fn = std::function<Formula(const Formula&, const Formula&, const Formula&)>;
  static const std::vector<Fn> list = {
      [](const F& p, const F&, const F&) { return F::implies(p, p); },
      [](const F& p, const F& q, const F&) { return F::implies(p, F::implies(q, p)); },
      [](const F& p, const F& q, const F& r) {
        return F::implies(F::implies(p, F::implies(q, r)), F::implies(F::implies(p, q), F::implies(p, r)));
      },
      [](const F& p, const F& q, const F&) {
        return F::implies(F::implies(F::negate(p), F::negate(q)), F::implies(q, p));
      },
      [](const F& p, const F&, const F&) { return F::disj(p, F::negate(p)); },
      [](const F& p, const F&, const F&) { return F::implies(F::negate(F::negate(p)), p); },
      [](const F& p, const F& q, const F&) { return F::implies(F::conj(p, q), p); },
      [](const F& p, const F& q, const F&) { return F::implies(F::conj(p, q), q); },
      [](const F& p, const F& q, const F&) { return F::implies(p, F::disj(p, q)); },
      [](const F& p, const F& q, const F&) { return F::implies(q, F::disj(p, q)); },
      [](const F& p, const F& q, const F&) { return F::implies(p, F::implies(q, F::conj(p, q))); },
      [](const F& p, const F& q, const F& r) {
        return F::implies(F::implies(p, r), F::implies(F::implies(q, r), F::implies(F::disj(p, q), r)));
      },
      [](const F& p, const F&, const F&) { return F::negate(F::conj(p, F::negate(p))); },
      [](const F& p, const F&, const F&) { return F::implies(F::bottom(), p); },
      [](const F& p, const F& q, const F&) { return F::implies(F::conj(p, q), F::conj(q, p)); },
      [](const F& p, const F& q, const F&) {
        return F::implies(F::negate(F::conj(p, q)), F::disj(F::negate(p), F::negate(q)));
      },
      [](const F& p, const F& q, const F& r) {
        return F::implies(F::implies(p, q), F::implies(F::implies(q, r), F::implies(p, r)));
      },
      [](const F& p, const F& q, const F&) { return F::implies(F::implies(F::implies(p, q), p), p); },
      [](const F& p, const F& q, const F& r) {
        return F::implies(F::conj(p, F::disj(q, r)), F::disj(F::conj(p, q), F::conj(p, r)));
      },
      [](const F& p, const F& q, const F&) { return F::implies(F::conj(p, F::implies(p, q)), q); },
  };
  return list;
}

std::vector<std::string> sound_axioms(DomainRegime regime) {
  std::vector<std::string> out = {"K", "T", "4", "5", "KV4", "KV5", "KF4", "KF5", "PROJ", "TRAN", "VF"};
  if (regime == DomainRegime::Full) out.push_back("EXT");
  if (regime == DomainRegime::Projections) {
    out.push_back("CHOO");
    out.push_back("EQU");
  }
  return out;
}

bool proof_sound_in(const Proof& p, const Model& m) {
  Formula claim = Formula::implies(Formula::conj_all(proof_premises(p)), proof_conclusion(p));
  auto truth = eval_all(m, claim);
  return std::all_of(truth.begin(), truth.end(), [](bool b) { return b; });
}

std::set<std::uint64_t> realizable_vectors(const Signature& sig, const std::vector<Literal>& atoms, RegimeSpec regime,
                                           const SearchBounds& bounds) {
  std::vector<Formula> fs;
  for (const auto& l : atoms) fs.push_back(l.formula());
  std::set<std::uint64_t> out;
  for_each_bounded_model(sig, regime, bounds, [&](const Model& m) {
    std::vector<std::uint64_t> vec(m.world_count(), 0);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      auto truth = eval_all(m, fs[i]);
      for (WorldIdx w = 0; w < m.world_count(); ++w) {
        if (truth[w]) vec[w] |= std::uint64_t{1} << i;
      }
    }
    out.insert(vec.begin(), vec.end());
    return true;
  });
  return out;
}

DomainRegime semantic_regime(Regime r) {
  switch (r) {
    case Regime::Full: return DomainRegime::Full;
    case Regime::Minimal: return DomainRegime::Projections;
    case Regime::Intermediate: return DomainRegime::Monotone;
    case Regime::Lattice: return DomainRegime::Lattice;
  }
  return DomainRegime::Full;
}

}  // namespace kvf::testing
