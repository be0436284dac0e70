#include "kvf/witness.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "kvf/errors.hpp"

namespace kvf {

using Rule = DerivationStep::Rule;

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::Premise: return "premise";
    case Rule::Hyp: return "hyp";
    case Rule::Proj: return "PROJ";
    case Rule::Ext: return "EXT";
    case Rule::Equ: return "EQU";
    case Rule::Tran: return "TRAN";
    case Rule::Vf: return "VF";
    case Rule::Choo: return "CHOO";
    case Rule::Conflict: return "conflict";
    case Rule::Case: return "case";
  }
  return "?";
}

std::vector<std::size_t> Derivation::support(std::optional<std::size_t> target) const {
  if (steps.empty()) return {};
  std::vector<bool> keep(steps.size(), false);
  std::vector<std::size_t> stack{target.value_or(steps.size() - 1)};
  while (!stack.empty()) {
    std::size_t s = stack.back();
    stack.pop_back();
    if (keep.at(s)) continue;
    keep[s] = true;
    const auto& st = steps[s];
    for (std::size_t u : st.uses) stack.push_back(u);
    for (std::size_t b : st.branches) {
      stack.push_back(b);
      stack.push_back(contexts.at(steps[b].context).hypothesis);
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < steps.size(); ++s) {
    if (keep[s]) out.push_back(s);
  }
  return out;
}

std::string Derivation::format() const {
  std::ostringstream os;
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const auto& st = steps[s];
    os << s + 1 << ". ";
    for (std::size_t c = st.context; c != 0; c = contexts[c].parent) os << "  ";
    os << (st.conclusion ? st.conclusion->text(sig) : "~T") << "   [" << rule_name(st.rule);
    for (std::size_t k = 0; k < st.uses.size(); ++k) os << (k ? ", " : " ") << st.uses[k] + 1;
    if (!st.branches.empty()) {
      os << "; branches";
      for (std::size_t b : st.branches) os << ' ' << b + 1;
    }
    os << "]\n";
  }
  return os.str();
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

/// Saturates the literals of one agent, appending steps to a shared derivation.
class Saturator {
 public:
  Saturator(const KnowledgeBase& kb, AgentId agent, Derivation& d)
      : kb_(kb), agent_(agent), lits_(kb.at(agent)), d_(d), minimal_(kb.regime == Regime::Minimal) {
    extras_.resize(d_.contexts.size());
  }

  /// The contradiction step, or kNone when consistent.
  std::size_t run() {
    if (minimal_) {
      for (const auto& k : lits_.kf_pos) {
        if (k.args.empty()) {
          conflict = kf(k, true);
          return add(Rule::Choo, std::nullopt, {premise(kf(k, true))}, 0);
        }
      }
    }
    return search(0);
  }

  std::optional<Literal> conflict;
  std::vector<KfAtom> chosen;
  VarSet kv{};
  std::size_t root_length = 0;

  std::size_t fact_for(const Literal& lit) {
    if (lit.kind == Literal::Kind::Kv) return kv_fact(0, lit.target);
    return kf_fact(0, lit.args, lit.target);
  }

  ClosureEngine engine(std::size_t ctx, bool unary_only = false) const {
    std::vector<ClosureRule> rules;
    auto add_atom = [&](const KfAtom& k) {
      if (unary_only && k.args.size() != 1) return;
      rules.push_back({k.args, k.target, k, false});
      if (minimal_ && k.args.size() == 1) rules.push_back({VarSet{k.target}, *k.args.begin(), k, true});
    };
    for (const auto& k : lits_.kf_pos) add_atom(k);
    for (std::size_t c : lineage(ctx)) {
      for (const auto& [atom, step] : extras_[c]) add_atom(atom);
    }
    return ClosureEngine(kb_.regime == Regime::Full ? lits_.kv_pos : VarSet{}, std::move(rules));
  }

 private:
  const KnowledgeBase& kb_;
  AgentId agent_;
  const AgentLiterals& lits_;
  Derivation& d_;
  bool minimal_;
  std::vector<std::vector<std::pair<KfAtom, std::size_t>>> extras_;
  std::map<std::pair<std::size_t, Literal>, std::size_t> memo_;

  Literal kf(const KfAtom& k, bool positive) const { return Literal::kf(agent_, k.args, k.target, positive); }

  /// Contexts from the root down to ctx.
  std::vector<std::size_t> lineage(std::size_t ctx) const {
    std::vector<std::size_t> out{ctx};
    while (out.back() != 0) out.push_back(d_.contexts[out.back()].parent);
    std::reverse(out.begin(), out.end());
    return out;
  }

  std::size_t add(Rule r, std::optional<Literal> concl, std::vector<std::size_t> uses, std::size_t ctx,
                  std::vector<std::size_t> branches = {}) {
    d_.steps.push_back({r, concl, std::move(uses), ctx, std::move(branches)});
    std::size_t s = d_.steps.size() - 1;
    if (concl) memo_.emplace(std::make_pair(ctx, *concl), s);
    return s;
  }

  std::optional<std::size_t> lookup(std::size_t ctx, const Literal& lit) const {
    while (true) {
      auto it = memo_.find({ctx, lit});
      if (it != memo_.end()) return it->second;
      if (ctx == 0) return std::nullopt;
      ctx = d_.contexts[ctx].parent;
    }
  }

  std::size_t premise(const Literal& lit) {
    if (auto s = lookup(0, lit)) return *s;
    return add(Rule::Premise, lit, {}, 0);
  }

  std::size_t atom_fact(std::size_t ctx, const KfAtom& k) {
    if (auto s = lookup(ctx, kf(k, true))) return *s;
    return premise(kf(k, true));
  }

  std::size_t rule_fact(std::size_t ctx, const ClosureRule& r) {
    if (!r.reversed) return atom_fact(ctx, r.source);
    Literal lit = Literal::kf(agent_, r.from, r.to);
    if (auto s = lookup(ctx, lit)) return *s;
    std::size_t fwd = atom_fact(ctx, r.source);
    return add(Rule::Equ, lit, {fwd}, ctx);
  }

  std::size_t kv_fact(std::size_t ctx, Var x) {
    Literal lit = Literal::kv(agent_, x);
    if (auto s = lookup(ctx, lit)) return *s;
    if (lits_.kv_pos.contains(x)) return premise(lit);
    std::vector<std::size_t> uses;
    for (Var c : lits_.kv_pos) uses.push_back(premise(Literal::kv(agent_, c)));
    uses.push_back(kf_fact(ctx, lits_.kv_pos, x));
    return add(Rule::Vf, lit, std::move(uses), ctx);
  }

  std::size_t kf_fact(std::size_t ctx, VarSet args, Var x) {
    if (auto s = lookup(ctx, Literal::kf(agent_, args, x))) return *s;
    ClosureEngine e = engine(ctx);
    auto trace = e.trace(args);
    std::map<std::uint32_t, ClosureReason> reason;
    for (const auto& [v, r] : trace) reason.emplace(v.index, r);
    if (!reason.count(x.index)) throw Error("internal: derivation requested for a non-member of the closure");

    std::function<std::size_t(Var)> need = [&](Var v) -> std::size_t {
      Literal lit = Literal::kf(agent_, args, v);
      if (auto s = lookup(ctx, lit)) return *s;
      const ClosureReason& r = reason.at(v.index);
      switch (r.kind) {
        case ClosureReason::Kind::Given:
          return add(Rule::Proj, lit, {}, ctx);
        case ClosureReason::Kind::Seed:
          return add(Rule::Ext, lit, {kv_fact(ctx, v)}, ctx);
        case ClosureReason::Kind::Rule: {
          const ClosureRule& rule = e.rules()[r.rule];
          std::size_t src = rule_fact(ctx, rule);
          if (rule.from == args) return src;
          std::vector<std::size_t> uses;
          for (Var y : rule.from) uses.push_back(need(y));
          uses.push_back(src);
          return add(Rule::Tran, lit, std::move(uses), ctx);
        }
      }
      return kNone;
    };
    return need(x);
  }

  std::size_t check_conflicts(std::size_t ctx) {
    ClosureEngine e = engine(ctx);
    VarSet known = e.closure(lits_.kv_pos);
    for (Var x : lits_.kv_neg) {
      if (!known.contains(x)) continue;
      std::size_t pos = kv_fact(ctx, x);
      conflict = Literal::kv(agent_, x, false);
      return add(Rule::Conflict, std::nullopt, {pos, premise(*conflict)}, ctx);
    }
    for (const auto& k : lits_.kf_neg) {
      if (!e.closure(k.args).contains(k.target)) continue;
      std::size_t pos = kf_fact(ctx, k.args, k.target);
      conflict = kf(k, false);
      return add(Rule::Conflict, std::nullopt, {pos, premise(*conflict)}, ctx);
    }
    return kNone;
  }

  bool satisfied(const ClosureEngine& unary, const KfAtom& k) const {
    return std::any_of(k.args.begin(), k.args.end(),
                       [&](Var c) { return unary.closure(VarSet{c}).contains(k.target); });
  }

  std::vector<Var> candidates(const KfAtom& k) const {
    std::vector<Var> out;
    for (Var c : k.args) {
      if (!lits_.kf_neg.count(KfAtom{VarSet{c}, k.target})) out.push_back(c);
    }
    return out;
  }

  /// CHOO instance uses: the atom, then the negated unary premises of `excluded`.
  std::vector<std::size_t> choo_uses(std::size_t ctx, const KfAtom& k, const std::vector<Var>& keep) {
    std::vector<std::size_t> uses{atom_fact(ctx, k)};
    for (Var c : k.args) {
      if (std::find(keep.begin(), keep.end(), c) == keep.end()) {
        uses.push_back(premise(Literal::kf(agent_, VarSet{c}, k.target, false)));
      }
    }
    return uses;
  }

  std::size_t search(std::size_t ctx) {
    if (minimal_) {
      bool progress = true;
      while (progress) {
        progress = false;
        ClosureEngine unary = engine(ctx, true);
        for (const auto& k : lits_.kf_pos) {
          if (k.args.size() < 2 || satisfied(unary, k)) continue;
          auto cands = candidates(k);
          if (cands.empty()) {
            conflict = kf(k, true);
            return add(Rule::Choo, std::nullopt, choo_uses(ctx, k, {}), ctx);
          }
          if (cands.size() == 1) {
            KfAtom unit{VarSet{cands[0]}, k.target};
            std::size_t s = add(Rule::Choo, kf(unit, true), choo_uses(ctx, k, cands), ctx);
            extras_[ctx].push_back({unit, s});
            progress = true;
            break;
          }
        }
      }
    }

    if (std::size_t c = check_conflicts(ctx); c != kNone) return c;

    if (ctx == 0) {
      VarSet derived = engine(0).closure(lits_.kv_pos) - lits_.kv_pos;
      for (Var x : derived) kv_fact(0, x);
      root_length = d_.steps.size();
    }

    const KfAtom* open = nullptr;
    if (minimal_) {
      ClosureEngine unary = engine(ctx, true);
      for (const auto& k : lits_.kf_pos) {
        if (k.args.size() >= 2 && !satisfied(unary, k)) {
          open = &k;
          break;
        }
      }
    }
    if (!open) {
      for (std::size_t c : lineage(ctx)) {
        for (const auto& [atom, step] : extras_[c]) chosen.push_back(atom);
      }
      kv = engine(ctx).closure(lits_.kv_pos);
      return kNone;
    }

    auto cands = candidates(*open);
    std::vector<std::size_t> closed;
    for (Var c : cands) {
      std::size_t child = d_.contexts.size();
      d_.contexts.push_back({ctx, kNone});
      extras_.emplace_back();
      KfAtom unit{VarSet{c}, open->target};
      std::size_t h = add(Rule::Hyp, kf(unit, true), {}, child);
      d_.contexts[child].hypothesis = h;
      extras_[child].push_back({unit, h});
      std::size_t r = search(child);
      if (r == kNone) return kNone;
      closed.push_back(r);
    }
    conflict.reset();
    return add(Rule::Case, std::nullopt, choo_uses(ctx, *open, cands), ctx, std::move(closed));
  }
};

}  // namespace

SaturationResult saturate(const KnowledgeBase& kb) {
  SaturationResult res{true, kb, std::vector<std::vector<KfAtom>>(kb.agents.size()), Derivation{kb.sig, kb.regime, {}, {DerivationContext{}}}, std::nullopt};
  std::size_t keep = 0;
  for (std::uint32_t a = 0; a < kb.agents.size(); ++a) {
    Saturator s(kb, AgentId{a}, res.trace);
    std::size_t bottom = s.run();
    if (bottom != kNone) {
      res.consistent = false;
      res.conflict = s.conflict;
      return res;
    }
    keep = s.root_length;
    res.trace.steps.resize(keep);
    res.trace.contexts.resize(1);
    auto& al = res.saturated.at(AgentId{a});
    al.kv_pos = s.kv;
    res.choices[a] = s.chosen;
    for (const auto& k : s.chosen) al.kf_pos.insert(k);
  }
  return res;
}

std::optional<Derivation> derive_literal(const KnowledgeBase& kb, const Literal& goal) {
  if (!goal.positive) return std::nullopt;
  Derivation d{kb.sig, kb.regime, {}, {DerivationContext{}}};
  Saturator s(kb, goal.agent, d);
  bool derivable = false;
  ClosureEngine e = s.engine(0);
  if (goal.kind == Literal::Kind::Kv) derivable = e.closure(kb.at(goal.agent).kv_pos).contains(goal.target);
  else derivable = e.closure(goal.args).contains(goal.target);
  if (!derivable) return std::nullopt;
  std::size_t step = s.fact_for(goal);
  std::vector<std::size_t> keep = d.support(step);
  Derivation out{kb.sig, kb.regime, {}, {DerivationContext{}}};
  std::map<std::size_t, std::size_t> renumber;
  for (std::size_t old : keep) {
    DerivationStep st = d.steps[old];
    for (auto& u : st.uses) u = renumber.at(u);
    renumber[old] = out.steps.size();
    out.steps.push_back(std::move(st));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Witness builders

namespace {

void require_regime(const KnowledgeBase& kb, Regime r, bool single_agent = true) {
  if (kb.regime != r) throw ValidationError("knowledge base regime is " + regime_name(kb.regime));
  if (single_agent && kb.sig.agent_count() != 1) throw ValidationError("regime takes exactly one agent");
}

std::string compact(const Signature& sig, VarSet s) {
  std::string out = "{";
  bool first = true;
  for (Var v : s) {
    out += (first ? "" : ",") + sig.name(v);
    first = false;
  }
  return out + "}";
}

}  // namespace

Model build_witness_full(const KnowledgeBase& kb, const WitnessConfig& cfg) {
  require_regime(kb, Regime::Full);
  const AgentId a{0};
  auto fam = closed_set_family(kb, a);
  const VarSet known = armstrong_closure(kb, a, {});
  TokenFactory tokens(cfg.seed);
  std::map<std::pair<VarSet, int>, Value> g;
  auto token = [&](VarSet x, int i) -> const Value& {
    auto it = g.find({x, i});
    if (it == g.end()) it = g.emplace(std::make_pair(x, i), tokens.fresh()).first;
    return it->second;
  };

  ModelBuilder b(kb.sig);
  for (VarSet x : fam.members) {
    for (int i = 0; i < 2; ++i) {
      WorldIdx w = b.add_world(compact(kb.sig, x) + "/" + std::to_string(i));
      for (Var d : kb.sig.all_vars()) {
        if (known.contains(d)) b.set_value(w, d, token(known, 0));
        else if (x.contains(d)) b.set_value(w, d, token(x, 0));
        else b.set_value(w, d, token(x, i));
      }
    }
  }
  b.set_domain_everywhere(make_domain(FullDomain{}));
  return std::move(b).build();
}

Model build_witness_minimal(const KnowledgeBase& kb, const WitnessConfig& cfg) {
  require_regime(kb, Regime::Minimal);
  const auto& al = kb.at(AgentId{0});
  const std::size_t q = kb.sig.var_count();
  std::vector<std::size_t> parent(q);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (const auto& k : al.kf_pos) {
    if (k.args.size() == 1) parent[find(k.args.begin().operator*().index)] = find(k.target.index);
  }
  // classes in order of their least variable
  std::vector<std::size_t> class_of(q);
  std::map<std::size_t, std::size_t> class_id;
  std::vector<bool> known_class;
  for (std::size_t v = 0; v < q; ++v) {
    auto [it, inserted] = class_id.emplace(find(v), class_id.size());
    if (inserted) known_class.push_back(true);
    class_of[v] = it->second;
    if (!al.kv_pos.contains(Var{static_cast<std::uint32_t>(v)})) known_class[it->second] = false;
  }
  TokenFactory tokens(cfg.seed);
  std::vector<Value> u, v;
  for (std::size_t c = 0; c < known_class.size(); ++c) u.push_back(tokens.fresh());
  v = u;
  std::vector<std::size_t> unknown;
  for (std::size_t c = 0; c < known_class.size(); ++c) {
    if (!known_class[c]) unknown.push_back(c);
  }
  if (unknown.size() == 1) {
    v[unknown[0]] = tokens.fresh();
  } else {
    for (std::size_t i = 0; i < unknown.size(); ++i) v[unknown[i]] = u[unknown[(i + 1) % unknown.size()]];
  }

  ModelBuilder b(kb.sig);
  WorldIdx wu = b.add_world("u");
  WorldIdx wv = b.add_world("v");
  for (std::uint32_t d = 0; d < q; ++d) {
    b.set_value(wu, Var{d}, u[class_of[d]]);
    b.set_value(wv, Var{d}, v[class_of[d]]);
  }
  b.set_domain_everywhere(make_domain(ProjectionDomain{}));
  return std::move(b).build();
}

Model build_witness_intermediate(const KnowledgeBase& kb, const WitnessConfig& cfg) {
  require_regime(kb, Regime::Intermediate);
  const std::size_t q = kb.sig.var_count();
  if (q > cfg.intermediate_var_bound) {
    throw BudgetExceeded("intermediate witness over " + std::to_string(q) + " variables exceeds the bound of " +
                             std::to_string(cfg.intermediate_var_bound),
                         0);
  }
  const AgentId a{0};
  auto fam = closed_set_family(kb, a);
  const VarSet known = kb.at(a).kv_pos;

  std::vector<VarSet> subsets;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << q); ++s) subsets.push_back(VarSet(s));
  std::stable_sort(subsets.begin(), subsets.end(), [](VarSet x, VarSet y) { return x.size() < y.size(); });
  std::vector<std::string> dims;
  std::vector<VarSet> image;  // g(D_j)
  for (std::size_t j = 0; j < subsets.size(); ++j) {
    dims.push_back(compact(kb.sig, subsets[j]));
    image.push_back(fam.members[std::min(j, fam.members.size() - 1)]);
  }

  ModelBuilder b(kb.sig);
  WorldIdx w0 = b.add_world("V0");
  WorldIdx w1 = b.add_world("V1");
  for (Var d : kb.sig.all_vars()) {
    BitVec v0{dims, {}}, v1{dims, {}};
    for (std::size_t j = 0; j < dims.size(); ++j) {
      std::uint8_t bit = image[j].contains(d) ? 0 : 1;
      v0.bits.push_back(bit);
      v1.bits.push_back(image[j] == known ? 0 : bit);
    }
    b.set_value(w0, d, Value(std::move(v0)));
    b.set_value(w1, d, Value(std::move(v1)));
  }
  b.set_domain_everywhere(make_domain(MonotoneDomain{dims}));
  return std::move(b).build();
}

Model build_witness_multiagent(const KnowledgeBase& kb, const WitnessConfig& cfg) {
  const std::size_t q = kb.sig.var_count();
  if (q > cfg.multiagent_var_bound) {
    throw BudgetExceeded("multiagent witness over " + std::to_string(q) + " variables exceeds the bound of " +
                             std::to_string(cfg.multiagent_var_bound),
                         0);
  }
  ModelBuilder b(kb.sig);
  const std::uint64_t n = std::uint64_t{1} << q;
  for (std::uint64_t s = 0; s < n; ++s) {
    std::string name = "s";
    for (std::size_t v = 0; v < q; ++v) name += (s >> v & 1U) ? '1' : '0';
    WorldIdx w = b.add_world(name);
    for (std::uint32_t v = 0; v < q; ++v) b.set_value(w, Var{v}, Value::tagged(kb.sig.vars()[v], static_cast<int>(s >> v & 1U)));
  }
  for (std::uint32_t a = 0; a < kb.sig.agent_count(); ++a) {
    AgentId id{a};
    std::vector<std::vector<WorldIdx>> classes;
    std::vector<bool> done(n, false);
    for (std::uint64_t s = 0; s < n; ++s) {
      if (done[s]) continue;
      std::uint64_t t = value_move(kb, id, VarSet(s)).bits();
      done[s] = done[t] = true;
      if (t == s) classes.push_back({static_cast<WorldIdx>(s)});
      else classes.push_back({static_cast<WorldIdx>(std::min(s, t)), static_cast<WorldIdx>(std::max(s, t))});
    }
    b.set_partition(id, std::move(classes));

    auto lat = build_lattice(kb, id, cfg.multiagent_var_bound);
    LatticeDomain dom{lat.lattice, {}};
    for (std::uint32_t v = 0; v < q; ++v) {
      for (int bit = 0; bit < 2; ++bit) dom.hat.emplace(Value::tagged(kb.sig.vars()[v], bit), lat.hat[v]);
    }
    auto d = make_domain(std::move(dom));
    for (WorldIdx w = 0; w < n; ++w) b.set_domain(id, w, d);
  }
  return std::move(b).build();
}

Model build_witness(const SaturationResult& result, const WitnessConfig& cfg) {
  if (!result.consistent) throw ValidationError("knowledge base is inconsistent; no witness exists");
  switch (result.saturated.regime) {
    case Regime::Full: return build_witness_full(result.saturated, cfg);
    case Regime::Minimal: return build_witness_minimal(result.saturated, cfg);
    case Regime::Intermediate: return build_witness_intermediate(result.saturated, cfg);
    case Regime::Lattice: return build_witness_multiagent(result.saturated, cfg);
  }
  throw ValidationError("unknown regime");
}

}  // namespace kvf
