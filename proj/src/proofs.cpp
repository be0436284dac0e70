#include "kvf/proofs.hpp"

#include <algorithm>

#include "kvf/errors.hpp"

namespace kvf {

std::string system_name(ProofSystem s) {
  switch (s) {
    case ProofSystem::Base: return "hlkvf";
    case ProofSystem::Ext: return "hlkvf+ext";
    case ProofSystem::ChooEqu: return "hlkvf+choo+equ";
    case ProofSystem::Multi: return "hlkvf-m";
  }
  return "?";
}

std::optional<ProofSystem> parse_system(const std::string& name) {
  for (auto s : {ProofSystem::Base, ProofSystem::Ext, ProofSystem::ChooEqu, ProofSystem::Multi}) {
    if (system_name(s) == name) return s;
  }
  return std::nullopt;
}

ProofSystem system_for(Regime r) {
  switch (r) {
    case Regime::Full: return ProofSystem::Ext;
    case Regime::Minimal: return ProofSystem::ChooEqu;
    case Regime::Intermediate: return ProofSystem::Base;
    case Regime::Lattice: return ProofSystem::Multi;
  }
  return ProofSystem::Base;
}

std::vector<std::string> system_axioms(ProofSystem s) {
  std::vector<std::string> out{"TAUT", "K", "T", "4", "5", "KV4", "KV5", "KF4", "KF5", "PROJ", "TRAN", "VF"};
  if (s == ProofSystem::Ext) out.push_back("EXT");
  if (s == ProofSystem::ChooEqu) {
    out.push_back("CHOO");
    out.push_back("EQU");
  }
  return out;
}

namespace {

const Formula& formula_of(const Substitution& s, const std::string& key) {
  auto it = s.formulas.find(key);
  if (it == s.formulas.end()) throw ValidationError("substitution lacks formula '" + key + "'");
  return it->second;
}

VarSet set_of(const Substitution& s, const std::string& key) {
  auto it = s.sets.find(key);
  if (it == s.sets.end()) throw ValidationError("substitution lacks variable set '" + key + "'");
  return it->second;
}

Var var_of(const Substitution& s, const std::string& key) {
  auto it = s.vars.find(key);
  if (it == s.vars.end()) throw ValidationError("substitution lacks variable '" + key + "'");
  return it->second;
}

}  // namespace

Formula axiom_instance(const std::string& name, const Substitution& s) {
  using F = Formula;
  const AgentId i = s.agent.value_or(AgentId{0});
  if (name == "K") {
    const F& phi = formula_of(s, "phi");
    const F& psi = formula_of(s, "psi");
    return F::implies(F::know(i, F::implies(phi, psi)), F::implies(F::know(i, phi), F::know(i, psi)));
  }
  if (name == "T") return F::implies(F::know(i, formula_of(s, "phi")), formula_of(s, "phi"));
  if (name == "4") {
    F k = F::know(i, formula_of(s, "phi"));
    return F::implies(k, F::know(i, k));
  }
  if (name == "5") {
    F nk = F::negate(F::know(i, formula_of(s, "phi")));
    return F::implies(nk, F::know(i, nk));
  }
  if (name == "KV4" || name == "KV5") {
    F a = F::kv(i, var_of(s, "d"));
    if (name == "KV5") a = F::negate(a);
    return F::implies(a, F::know(i, a));
  }
  if (name == "KF4" || name == "KF5") {
    F a = F::kf(i, set_of(s, "C"), var_of(s, "d"));
    if (name == "KF5") a = F::negate(a);
    return F::implies(a, F::know(i, a));
  }
  if (name == "PROJ") {
    VarSet c = set_of(s, "C");
    Var v = var_of(s, "c");
    if (!c.contains(v)) throw ValidationError("PROJ needs c in C");
    return F::kf(i, c, v);
  }
  if (name == "TRAN") {
    VarSet c = set_of(s, "C"), d = set_of(s, "D");
    Var e = var_of(s, "e");
    std::vector<F> parts;
    for (Var v : d) parts.push_back(F::kf(i, c, v));
    return F::implies(F::conj(F::conj_all(parts), F::kf(i, d, e)), F::kf(i, c, e));
  }
  if (name == "VF") {
    VarSet c = set_of(s, "C");
    Var d = var_of(s, "d");
    std::vector<F> parts;
    for (Var v : c) parts.push_back(F::kv(i, v));
    return F::implies(F::conj(F::conj_all(parts), F::kf(i, c, d)), F::kv(i, d));
  }
  if (name == "EXT") return F::implies(F::kv(i, var_of(s, "d")), F::kf(i, set_of(s, "C"), var_of(s, "d")));
  if (name == "CHOO") {
    VarSet c = set_of(s, "C");
    Var d = var_of(s, "d");
    std::vector<F> parts;
    for (Var v : c) parts.push_back(F::kf(i, VarSet{v}, d));
    return F::implies(F::kf(i, c, d), F::disj_all(parts));
  }
  if (name == "EQU") {
    Var c = var_of(s, "c"), d = var_of(s, "d");
    return F::implies(F::kf(i, VarSet{c}, d), F::kf(i, VarSet{d}, c));
  }
  throw ValidationError("unknown axiom schema '" + name + "'");
}

namespace {

void collect_atoms(const Formula& f, std::map<Formula, std::size_t>& atoms) {
  switch (f.kind()) {
    case Formula::Kind::Top: return;
    case Formula::Kind::Not: collect_atoms(f.child(), atoms); return;
    case Formula::Kind::And:
      collect_atoms(f.lhs(), atoms);
      collect_atoms(f.rhs(), atoms);
      return;
    default: atoms.emplace(f, atoms.size());
  }
}

bool truth(const Formula& f, const std::map<Formula, std::size_t>& atoms, std::uint32_t row) {
  switch (f.kind()) {
    case Formula::Kind::Top: return true;
    case Formula::Kind::Not: return !truth(f.child(), atoms, row);
    case Formula::Kind::And: return truth(f.lhs(), atoms, row) && truth(f.rhs(), atoms, row);
    default: return (row >> atoms.at(f)) & 1U;
  }
}

}  // namespace

bool is_tautology(const Formula& f, std::size_t atom_bound) {
  std::map<Formula, std::size_t> atoms;
  collect_atoms(f, atoms);
  if (atoms.size() > atom_bound || atoms.size() > 31) {
    throw AtomBudgetExceeded("tautology check over " + std::to_string(atoms.size()) + " atoms exceeds the bound of " +
                             std::to_string(atom_bound));
  }
  for (std::uint32_t row = 0; row < (1U << atoms.size()); ++row) {
    if (!truth(f, atoms, row)) return false;
  }
  return true;
}

ProofVerdict check_proof(const Proof& p) {
  const bool single = p.system != ProofSystem::Multi;
  const auto axioms = system_axioms(p.system);
  std::vector<bool> tainted;
  auto reject = [](std::size_t n, std::string why) { return ProofVerdict{false, n + 1, std::move(why)}; };

  for (std::size_t n = 0; n < p.lines.size(); ++n) {
    const auto& [f, j] = p.lines[n];
    if (single && f.agent_span() > 1) return reject(n, "system " + system_name(p.system) + " has a single agent");
    if (f.agent_span() > p.sig.agent_count()) return reject(n, "agent outside the signature");
    bool taint = false;
    switch (j.kind) {
      case Justification::Kind::Premise:
        taint = true;
        break;
      case Justification::Kind::Axiom: {
        if (std::find(axioms.begin(), axioms.end(), j.axiom) == axioms.end()) {
          return reject(n, "unknown axiom " + j.axiom + " for system " + system_name(p.system));
        }
        if (j.axiom == "TAUT") {
          if (!is_tautology(f)) return reject(n, "not a propositional tautology");
          break;
        }
        if (j.subst.agent && (j.subst.agent->index >= p.sig.agent_count() || (single && j.subst.agent->index != 0))) {
          return reject(n, "agent outside the system");
        }
        try {
          if (!(axiom_instance(j.axiom, j.subst) == f)) {
            return reject(n, "formula is not the " + j.axiom + " instance " +
                                 print_formula(axiom_instance(j.axiom, j.subst), p.sig));
          }
        } catch (const ValidationError& e) {
          return reject(n, e.what());
        }
        break;
      }
      case Justification::Kind::MP: {
        if (j.first >= n || j.second >= n) return reject(n, "modus ponens must cite earlier lines");
        const Formula& a = p.lines[j.first].formula;
        const Formula& b = p.lines[j.second].formula;
        if (!(b == Formula::implies(a, f)) && !(a == Formula::implies(b, f))) {
          return reject(n, "modus ponens does not apply to lines " + std::to_string(j.first + 1) + " and " +
                               std::to_string(j.second + 1));
        }
        taint = tainted[j.first] || tainted[j.second];
        break;
      }
      case Justification::Kind::Nec: {
        if (j.first >= n) return reject(n, "necessitation must cite an earlier line");
        if (tainted[j.first]) return reject(n, "necessitation applied to a line depending on premises");
        if (f.kind() != Formula::Kind::Know || !(f.child() == p.lines[j.first].formula)) {
          return reject(n, "necessitation must prefix K to line " + std::to_string(j.first + 1));
        }
        break;
      }
    }
    tainted.push_back(taint);
  }
  return {};
}

std::vector<Formula> proof_premises(const Proof& p) {
  std::vector<Formula> out;
  for (const auto& l : p.lines) {
    if (l.just.kind == Justification::Kind::Premise) out.push_back(l.formula);
  }
  return out;
}

Formula proof_conclusion(const Proof& p) { return p.lines.empty() ? Formula::top() : p.lines.back().formula; }

// ---------------------------------------------------------------------------
// JSON

namespace {

std::vector<std::string> formula_texts(const Json& j) {
  std::vector<std::string> out;
  for (const auto& line : j.at("lines")) {
    out.push_back(line.at("formula").get<std::string>());
    const auto& just = line.at("just");
    if (just.is_object() && just.contains("subst")) {
      for (const auto& [k, v] : just.at("subst").items()) {
        if ((k == "phi" || k == "psi") && v.is_string()) out.push_back(v.get<std::string>());
      }
    }
  }
  return out;
}

VarSet set_from(const Signature& sig, const Json& v) {
  if (v.is_array()) return sig.var_set(v.get<std::vector<std::string>>());
  auto s = v.get<std::string>();
  if (!s.empty() && s.front() == '{') {
    std::vector<std::string> names;
    std::string cur;
    for (char ch : s.substr(1)) {
      if (ch == ',' || ch == '}') {
        if (!cur.empty()) names.push_back(cur);
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(ch))) {
        cur += ch;
      }
    }
    return sig.var_set(names);
  }
  return VarSet{sig.var(s)};
}

Substitution subst_from(const Signature& sig, const Json& j) {
  Substitution s;
  for (const auto& [k, v] : j.items()) {
    if (k == "phi" || k == "psi") s.formulas.emplace(k, parse_formula(v.get<std::string>(), sig));
    else if (k == "C" || k == "D") s.sets.emplace(k, set_from(sig, v));
    else if (k == "c" || k == "d" || k == "e") s.vars.emplace(k, sig.var(v.get<std::string>()));
    else if (k == "i") {
      long long n = v.is_number_integer() ? v.get<long long>() : std::stoll(v.get<std::string>());
      if (n < 1) throw ValidationError("agent subscripts start at 1");
      s.agent = AgentId{static_cast<std::uint32_t>(n - 1)};
    } else {
      throw ValidationError("unknown substitution key '" + k + "'");
    }
  }
  return s;
}

Json subst_to(const Signature& sig, const Substitution& s) {
  Json out = Json::object();
  for (const auto& [k, f] : s.formulas) out[k] = print_formula(f, sig);
  for (const auto& [k, c] : s.sets) {
    Json names = Json::array();
    for (Var v : c) names.push_back(sig.name(v));
    out[k] = std::move(names);
  }
  for (const auto& [k, v] : s.vars) out[k] = sig.name(v);
  if (s.agent) out["i"] = s.agent->index + 1;
  return out;
}

std::size_t line_ref(const Json& v, std::size_t count) {
  auto n = v.get<long long>();
  if (n < 1 || static_cast<std::size_t>(n) > count) throw ValidationError("line reference out of range");
  return static_cast<std::size_t>(n - 1);
}

}  // namespace

Proof proof_from_json(const Json& j) {
  try {
    Proof p;
    auto sys = parse_system(j.at("system").get<std::string>());
    if (!sys) throw ValidationError("unknown proof system " + j.at("system").dump());
    p.system = *sys;
    if (j.contains("signature")) {
      p.sig = signature_from_json(j.at("signature"));
    } else {
      p.sig = infer_signature(formula_texts(j));
      if (p.sig.agent_count() < 1) p.sig = Signature::with_agent_count(p.sig.props(), p.sig.vars(), 1);
    }
    const auto& lines = j.at("lines");
    for (const auto& line : lines) {
      ProofLine l{parse_formula(line.at("formula").get<std::string>(), p.sig), {}};
      const auto& just = line.at("just");
      if (just.is_string() && just.get<std::string>() == "premise") {
        l.just.kind = Justification::Kind::Premise;
      } else if (just.is_object() && just.contains("axiom")) {
        l.just.kind = Justification::Kind::Axiom;
        l.just.axiom = just.at("axiom").get<std::string>();
        if (just.contains("subst")) l.just.subst = subst_from(p.sig, just.at("subst"));
      } else if (just.is_object() && just.contains("mp")) {
        const auto& refs = just.at("mp");
        if (!refs.is_array() || refs.size() != 2) throw ValidationError("\"mp\" takes two line numbers");
        l.just.kind = Justification::Kind::MP;
        l.just.first = line_ref(refs[0], lines.size());
        l.just.second = line_ref(refs[1], lines.size());
      } else if (just.is_object() && just.contains("nec")) {
        l.just.kind = Justification::Kind::Nec;
        l.just.first = line_ref(just.at("nec"), lines.size());
      } else {
        throw ValidationError("malformed justification " + just.dump());
      }
      p.lines.push_back(std::move(l));
    }
    return p;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed proof: ") + e.what());
  }
}

Json proof_to_json(const Proof& p) {
  Json lines = Json::array();
  for (const auto& l : p.lines) {
    Json just;
    switch (l.just.kind) {
      case Justification::Kind::Premise: just = "premise"; break;
      case Justification::Kind::Axiom:
        just = Json{{"axiom", l.just.axiom}};
        if (l.just.axiom != "TAUT") just["subst"] = subst_to(p.sig, l.just.subst);
        break;
      case Justification::Kind::MP: just = Json{{"mp", Json::array({l.just.first + 1, l.just.second + 1})}}; break;
      case Justification::Kind::Nec: just = Json{{"nec", l.just.first + 1}}; break;
    }
    lines.push_back(Json{{"formula", print_formula(l.formula, p.sig)}, {"just", std::move(just)}});
  }
  return Json{{"system", system_name(p.system)}, {"signature", signature_to_json(p.sig)}, {"lines", std::move(lines)}};
}

// ---------------------------------------------------------------------------
// Replay

namespace {

using Rule = DerivationStep::Rule;

class Replayer {
 public:
  explicit Replayer(const Derivation& d) : d_(d) {
    p_.sig = d.sig;
    p_.system = system_for(d.regime);
  }

  Proof run(std::optional<std::size_t> target) {
    if (d_.steps.empty()) {
      emit(Formula::top(), taut());
      return std::move(p_);
    }
    std::size_t goal = target.value_or(d_.steps.size() - 1);
    if (d_.steps.at(goal).context != 0) throw TranslationGap("replay target must be unconditional");
    for (std::size_t s : d_.support(goal)) step(s);
    std::size_t last = line_of(goal, 0);
    if (last + 1 != p_.lines.size()) emit(p_.lines[last].formula, taut_from(last));
    return std::move(p_);
  }

 private:
  const Derivation& d_;
  Proof p_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> lines_;  // (step, context) -> line

  static Justification taut() {
    Justification j;
    j.kind = Justification::Kind::Axiom;
    j.axiom = "TAUT";
    return j;
  }

  /// Restates a line through `X -> X`.
  Justification taut_from(std::size_t line) {
    std::size_t t = emit(Formula::implies(p_.lines[line].formula, p_.lines[line].formula), taut());
    Justification j;
    j.kind = Justification::Kind::MP;
    j.first = line;
    j.second = t;
    return j;
  }

  std::size_t emit(Formula f, Justification j) {
    p_.lines.push_back({std::move(f), std::move(j)});
    return p_.lines.size() - 1;
  }

  std::size_t mp(std::size_t minor, std::size_t major) {
    const Formula& imp = p_.lines[major].formula;
    // imp is ~(minor & ~B)
    Formula b = imp.child().rhs().child();
    Justification j;
    j.kind = Justification::Kind::MP;
    j.first = minor;
    j.second = major;
    return emit(std::move(b), std::move(j));
  }

  Formula conclusion(std::size_t s) const {
    const auto& c = d_.steps[s].conclusion;
    return c ? c->formula() : Formula::bottom();
  }

  std::vector<Formula> hyps(std::size_t ctx) const {
    std::vector<Formula> out;
    for (; ctx != 0; ctx = d_.contexts[ctx].parent) out.push_back(conclusion(d_.contexts[ctx].hypothesis));
    std::reverse(out.begin(), out.end());
    return out;
  }

  Formula cur(std::size_t ctx, Formula x) const {
    auto hs = hyps(ctx);
    for (auto it = hs.rbegin(); it != hs.rend(); ++it) x = Formula::implies(*it, x);
    return x;
  }

  std::size_t line_of(std::size_t s, std::size_t ctx) {
    auto it = lines_.find({s, ctx});
    if (it != lines_.end()) return it->second;
    std::size_t own = d_.steps[s].context;
    auto base = lines_.find({s, own});
    if (base == lines_.end()) throw TranslationGap("step " + std::to_string(s + 1) + " used before it was replayed");
    Formula x = conclusion(s);
    std::size_t t = emit(Formula::implies(cur(own, x), cur(ctx, x)), taut());
    std::size_t l = mp(base->second, t);
    lines_[{s, ctx}] = l;
    return l;
  }

  Substitution subst(AgentId a) const {
    Substitution s;
    s.agent = a;
    return s;
  }

  const Literal& lit(std::size_t s) const {
    const auto& c = d_.steps.at(s).conclusion;
    if (!c) throw TranslationGap("step " + std::to_string(s + 1) + " has no literal conclusion");
    return *c;
  }

  /// Axiom name and substitution behind a step, if it has one.
  std::optional<std::pair<std::string, Substitution>> axiom_of(std::size_t s) const {
    const auto& st = d_.steps[s];
    switch (st.rule) {
      case Rule::Proj: {
        auto sub = subst(lit(s).agent);
        sub.sets["C"] = lit(s).args;
        sub.vars["c"] = lit(s).target;
        return std::make_pair("PROJ", sub);
      }
      case Rule::Ext: {
        auto sub = subst(lit(s).agent);
        sub.sets["C"] = lit(s).args;
        sub.vars["d"] = lit(s).target;
        return std::make_pair("EXT", sub);
      }
      case Rule::Equ: {
        const Literal& from = lit(st.uses.at(0));
        auto sub = subst(from.agent);
        sub.vars["c"] = *from.args.begin();
        sub.vars["d"] = from.target;
        return std::make_pair("EQU", sub);
      }
      case Rule::Tran: {
        const Literal& rule = lit(st.uses.back());
        auto sub = subst(lit(s).agent);
        sub.sets["C"] = lit(s).args;
        sub.sets["D"] = rule.args;
        sub.vars["e"] = rule.target;
        return std::make_pair("TRAN", sub);
      }
      case Rule::Vf: {
        const Literal& rule = lit(st.uses.back());
        auto sub = subst(rule.agent);
        sub.sets["C"] = rule.args;
        sub.vars["d"] = rule.target;
        return std::make_pair("VF", sub);
      }
      case Rule::Choo:
      case Rule::Case: {
        const Literal& atom = lit(st.uses.at(0));
        auto sub = subst(atom.agent);
        sub.sets["C"] = atom.args;
        sub.vars["d"] = atom.target;
        return std::make_pair("CHOO", sub);
      }
      default:
        return std::nullopt;
    }
  }

  void step(std::size_t s) {
    const auto& st = d_.steps[s];
    const std::size_t k = st.context;
    if (st.rule == Rule::Premise) {
      if (k != 0) throw TranslationGap("premise inside a hypothetical context");
      Justification j;
      j.kind = Justification::Kind::Premise;
      lines_[{s, 0}] = emit(conclusion(s), j);
      return;
    }
    if (st.rule == Rule::Hyp) {
      lines_[{s, k}] = emit(cur(k, conclusion(s)), taut());
      return;
    }

    std::vector<std::size_t> use_lines;
    std::vector<Formula> use_formulas;
    for (std::size_t u : st.uses) {
      use_lines.push_back(line_of(u, k));
      use_formulas.push_back(cur(k, conclusion(u)));
    }
    for (std::size_t b : st.branches) {
      use_lines.push_back(line_of(b, d_.steps[b].context));
      use_formulas.push_back(p_.lines[use_lines.back()].formula);
    }

    const Formula x = conclusion(s);
    auto ax = axiom_of(s);
    if (!ax && st.rule != Rule::Conflict) throw TranslationGap("no axiom for rule " + rule_name(st.rule));
    std::optional<std::size_t> ax_line;
    std::optional<Formula> ax_formula;
    if (ax) {
      ax_formula = axiom_instance(ax->first, ax->second);
      Justification j;
      j.kind = Justification::Kind::Axiom;
      j.axiom = ax->first;
      j.subst = ax->second;
      ax_line = emit(*ax_formula, std::move(j));
      if (k == 0 && use_lines.empty() && *ax_formula == x) {
        lines_[{s, 0}] = *ax_line;
        return;
      }
      if (k == 0 && use_lines.size() == 1 && *ax_formula == Formula::implies(use_formulas[0], x)) {
        lines_[{s, 0}] = mp(use_lines[0], *ax_line);
        return;
      }
    }
    Formula chain = cur(k, x);
    for (auto it = use_formulas.rbegin(); it != use_formulas.rend(); ++it) chain = Formula::implies(*it, chain);
    if (ax_formula) chain = Formula::implies(*ax_formula, chain);
    std::size_t line = emit(chain, taut());
    if (ax_line) line = mp(*ax_line, line);
    for (std::size_t u : use_lines) line = mp(u, line);
    lines_[{s, k}] = line;
  }
};

}  // namespace

Proof replay_saturation_trace(const Derivation& d, std::optional<std::size_t> target) {
  return Replayer(d).run(target);
}

}  // namespace kvf
