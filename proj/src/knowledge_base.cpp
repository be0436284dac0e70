#include "kvf/knowledge_base.hpp"

#include "kvf/errors.hpp"

namespace kvf {

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Full: return "full";
    case Regime::Minimal: return "minimal";
    case Regime::Intermediate: return "intermediate";
    case Regime::Lattice: return "lattice";
  }
  return "?";
}

std::optional<Regime> parse_regime(const std::string& name) {
  if (name == "full") return Regime::Full;
  if (name == "minimal") return Regime::Minimal;
  if (name == "intermediate") return Regime::Intermediate;
  if (name == "lattice") return Regime::Lattice;
  return std::nullopt;
}

Formula Literal::formula() const {
  Formula atom = kind == Kind::Kv ? Formula::kv(agent, target) : Formula::kf(agent, args, target);
  return positive ? atom : Formula::negate(atom);
}

std::string Literal::text(const Signature& sig) const { return print_formula(formula(), sig); }

std::vector<Literal> kb_literals(const KnowledgeBase& kb) {
  std::vector<Literal> out;
  for (std::uint32_t a = 0; a < kb.agents.size(); ++a) {
    const auto& al = kb.agents[a];
    AgentId id{a};
    for (Var v : al.kv_pos) out.push_back(Literal::kv(id, v, true));
    for (Var v : al.kv_neg) out.push_back(Literal::kv(id, v, false));
    for (const auto& k : al.kf_pos) out.push_back(Literal::kf(id, k.args, k.target, true));
    for (const auto& k : al.kf_neg) out.push_back(Literal::kf(id, k.args, k.target, false));
  }
  return out;
}

std::optional<Literal> literal_of(const Formula& f) {
  bool positive = true;
  const Formula* g = &f;
  if (g->kind() == Formula::Kind::Not) {
    positive = false;
    g = &g->child();
  }
  if (g->kind() == Formula::Kind::Kv) return Literal::kv(g->agent(), g->var(), positive);
  if (g->kind() == Formula::Kind::Kf) return Literal::kf(g->agent(), g->args(), g->var(), positive);
  return std::nullopt;
}

namespace {

std::vector<std::string> names(const Json& j) {
  if (!j.is_array()) throw ValidationError("expected a list of variable names, got " + j.dump());
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw ValidationError("expected a variable name, got " + e.dump());
    out.push_back(e.get<std::string>());
  }
  return out;
}

KfAtom kf_atom(const Signature& sig, const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[1].is_string()) {
    throw ValidationError("Kf entry must be [[args…], target], got " + j.dump());
  }
  VarSet args = j[0].is_string() ? VarSet{sig.var(j[0].get<std::string>())} : sig.var_set(names(j[0]));
  return {args, sig.var(j[1].get<std::string>())};
}

Json names_json(const Signature& sig, VarSet s) {
  Json out = Json::array();
  for (Var v : s) out.push_back(sig.name(v));
  return out;
}

}  // namespace

KnowledgeBase kb_from_json(const Json& j) {
  try {
    if (!j.is_object() || !j.contains("signature")) throw ValidationError("knowledge base needs a \"signature\"");
    KnowledgeBase kb(signature_from_json(j.at("signature")));
    if (j.contains("regime")) {
      auto r = parse_regime(j.at("regime").get<std::string>());
      if (!r) throw ValidationError("unknown regime " + j.at("regime").dump());
      kb.regime = *r;
    }
    if (j.contains("agents")) {
      for (const auto& [name, body] : j.at("agents").items()) {
        auto a = kb.sig.find_agent(name);
        if (!a) throw ValidationError("unknown agent '" + name + "'");
        auto& al = kb.at(*a);
        for (const auto& [key, list] : body.items()) {
          if (key == "kv+") al.kv_pos = al.kv_pos | kb.sig.var_set(names(list));
          else if (key == "kv-") al.kv_neg = al.kv_neg | kb.sig.var_set(names(list));
          else if (key == "kf+" || key == "kf-") {
            if (!list.is_array()) throw ValidationError("\"" + key + "\" must be a list");
            for (const auto& e : list) (key == "kf+" ? al.kf_pos : al.kf_neg).insert(kf_atom(kb.sig, e));
          } else {
            throw ValidationError("unknown knowledge base key \"" + key + "\"");
          }
        }
      }
    }
    if (kb.regime != Regime::Lattice && kb.sig.agent_count() != 1) {
      throw ValidationError("regime " + regime_name(kb.regime) + " takes exactly one agent");
    }
    return kb;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed knowledge base: ") + e.what());
  } catch (const UnknownName& e) {
    throw ValidationError(e.what());
  } catch (const DuplicateArgument& e) {
    throw ValidationError(e.what());
  }
}

Json kb_to_json(const KnowledgeBase& kb) {
  Json agents = Json::object();
  for (std::size_t a = 0; a < kb.agents.size(); ++a) {
    const auto& al = kb.agents[a];
    Json kfp = Json::array(), kfn = Json::array();
    for (const auto& k : al.kf_pos) kfp.push_back(Json::array({names_json(kb.sig, k.args), kb.sig.name(k.target)}));
    for (const auto& k : al.kf_neg) kfn.push_back(Json::array({names_json(kb.sig, k.args), kb.sig.name(k.target)}));
    agents[kb.sig.agents()[a]] = Json{{"kv+", names_json(kb.sig, al.kv_pos)},
                                      {"kv-", names_json(kb.sig, al.kv_neg)},
                                      {"kf+", std::move(kfp)},
                                      {"kf-", std::move(kfn)}};
  }
  return Json{{"signature", signature_to_json(kb.sig)}, {"agents", std::move(agents)}, {"regime", regime_name(kb.regime)}};
}

}  // namespace kvf
