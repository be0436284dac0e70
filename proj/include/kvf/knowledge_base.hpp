#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kvf/io.hpp"
#include "kvf/signature.hpp"
#include "kvf/syntax.hpp"

namespace kvf {

enum class Regime { Full, Minimal, Intermediate, Lattice };

std::string regime_name(Regime r);
std::optional<Regime> parse_regime(const std::string& name);

/// Kf(args, target) without agent or sign.
struct KfAtom {
  VarSet args;
  Var target;
  friend auto operator<=>(const KfAtom&, const KfAtom&) = default;
};

struct AgentLiterals {
  VarSet kv_pos, kv_neg;
  std::set<KfAtom> kf_pos, kf_neg;
  friend bool operator==(const AgentLiterals&, const AgentLiterals&) = default;
};

/// Signed Kv/Kf literals per agent.
struct KnowledgeBase {
  Signature sig;
  Regime regime = Regime::Full;
  std::vector<AgentLiterals> agents;  // one entry per signature agent

  explicit KnowledgeBase(Signature s, Regime r = Regime::Full)
      : sig(std::move(s)), regime(r), agents(sig.agent_count()) {}

  AgentLiterals& at(AgentId a) { return agents.at(a.index); }
  const AgentLiterals& at(AgentId a) const { return agents.at(a.index); }

  friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;
};

/// A signed Kv or Kf atom of one agent.
struct Literal {
  enum class Kind { Kv, Kf };
  Kind kind = Kind::Kv;
  bool positive = true;
  AgentId agent{};
  VarSet args{};  // Kf only
  Var target{};

  static Literal kv(AgentId a, Var v, bool positive = true) { return {Kind::Kv, positive, a, {}, v}; }
  static Literal kf(AgentId a, VarSet args, Var v, bool positive = true) { return {Kind::Kf, positive, a, args, v}; }

  Literal negated() const {
    Literal l = *this;
    l.positive = !positive;
    return l;
  }
  Literal atom() const {
    Literal l = *this;
    l.positive = true;
    return l;
  }
  Formula formula() const;
  std::string text(const Signature& sig) const;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// Every literal of the kb, agent by agent: kv+, kv-, kf+, kf-.
std::vector<Literal> kb_literals(const KnowledgeBase& kb);

/// Converts a Kv/Kf atom or its negation; nullopt for other formulas.
std::optional<Literal> literal_of(const Formula& f);

/// {"signature":…, "agents":{id:{"kv+":[…],"kv-":[…],"kf+":[[[C…],d]…],"kf-":[…]}}, "regime":…}.
/// Kf entries may also be written [c, d]. Throws ValidationError.
KnowledgeBase kb_from_json(const Json& j);
Json kb_to_json(const KnowledgeBase& kb);

}  // namespace kvf
