#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kvf/io.hpp"
#include "kvf/syntax.hpp"
#include "kvf/witness.hpp"

namespace kvf {

enum class ProofSystem {
  Base,      // hlkvf
  Ext,       // hlkvf+ext
  ChooEqu,   // hlkvf+choo+equ
  Multi,     // hlkvf-m, indexed by agent
};

std::string system_name(ProofSystem s);
std::optional<ProofSystem> parse_system(const std::string& name);
ProofSystem system_for(Regime r);

/// Explicit instantiation of a schema: phi/psi formulas, C/D variable sets,
/// c/d/e variables, i the agent.
struct Substitution {
  std::map<std::string, Formula> formulas;
  std::map<std::string, VarSet> sets;
  std::map<std::string, Var> vars;
  std::optional<AgentId> agent;
};

struct Justification {
  enum class Kind { Premise, Axiom, MP, Nec };
  Kind kind = Kind::Premise;
  std::string axiom;
  Substitution subst;
  std::size_t first = 0, second = 0;  // zero-based line references
};

struct ProofLine {
  Formula formula;
  Justification just;
};

struct Proof {
  Signature sig;
  ProofSystem system = ProofSystem::Base;
  std::vector<ProofLine> lines;
};

struct ProofVerdict {
  bool accepted = true;
  std::size_t line = 0;  // one-based; 0 when accepted
  std::string reason;
};

/// The formula a schema yields under a substitution. Throws ValidationError
/// for unknown schemas, missing keys and side-condition violations.
Formula axiom_instance(const std::string& name, const Substitution& s);

/// Axiom names the system admits, TAUT included.
std::vector<std::string> system_axioms(ProofSystem s);

/// Propositional validity over the modal-atom abstraction. Throws
/// AtomBudgetExceeded beyond `atom_bound` distinct atoms.
bool is_tautology(const Formula& f, std::size_t atom_bound = 16);

/// Throws AtomBudgetExceeded from TAUT lines.
ProofVerdict check_proof(const Proof& p);

/// Formulas justified as premises, in order.
std::vector<Formula> proof_premises(const Proof& p);
/// The last line's formula, or T for an empty proof.
Formula proof_conclusion(const Proof& p);

/// Proof JSON; line references are one-based. Without a "signature" key the
/// signature is inferred from the formulas. Throws ValidationError,
/// SyntaxError and UnknownName.
Proof proof_from_json(const Json& j);
Json proof_to_json(const Proof& p);

/// Hilbert-style proof of the derivation's target step (default: the last
/// step) from the premises it uses. Throws TranslationGap.
Proof replay_saturation_trace(const Derivation& d, std::optional<std::size_t> target = std::nullopt);

}  // namespace kvf
