#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kvf/closure.hpp"
#include "kvf/knowledge_base.hpp"
#include "kvf/model.hpp"
#include "kvf/proofs.hpp"
#include "kvf/semantics.hpp"
#include "kvf/syntax.hpp"
#include "kvf/witness.hpp"

namespace kvf::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

Signature make_sig(std::size_t vars, std::size_t agents, std::size_t props = 0);
VarSet random_subset(Rng& rng, VarSet universe, double p = 0.5);

Formula random_formula(const Signature& sig, Rng& rng, int depth);

struct ModelShape {
  std::size_t max_worlds = 4;
  std::size_t max_values = 3;
};

/// Well-formed random model whose domains follow the regime: full and
/// projection domains, monotone over 1-2 dims, lattice-bounded with random
/// Moore families and hats, or unary-clone explicit domains. Partitions and
/// per-class domains are random.
Model random_model(const Signature& sig, DomainRegime regime, Rng& rng, ModelShape shape = {});

/// Same worlds, partitions and valuation with every domain replaced.
Model with_domain(const Model& m, DomainPtr domain);

/// Random literal kb with up to `max_literals` literals per agent.
KnowledgeBase random_kb(const Signature& sig, Regime regime, Rng& rng, std::size_t max_literals = 6);

/// First literal of the kb that fails somewhere in the model (positive
/// literals must hold and negated ones must fail at every world).
std::optional<std::string> violated_literal(const Model& m, const KnowledgeBase& kb);

/// Repeats "add d when some rule body is contained" until nothing changes.
/// Full seeds with kv_pos, minimal also reads unary atoms backwards.
VarSet naive_closure(const KnowledgeBase& kb, AgentId agent, VarSet set);

/// A random instance of the named schema over the signature.
Formula random_axiom(const std::string& name, const Signature& sig, AgentId agent, Rng& rng);

/// Propositional schemata over three slots.
const std::vector<std::function<Formula(const Formula&, const Formula&, const Formula&)>>& taut_schemata();

/// Axioms valid in every model of the regime (TAUT excluded).
std::vector<std::string> sound_axioms(DomainRegime regime);

/// Premises imply conclusion at every world.
bool proof_sound_in(const Proof& p, const Model& m);

/// Kv/Kf atoms of one agent over all variables, in a fixed order.
std::vector<Literal> all_atoms(const Signature& sig, AgentId agent);

/// Truth vectors of `atoms` at every world of every bounded model.
std::set<std::uint64_t> realizable_vectors(const Signature& sig, const std::vector<Literal>& atoms, RegimeSpec regime,
                                           const SearchBounds& bounds);

DomainRegime semantic_regime(Regime r);

}  // namespace kvf::testing
