#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kvf/closure.hpp"
#include "kvf/knowledge_base.hpp"
#include "kvf/model.hpp"

namespace kvf {

/// One inference of a saturation run.
struct DerivationStep {
  enum class Rule { Premise, Hyp, Proj, Ext, Equ, Tran, Vf, Choo, Conflict, Case };
  Rule rule = Rule::Premise;
  std::optional<Literal> conclusion;  // nullopt is the contradiction
  std::vector<std::size_t> uses;      // earlier steps
  std::size_t context = 0;
  /// Case only: the contradiction step closing each branch.
  std::vector<std::size_t> branches;
};

std::string rule_name(DerivationStep::Rule r);

/// Steps live in a tree of contexts. Context 0 is unconditional; every other
/// context extends its parent with one hypothesis step, and its steps may use
/// steps of any ancestor.
struct DerivationContext {
  std::size_t parent = 0;
  std::size_t hypothesis = 0;
};

struct Derivation {
  Signature sig;
  Regime regime = Regime::Full;
  std::vector<DerivationStep> steps;
  std::vector<DerivationContext> contexts{DerivationContext{}};

  /// Steps needed for `target` (default: the last step), in order.
  std::vector<std::size_t> support(std::optional<std::size_t> target = std::nullopt) const;
  std::string format() const;
};

struct SaturationResult {
  bool consistent = true;
  /// kv_pos closed under the regime's rules; kf_pos extended by the unary
  /// atoms chosen during case analysis (minimal regime).
  KnowledgeBase saturated;
  std::vector<std::vector<KfAtom>> choices;  // per agent
  /// Consistent: unconditional derivations of the derived Kv literals.
  /// Inconsistent: a derivation whose last step is the contradiction.
  Derivation trace;
  std::optional<Literal> conflict;  // the refuted premise, when not a case split
};

SaturationResult saturate(const KnowledgeBase& kb);

/// Unconditional derivation of a positive literal, if saturation derives it
/// without case analysis. The last step concludes the literal.
std::optional<Derivation> derive_literal(const KnowledgeBase& kb, const Literal& goal);

struct WitnessConfig {
  std::uint64_t seed = 0;  // offsets the fresh-token counter
  std::size_t intermediate_var_bound = 4;
  std::size_t multiagent_var_bound = 10;
};

/// Hands out value tokens that are never reused.
class TokenFactory {
 public:
  explicit TokenFactory(std::uint64_t seed = 0) : next_(seed) {}
  Value fresh() { return Value::atom("g" + std::to_string(next_++)); }

 private:
  std::uint64_t next_;
};

/// The builders expect the `saturated` kb of a consistent saturation.
Model build_witness_full(const KnowledgeBase& saturated, const WitnessConfig& cfg = {});
Model build_witness_minimal(const KnowledgeBase& saturated, const WitnessConfig& cfg = {});
Model build_witness_intermediate(const KnowledgeBase& saturated, const WitnessConfig& cfg = {});
Model build_witness_multiagent(const KnowledgeBase& saturated, const WitnessConfig& cfg = {});

/// Dispatches on the regime. Throws ValidationError unless the result is consistent.
Model build_witness(const SaturationResult& result, const WitnessConfig& cfg = {});

}  // namespace kvf
