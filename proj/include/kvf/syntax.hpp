#pragma once

#include <array>
#include <compare>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "kvf/signature.hpp"
#include "kvf/varset.hpp"

namespace kvf {

/// Immutable formula of the multiagent knowing-value / knowing-dependency
/// language. Only the primitive connectives are represented; `F`, `|` and
/// `->` are expanded by the smart constructors below.
class Formula {
 public:
  enum class Kind { Top, Prop, Kv, Kf, Not, And, Know };

  Formula();  // Top

  static Formula top();
  static Formula bottom();
  static Formula prop(PropId p);
  static Formula kv(AgentId agent, Var var);
  static Formula kf(AgentId agent, VarSet args, Var target);
  static Formula negate(Formula f);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula know(AgentId agent, Formula f);

  /// Right-nested conjunction; the empty conjunction is T.
  static Formula conj_all(const std::vector<Formula>& parts);
  /// Right-nested disjunction; the empty disjunction is ~T.
  static Formula disj_all(const std::vector<Formula>& parts);

  Kind kind() const;
  AgentId agent() const;  // Kv, Kf, Know
  Var var() const;        // Kv variable, Kf target
  VarSet args() const;    // Kf arguments
  PropId prop_id() const;
  const Formula& child() const;  // Not, Know
  const Formula& lhs() const;    // And
  const Formula& rhs() const;    // And

  /// Highest agent index mentioned plus one (0 when no agent occurs).
  std::size_t agent_span() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node;
  static const std::shared_ptr<const Node>& top_node();
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses the concrete syntax
///
///   formula := "T" | "F" | prop | "~" formula | "(" formula binop formula ")"
///            | "K" sub? formula | "Kv" sub? "(" var ")"
///            | "Kf" sub? "(" varset "," var ")" | "Kf" sub? "(" var "," var ")"
///   binop   := "&" | "|" | "->" ;  sub := "_" integer ;  varset := "{" (var ("," var)*)? "}"
///
/// A single binary connective may also appear unparenthesized at top level.
/// Omitted subscripts mean agent 1. Throws SyntaxError, UnknownName and
/// DuplicateArgument.
Formula parse_formula(std::string_view text, const Signature& sig);

/// Fully parenthesized primitive form; parse_formula inverts it.
std::string print_formula(const Formula& f, const Signature& sig);

/// Builds the smallest signature that can parse every text: identifiers in
/// Kv/Kf positions become vars, all others props, and the agent count is the
/// largest subscript used. Throws SyntaxError on malformed input.
Signature infer_signature(const std::vector<std::string>& texts);

}  // namespace kvf
