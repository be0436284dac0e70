#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kvf/varset.hpp"

namespace kvf {

/// Propositional letters, variable names and agents of a language instance.
///
/// Props and vars are kept sorted by name, so variable indices (and hence
/// the iteration order of every VarSet) follow the lexicographic order of the
/// names. Agents keep their declared order: the n-th agent is written `_n`.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<std::string> props, std::vector<std::string> vars, std::vector<std::string> agents);

  /// Signature with agents named "1".."n".
  static Signature with_agent_count(std::vector<std::string> props, std::vector<std::string> vars,
                                    std::size_t agents);

  const std::vector<std::string>& props() const { return props_; }
  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<std::string>& agents() const { return agents_; }

  std::size_t var_count() const { return vars_.size(); }
  std::size_t prop_count() const { return props_.size(); }
  std::size_t agent_count() const { return agents_.size(); }
  VarSet all_vars() const { return VarSet::first_n(vars_.size()); }

  std::optional<Var> find_var(std::string_view name) const;
  std::optional<PropId> find_prop(std::string_view name) const;
  std::optional<AgentId> find_agent(std::string_view name) const;

  /// Like find_var, but throws UnknownName.
  Var var(std::string_view name) const;
  VarSet var_set(const std::vector<std::string>& names) const;

  const std::string& name(Var v) const { return vars_.at(v.index); }
  const std::string& name(PropId p) const { return props_.at(p.index); }
  const std::string& name(AgentId a) const { return agents_.at(a.index); }

  /// "{a, b}" in variable order.
  std::string format(VarSet set) const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<std::string> props_;
  std::vector<std::string> vars_;
  std::vector<std::string> agents_;
};

/// True for names usable as props or vars: `[A-Za-z][A-Za-z0-9_]*` minus the
/// operator words (T, F, K, Kv, Kf and their `_n` forms).
bool is_valid_identifier(std::string_view name);

}  // namespace kvf
