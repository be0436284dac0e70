#include "kvf/signature.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "kvf/errors.hpp"

namespace kvf {
namespace {

bool is_operator_word(std::string_view name) {
  std::string_view head = name.substr(0, name.find('_'));
  if (head != "K" && head != "Kv" && head != "Kf") return false;
  if (head.size() == name.size()) return true;
  std::string_view digits = name.substr(head.size() + 1);
  return !digits.empty() && std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); });
}

void check_distinct(const std::vector<std::string>& names, const char* what) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw ValidationError(std::string("duplicate ") + what + " name '" + n + "'");
  }
}

}  // namespace

bool is_valid_identifier(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  for (unsigned char c : name) {
    if (!std::isalnum(c) && c != '_') return false;
  }
  if (name == "T" || name == "F") return false;
  return !is_operator_word(name);
}

Signature::Signature(std::vector<std::string> props, std::vector<std::string> vars, std::vector<std::string> agents)
    : props_(std::move(props)), vars_(std::move(vars)), agents_(std::move(agents)) {
  if (vars_.empty()) throw ValidationError("signature needs at least one variable");
  if (agents_.empty()) throw ValidationError("signature needs at least one agent");
  if (vars_.size() > kMaxVars) throw ValidationError("at most 64 variables are supported");
  for (const auto& n : props_) {
    if (!is_valid_identifier(n)) throw ValidationError("invalid proposition name '" + n + "'");
  }
  for (const auto& n : vars_) {
    if (!is_valid_identifier(n)) throw ValidationError("invalid variable name '" + n + "'");
  }
  for (const auto& n : agents_) {
    if (n.empty()) throw ValidationError("empty agent name");
  }
  check_distinct(props_, "proposition");
  check_distinct(vars_, "variable");
  check_distinct(agents_, "agent");
  std::vector<std::string> all = props_;
  all.insert(all.end(), vars_.begin(), vars_.end());
  check_distinct(all, "proposition/variable");
  std::sort(props_.begin(), props_.end());
  std::sort(vars_.begin(), vars_.end());
}

Signature Signature::with_agent_count(std::vector<std::string> props, std::vector<std::string> vars,
                                      std::size_t agents) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= agents; ++i) names.push_back(std::to_string(i));
  return Signature(std::move(props), std::move(vars), std::move(names));
}

std::optional<Var> Signature::find_var(std::string_view name) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), name);
  if (it == vars_.end() || *it != name) return std::nullopt;
  return Var{static_cast<std::uint32_t>(it - vars_.begin())};
}

std::optional<PropId> Signature::find_prop(std::string_view name) const {
  auto it = std::lower_bound(props_.begin(), props_.end(), name);
  if (it == props_.end() || *it != name) return std::nullopt;
  return PropId{static_cast<std::uint32_t>(it - props_.begin())};
}

std::optional<AgentId> Signature::find_agent(std::string_view name) const {
  auto it = std::find(agents_.begin(), agents_.end(), name);
  if (it == agents_.end()) return std::nullopt;
  return AgentId{static_cast<std::uint32_t>(it - agents_.begin())};
}

Var Signature::var(std::string_view name) const {
  if (auto v = find_var(name)) return *v;
  throw UnknownName("unknown variable '" + std::string(name) + "'");
}

VarSet Signature::var_set(const std::vector<std::string>& names) const {
  VarSet out;
  for (const auto& n : names) {
    Var v = var(n);
    if (out.contains(v)) throw DuplicateArgument("variable '" + n + "' listed twice");
    out.insert(v);
  }
  return out;
}

std::string Signature::format(VarSet set) const {
  std::string out = "{";
  bool first = true;
  for (Var v : set) {
    if (!first) out += ", ";
    out += name(v);
    first = false;
  }
  return out + "}";
}

}  // namespace kvf
