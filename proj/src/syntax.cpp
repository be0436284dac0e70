#include "kvf/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "kvf/errors.hpp"

namespace kvf {

struct Formula::Node {
  Kind kind = Kind::Top;
  AgentId agent{};
  Var var{};
  VarSet args{};
  PropId prop{};
  Formula lhs{nullptr};
  Formula rhs{nullptr};
};

const std::shared_ptr<const Formula::Node>& Formula::top_node() {
  static const auto node = std::make_shared<const Node>();
  return node;
}

Formula::Formula() : node_(top_node()) {}

Formula Formula::top() { return Formula(); }

Formula Formula::bottom() { return negate(top()); }

Formula Formula::prop(PropId p) {
  Node n;
  n.kind = Kind::Prop;
  n.prop = p;
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::kv(AgentId agent, Var var) {
  Node n;
  n.kind = Kind::Kv;
  n.agent = agent;
  n.var = var;
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::kf(AgentId agent, VarSet args, Var target) {
  Node n;
  n.kind = Kind::Kf;
  n.agent = agent;
  n.args = args;
  n.var = target;
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::negate(Formula f) {
  Node n;
  n.kind = Kind::Not;
  n.lhs = std::move(f);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  Node n;
  n.kind = Kind::And;
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
  return negate(conj(negate(std::move(lhs)), negate(std::move(rhs))));
}

Formula Formula::implies(Formula lhs, Formula rhs) { return negate(conj(std::move(lhs), negate(std::move(rhs)))); }

Formula Formula::know(AgentId agent, Formula f) {
  Node n;
  n.kind = Kind::Know;
  n.agent = agent;
  n.lhs = std::move(f);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::conj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return top();
  Formula out = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) out = conj(*it, out);
  return out;
}

Formula Formula::disj_all(const std::vector<Formula>& parts) {
  if (parts.empty()) return bottom();
  Formula out = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) out = disj(*it, out);
  return out;
}

Formula::Kind Formula::kind() const { return node_->kind; }
AgentId Formula::agent() const { return node_->agent; }
Var Formula::var() const { return node_->var; }
VarSet Formula::args() const { return node_->args; }
PropId Formula::prop_id() const { return node_->prop; }
const Formula& Formula::child() const { return node_->lhs; }
const Formula& Formula::lhs() const { return node_->lhs; }
const Formula& Formula::rhs() const { return node_->rhs; }

std::size_t Formula::agent_span() const {
  switch (kind()) {
    case Kind::Top:
    case Kind::Prop:
      return 0;
    case Kind::Kv:
    case Kind::Kf:
      return agent().index + 1;
    case Kind::Not:
      return child().agent_span();
    case Kind::And:
      return std::max(lhs().agent_span(), rhs().agent_span());
    case Kind::Know:
      return std::max<std::size_t>(agent().index + 1, child().agent_span());
  }
  return 0;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (auto c = x.kind <=> y.kind; c != 0) return c;
  switch (x.kind) {
    case Formula::Kind::Top:
      return std::strong_ordering::equal;
    case Formula::Kind::Prop:
      return x.prop <=> y.prop;
    case Formula::Kind::Kv:
      if (auto c = x.agent <=> y.agent; c != 0) return c;
      return x.var <=> y.var;
    case Formula::Kind::Kf:
      if (auto c = x.agent <=> y.agent; c != 0) return c;
      if (auto c = x.args <=> y.args; c != 0) return c;
      return x.var <=> y.var;
    case Formula::Kind::Not:
      return x.lhs <=> y.lhs;
    case Formula::Kind::And:
      if (auto c = x.lhs <=> y.lhs; c != 0) return c;
      return x.rhs <=> y.rhs;
    case Formula::Kind::Know:
      if (auto c = x.agent <=> y.agent; c != 0) return c;
      return x.lhs <=> y.lhs;
  }
  return std::strong_ordering::equal;
}

bool operator==(const Formula& a, const Formula& b) { return (a <=> b) == 0; }

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Ident, LParen, RParen, LBrace, RBrace, Comma, Tilde, Amp, Bar, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isalpha(c)) {
      std::size_t start = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    Tok kind;
    std::size_t len = 1;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case ',': kind = Tok::Comma; break;
      case '~': kind = Tok::Tilde; break;
      case '&': kind = Tok::Amp; break;
      case '|': kind = Tok::Bar; break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          kind = Tok::Arrow;
          len = 2;
          break;
        }
        throw SyntaxError(i, "'->'");
      default:
        throw SyntaxError(i, "a formula token");
    }
    out.push_back({kind, std::string(s.substr(i, len)), i});
    i += len;
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

enum class OpWord { None, K, Kv, Kf };

struct OperatorName {
  OpWord op = OpWord::None;
  std::optional<unsigned long> subscript;
};

OperatorName split_operator(const std::string& ident) {
  std::string head = ident.substr(0, ident.find('_'));
  OperatorName out;
  if (head == "K") out.op = OpWord::K;
  else if (head == "Kv") out.op = OpWord::Kv;
  else if (head == "Kf") out.op = OpWord::Kf;
  else return {};
  if (head.size() == ident.size()) return out;
  std::string digits = ident.substr(head.size() + 1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); }) ||
      digits.size() > 6) {
    return {};
  }
  out.subscript = std::stoul(digits);
  return out;
}

/// Maps names to signature entries; the collecting variant records them instead.
class Resolver {
 public:
  virtual ~Resolver() = default;
  virtual PropId prop(const Token& t) = 0;
  virtual Var var(const Token& t) = 0;
  virtual AgentId agent(unsigned long subscript, std::size_t pos) = 0;
};

class StrictResolver final : public Resolver {
 public:
  explicit StrictResolver(const Signature& sig) : sig_(sig) {}

  PropId prop(const Token& t) override {
    if (auto p = sig_.find_prop(t.text)) return *p;
    throw UnknownName("unknown proposition '" + t.text + "' at offset " + std::to_string(t.pos));
  }
  Var var(const Token& t) override {
    if (auto v = sig_.find_var(t.text)) return *v;
    throw UnknownName("unknown variable '" + t.text + "' at offset " + std::to_string(t.pos));
  }
  AgentId agent(unsigned long subscript, std::size_t pos) override {
    if (subscript == 0 || subscript > sig_.agent_count()) {
      throw UnknownName("unknown agent _" + std::to_string(subscript) + " at offset " + std::to_string(pos));
    }
    return AgentId{static_cast<std::uint32_t>(subscript - 1)};
  }

 private:
  const Signature& sig_;
};

class CollectingResolver final : public Resolver {
 public:
  PropId prop(const Token& t) override {
    props.insert(t.text);
    return PropId{0};
  }
  Var var(const Token& t) override {
    auto [it, inserted] = vars.emplace(t.text, static_cast<std::uint32_t>(vars.size()));
    if (vars.size() > kMaxVars) throw ValidationError("too many variables");
    return Var{it->second};
  }
  AgentId agent(unsigned long subscript, std::size_t pos) override {
    if (subscript == 0) throw UnknownName("unknown agent _0 at offset " + std::to_string(pos));
    max_agent = std::max(max_agent, subscript);
    return AgentId{0};
  }

  std::set<std::string> props;
  std::map<std::string, std::uint32_t> vars;
  unsigned long max_agent = 1;
};

class Parser {
 public:
  Parser(std::string_view text, Resolver& names) : tokens_(lex(text)), names_(names) {}

  Formula parse_top() {
    Formula f = formula();
    if (is_binop(peek().kind)) {
      Tok op = next().kind;
      f = combine(op, std::move(f), formula());
    }
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  static bool is_binop(Tok t) { return t == Tok::Amp || t == Tok::Bar || t == Tok::Arrow; }

  static Formula combine(Tok op, Formula a, Formula b) {
    switch (op) {
      case Tok::Amp: return Formula::conj(std::move(a), std::move(b));
      case Tok::Bar: return Formula::disj(std::move(a), std::move(b));
      default: return Formula::implies(std::move(a), std::move(b));
    }
  }

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) throw SyntaxError(peek().pos, what);
    return next();
  }

  Formula formula() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Tilde:
        return Formula::negate(formula());
      case Tok::LParen: {
        Formula a = formula();
        if (!is_binop(peek().kind)) throw SyntaxError(peek().pos, "'&', '|' or '->'");
        Tok op = next().kind;
        Formula b = formula();
        expect(Tok::RParen, "')'");
        return combine(op, std::move(a), std::move(b));
      }
      case Tok::Ident:
        return identifier(t);
      default:
        throw SyntaxError(t.pos, "a formula");
    }
  }

  Formula identifier(const Token& t) {
    if (t.text == "T") return Formula::top();
    if (t.text == "F") return Formula::bottom();
    OperatorName op = split_operator(t.text);
    if (op.op == OpWord::None) {
      if (t.text.find('_') != std::string::npos && split_operator(t.text.substr(0, t.text.find('_'))).op != OpWord::None) {
        throw SyntaxError(t.pos + t.text.find('_'), "an agent subscript '_<n>'");
      }
      return Formula::prop(names_.prop(t));
    }
    AgentId agent = names_.agent(op.subscript.value_or(1), t.pos);
    switch (op.op) {
      case OpWord::K:
        return Formula::know(agent, formula());
      case OpWord::Kv: {
        expect(Tok::LParen, "'('");
        Var v = variable();
        expect(Tok::RParen, "')'");
        return Formula::kv(agent, v);
      }
      default: {
        expect(Tok::LParen, "'('");
        VarSet args;
        if (peek().kind == Tok::LBrace) {
          args = var_set();
        } else {
          args.insert(variable());
        }
        expect(Tok::Comma, "','");
        Var target = variable();
        expect(Tok::RParen, "')'");
        return Formula::kf(agent, args, target);
      }
    }
  }

  Var variable() {
    const Token& t = expect(Tok::Ident, "a variable name");
    if (!is_valid_identifier(t.text)) throw SyntaxError(t.pos, "a variable name");
    return names_.var(t);
  }

  VarSet var_set() {
    expect(Tok::LBrace, "'{'");
    VarSet out;
    if (peek().kind == Tok::RBrace) {
      next();
      return out;
    }
    while (true) {
      std::size_t at = peek().pos;
      Var v = variable();
      if (out.contains(v)) throw DuplicateArgument("duplicate Kf argument at offset " + std::to_string(at));
      out.insert(v);
      if (peek().kind == Tok::Comma) {
        next();
        continue;
      }
      expect(Tok::RBrace, "',' or '}'");
      return out;
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Resolver& names_;
};

std::string subscript(AgentId a) { return "_" + std::to_string(a.index + 1); }

void print_into(const Formula& f, const Signature& sig, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      out += "T";
      return;
    case Formula::Kind::Prop:
      out += sig.name(f.prop_id());
      return;
    case Formula::Kind::Kv:
      out += "Kv" + subscript(f.agent()) + "(" + sig.name(f.var()) + ")";
      return;
    case Formula::Kind::Kf:
      out += "Kf" + subscript(f.agent()) + "(" + sig.format(f.args()) + ", " + sig.name(f.var()) + ")";
      return;
    case Formula::Kind::Not:
      out += "~";
      print_into(f.child(), sig, out);
      return;
    case Formula::Kind::And:
      out += "(";
      print_into(f.lhs(), sig, out);
      out += " & ";
      print_into(f.rhs(), sig, out);
      out += ")";
      return;
    case Formula::Kind::Know:
      out += "K" + subscript(f.agent()) + " ";
      print_into(f.child(), sig, out);
      return;
  }
}

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig) {
  StrictResolver names(sig);
  return Parser(text, names).parse_top();
}

std::string print_formula(const Formula& f, const Signature& sig) {
  std::string out;
  print_into(f, sig, out);
  return out;
}

Signature infer_signature(const std::vector<std::string>& texts) {
  CollectingResolver names;
  for (const auto& t : texts) Parser(t, names).parse_top();
  std::vector<std::string> props(names.props.begin(), names.props.end());
  std::vector<std::string> vars;
  for (const auto& [name, idx] : names.vars) vars.push_back(name);
  for (const auto& p : props) {
    if (names.vars.count(p)) throw ValidationError("'" + p + "' used both as proposition and variable");
  }
  if (vars.empty()) {
    std::string filler = "x";
    while (names.props.count(filler)) filler += "x";
    vars.push_back(filler);
  }
  return Signature::with_agent_count(std::move(props), std::move(vars), names.max_agent);
}

}  // namespace kvf
