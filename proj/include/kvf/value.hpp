#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace kvf {

struct Atom {
  std::string token;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// Point of a boolean product: one bit per named dimension.
struct BitVec {
  std::vector<std::string> dims;
  std::vector<std::uint8_t> bits;
  friend auto operator<=>(const BitVec&, const BitVec&) = default;
};

/// The pair <var, bit> used by the multiagent canonical models.
struct Tagged {
  std::string var;
  std::uint8_t bit = 0;
  friend auto operator<=>(const Tagged&, const Tagged&) = default;
};

/// Element of the value domain G. Equality is structural.
class Value {
 public:
  enum class Kind { Atom, BitVec, Tagged };

  Value() : repr_(Atom{}) {}
  Value(Atom a) : repr_(std::move(a)) {}
  Value(BitVec b) : repr_(std::move(b)) {}
  Value(Tagged t) : repr_(std::move(t)) {}

  static Value atom(std::string token) { return Value(Atom{std::move(token)}); }
  static Value tagged(std::string var, int bit) { return Value(Tagged{std::move(var), static_cast<std::uint8_t>(bit)}); }

  Kind kind() const { return static_cast<Kind>(repr_.index()); }
  const Atom* as_atom() const { return std::get_if<Atom>(&repr_); }
  const BitVec* as_bitvec() const { return std::get_if<BitVec>(&repr_); }
  const Tagged* as_tagged() const { return std::get_if<Tagged>(&repr_); }

  /// Compact string key: the atom token, "var:bit", or "bits:0101".
  std::string key() const;

  friend auto operator<=>(const Value&, const Value&) = default;
  friend bool operator==(const Value&, const Value&) = default;

 private:
  std::variant<Atom, BitVec, Tagged> repr_;
};

using JointValue = std::vector<Value>;

}  // namespace kvf
