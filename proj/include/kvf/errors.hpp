#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kvf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string expected)
      : Error("syntax error at offset " + std::to_string(position) + ": expected " + expected),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class UnknownName : public Error {
 public:
  using Error::Error;
};

class DuplicateArgument : public Error {
 public:
  using Error::Error;
};

/// A model, knowledge base, or proof file that violates its structural contract.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class MixedArity : public Error {
 public:
  using Error::Error;
};

class ArityOverflow : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::size_t examined)
      : Error(what + " (" + std::to_string(examined) + " examined)"), examined_(examined) {}

  std::size_t examined() const { return examined_; }

 private:
  std::size_t examined_;
};

class AtomBudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Internal defect: a saturation step that has no Hilbert-style counterpart.
class TranslationGap : public Error {
 public:
  using Error::Error;
};

}  // namespace kvf
