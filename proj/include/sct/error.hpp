#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sct {

/// Base of every error raised by the toolkit. Subcommands map any `Error`
/// to a nonzero exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed document, unknown key, wrong JSON type.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on an argument that violates its precondition
/// (incomplete machine passed to minimize, mBound < n, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class UndefinedTransition : public Error {
 public:
  UndefinedTransition(std::string state, std::string input)
      : Error("undefined transition at (" + state + ", " + input + ")"),
        state_(std::move(state)),
        input_(std::move(input)) {}

  const std::string& state() const { return state_; }
  const std::string& input() const { return input_; }

 private:
  std::string state_;
  std::string input_;
};

class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

class GuardSyntaxError : public Error {
 public:
  GuardSyntaxError(const std::string& message, std::size_t position)
      : Error("guard syntax error at " + std::to_string(position) + ": " +
              message),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UndeclaredVariable : public Error {
 public:
  explicit UndeclaredVariable(const std::string& name)
      : Error("undeclared variable '" + name + "'"), name_(name) {}

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class SortMismatch : public Error {
 public:
  using Error::Error;
};

class EnumerationOverflow : public Error {
 public:
  using Error::Error;
};

/// Two guards of one state are satisfied by a common input valuation.
/// `witness()` is the canonical encoding of that valuation.
class DeterminismViolation : public Error {
 public:
  DeterminismViolation(const std::string& message, std::string witness)
      : Error(message + " (witness " + witness + ")"),
        witness_(std::move(witness)) {}

  const std::string& witness() const { return witness_; }

 private:
  std::string witness_;
};

/// Some state enables no transition for some input under the `error`
/// incompleteness policy.
class IncompletenessError : public Error {
 public:
  using Error::Error;
};

class LifecycleViolation : public Error {
 public:
  using Error::Error;
};

class DisjointnessViolation : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

}  // namespace sct
