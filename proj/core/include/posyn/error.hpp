#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace posyn {

enum class ErrorCode {
  // metamodel definition
  DuplicateName,
  UnknownSuperclass,
  UnknownType,
  InheritanceCycle,
  BadMultiplicity,
  // model kernel
  UnknownClass,
  AbstractClass,
  BadContainer,
  MultiplicityOverflow,
  UnknownObject,
  UnknownFeature,
  TypeMismatch,
  OutOfBounds,
  MultiplicityViolation,
  PathOnPrimitive,
  AmbiguousPath,
  ContainmentConflict,
  DanglingReference,
  UnknownMetamodel,
  // expressions
  SyntaxError,
  NameResolution,
  TypeError,
  NumericDomain,
  DivideByZero,
  IllegalSetValue,
  // constraints
  NonNumericRHS,
  DomainError,
  ConstraintUnsatisfied,
  // views and rules
  InvalidView,
  InvalidRule,
  UnresolvedTarget,
  OrderingViolation,
  CascadeLimitExceeded,
  CapabilityViolation,
  NotVisible,
  // persistence and protocol
  ParseError,
  VersionMismatch,
  ValidationFailed,
  NonConformant,
  MalformedMessage,
};

std::string_view toString(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure in an expression; `position` is a byte offset into the source.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::vector<std::string> expected,
              const std::string& message)
      : Error(ErrorCode::SyntaxError, message),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

struct Issue {
  ErrorCode code;
  std::string where;  // object id, rule id, class name... "-" when global
  std::string message;

  bool operator==(const Issue&) const = default;
};

/// Thrown when a definition or document has one or more problems; carries all of them.
class ValidationError : public Error {
 public:
  ValidationError(ErrorCode code, std::vector<Issue> issues);

  const std::vector<Issue>& issues() const noexcept { return issues_; }

 private:
  std::vector<Issue> issues_;
};

}  // namespace posyn
