#include "posyn/error.hpp"

namespace posyn {

std::string_view toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::UnknownSuperclass: return "UnknownSuperclass";
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::InheritanceCycle: return "InheritanceCycle";
    case ErrorCode::BadMultiplicity: return "BadMultiplicity";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::AbstractClass: return "AbstractClass";
    case ErrorCode::BadContainer: return "BadContainer";
    case ErrorCode::MultiplicityOverflow: return "MultiplicityOverflow";
    case ErrorCode::UnknownObject: return "UnknownObject";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::MultiplicityViolation: return "MultiplicityViolation";
    case ErrorCode::PathOnPrimitive: return "PathOnPrimitive";
    case ErrorCode::AmbiguousPath: return "AmbiguousPath";
    case ErrorCode::ContainmentConflict: return "ContainmentConflict";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::UnknownMetamodel: return "UnknownMetamodel";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::NameResolution: return "NameResolution";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::NumericDomain: return "NumericDomain";
    case ErrorCode::DivideByZero: return "DivideByZero";
    case ErrorCode::IllegalSetValue: return "IllegalSetValue";
    case ErrorCode::NonNumericRHS: return "NonNumericRHS";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ConstraintUnsatisfied: return "ConstraintUnsatisfied";
    case ErrorCode::InvalidView: return "InvalidView";
    case ErrorCode::InvalidRule: return "InvalidRule";
    case ErrorCode::UnresolvedTarget: return "UnresolvedTarget";
    case ErrorCode::OrderingViolation: return "OrderingViolation";
    case ErrorCode::CascadeLimitExceeded: return "CascadeLimitExceeded";
    case ErrorCode::CapabilityViolation: return "CapabilityViolation";
    case ErrorCode::NotVisible: return "NotVisible";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::NonConformant: return "NonConformant";
    case ErrorCode::MalformedMessage: return "MalformedMessage";
  }
  return "Unknown";
}

namespace {

std::string summarize(ErrorCode code, const std::vector<Issue>& issues) {
  std::string text(toString(code));
  text += ": " + std::to_string(issues.size()) + " issue(s)";
  for (const auto& issue : issues) {
    text += "\n  [";
    text += toString(issue.code);
    text += "] " + issue.where + ": " + issue.message;
  }
  return text;
}

}  // namespace

ValidationError::ValidationError(ErrorCode code, std::vector<Issue> issues)
    : Error(code, summarize(code, issues)), issues_(std::move(issues)) {}

}  // namespace posyn
