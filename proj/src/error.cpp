// SPDX-License-Identifier: Apache-2.0
#include "imagespace/error.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace imagespace {
namespace {

constexpr std::array<std::pair<ViolationCode, std::string_view>, 14> kViolationNames{{
    {ViolationCode::CardinalityBounds, "CardinalityBounds"},
    {ViolationCode::ToClassExclusion, "ToClassExclusion"},
    {ViolationCode::AncestorInDisjointWith, "AncestorInDisjointWith"},
    {ViolationCode::AncestorInComplementOf, "AncestorInComplementOf"},
    {ViolationCode::SubClassCycle, "SubClassCycle"},
    {ViolationCode::SubPropertyCycle, "SubPropertyCycle"},
    {ViolationCode::DanglingReference, "DanglingReference"},
    {ViolationCode::CardinalityUnmet, "CardinalityUnmet"},
    {ViolationCode::CardinalityExceeded, "CardinalityExceeded"},
    {ViolationCode::RangeViolation, "RangeViolation"},
    {ViolationCode::DomainViolation, "DomainViolation"},
    {ViolationCode::HasValueMissing, "HasValueMissing"},
    {ViolationCode::QualifiedCardinality, "QualifiedCardinality"},
    {ViolationCode::UniquePropertyViolation, "UniquePropertyViolation"},
}};

}  // namespace

std::string_view to_string(ViolationCode code) {
  for (const auto& [c, name] : kViolationNames) {
    if (c == code) return name;
  }
  return "Unknown";
}

std::optional<ViolationCode> violation_code_from_string(std::string_view name) {
  for (const auto& [c, n] : kViolationNames) {
    if (n == name) return c;
  }
  return std::nullopt;
}

void normalize(std::vector<Violation>& violations) {
  auto key = [](const Violation& v) { return std::tie(v.code, v.subjects); };
  std::stable_sort(violations.begin(), violations.end(),
                   [&](const Violation& a, const Violation& b) { return key(a) < key(b); });
  violations.erase(std::unique(violations.begin(), violations.end(),
                               [&](const Violation& a, const Violation& b) { return key(a) == key(b); }),
                   violations.end());
}

std::string format_violation(const Violation& v) {
  std::string out(to_string(v.code));
  for (const auto& s : v.subjects) {
    out += ' ';
    out += s;
  }
  out += ": ";
  out += v.message;
  return out;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::UnknownProperty: return "UnknownProperty";
    case ErrorCode::UnknownInstance: return "UnknownInstance";
    case ErrorCode::UnknownOntology: return "UnknownOntology";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::UnknownConstruct: return "UnknownConstruct";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::InconsistentDoc: return "InconsistentDoc";
    case ErrorCode::InconsistentInputDoc: return "InconsistentInputDoc";
    case ErrorCode::InvalidEdit: return "InvalidEdit";
    case ErrorCode::AlreadyInitialized: return "AlreadyInitialized";
    case ErrorCode::ConnectionFailure: return "ConnectionFailure";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnsafeQuery: return "UnsafeQuery";
    case ErrorCode::CyclicHierarchy: return "CyclicHierarchy";
    case ErrorCode::MissingPosition: return "MissingPosition";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::vector<Violation> violations)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      violations_(std::move(violations)) {}

}  // namespace imagespace
