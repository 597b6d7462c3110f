// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace imagespace {

// Declaration order is the reporting order.
enum class ViolationCode {
  CardinalityBounds,
  ToClassExclusion,
  AncestorInDisjointWith,
  AncestorInComplementOf,
  SubClassCycle,
  SubPropertyCycle,
  DanglingReference,
  CardinalityUnmet,
  CardinalityExceeded,
  RangeViolation,
  DomainViolation,
  HasValueMissing,
  QualifiedCardinality,
  UniquePropertyViolation,
};

std::string_view to_string(ViolationCode code);
std::optional<ViolationCode> violation_code_from_string(std::string_view name);

struct Violation {
  ViolationCode code;
  std::vector<std::string> subjects;
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Sorts by code, then subjects, and drops entries with equal code and
/// subjects.
void normalize(std::vector<Violation>& violations);

/// `CODE subject...: message`
std::string format_violation(const Violation& v);

}  // namespace imagespace
