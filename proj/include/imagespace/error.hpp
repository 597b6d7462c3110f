// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "imagespace/violation.hpp"

namespace imagespace {

enum class ErrorCode {
  InvalidArgument,
  UnknownClass,
  UnknownProperty,
  UnknownInstance,
  UnknownOntology,
  MalformedXml,
  UnknownConstruct,
  DanglingReference,
  InconsistentDoc,
  InconsistentInputDoc,
  InvalidEdit,
  AlreadyInitialized,
  ConnectionFailure,
  ConstraintViolation,
  ValidationFailed,
  SyntaxError,
  UnsafeQuery,
  CyclicHierarchy,
  MissingPosition,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<Violation> violations = {});

  ErrorCode code() const noexcept { return code_; }
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  ErrorCode code_;
  std::vector<Violation> violations_;
};

}  // namespace imagespace
